#include "modalpd/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "modalpd/arena.hpp"
#include "modalpd/parse.hpp"
#include "modalpd/report.hpp"
#include "modalpd/search.hpp"

namespace modalpd {

namespace {

// Bad input that is not a parse or validation error (unreadable file...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file;
  bool trace = false;
  bool normal_form = false;
  bool json = false;
  std::string payoffs;
  std::vector<std::string> roster;
  std::vector<std::string> positional;
  SearchBounds bounds;
};

AgentTable load_table(const std::string& file) {
  if (file.empty()) return builtin_library();
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot read agent file '" + file + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_agent_file(buffer.str());
}

Payoffs load_payoffs(const std::string& text, std::ostream& err) {
  Payoffs p = text.empty() ? Payoffs{} : Payoffs::parse(text);
  for (const auto& w : p.warnings()) err << "warning: " << w << "\n";
  return p;
}

std::string level_claim(const MatchResult& m, int i) {
  const std::string& self = m.agents[i];
  const std::string& other = m.agents[1 - i];
  return proof_system_name(*m.proof_levels[i]) + " ⊢ [" + self + "(" + other + ")=" +
         action_char(m.actions[i]) + "]";
}

void print_match(const MatchResult& m, const Options& opt, std::ostream& out) {
  out << m.agents[0] << " vs " << m.agents[1] << ": " << action_char(m.actions[0]) << " "
      << action_char(m.actions[1]);
  if (m.syntactic) {
    out << ", by source comparison\n";
  } else if (m.proof_levels[0] == m.proof_levels[1]) {
    out << ", " << proof_system_name(*m.proof_levels[0]) << " ⊢ both\n";
  } else {
    out << ", " << level_claim(m, 0) << ", " << level_claim(m, 1) << "\n";
  }
  out << "payoffs: " << to_string(m.payoffs[0]) << " " << to_string(m.payoffs[1]) << "\n";
  if (opt.trace && m.trace) {
    const SolutionTrace& t = *m.trace;
    out << "trace (stable from world " << t.stabilization << "):\n";
    std::size_t width = 0;
    std::vector<std::string> labels;
    for (const auto& v : t.variables) {
      labels.push_back(v.row + "(" + v.col + ")");
      width = std::max(width, labels.back().size());
    }
    for (std::size_t v = 0; v < t.variables.size(); ++v) {
      out << "  " << std::left << std::setw(static_cast<int>(width)) << labels[v];
      for (int w = 0; w < t.stabilization + 2; ++w) out << ' ' << (t.value(v, w) ? 'T' : 'F');
      out << " ...\n";
    }
  }
  if (opt.normal_form) {
    for (int i = 0; i < 2; ++i) {
      if (!m.normal_forms[i]) continue;
      out << "normal form " << m.agents[i] << "(" << m.agents[1 - i] << "): "
          << render_formula(*m.normal_forms[i]) << "\n";
    }
  }
}

void add_agent(ReportDocument& doc, const std::string& name, const AgentTable& table) {
  for (const auto& a : doc.agents)
    if (a.name == name) return;
  doc.agents.push_back(make_agent_entry(name, table));
}

int cmd_check(const Options& opt, std::ostream& out, std::ostream& err) {
  const AgentTable table = load_table(opt.positional.at(0));
  for (const auto& w : table.warnings()) err << "warning: " << w << "\n";
  ReportDocument doc;
  std::size_t width = 0;
  for (const auto& name : table.declared()) width = std::max(width, name.size());
  for (const auto& name : table.declared()) {
    std::string formula;
    std::string rank;
    std::string kind = "modal";
    if (auto syn = find_syntactic(table, name)) {
      kind = "syntactic";
      rank = "-";
      formula = "\"" + syn->source + "\"";
    } else if (auto fam_it = table.families().find(name.substr(0, name.find('<')));
               name.find('<') != std::string::npos && fam_it != table.families().end()) {
      const AgentFamily& fam = fam_it->second;
      rank = std::to_string(fam.rank);
      formula = fam.body;
      kind = "family";
    } else {
      const auto def = table.get(name);
      rank = std::to_string(def->rank);
      formula = render_formula(def->written);
      if (opt.json) doc.agents.push_back(make_agent_entry(name, table));
    }
    if (!opt.json) {
      out << std::left << std::setw(static_cast<int>(width)) << name << "  " << kind << "  rank " << rank
          << "  " << formula << "\n";
    }
  }
  if (opt.json) {
    doc.command = {"check", opt.positional.at(0)};
    out << to_json(doc);
  } else {
    out << table.declared().size() << " agents ok\n";
  }
  return kExitOk;
}

int cmd_play(const Options& opt, const std::vector<std::string>& command, std::ostream& out,
             std::ostream& err) {
  const AgentTable table = load_table(opt.file);
  const Payoffs payoffs = load_payoffs(opt.payoffs, err);
  PlayOptions po;
  po.keep_trace = opt.trace;
  po.normal_forms = opt.normal_form;
  const MatchResult m = play(opt.positional.at(0), opt.positional.at(1), table, payoffs, po);
  if (opt.json) {
    ReportDocument doc;
    doc.command = command;
    add_agent(doc, m.agents[0], table);
    add_agent(doc, m.agents[1], table);
    doc.matches.push_back(make_match_entry(m));
    out << to_json(doc);
  } else {
    print_match(m, opt, out);
  }
  return kExitOk;
}

int cmd_tournament(const Options& opt, const std::vector<std::string>& command, std::ostream& out,
                   std::ostream& err) {
  const std::string file = opt.positional.empty() ? std::string() : opt.positional[0];
  const AgentTable table = load_table(file);
  const Payoffs payoffs = load_payoffs(opt.payoffs, err);
  std::vector<std::string> roster = opt.roster;
  if (roster.empty()) {
    for (const auto& name : file.empty() ? table.agent_names() : table.declared()) {
      if (name.find('<') == std::string::npos) roster.push_back(name);
    }
  }
  PlayOptions po;
  po.keep_trace = opt.trace;
  po.normal_forms = opt.normal_form;
  const TournamentReport report = round_robin(roster, table, payoffs, po);
  const std::size_t n = report.agents.size();
  if (opt.json) {
    ReportDocument doc;
    doc.command = command;
    for (const auto& a : report.agents) add_agent(doc, a, table);
    for (const auto& row : report.matches)
      for (const auto& m : row) doc.matches.push_back(make_match_entry(m));
    TournamentEntry te{report.agents, payoffs_text(payoffs), {}};
    for (std::size_t i = 0; i < n; ++i) te.scores.push_back({report.agents[i], to_string(report.scores[i])});
    doc.tournament = std::move(te);
    out << to_json(doc);
    return kExitOk;
  }
  std::size_t width = 5;
  for (const auto& a : report.agents) width = std::max(width, a.size());
  out << std::left << std::setw(static_cast<int>(width)) << "" << " ";
  for (std::size_t j = 0; j < n; ++j) out << std::setw(4) << ("#" + std::to_string(j + 1));
  out << " score\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << std::left << std::setw(static_cast<int>(width)) << report.agents[i] << " ";
    for (std::size_t j = 0; j < n; ++j) {
      const MatchResult& m = report.matches[i][j];
      std::string cell(1, action_char(m.actions[0]));
      if (m.proof_levels[0]) cell += std::to_string(*m.proof_levels[0]);
      out << std::setw(4) << cell;
    }
    out << " " << to_string(report.scores[i]) << "\n";
  }
  out << "cells: row agent's action and proof level (n for PA+n) against column #j\n";
  if (opt.trace || opt.normal_form) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) print_match(report.matches[i][j], opt, out);
  }
  return kExitOk;
}

std::string action_list(const Verdict& v) { return std::string(1, action_char(v.action)); }

int cmd_search(const Options& opt, const std::vector<std::string>& command, std::ostream& out) {
  const AgentTable table = load_table(opt.file);
  const std::string kind = opt.positional.at(0);
  std::vector<std::string> targets(opt.positional.begin() + 1, opt.positional.end());
  const auto want = [&](std::size_t n) {
    if (targets.size() != n) {
      throw InputError("search " + kind + " takes " + std::to_string(n) + " agent name(s)");
    }
    for (auto& t : targets) t = table.canonical_name(t);
  };

  SearchEntry entry;
  entry.kind = kind;
  entry.max_rank = opt.bounds.max_rank;
  entry.max_nodes = opt.bounds.max_nodes;
  entry.dedup = opt.bounds.dedup;
  if (opt.bounds.max_rank == 1) {
    for (const auto& s : opt.bounds.sub_agents) entry.sub_agents.push_back(table.canonical_name(s));
  }
  if (kind == "exploiter" || kind == "distinguisher") {
    SearchResult r;
    if (kind == "exploiter") {
      want(1);
      r = find_exploiter(targets[0], table, opt.bounds);
    } else {
      want(2);
      r = find_distinguisher(targets[0], targets[1], table, opt.bounds);
    }
    entry.candidates = r.candidates;
    if (r.witness) {
      const std::string z = render_formula(r.witness->formula);
      entry.witness = z;
      entry.witness_actions = {action_list(r.verdicts[0]), action_list(r.verdicts[1])};
      if (kind == "exploiter") {
        entry.summary = "found Z := " + z + " after " + std::to_string(r.candidates) + " candidates: " +
                        targets[0] + "(Z)=" + entry.witness_actions[0] + ", Z(" + targets[0] +
                        ")=" + entry.witness_actions[1];
      } else {
        entry.summary = "found Z := " + z + " after " + std::to_string(r.candidates) + " candidates: Z(" +
                        targets[0] + ")=" + entry.witness_actions[0] + ", Z(" + targets[1] +
                        ")=" + entry.witness_actions[1];
      }
    } else {
      entry.summary = std::string(kind == "exploiter" ? "none found" : "none found within bounds") + " (" +
                      std::to_string(r.candidates) + " candidates)";
    }
  } else if (kind == "rank0-theorem") {
    want(0);
    entry.max_rank = 0;
    entry.sub_agents.clear();
    Rank0Report r = check_rank0_theorem(table, opt.bounds);
    entry.candidates = r.checked;
    entry.premise_holds = r.premise_holds;
    entry.violations = std::move(r.violations);
    entry.checked_agents = std::move(r.checked_agents);
    entry.summary = std::to_string(entry.violations.size()) + " violations / " + std::to_string(r.checked) +
                    " agents (" + std::to_string(r.premise_holds) + " with PA ⊢ [X(FairBot)=C])";
  } else {
    throw InputError("unknown search kind '" + kind + "' (expected exploiter, distinguisher or rank0-theorem)");
  }
  entry.targets = targets;

  if (opt.json) {
    ReportDocument doc;
    doc.command = command;
    for (const auto& t : targets) add_agent(doc, t, table);
    doc.search = std::move(entry);
    out << to_json(doc);
  } else {
    out << entry.summary << "\n";
    for (const auto& v : entry.violations) out << "violation: " << v << "\n";
  }
  return kExitOk;
}

void add_output_flags(CLI::App* cmd, Options& opt) {
  cmd->add_flag("--json", opt.json, "Emit a JSON report");
}

void add_match_flags(CLI::App* cmd, Options& opt) {
  cmd->add_flag("--trace", opt.trace, "Show world-by-world traces");
  cmd->add_flag("--normal-form", opt.normal_form, "Show letterless normal forms");
  cmd->add_option("--payoffs", opt.payoffs, "Payoffs T,R,P,S (default 5,3,1,0)");
  add_output_flags(cmd, opt);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prisoner's Dilemma between modal agents", "modalpd"};
  app.require_subcommand(1);
  Options opt;

  auto* check = app.add_subcommand("check", "Parse and validate an agent file");
  check->add_option("file", opt.positional, "Agent file")->required()->expected(1);
  add_output_flags(check, opt);

  auto* play_cmd = app.add_subcommand("play", "Play one match");
  play_cmd->add_option("agents", opt.positional, "Agent names X Y")->required()->expected(2);
  play_cmd->add_option("-f,--file", opt.file, "Agent file (builtins are always available)");
  add_match_flags(play_cmd, opt);

  auto* tournament = app.add_subcommand("tournament", "Round-robin tournament");
  tournament->add_option("file", opt.positional, "Agent file")->expected(0, 1);
  tournament->add_option("--roster", opt.roster, "Comma-separated agent names")->delimiter(',');
  add_match_flags(tournament, opt);

  auto* search = app.add_subcommand("search", "Bounded search over enumerated modal agents");
  search->add_option("kind", opt.positional, "exploiter X | distinguisher X Y | rank0-theorem")
      ->required()
      ->expected(1, 3);
  search->add_option("-f,--file", opt.file, "Agent file (builtins are always available)");
  search->add_option("--max-nodes", opt.bounds.max_nodes, "Largest template size in AST nodes")
      ->capture_default_str();
  search->add_option("--max-rank", opt.bounds.max_rank, "0 or 1")->capture_default_str();
  search->add_option("--sub-agents", opt.bounds.sub_agents, "Agents rank-1 templates may mention")
      ->delimiter(',');
  search->add_flag("--dedup", opt.bounds.dedup, "Drop candidates with a repeated probe fingerprint");
  add_output_flags(search, opt);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (check->parsed()) return cmd_check(opt, out, err);
    if (play_cmd->parsed()) return cmd_play(opt, args, out, err);
    if (tournament->parsed()) return cmd_tournament(opt, args, out, err);
    return cmd_search(opt, args, out);
  } catch (const InternalNonStabilization& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace modalpd
