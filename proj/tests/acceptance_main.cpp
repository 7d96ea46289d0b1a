// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "modalpd/arena.hpp"
#include "modalpd/cli.hpp"
#include "modalpd/report.hpp"
#include "modalpd/search.hpp"
#include "properties.hpp"

using namespace modalpd;

namespace {

using Clock = std::chrono::steady_clock;

constexpr Action C = Action::Cooperate;
constexpr Action D = Action::Defect;
constexpr double kSweepBudgetSeconds = 60.0;

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << what << std::endl;
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

// Runs the CLI in-process and returns its stdout; exit code in `code`.
std::string cli(const std::vector<std::string>& args, int* code = nullptr) {
  std::ostringstream out, err;
  const int rc = run_cli(args, out, err);
  if (code) *code = rc;
  if (rc != 0) std::cerr << "modalpd";
  if (rc != 0)
    for (const auto& a : args) std::cerr << ' ' << a;
  if (rc != 0) std::cerr << ": exit " << rc << "\n" << err.str();
  return out.str();
}

// Independent count of fully modalized templates with at most n nodes.
std::uint64_t template_count(int n, int atoms) {
  std::vector<std::uint64_t> any(n + 1), guarded(n + 1);
  std::uint64_t total = 0;
  for (int s = 1; s <= n; ++s) {
    any[s] = s == 1 ? 2 + atoms : 2 * any[s - 1];
    guarded[s] = s == 1 ? 2 : guarded[s - 1] + any[s - 1];
    for (int l = 1; l + 1 < s; ++l) {
      any[s] += 4 * any[l] * any[s - 1 - l];
      guarded[s] += 4 * guarded[l] * guarded[s - 1 - l];
    }
    total += guarded[s];
  }
  return total;
}

struct Sweep {
  std::vector<std::string> args;
  std::string json;
  double seconds = 0;
  std::optional<SearchEntry> entry;
};

Sweep run_sweep(std::vector<std::string> args) {
  Sweep s{args, {}, 0, std::nullopt};
  const auto start = Clock::now();
  int code = 0;
  s.json = cli(args, &code);
  s.seconds = seconds_since(start);
  if (code == 0) s.entry = from_json(s.json).search;
  return s;
}

bool actions_are(const MatchResult& m, Action a, Action b) { return m.actions[0] == a && m.actions[1] == b; }

}  // namespace

int main() {
  const AgentTable& lib = builtin_library();
  const std::uint64_t rank1_total = template_count(7, 8);
  const std::uint64_t rank0_total = template_count(7, 2);

  // 1
  {
    play("FairBot", "FairBot", lib);  // warm-up: static tables
    const auto start = Clock::now();
    const MatchResult m = play("FairBot", "FairBot", lib);
    const double ms = seconds_since(start) * 1000.0;
    const bool ok = actions_are(m, C, C) && m.proof_levels[0] == 0 && m.proof_levels[1] == 0 && ms < 1.0;
    report(1, ok, "FairBot vs FairBot = (C,C), both at PA, in " + std::to_string(ms) + " ms");
  }

  // 2
  {
    const MatchResult pp = play("PrudentBot", "PrudentBot", lib);
    const MatchResult pf = play("PrudentBot", "FairBot", lib);
    const MatchResult pd = play("PrudentBot", "DefectBot", lib);
    const MatchResult pc = play("PrudentBot", "CooperateBot", lib);
    const bool ok = actions_are(pp, C, C) && actions_are(pf, C, C) && actions_are(pd, D, D) &&
                    pd.proof_levels[0] == 1 && actions_are(pc, D, C) && pc.proof_levels[0] == 2;
    report(2, ok,
           "PB vs PB (C,C), PB vs FB (C,C), PB vs DB (D,D) with " + proof_system_name(*pd.proof_levels[0]) +
               " ⊢ [PB(DB)=D], PB vs CB (D,C) with " + proof_system_name(*pc.proof_levels[0]) +
               " ⊢ [PB(CB)=D]");
  }

  // 3
  {
    const MatchResult ii = play("ImprudentBot", "ImprudentBot", lib);
    const MatchResult pp = play("PrudentBot", "PrudentBot", lib);
    report(3, actions_are(ii, D, D) && actions_are(pp, C, C),
           "ImprudentBot vs ImprudentBot = (D,D), PrudentBot vs PrudentBot = (C,C)");
  }

  // Sweeps, first pass. Criterion 10 repeats them.
  const std::vector<std::vector<std::string>> sweep_args{
      {"search", "exploiter", "FairBot", "--json"},
      {"search", "exploiter", "PrudentBot", "--json"},
      {"search", "exploiter", "JustBot", "--json"},
      {"search", "exploiter", "CooperateBot", "--json"},
      {"search", "rank0-theorem", "--json"},
      {"search", "distinguisher", "FairBot", "JustBot", "--json"},
      {"search", "distinguisher", "FairBot", "PrudentBot", "--json"},
  };
  std::vector<Sweep> sweeps;
  for (const auto& args : sweep_args) sweeps.push_back(run_sweep(args));

  // 4
  {
    bool ok = true;
    double total = 0;
    std::string detail;
    for (int i = 0; i < 4; ++i) {
      const Sweep& s = sweeps[i];
      total += s.seconds;
      const std::string target = s.args[2];
      if (!s.entry) {
        ok = false;
        detail += target + ": error; ";
        continue;
      }
      const bool expect_hit = target == "CooperateBot";
      if (expect_hit) {
        bool verified = false;
        if (s.entry->witness) {
          const AgentTable t = parse_agent_file("agent Witness(Opp) := " + *s.entry->witness + "\n");
          verified = actions_are(play("CooperateBot", "Witness", t), C, D);
        }
        ok = ok && verified;
        detail += target + ": hit " + (s.entry->witness ? *s.entry->witness : "-") + "; ";
      } else {
        ok = ok && !s.entry->witness && s.entry->candidates == rank1_total;
        detail += target + ": none in " + std::to_string(s.entry->candidates) + "; ";
      }
    }
    ok = ok && total <= kSweepBudgetSeconds;
    report(4, ok, "exploiter sweeps over " + std::to_string(rank1_total) + " templates: " + detail + fmt_seconds(total));
  }

  // 5
  {
    const Sweep& s = sweeps[4];
    const bool ok = s.entry && s.entry->violations.empty() && s.entry->candidates == rank0_total &&
                    s.entry->checked_agents.size() == rank0_total && s.seconds <= kSweepBudgetSeconds;
    report(5, ok,
           "rank-0 theorem: " + (s.entry ? std::to_string(s.entry->violations.size()) : std::string("?")) +
               " violations / " + (s.entry ? std::to_string(s.entry->candidates) : std::string("?")) + " agents (" +
               (s.entry ? std::to_string(s.entry->premise_holds) : std::string("?")) +
               " satisfy the premise) in " + fmt_seconds(s.seconds));
  }

  // 6
  {
    const AgentTable t = parse_agent_file("agent FairCopy(Them) := [] Them(FairCopy)\n");
    const std::vector<std::string> roster{"CB", "DB", "FB", "PB", "TB", "JB", "WFB<1>", "FairCopy"};
    const TournamentReport r = round_robin(roster, t);
    bool same_row = true;
    for (std::size_t j = 0; j < roster.size(); ++j) {
      same_row = same_row && r.matches[2][j].actions == r.matches[7][j].actions &&
                 r.matches[2][j].proof_levels == r.matches[7][j].proof_levels &&
                 r.matches[j][2].actions == r.matches[j][7].actions;
    }
    const Sweep& s = sweeps[5];
    const bool none = s.entry && !s.entry->witness;
    report(6, same_row && none,
           std::string("renamed FairBot copy ") + (same_row ? "matches" : "differs from") +
               " FairBot's row; FB/JB distinguisher: " +
               (none ? "none found within bounds (" + std::to_string(s.entry->candidates) + " candidates)"
                     : std::string("unexpected result")));
  }

  // 7
  {
    const std::string source(clique_bot_source());
    std::string file = "clique Same := \"" + source + "\"\n";
    std::vector<std::string> mutants;
    for (std::size_t i = 0; i < source.size(); ++i) {
      std::string changed = source;
      changed[i] = changed[i] == 'x' ? 'y' : 'x';
      mutants.push_back(changed);
      mutants.push_back(source.substr(0, i) + source.substr(i + 1));
      mutants.push_back(source.substr(0, i) + "x" + source.substr(i));
    }
    mutants.push_back(source + " ");
    for (std::size_t k = 0; k < mutants.size(); ++k) {
      file += "clique Mutant" + std::to_string(k) + " := \"" + mutants[k] + "\"\n";
    }
    const AgentTable t = parse_agent_file(file);
    bool ok = actions_are(play("CliqueBot", "Same", t), C, C);
    for (std::size_t k = 0; k < mutants.size(); ++k) {
      ok = ok && actions_are(play("CliqueBot", "Mutant" + std::to_string(k), t), D, D);
    }
    report(7, ok, "CliqueBot vs identical source (C,C); vs " + std::to_string(mutants.size()) +
                      " one-byte variants (D,D)");
  }

  // 8
  {
    const MatchResult tc = play("TrollBot", "CooperateBot", lib);
    const Sweep& s = sweeps[6];
    bool witness_ok = false;
    std::string witness = "-";
    if (s.entry && s.entry->witness) {
      witness = *s.entry->witness;
      const AgentTable t = parse_agent_file("agent Witness(Opp) := " + witness + "\n");
      witness_ok = play("Witness", "FairBot", t).actions[0] != play("Witness", "PrudentBot", t).actions[0];
    }
    std::vector<bool> mutual(17);
    for (int k = 0; k <= 16; ++k) mutual[k] = actions_are(play("PrudentBot", instance_name("WaitFairBot", k), lib), C, C);
    int threshold = -1;
    for (int k = 16; k >= 0 && !mutual[k]; --k) threshold = k;
    const bool ok = tc.actions[0] == C && witness_ok && threshold >= 0;
    report(8, ok,
           std::string("TrollBot(CooperateBot)=") + action_char(tc.actions[0]) + "; FB/PB distinguisher " + witness +
               "; PrudentBot fails to reach (C,C) with WaitFairBot_K for all K in [" +
               (threshold >= 0 ? std::to_string(threshold) : std::string("none")) + ", 16]");
  }

  // 9
  {
    constexpr int kCases = 1000;
    const std::vector<std::pair<std::string, props::Outcome>> suites{
        {"round-trip", props::roundtrip(11, kCases)},
        {"solver", props::solver(12, kCases)},
        {"normal-form", props::normal_forms(13, kCases)},
        {"height-semantics", props::height_semantics(14, kCases)},
    };
    bool ok = true;
    std::string detail;
    for (const auto& [name, o] : suites) {
      ok = ok && o.ok() && o.cases >= kCases;
      detail += name + " " + std::to_string(o.failures.size()) + "/" + std::to_string(o.cases) + "; ";
      for (std::size_t i = 0; i < o.failures.size() && i < 5; ++i) std::cerr << name << ": " << o.failures[i] << "\n";
    }
    report(9, ok, "property suites, discrepancies/cases: " + detail);
  }

  // 10
  {
    const std::vector<std::string> tournament{"tournament",
                                              "--roster",
                                              "CB,DB,FB,PB,TB,JB,ImprudentBot,WFB<0>,WFB<1>,WFB<2>",
                                              "--trace",
                                              "--normal-form",
                                              "--json"};
    const std::string first = cli(tournament);
    bool ok = !first.empty() && first == cli(tournament) && validate_report(first).empty();
    for (const Sweep& s : sweeps) {
      ok = ok && !s.json.empty() && validate_report(s.json).empty() && run_sweep(s.args).json == s.json;
    }
    report(10, ok, "tournament and " + std::to_string(sweeps.size()) + " sweeps re-run with byte-identical JSON");
  }

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
