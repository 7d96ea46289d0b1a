#include "modalpd/report.hpp"

#include <json.hpp>

#include "modalpd/parse.hpp"

namespace modalpd {

using Json = nlohmann::ordered_json;

AgentEntry make_agent_entry(std::string_view name_in, const AgentTable& table) {
  const std::string name = table.canonical_name(name_in);
  if (auto syn = find_syntactic(table, name)) return {syn->name, "syntactic", std::nullopt, syn->source};
  const auto def = table.get(name);
  return {name, "modal", def->rank, render_formula(def->written)};
}

MatchEntry make_match_entry(const MatchResult& match) {
  MatchEntry e;
  e.agents = match.agents;
  for (int i = 0; i < 2; ++i) {
    e.actions[i] = std::string(1, action_char(match.actions[i]));
    e.proof_levels[i] = match.proof_levels[i];
    e.payoffs[i] = to_string(match.payoffs[i]);
    if (match.normal_forms[i]) e.normal_forms.push_back(render_formula(*match.normal_forms[i]));
  }
  if (match.trace) {
    const SolutionTrace& t = *match.trace;
    e.stabilization = t.stabilization;
    for (std::size_t v = 0; v < t.variables.size(); ++v) {
      TraceEntry te{{t.variables[v].row, t.variables[v].col}, {}};
      for (int w = 0; w < t.stabilization + 2; ++w) te.values.push_back(t.value(v, w));
      e.traces.push_back(std::move(te));
    }
  }
  return e;
}

std::string payoffs_text(const Payoffs& p) {
  return to_string(p.T) + "," + to_string(p.R) + "," + to_string(p.P) + "," + to_string(p.S);
}

namespace {

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

Json encode(const ReportDocument& doc) {
  Json root;
  root["schema_version"] = doc.schema_version;
  root["command"] = doc.command;
  Json agents = Json::array();
  for (const auto& a : doc.agents) {
    agents.push_back({{"name", a.name}, {"kind", a.kind}, {"rank", optional_json(a.rank)}, {"formula", a.formula}});
  }
  root["agents"] = std::move(agents);
  Json matches = Json::array();
  for (const auto& m : doc.matches) {
    Json traces = Json::array();
    for (const auto& t : m.traces) traces.push_back({{"pair", t.pair}, {"values", t.values}});
    matches.push_back({{"agents", m.agents},
                       {"actions", m.actions},
                       {"proof_levels", {optional_json(m.proof_levels[0]), optional_json(m.proof_levels[1])}},
                       {"payoffs", m.payoffs},
                       {"stabilization", optional_json(m.stabilization)},
                       {"traces", std::move(traces)},
                       {"normal_forms", m.normal_forms}});
  }
  root["matches"] = std::move(matches);
  if (doc.tournament) {
    Json scores = Json::array();
    for (const auto& s : doc.tournament->scores) scores.push_back({{"agent", s.agent}, {"score", s.score}});
    root["tournament"] = {{"roster", doc.tournament->roster},
                          {"payoffs", doc.tournament->payoffs},
                          {"scores", std::move(scores)}};
  } else {
    root["tournament"] = nullptr;
  }
  if (doc.search) {
    const SearchEntry& s = *doc.search;
    root["search"] = {{"kind", s.kind},
                      {"targets", s.targets},
                      {"max_rank", s.max_rank},
                      {"max_nodes", s.max_nodes},
                      {"sub_agents", s.sub_agents},
                      {"dedup", s.dedup},
                      {"candidates", s.candidates},
                      {"witness", optional_json(s.witness)},
                      {"witness_actions", s.witness_actions},
                      {"premise_holds", s.premise_holds},
                      {"violations", s.violations},
                      {"checked_agents", s.checked_agents},
                      {"summary", s.summary}};
  } else {
    root["search"] = nullptr;
  }
  return root;
}

ReportDocument decode(const Json& root) {
  if (!root.is_object()) throw std::invalid_argument("report must be a JSON object");
  ReportDocument doc;
  doc.schema_version = root.at("schema_version").get<std::string>();
  doc.command = root.at("command").get<std::vector<std::string>>();
  for (const auto& a : root.at("agents")) {
    doc.agents.push_back({a.at("name").get<std::string>(), a.at("kind").get<std::string>(),
                          optional_from<int>(a.at("rank")), a.at("formula").get<std::string>()});
  }
  for (const auto& m : root.at("matches")) {
    MatchEntry e;
    e.agents = m.at("agents").get<std::array<std::string, 2>>();
    e.actions = m.at("actions").get<std::array<std::string, 2>>();
    const Json& levels = m.at("proof_levels");
    if (!levels.is_array() || levels.size() != 2) throw std::invalid_argument("proof_levels must have two entries");
    e.proof_levels = {optional_from<int>(levels[0]), optional_from<int>(levels[1])};
    e.payoffs = m.at("payoffs").get<std::array<std::string, 2>>();
    e.stabilization = optional_from<int>(m.at("stabilization"));
    for (const auto& t : m.at("traces")) {
      e.traces.push_back({t.at("pair").get<std::array<std::string, 2>>(), t.at("values").get<std::vector<bool>>()});
    }
    e.normal_forms = m.at("normal_forms").get<std::vector<std::string>>();
    doc.matches.push_back(std::move(e));
  }
  if (const Json& t = root.at("tournament"); !t.is_null()) {
    TournamentEntry te;
    te.roster = t.at("roster").get<std::vector<std::string>>();
    te.payoffs = t.at("payoffs").get<std::string>();
    for (const auto& s : t.at("scores")) {
      te.scores.push_back({s.at("agent").get<std::string>(), s.at("score").get<std::string>()});
    }
    doc.tournament = std::move(te);
  }
  if (const Json& s = root.at("search"); !s.is_null()) {
    SearchEntry se;
    se.kind = s.at("kind").get<std::string>();
    se.targets = s.at("targets").get<std::vector<std::string>>();
    se.max_rank = s.at("max_rank").get<int>();
    se.max_nodes = s.at("max_nodes").get<int>();
    se.sub_agents = s.at("sub_agents").get<std::vector<std::string>>();
    se.dedup = s.at("dedup").get<bool>();
    se.candidates = s.at("candidates").get<std::size_t>();
    se.witness = optional_from<std::string>(s.at("witness"));
    se.witness_actions = s.at("witness_actions").get<std::vector<std::string>>();
    se.premise_holds = s.at("premise_holds").get<std::size_t>();
    se.violations = s.at("violations").get<std::vector<std::string>>();
    se.checked_agents = s.at("checked_agents").get<std::vector<std::string>>();
    se.summary = s.at("summary").get<std::string>();
    doc.search = std::move(se);
  }
  return doc;
}

bool reparses(const std::string& text) {
  try {
    ParseOptions options;
    options.allow_provable = true;
    parse_formula(text, options);
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

}  // namespace

std::string to_json(const ReportDocument& doc) { return encode(doc).dump(2) + "\n"; }

ReportDocument from_json(std::string_view text) {
  try {
    return decode(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

std::vector<std::string> validate_report(std::string_view text) {
  ReportDocument doc;
  try {
    doc = from_json(text);
  } catch (const std::invalid_argument& e) {
    return {e.what()};
  }
  std::vector<std::string> problems;
  if (doc.schema_version != kSchemaVersion) problems.push_back("unsupported schema_version " + doc.schema_version);
  for (const auto& a : doc.agents) {
    if (a.kind == "modal") {
      if (!a.rank) problems.push_back("modal agent " + a.name + " has no rank");
      if (!reparses(a.formula)) problems.push_back("formula of " + a.name + " does not parse");
    } else if (a.kind != "syntactic") {
      problems.push_back("agent " + a.name + " has unknown kind " + a.kind);
    }
  }
  for (const auto& m : doc.matches) {
    const std::string label = m.agents[0] + " vs " + m.agents[1];
    for (const auto& act : m.actions) {
      if (act != "C" && act != "D") problems.push_back(label + ": action must be C or D");
    }
    for (const auto& p : m.payoffs) {
      try {
        parse_rational(p);
      } catch (const std::invalid_argument&) {
        problems.push_back(label + ": payoff '" + p + "' is not rational");
      }
    }
    for (const auto& t : m.traces) {
      if (!m.stabilization || static_cast<int>(t.values.size()) < *m.stabilization) {
        problems.push_back(label + ": trace shorter than its stabilization index");
      }
    }
    for (const auto& nf : m.normal_forms) {
      if (!reparses(nf)) problems.push_back(label + ": normal form does not parse");
    }
  }
  return problems;
}

}  // namespace modalpd
