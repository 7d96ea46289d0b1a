#ifndef MODALPD_REPORT_HPP_
#define MODALPD_REPORT_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "modalpd/arena.hpp"
#include "modalpd/search.hpp"

namespace modalpd {

inline constexpr const char* kSchemaVersion = "1";

struct AgentEntry {
  std::string name;
  /// "modal" or "syntactic".
  std::string kind;
  std::optional<int> rank;
  /// Canonical formula for modal agents, source text for syntactic ones.
  std::string formula;
};

struct TraceEntry {
  std::array<std::string, 2> pair;
  std::vector<bool> values;
};

struct MatchEntry {
  std::array<std::string, 2> agents;
  std::array<std::string, 2> actions;
  std::array<std::optional<int>, 2> proof_levels;
  std::array<std::string, 2> payoffs;
  std::optional<int> stabilization;
  std::vector<TraceEntry> traces;
  std::vector<std::string> normal_forms;
};

struct ScoreEntry {
  std::string agent;
  std::string score;
};

struct TournamentEntry {
  std::vector<std::string> roster;
  std::string payoffs;
  std::vector<ScoreEntry> scores;
};

struct SearchEntry {
  /// "exploiter", "distinguisher" or "rank0-theorem".
  std::string kind;
  std::vector<std::string> targets;
  int max_rank = 0;
  int max_nodes = 0;
  std::vector<std::string> sub_agents;
  bool dedup = false;
  std::size_t candidates = 0;
  std::optional<std::string> witness;
  /// Actions behind the witness, e.g. ["C", "D"].
  std::vector<std::string> witness_actions;
  std::size_t premise_holds = 0;
  std::vector<std::string> violations;
  std::vector<std::string> checked_agents;
  std::string summary;
};

struct ReportDocument {
  std::string schema_version = kSchemaVersion;
  std::vector<std::string> command;
  std::vector<AgentEntry> agents;
  std::vector<MatchEntry> matches;
  std::optional<TournamentEntry> tournament;
  std::optional<SearchEntry> search;
};

AgentEntry make_agent_entry(std::string_view name, const AgentTable& table);

/// Traces cover worlds 0..stabilization+1 for every matchup variable.
MatchEntry make_match_entry(const MatchResult& match);

std::string payoffs_text(const Payoffs& payoffs);

/// Pretty-printed JSON, fields in a fixed order, trailing newline.
std::string to_json(const ReportDocument& doc);

/// Throws std::invalid_argument if `text` is not a valid report.
ReportDocument from_json(std::string_view text);

/// Empty when `text` is a valid report; otherwise one message per problem.
std::vector<std::string> validate_report(std::string_view text);

}  // namespace modalpd

#endif  // MODALPD_REPORT_HPP_
