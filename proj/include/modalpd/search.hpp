#ifndef MODALPD_SEARCH_HPP_
#define MODALPD_SEARCH_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modalpd/agents.hpp"
#include "modalpd/solver.hpp"

namespace modalpd {

inline constexpr int kDefaultNodeCap = 9;

struct SearchBounds {
  int max_rank = 1;
  /// Only used at rank 1.
  std::vector<std::string> sub_agents{"CooperateBot", "DefectBot", "FairBot"};
  int max_nodes = 7;
  bool dedup = false;
  int node_cap = kDefaultNodeCap;
};

/// Name under which enumerated candidates are played; never a valid identifier.
inline constexpr std::string_view kCandidateName = "Z*";

/// Every fully modalized template over the allowed atoms with at most
/// max_nodes nodes, ordered by node count and then by rendered text.
/// Throws std::invalid_argument on bad bounds.
std::vector<Formula> enumerate_templates(const SearchBounds& bounds, const AgentTable& table);

/// Wraps a template as an agent named kCandidateName.
AgentDef make_candidate(const Formula& templ, const AgentTable& table);

/// Streams candidates in enumeration order, dropping fingerprint duplicates
/// when bounds.dedup is set. Stops early when `visit` returns false.
/// Returns the number of candidates visited.
std::size_t for_each_candidate(const SearchBounds& bounds, const AgentTable& table,
                               const std::function<bool(const AgentDef&)>& visit);

std::vector<AgentDef> enumerate_agents(const SearchBounds& bounds, const AgentTable& table);

/// Verdicts of the candidate against `opponent` and of `opponent` against it.
std::array<Verdict, 2> duel(const AgentDef& candidate, std::string_view opponent,
                            const AgentTable& table);

/// Verdict sequence against the probes CB, DB, FB, PB, TB, JB, WaitFairBot<1>.
std::vector<int> fingerprint(const AgentDef& candidate, const AgentTable& table);

struct SearchResult {
  std::optional<AgentDef> witness;
  /// Candidates examined, including the witness.
  std::size_t candidates = 0;
  /// Exploiter: X vs Z, Z vs X. Distinguisher: Z vs X, Z vs Y.
  std::array<Verdict, 2> verdicts{};
};

/// First Z with X(Z) = C and Z(X) = D.
SearchResult find_exploiter(std::string_view x, const AgentTable& table, const SearchBounds& bounds = {});

/// First Z whose action against X differs from its action against Y.
SearchResult find_distinguisher(std::string_view x, std::string_view y, const AgentTable& table,
                                const SearchBounds& bounds = {});

struct Rank0Report {
  std::size_t checked = 0;
  /// Agents X with PA proving X(FairBot) = C.
  std::size_t premise_holds = 0;
  std::vector<std::string> checked_agents;
  std::vector<std::string> violations;
};

/// For every rank-0 X: if PA proves X(FairBot) = C then PA proves X(CooperateBot) = C.
/// max_rank and sub_agents of `bounds` are ignored.
Rank0Report check_rank0_theorem(const AgentTable& table, const SearchBounds& bounds = {});

}  // namespace modalpd

#endif  // MODALPD_SEARCH_HPP_
