#ifndef MODALPD_ARENA_HPP_
#define MODALPD_ARENA_HPP_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "modalpd/agents.hpp"
#include "modalpd/solver.hpp"

namespace modalpd {

using Rational = boost::rational<long long>;

/// "3", "-1/2" or "2.5".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

/// Payoff to the row player: T for (D,C), R for (C,C), P for (D,D), S for (C,D).
struct Payoffs {
  Rational T{5};
  Rational R{3};
  Rational P{1};
  Rational S{0};

  /// Parses "T,R,P,S"; throws std::invalid_argument unless T > R > P > S.
  static Payoffs parse(std::string_view text);
  /// Throws std::invalid_argument unless T > R > P > S.
  void validate() const;
  /// Soft conditions, currently only 2R > T + S.
  std::vector<std::string> warnings() const;
  Rational row(Action mine, Action theirs) const;
};

/// Source-comparing agent in the style of CliqueBot.
struct SyntacticAgent {
  std::string name;
  /// Canonical text compared byte for byte against the opponent's.
  std::string source;
};

inline constexpr std::string_view kCliqueBotName = "CliqueBot";
/// Source of the builtin CliqueBot.
std::string_view clique_bot_source();

/// Syntactic agents declared in `table`, or the builtin CliqueBot.
std::optional<SyntacticAgent> find_syntactic(const AgentTable& table, std::string_view name);

class MixedKindsUnsupported : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PlayOptions {
  bool keep_trace = false;
  bool normal_forms = false;
};

struct MatchResult {
  std::array<std::string, 2> agents;
  std::array<Action, 2> actions{Action::Defect, Action::Defect};
  /// Unset for syntactic matches, which involve no proof.
  std::array<std::optional<int>, 2> proof_levels;
  std::array<Rational, 2> payoffs;
  bool syntactic = false;
  std::optional<SolutionTrace> trace;
  std::array<std::optional<Formula>, 2> normal_forms;
};

/// Plays X against Y. Short names (FB, PB, WFB<K>...) are accepted.
MatchResult play(std::string_view x, std::string_view y, const AgentTable& table,
                 const Payoffs& payoffs = {}, const PlayOptions& options = {});

struct TournamentReport {
  std::vector<std::string> agents;
  /// matches[i][j]: agents[i] (row) against agents[j].
  std::vector<std::vector<MatchResult>> matches;
  std::vector<Rational> scores;
};

TournamentReport round_robin(const std::vector<std::string>& agents, const AgentTable& table,
                             const Payoffs& payoffs = {}, const PlayOptions& options = {});

}  // namespace modalpd

#endif  // MODALPD_ARENA_HPP_
