#ifndef MODALPD_SOLVER_HPP_
#define MODALPD_SOLVER_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "modalpd/agents.hpp"
#include "modalpd/formula.hpp"

namespace modalpd {

enum class Action { Cooperate, Defect };

char action_char(Action a);

/// Matchup variables [A(B)] with one grounded, fully modalized equation each.
struct EquationSystem {
  MatchVar root;
  /// Sorted.
  std::vector<MatchVar> variables;
  std::map<MatchVar, Formula> equations;
};

/// Grounds the matchup X vs Y. The variable set is the least set containing
/// (X,Y) and (Y,X) such that for every variable (A,B) and every agent S that
/// A's template mentions, (B,S) and (S,B) are variables too.
EquationSystem build_equation_system(std::string_view x, std::string_view y, const AgentSource& table);

/// Truth values on the chain frame where world n sees exactly the worlds m < n.
/// World n is where []^n false first fails, so values constant from world n on
/// are settled by PA+n.
struct SolutionTrace {
  std::vector<MatchVar> variables;
  /// values[v][n] for n in [0, worlds).
  std::vector<std::vector<bool>> values;
  std::vector<bool> stable;
  /// Per variable: least world from which its value is constant.
  std::vector<int> settles;
  /// Worlds evaluated; every later world repeats the last one.
  int worlds = 0;
  /// Least world from which every variable is constant.
  int stabilization = 0;
  /// Distinct Box subformulas across all equations.
  int box_count = 0;
  /// box_history[b][n]: truth of the b-th Box subformula at world n.
  std::vector<std::vector<bool>> box_history;

  std::optional<std::size_t> index_of(const MatchVar& var) const;
  /// Value at any world, extending past `worlds` with the stable value.
  bool value(std::size_t var, int world) const;
  bool value(const MatchVar& var, int world) const;
};

/// Raised when the chain evaluation fails to settle within its proven bound.
class InternalNonStabilization : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

SolutionTrace solve(const EquationSystem& system);

struct Verdict {
  Action action = Action::Defect;
  /// n such that PA+n proves [A(B)=action] (n = 0 is PA itself).
  int proof_level = 0;
};

/// Throws std::out_of_range if `pair` is not a variable of the solved system.
Verdict verdict(const SolutionTrace& trace, const MatchVar& pair);

/// "PA" or "PA+n".
std::string proof_system_name(int level);

/// Letterless formula (a boolean combination of []^i false) whose chain
/// evaluation reproduces the trace of `pair`.
Formula normal_form(const SolutionTrace& trace, const MatchVar& pair);

/// Re-evaluates every equation against the trace at worlds 0..worlds using a
/// direct recursive reading of the chain semantics.
bool verify_fixed_point(const EquationSystem& system, const SolutionTrace& trace);

/// Truth of a letterless formula at chain worlds 0..worlds-1.
std::vector<bool> chain_trace(const Formula& letterless, int worlds);

}  // namespace modalpd

#endif  // MODALPD_SOLVER_HPP_
