#ifndef MODALPD_KRIPKE_HPP_
#define MODALPD_KRIPKE_HPP_

#include <vector>

#include "modalpd/formula.hpp"

namespace modalpd {

inline constexpr int kMaxCrosscheckWorlds = 8;

/// Finite Kripke frame given by its accessibility relation.
class Frame {
 public:
  explicit Frame(int worlds);

  int size() const { return size_; }
  void add_edge(int from, int to);
  bool sees(int from, int to) const { return relation_[from * size_ + to]; }

  bool is_transitive() const;
  bool is_irreflexive() const;
  void close_transitively();

  /// Length of the longest chain leaving each world (0 for terminal worlds).
  /// Requires an acyclic relation.
  std::vector<int> heights() const;

 private:
  int size_;
  std::vector<bool> relation_;
};

/// Standard Kripke truth of a letterless formula at every world.
std::vector<bool> kripke_values(const Formula& letterless, const Frame& frame);

/// True iff, at every world w of a finite transitive irreflexive frame, the
/// Kripke truth of `letterless` equals its chain truth at height(w).
/// Throws std::invalid_argument on atoms, a bad frame, or more than
/// kMaxCrosscheckWorlds worlds.
bool height_semantics_crosscheck(const Formula& letterless, const Frame& frame);

}  // namespace modalpd

#endif  // MODALPD_KRIPKE_HPP_
