#ifndef MODALPD_FORMULA_HPP_
#define MODALPD_FORMULA_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace modalpd {

/// Action of `caller` against `callee` as written in an agent template.
/// Names are "Self", "Opp", or a concrete agent name.
struct RawAtom {
  std::string caller;
  std::string callee;

  auto operator<=>(const RawAtom&) const = default;
};

/// Grounded matchup variable: the proposition [row(col)=C].
struct MatchVar {
  std::string row;
  std::string col;

  auto operator<=>(const MatchVar&) const = default;
};

using AtomId = std::variant<RawAtom, MatchVar>;

std::string to_string(const AtomId& atom);
std::string to_string(const MatchVar& var);

enum class Op : std::uint8_t {
  Top,
  Bottom,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Box,
  // provable<n>(f): sugar for [](~[]^n false -> f), removed by desugar_provable.
  Provable,
};

bool is_binary(Op op);
bool is_unary(Op op);

struct FormulaNode;

/// Immutable GL formula. Copies share structure; equality is structural.
class Formula {
 public:
  Formula();  // Top

  static Formula top();
  static Formula bottom();
  static Formula atom(AtomId id);
  static Formula raw(std::string caller, std::string callee);
  static Formula var(std::string row, std::string col);
  static Formula negate(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  static Formula box(Formula f, int times = 1);
  static Formula provable(int level, Formula f);
  static Formula binary(Op op, Formula lhs, Formula rhs);

  Op op() const;
  /// Operand of a unary node, or left operand of a binary node.
  const Formula& left() const;
  const Formula& right() const;
  const Formula& child() const { return left(); }
  const AtomId& atom_id() const;
  /// Consistency level of a Provable node.
  int level() const;

  std::size_t hash() const;
  /// Number of AST nodes.
  int node_count() const;
  /// Address of the shared node; equal for copies of the same value.
  const void* identity() const { return node_.get(); }

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  /// Stable total order; used only for deterministic containers.
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  friend struct FormulaNode;
  explicit Formula(std::shared_ptr<const FormulaNode> node);
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Canonical ASCII text with minimal parentheses.
std::string render_formula(const Formula& f);

int modal_depth(const Formula& f);

/// Distinct Box subtrees in post-order of first occurrence.
std::vector<Formula> box_subformulas(const Formula& f);

/// True iff every atom has a Box (or Provable) ancestor.
bool is_fully_modalized(const Formula& f);

/// Paths (e.g. "and[1]/box/atom") of atoms with no modal ancestor.
std::vector<std::string> unguarded_atom_paths(const Formula& f);

using Bindings = std::map<AtomId, Formula>;

Formula substitute(const Formula& f, const Bindings& bindings);

/// All atoms occurring in f, deduplicated, in first-occurrence order.
std::vector<AtomId> atoms_of(const Formula& f);

bool contains_provable(const Formula& f);

}  // namespace modalpd

#endif  // MODALPD_FORMULA_HPP_
