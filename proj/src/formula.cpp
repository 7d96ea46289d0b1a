#include "modalpd/formula.hpp"

#include <cassert>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace modalpd {

struct FormulaNode {
  Op op;
  int level = 0;
  AtomId atom;
  Formula lhs{nullptr};
  Formula rhs{nullptr};
  std::size_t hash = 0;
  int size = 1;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t atom_hash(const AtomId& atom) {
  std::hash<std::string> h;
  return std::visit(
      [&](const auto& a) -> std::size_t {
        using T = std::decay_t<decltype(a)>;
        std::size_t tag = std::is_same_v<T, RawAtom> ? 17 : 31;
        if constexpr (std::is_same_v<T, RawAtom>) {
          return mix(mix(tag, h(a.caller)), h(a.callee));
        } else {
          return mix(mix(tag, h(a.row)), h(a.col));
        }
      },
      atom);
}

}  // namespace

std::string to_string(const MatchVar& var) { return var.row + "(" + var.col + ")"; }

std::string to_string(const AtomId& atom) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, RawAtom>) {
          return a.caller + "(" + a.callee + ")";
        } else {
          return to_string(a);
        }
      },
      atom);
}

bool is_binary(Op op) {
  return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Iff;
}

bool is_unary(Op op) { return op == Op::Not || op == Op::Box || op == Op::Provable; }

Formula::Formula() : Formula(top()) {}

Formula::Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}

Formula Formula::top() {
  static const Formula f = [] {
    auto n = std::make_shared<FormulaNode>();
    n->op = Op::Top;
    n->hash = mix(0, static_cast<std::size_t>(Op::Top));
    return Formula(std::move(n));
  }();
  return f;
}

Formula Formula::bottom() {
  static const Formula f = [] {
    auto n = std::make_shared<FormulaNode>();
    n->op = Op::Bottom;
    n->hash = mix(0, static_cast<std::size_t>(Op::Bottom));
    return Formula(std::move(n));
  }();
  return f;
}

Formula Formula::atom(AtomId id) {
  auto n = std::make_shared<FormulaNode>();
  n->op = Op::Atom;
  n->hash = mix(static_cast<std::size_t>(Op::Atom), atom_hash(id));
  n->atom = std::move(id);
  return Formula(std::move(n));
}

Formula Formula::raw(std::string caller, std::string callee) {
  return atom(RawAtom{std::move(caller), std::move(callee)});
}

Formula Formula::var(std::string row, std::string col) {
  return atom(MatchVar{std::move(row), std::move(col)});
}

Formula Formula::negate(Formula f) {
  auto n = std::make_shared<FormulaNode>();
  n->op = Op::Not;
  n->hash = mix(static_cast<std::size_t>(Op::Not), f.hash());
  n->size = 1 + f.node_count();
  n->lhs = std::move(f);
  return Formula(std::move(n));
}

Formula Formula::box(Formula f, int times) {
  if (times < 0) throw std::invalid_argument("negative box exponent");
  for (int i = 0; i < times; ++i) {
    auto n = std::make_shared<FormulaNode>();
    n->op = Op::Box;
    n->hash = mix(static_cast<std::size_t>(Op::Box), f.hash());
    n->size = 1 + f.node_count();
    n->lhs = std::move(f);
    f = Formula(std::move(n));
  }
  return f;
}

Formula Formula::provable(int level, Formula f) {
  if (level < 0) throw std::invalid_argument("negative provability level");
  auto n = std::make_shared<FormulaNode>();
  n->op = Op::Provable;
  n->level = level;
  n->hash = mix(mix(static_cast<std::size_t>(Op::Provable), static_cast<std::size_t>(level)),
                f.hash());
  n->size = 1 + f.node_count();
  n->lhs = std::move(f);
  return Formula(std::move(n));
}

Formula Formula::binary(Op op, Formula lhs, Formula rhs) {
  if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
  auto n = std::make_shared<FormulaNode>();
  n->op = op;
  n->hash = mix(mix(static_cast<std::size_t>(op), lhs.hash()), rhs.hash());
  n->size = 1 + lhs.node_count() + rhs.node_count();
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

Formula Formula::conj(Formula lhs, Formula rhs) { return binary(Op::And, std::move(lhs), std::move(rhs)); }
Formula Formula::disj(Formula lhs, Formula rhs) { return binary(Op::Or, std::move(lhs), std::move(rhs)); }
Formula Formula::implies(Formula lhs, Formula rhs) {
  return binary(Op::Implies, std::move(lhs), std::move(rhs));
}
Formula Formula::iff(Formula lhs, Formula rhs) { return binary(Op::Iff, std::move(lhs), std::move(rhs)); }

Op Formula::op() const { return node_->op; }
const Formula& Formula::left() const { return node_->lhs; }
const Formula& Formula::right() const { return node_->rhs; }
const AtomId& Formula::atom_id() const { return node_->atom; }
int Formula::level() const { return node_->level; }
std::size_t Formula::hash() const { return node_->hash; }
int Formula::node_count() const { return node_->size; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  const FormulaNode& a = *node_;
  const FormulaNode& b = *other.node_;
  if (a.hash != b.hash || a.op != b.op || a.size != b.size || a.level != b.level) return false;
  switch (a.op) {
    case Op::Top:
    case Op::Bottom:
      return true;
    case Op::Atom:
      return a.atom == b.atom;
    case Op::Not:
    case Op::Box:
    case Op::Provable:
      return a.lhs == b.lhs;
    default:
      return a.lhs == b.lhs && a.rhs == b.rhs;
  }
}

bool operator<(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return false;
  if (a.op() != b.op()) return a.op() < b.op();
  if (a.level() != b.level()) return a.level() < b.level();
  switch (a.op()) {
    case Op::Top:
    case Op::Bottom:
      return false;
    case Op::Atom:
      return a.atom_id() < b.atom_id();
    case Op::Not:
    case Op::Box:
    case Op::Provable:
      return a.left() < b.left();
    default:
      if (a.left() != b.left()) return a.left() < b.left();
      return a.right() < b.right();
  }
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

// Loosest to tightest.
int precedence(Op op) {
  switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not:
    case Op::Box: return 5;
    default: return 6;
  }
}

const char* infix(Op op) {
  switch (op) {
    case Op::Iff: return " <-> ";
    case Op::Implies: return " -> ";
    case Op::Or: return " | ";
    case Op::And: return " & ";
    default: return "?";
  }
}

void render_into(const Formula& f, std::string& out);

void render_operand(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  render_into(f, out);
  if (parens) out += ')';
}

void render_into(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::Top: out += "true"; return;
    case Op::Bottom: out += "false"; return;
    case Op::Atom: out += to_string(f.atom_id()); return;
    case Op::Not:
      out += '~';
      render_operand(f.child(), precedence(f.child().op()) < 5, out);
      return;
    case Op::Box:
      out += "[]";
      render_operand(f.child(), precedence(f.child().op()) < 5, out);
      return;
    case Op::Provable:
      out += "provable<" + std::to_string(f.level()) + ">(";
      render_into(f.child(), out);
      out += ')';
      return;
    default: break;
  }
  const int p = precedence(f.op());
  const int lp = precedence(f.left().op());
  const int rp = precedence(f.right().op());
  // `->` associates to the right; every other binary operator to the left.
  const bool right_assoc = f.op() == Op::Implies;
  render_operand(f.left(), right_assoc ? lp <= p : lp < p, out);
  out += infix(f.op());
  render_operand(f.right(), right_assoc ? rp < p : rp <= p, out);
}

}  // namespace

std::string render_formula(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Structural analysis

int modal_depth(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom:
      return 0;
    case Op::Not:
      return modal_depth(f.child());
    case Op::Box:
      return 1 + modal_depth(f.child());
    case Op::Provable:
      // [](~[]^n false -> g)
      return 1 + std::max(f.level(), modal_depth(f.child()));
    default:
      return std::max(modal_depth(f.left()), modal_depth(f.right()));
  }
}

namespace {

void collect_boxes(const Formula& f, std::unordered_set<Formula, FormulaHash>& seen,
                   std::vector<Formula>& out) {
  if (f.op() == Op::Top || f.op() == Op::Bottom || f.op() == Op::Atom) return;
  collect_boxes(f.left(), seen, out);
  if (is_binary(f.op())) collect_boxes(f.right(), seen, out);
  if (f.op() == Op::Box && seen.insert(f).second) out.push_back(f);
}

void collect_unguarded(const Formula& f, const std::string& path, std::vector<std::string>& out) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Box:
    case Op::Provable:
      return;
    case Op::Atom:
      out.push_back((path.empty() ? "" : path + "/") + "atom " + to_string(f.atom_id()));
      return;
    case Op::Not:
      collect_unguarded(f.child(), (path.empty() ? "" : path + "/") + "not", out);
      return;
    default: {
      std::string name = f.op() == Op::And     ? "and"
                         : f.op() == Op::Or    ? "or"
                         : f.op() == Op::Iff   ? "iff"
                                               : "implies";
      std::string prefix = (path.empty() ? "" : path + "/") + name;
      collect_unguarded(f.left(), prefix + "[0]", out);
      collect_unguarded(f.right(), prefix + "[1]", out);
    }
  }
}

}  // namespace

std::vector<Formula> box_subformulas(const Formula& f) {
  std::unordered_set<Formula, FormulaHash> seen;
  std::vector<Formula> out;
  collect_boxes(f, seen, out);
  return out;
}

std::vector<std::string> unguarded_atom_paths(const Formula& f) {
  std::vector<std::string> out;
  collect_unguarded(f, "", out);
  return out;
}

bool is_fully_modalized(const Formula& f) {
  switch (f.op()) {
    case Op::Atom: return false;
    case Op::Top:
    case Op::Bottom:
    case Op::Box:
    case Op::Provable:
      return true;
    case Op::Not:
      return is_fully_modalized(f.child());
    default:
      return is_fully_modalized(f.left()) && is_fully_modalized(f.right());
  }
}

Formula substitute(const Formula& f, const Bindings& bindings) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
      return f;
    case Op::Atom: {
      auto it = bindings.find(f.atom_id());
      return it == bindings.end() ? f : it->second;
    }
    case Op::Not:
      return Formula::negate(substitute(f.child(), bindings));
    case Op::Box:
      return Formula::box(substitute(f.child(), bindings));
    case Op::Provable:
      return Formula::provable(f.level(), substitute(f.child(), bindings));
    default:
      return Formula::binary(f.op(), substitute(f.left(), bindings),
                             substitute(f.right(), bindings));
  }
}

namespace {

void collect_atoms(const Formula& f, std::set<AtomId>& seen, std::vector<AtomId>& out) {
  if (f.op() == Op::Atom) {
    if (seen.insert(f.atom_id()).second) out.push_back(f.atom_id());
    return;
  }
  if (f.op() == Op::Top || f.op() == Op::Bottom) return;
  collect_atoms(f.left(), seen, out);
  if (is_binary(f.op())) collect_atoms(f.right(), seen, out);
}

}  // namespace

std::vector<AtomId> atoms_of(const Formula& f) {
  std::set<AtomId> seen;
  std::vector<AtomId> out;
  collect_atoms(f, seen, out);
  return out;
}

bool contains_provable(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom:
      return false;
    case Op::Provable:
      return true;
    case Op::Not:
    case Op::Box:
      return contains_provable(f.child());
    default:
      return contains_provable(f.left()) || contains_provable(f.right());
  }
}

}  // namespace modalpd
