#include "modalpd/solver.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

namespace modalpd {

char action_char(Action a) { return a == Action::Cooperate ? 'C' : 'D'; }

std::string proof_system_name(int level) {
  return level == 0 ? std::string("PA") : "PA+" + std::to_string(level);
}

// ---------------------------------------------------------------------------
// Grounding

EquationSystem build_equation_system(std::string_view x, std::string_view y, const AgentSource& table) {
  std::map<std::string, std::shared_ptr<const AgentDef>, std::less<>> defs;
  auto resolve = [&](const std::string& name) -> const AgentDef& {
    auto it = defs.find(name);
    if (it == defs.end()) {
      auto def = table.find(name);
      if (!def) {
        throw ValidationError(ValidationError::Kind::UnknownAgent, "unknown agent '" + name + "'");
      }
      it = defs.emplace(name, std::move(def)).first;
    }
    return *it->second;
  };

  EquationSystem system;
  system.root = MatchVar{std::string(x), std::string(y)};
  std::deque<MatchVar> pending{system.root, MatchVar{std::string(y), std::string(x)}};
  while (!pending.empty()) {
    MatchVar var = std::move(pending.front());
    pending.pop_front();
    if (system.equations.count(var)) continue;
    const AgentDef& def = resolve(var.row);
    resolve(var.col);
    const std::string& self = var.row;
    const std::string& opp = var.col;

    Bindings bindings;
    for (const AtomId& id : atoms_of(def.formula)) {
      const auto& raw = std::get<RawAtom>(id);
      auto ground = [&](const std::string& n) -> const std::string& {
        if (n == "Self") return self;
        if (n == "Opp") return opp;
        return n;
      };
      bindings.emplace(id, Formula::var(ground(raw.caller), ground(raw.callee)));
    }
    for (const auto& sub : def.references) {
      pending.push_back(MatchVar{opp, sub});
      pending.push_back(MatchVar{sub, opp});
    }
    system.equations.emplace(var, substitute(def.formula, bindings));
  }
  for (const auto& [var, rhs] : system.equations) system.variables.push_back(var);
  return system;
}

// ---------------------------------------------------------------------------
// Chain evaluation

namespace {

struct Gate {
  Op op;
  int a = -1;
  int b = -1;
};

// Hash-consed gate list; children always precede parents.
class Circuit {
 public:
  explicit Circuit(const std::map<MatchVar, int>* vars) : vars_(vars) {}

  int add(const Formula& f) {
    int a = -1;
    int b = -1;
    switch (f.op()) {
      case Op::Top:
      case Op::Bottom:
        break;
      case Op::Atom: {
        const auto* var = std::get_if<MatchVar>(&f.atom_id());
        if (var == nullptr || vars_ == nullptr) {
          throw std::invalid_argument("ungrounded atom " + to_string(f.atom_id()));
        }
        auto it = vars_->find(*var);
        if (it == vars_->end()) {
          throw std::invalid_argument("equation refers to unknown variable " + to_string(*var));
        }
        a = it->second;
        break;
      }
      case Op::Provable:
        throw std::invalid_argument("provable<n> sugar must be removed before solving");
      case Op::Not:
      case Op::Box:
        a = add(f.child());
        break;
      default:
        a = add(f.left());
        b = add(f.right());
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(f.op()) << 58) ^
                              (static_cast<std::uint64_t>(a + 1) << 29) ^ static_cast<std::uint64_t>(b + 1);
    auto [it, inserted] = index_.emplace(key, static_cast<int>(gates.size()));
    if (inserted) {
      gates.push_back({f.op(), a, b});
      if (f.op() == Op::Box) {
        box_slot.resize(gates.size(), -1);
        box_slot.back() = static_cast<int>(boxes.size());
        boxes.push_back(it->second);
      }
    }
    return it->second;
  }

  // Evaluates every gate at one world. Box gates read `flags`.
  void evaluate(const std::vector<char>& atoms, const std::vector<char>& flags,
                std::vector<char>& out) const {
    out.resize(gates.size());
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const Gate& g = gates[i];
      char v = 0;
      switch (g.op) {
        case Op::Top: v = 1; break;
        case Op::Bottom: v = 0; break;
        case Op::Atom: v = atoms[g.a]; break;
        case Op::Not: v = !out[g.a]; break;
        case Op::And: v = out[g.a] && out[g.b]; break;
        case Op::Or: v = out[g.a] || out[g.b]; break;
        case Op::Implies: v = !out[g.a] || out[g.b]; break;
        case Op::Iff: v = out[g.a] == out[g.b]; break;
        case Op::Box: v = flags[box_slot[i]]; break;
        case Op::Provable: break;
      }
      out[i] = v;
    }
  }

  // Advances the "true at every earlier world" flag of each box past world
  // with gate values `current`. Returns whether any flag changed.
  bool advance(const std::vector<char>& current, std::vector<char>& flags) const {
    bool changed = false;
    for (std::size_t k = 0; k < boxes.size(); ++k) {
      const char next = flags[k] && current[gates[boxes[k]].a];
      changed |= next != flags[k];
      flags[k] = next;
    }
    return changed;
  }

  std::vector<Gate> gates;
  std::vector<int> boxes;
  std::vector<int> box_slot;

 private:
  const std::map<MatchVar, int>* vars_;
  std::unordered_map<std::uint64_t, int> index_;
};

int settle_index(const std::vector<bool>& seq) {
  int d = static_cast<int>(seq.size()) - 1;
  while (d > 0 && seq[d - 1] == seq.back()) --d;
  return std::max(d, 0);
}

}  // namespace

std::optional<std::size_t> SolutionTrace::index_of(const MatchVar& var) const {
  auto it = std::lower_bound(variables.begin(), variables.end(), var);
  if (it == variables.end() || *it != var) return std::nullopt;
  return static_cast<std::size_t>(it - variables.begin());
}

bool SolutionTrace::value(std::size_t var, int world) const {
  if (world < static_cast<int>(values[var].size())) return values[var][world];
  return stable[var];
}

bool SolutionTrace::value(const MatchVar& var, int world) const {
  auto idx = index_of(var);
  if (!idx) throw std::out_of_range("unknown matchup " + to_string(var));
  return value(*idx, world);
}

SolutionTrace solve(const EquationSystem& system) {
  std::map<MatchVar, int> var_index;
  for (std::size_t i = 0; i < system.variables.size(); ++i) {
    var_index.emplace(system.variables[i], static_cast<int>(i));
  }
  Circuit circuit(&var_index);
  std::vector<int> roots;
  roots.reserve(system.variables.size());
  for (const auto& var : system.variables) {
    const Formula& rhs = system.equations.at(var);
    if (!is_fully_modalized(rhs)) {
      throw std::invalid_argument("equation for " + to_string(var) + " is not fully modalized");
    }
    roots.push_back(circuit.add(rhs));
  }

  const std::size_t n_vars = system.variables.size();
  const std::size_t n_boxes = circuit.boxes.size();
  SolutionTrace trace;
  trace.variables = system.variables;
  trace.values.assign(n_vars, {});
  trace.box_count = static_cast<int>(n_boxes);
  trace.box_history.assign(n_boxes, {});

  std::vector<char> flags(n_boxes, 1);
  std::vector<char> atoms(n_vars, 0);
  std::vector<char> gates;
  const int cap = static_cast<int>(n_boxes) + 2;
  bool settled = false;
  for (int world = 0; world < cap; ++world) {
    // Right-hand sides read atoms only under boxes, so one pass with
    // placeholder atoms already yields this world's variable values.
    std::fill(atoms.begin(), atoms.end(), 0);
    circuit.evaluate(atoms, flags, gates);
    for (std::size_t v = 0; v < n_vars; ++v) atoms[v] = gates[roots[v]];
    circuit.evaluate(atoms, flags, gates);

    for (std::size_t v = 0; v < n_vars; ++v) trace.values[v].push_back(atoms[v] != 0);
    for (std::size_t k = 0; k < n_boxes; ++k) trace.box_history[k].push_back(flags[k] != 0);
    trace.worlds = world + 1;
    if (!circuit.advance(gates, flags)) {
      settled = true;
      break;
    }
  }
  if (!settled) {
    throw InternalNonStabilization("chain evaluation did not settle within " + std::to_string(cap) +
                                   " worlds");
  }

  trace.stable.resize(n_vars);
  trace.settles.resize(n_vars);
  trace.stabilization = 0;
  for (std::size_t v = 0; v < n_vars; ++v) {
    trace.stable[v] = trace.values[v].back();
    trace.settles[v] = settle_index(trace.values[v]);
    trace.stabilization = std::max(trace.stabilization, trace.settles[v]);
  }
  return trace;
}

Verdict verdict(const SolutionTrace& trace, const MatchVar& pair) {
  auto idx = trace.index_of(pair);
  if (!idx) throw std::out_of_range("matchup " + to_string(pair) + " is not part of the solved system");
  return Verdict{trace.stable[*idx] ? Action::Cooperate : Action::Defect, trace.settles[*idx]};
}

Formula normal_form(const SolutionTrace& trace, const MatchVar& pair) {
  auto idx = trace.index_of(pair);
  if (!idx) throw std::out_of_range("matchup " + to_string(pair) + " is not part of the solved system");
  const int d = trace.settles[*idx];
  std::vector<Formula> terms;
  for (int n = 0; n < d; ++n) {
    if (!trace.value(*idx, n)) continue;
    // True exactly at world n.
    Formula upto = Formula::box(Formula::bottom(), n + 1);
    if (n == 0) {
      terms.push_back(upto);
    } else {
      terms.push_back(Formula::conj(upto, Formula::negate(Formula::box(Formula::bottom(), n))));
    }
  }
  if (trace.stable[*idx]) {
    terms.push_back(d == 0 ? Formula::top() : Formula::negate(Formula::box(Formula::bottom(), d)));
  }
  if (terms.empty()) return Formula::bottom();
  Formula out = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) out = Formula::disj(out, terms[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Independent checks

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<const void*, int>& p) const {
    return std::hash<const void*>()(p.first) * 31 + static_cast<std::size_t>(p.second);
  }
};

// Direct recursive reading of the chain semantics, memoized per node and world.
class DirectEvaluator {
 public:
  explicit DirectEvaluator(const SolutionTrace& trace) : trace_(trace) {}

  bool eval(const Formula& f, int world) {
    auto key = std::make_pair(f.identity(), world);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool v = false;
    switch (f.op()) {
      case Op::Top: v = true; break;
      case Op::Bottom: v = false; break;
      case Op::Atom: {
        const auto* var = std::get_if<MatchVar>(&f.atom_id());
        if (var == nullptr) throw std::invalid_argument("ungrounded atom");
        auto idx = trace_.index_of(*var);
        if (!idx) throw std::out_of_range("unknown variable");
        v = trace_.value(*idx, world);
        break;
      }
      case Op::Not: v = !eval(f.child(), world); break;
      case Op::And: v = eval(f.left(), world) && eval(f.right(), world); break;
      case Op::Or: v = eval(f.left(), world) || eval(f.right(), world); break;
      case Op::Implies: v = !eval(f.left(), world) || eval(f.right(), world); break;
      case Op::Iff: v = eval(f.left(), world) == eval(f.right(), world); break;
      case Op::Box:
        v = true;
        for (int m = 0; m < world && v; ++m) v = eval(f.child(), m);
        break;
      case Op::Provable:
        throw std::invalid_argument("provable<n> sugar must be removed before evaluation");
    }
    memo_.emplace(key, v);
    return v;
  }

 private:
  const SolutionTrace& trace_;
  std::unordered_map<std::pair<const void*, int>, bool, PairHash> memo_;
};

}  // namespace

bool verify_fixed_point(const EquationSystem& system, const SolutionTrace& trace) {
  if (trace.variables != system.variables) return false;
  for (std::size_t v = 0; v < trace.variables.size(); ++v) {
    if (trace.values[v].empty()) return false;
  }
  try {
    DirectEvaluator eval(trace);
    for (std::size_t v = 0; v < system.variables.size(); ++v) {
      const Formula& rhs = system.equations.at(system.variables[v]);
      for (int world = 0; world <= trace.worlds; ++world) {
        if (eval.eval(rhs, world) != trace.value(v, world)) return false;
      }
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

std::vector<bool> chain_trace(const Formula& letterless, int worlds) {
  Circuit circuit(nullptr);
  const int root = circuit.add(letterless);
  std::vector<char> flags(circuit.boxes.size(), 1);
  std::vector<char> gates;
  const std::vector<char> no_atoms;
  std::vector<bool> out;
  out.reserve(worlds);
  for (int world = 0; world < worlds; ++world) {
    circuit.evaluate(no_atoms, flags, gates);
    out.push_back(gates[root] != 0);
    circuit.advance(gates, flags);
  }
  return out;
}

}  // namespace modalpd
