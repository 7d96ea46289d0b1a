#include "modalpd/search.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

namespace modalpd {

namespace {

// Sees the candidate under kCandidateName and everything else through the table.
class CandidateSource : public AgentSource {
 public:
  CandidateSource(const AgentTable& table, const AgentDef& candidate)
      : table_(table), candidate_(std::shared_ptr<const AgentDef>(std::shared_ptr<void>(), &candidate)) {}

  std::shared_ptr<const AgentDef> find(std::string_view name) const override {
    if (name == kCandidateName) return candidate_;
    return table_.find(name);
  }

 private:
  const AgentTable& table_;
  std::shared_ptr<const AgentDef> candidate_;
};

void check_bounds(const SearchBounds& bounds, const AgentTable& table) {
  if (bounds.max_nodes < 1 || bounds.max_nodes > bounds.node_cap) {
    throw std::invalid_argument("max_nodes must be between 1 and " + std::to_string(bounds.node_cap));
  }
  if (bounds.max_rank != 0 && bounds.max_rank != 1) {
    throw std::invalid_argument("max_rank must be 0 or 1");
  }
  if (bounds.max_rank == 1) {
    for (const auto& s : bounds.sub_agents) {
      const std::string name = table.canonical_name(s);
      if (table.get(name)->rank != 0) {
        throw std::invalid_argument("sub-agent '" + name + "' must have rank 0");
      }
    }
  }
}

std::vector<Formula> allowed_atoms(const SearchBounds& bounds, const AgentTable& table) {
  std::vector<Formula> atoms{Formula::raw("Opp", "Self"), Formula::raw("Self", "Opp")};
  if (bounds.max_rank == 1) {
    std::set<std::string> subs;
    for (const auto& s : bounds.sub_agents) subs.insert(table.canonical_name(s));
    for (const auto& s : subs) {
      atoms.push_back(Formula::raw("Opp", s));
      atoms.push_back(Formula::raw(s, "Opp"));
    }
  }
  return atoms;
}

constexpr Op kBinaryOps[] = {Op::And, Op::Or, Op::Implies, Op::Iff};

// by_size[s]: formulas with exactly s nodes, built from smaller lists.
template <typename LeafFn, typename ChildFn>
void grow(std::vector<std::vector<Formula>>& by_size, int size, LeafFn leaves, ChildFn box_children) {
  auto& out = by_size[size];
  if (size == 1) {
    leaves(out);
    return;
  }
  for (const auto& f : by_size[size - 1]) out.push_back(Formula::negate(f));
  for (const auto& f : box_children(size - 1)) out.push_back(Formula::box(f));
  for (int left = 1; left + 1 < size; ++left) {
    const int right = size - 1 - left;
    for (Op op : kBinaryOps)
      for (const auto& a : by_size[left])
        for (const auto& b : by_size[right]) out.push_back(Formula::binary(op, a, b));
  }
}

}  // namespace

std::vector<Formula> enumerate_templates(const SearchBounds& bounds, const AgentTable& table) {
  check_bounds(bounds, table);
  const std::vector<Formula> atoms = allowed_atoms(bounds, table);
  const int n = bounds.max_nodes;

  // any: atoms anywhere; guarded: atoms only under a box.
  std::vector<std::vector<Formula>> any(n + 1);
  std::vector<std::vector<Formula>> guarded(n + 1);
  for (int size = 1; size <= n; ++size) {
    if (size < n) {
      grow(any, size,
           [&](std::vector<Formula>& out) {
             out = {Formula::top(), Formula::bottom()};
             out.insert(out.end(), atoms.begin(), atoms.end());
           },
           [&](int s) -> const std::vector<Formula>& { return any[s]; });
    }
    grow(guarded, size,
         [](std::vector<Formula>& out) { out = {Formula::top(), Formula::bottom()}; },
         [&](int s) -> const std::vector<Formula>& { return any[s]; });
  }

  std::vector<Formula> result;
  for (int size = 1; size <= n; ++size) {
    std::vector<std::pair<std::string, Formula>> keyed;
    keyed.reserve(guarded[size].size());
    for (auto& f : guarded[size]) keyed.emplace_back(render_formula(f), std::move(f));
    guarded[size].clear();
    guarded[size].shrink_to_fit();
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [key, f] : keyed) result.push_back(std::move(f));
  }
  return result;
}

AgentDef make_candidate(const Formula& templ, const AgentTable& table) {
  AgentDef def;
  def.name = std::string(kCandidateName);
  def.written = templ;
  def.formula = templ;
  std::set<std::string> refs;
  for (const AtomId& id : atoms_of(templ)) {
    const auto& raw = std::get<RawAtom>(id);
    for (const std::string* n : {&raw.caller, &raw.callee}) {
      if (*n != "Self" && *n != "Opp") refs.insert(*n);
    }
  }
  def.references.assign(refs.begin(), refs.end());
  for (const auto& r : def.references) def.rank = std::max(def.rank, table.get(r)->rank + 1);
  return def;
}

std::array<Verdict, 2> duel(const AgentDef& candidate, std::string_view opponent, const AgentTable& table) {
  const CandidateSource source(table, candidate);
  const std::string opp(opponent);
  const EquationSystem system = build_equation_system(kCandidateName, opp, source);
  const SolutionTrace trace = solve(system);
  return {verdict(trace, MatchVar{std::string(kCandidateName), opp}),
          verdict(trace, MatchVar{opp, std::string(kCandidateName)})};
}

std::vector<int> fingerprint(const AgentDef& candidate, const AgentTable& table) {
  static const char* const kProbes[] = {"CooperateBot", "DefectBot", "FairBot", "PrudentBot",
                                        "TrollBot", "JustBot", "WaitFairBot<1>"};
  std::vector<int> out;
  for (const char* probe : kProbes) {
    for (const Verdict& v : duel(candidate, probe, table)) {
      out.push_back(v.action == Action::Cooperate ? v.proof_level + 1 : -(v.proof_level + 1));
    }
  }
  return out;
}

std::size_t for_each_candidate(const SearchBounds& bounds, const AgentTable& table,
                               const std::function<bool(const AgentDef&)>& visit) {
  std::set<std::vector<int>> seen;
  std::size_t visited = 0;
  for (const Formula& templ : enumerate_templates(bounds, table)) {
    AgentDef def = make_candidate(templ, table);
    if (bounds.dedup && !seen.insert(fingerprint(def, table)).second) continue;
    ++visited;
    if (!visit(def)) break;
  }
  return visited;
}

std::vector<AgentDef> enumerate_agents(const SearchBounds& bounds, const AgentTable& table) {
  std::vector<AgentDef> out;
  for_each_candidate(bounds, table, [&](const AgentDef& def) {
    out.push_back(def);
    return true;
  });
  return out;
}

SearchResult find_exploiter(std::string_view x_in, const AgentTable& table, const SearchBounds& bounds) {
  const std::string x = table.canonical_name(x_in);
  table.get(x);
  SearchResult result;
  result.candidates = for_each_candidate(bounds, table, [&](const AgentDef& z) {
    const auto [z_vs_x, x_vs_z] = duel(z, x, table);
    if (x_vs_z.action == Action::Cooperate && z_vs_x.action == Action::Defect) {
      result.witness = z;
      result.verdicts = {x_vs_z, z_vs_x};
      return false;
    }
    return true;
  });
  return result;
}

SearchResult find_distinguisher(std::string_view x_in, std::string_view y_in, const AgentTable& table,
                                const SearchBounds& bounds) {
  const std::string x = table.canonical_name(x_in);
  const std::string y = table.canonical_name(y_in);
  table.get(x);
  table.get(y);
  SearchResult result;
  result.candidates = for_each_candidate(bounds, table, [&](const AgentDef& z) {
    const Verdict against_x = duel(z, x, table)[0];
    const Verdict against_y = duel(z, y, table)[0];
    if (against_x.action != against_y.action) {
      result.witness = z;
      result.verdicts = {against_x, against_y};
      return false;
    }
    return true;
  });
  return result;
}

Rank0Report check_rank0_theorem(const AgentTable& table, const SearchBounds& bounds) {
  SearchBounds rank0 = bounds;
  rank0.max_rank = 0;
  rank0.sub_agents.clear();
  Rank0Report report;
  for_each_candidate(rank0, table, [&](const AgentDef& x) {
    ++report.checked;
    const std::string text = render_formula(x.formula);
    report.checked_agents.push_back(text);
    const Verdict vs_fb = duel(x, "FairBot", table)[0];
    if (vs_fb.action == Action::Cooperate && vs_fb.proof_level == 0) {
      ++report.premise_holds;
      const Verdict vs_cb = duel(x, "CooperateBot", table)[0];
      if (vs_cb.action != Action::Cooperate || vs_cb.proof_level != 0) report.violations.push_back(text);
    }
    return true;
  });
  return report;
}

}  // namespace modalpd
