#include "modalpd/agents.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "modalpd/parse.hpp"

namespace modalpd {

namespace {

constexpr std::string_view kBuiltinSource = R"(# Builtin modal agents.
agent CooperateBot(Opp) := true
agent DefectBot(Opp) := false
agent FairBot(Opp) := [] Opp(Self)
agent PrudentBot(Opp) := [] Opp(Self) & provable<1>(~Opp(DefectBot))
agent TrollBot(Opp) := [] Opp(DefectBot)
agent JustBot(Opp) := [] Opp(FairBot)
agent WaitFairBot<K>(Opp) := ~box^(K+1) false & [](~box^K false -> Opp(Self))
agent ImprudentBot(Opp) := [] Opp(Self) & provable<0>(~Opp(DefectBot))
)";

std::string with_line(int line, const std::string& message) {
  if (line <= 0) return message;
  return "line " + std::to_string(line) + ": " + message;
}

}  // namespace

ValidationError::ValidationError(Kind kind, std::string message, std::vector<std::string> details,
                                 int line)
    : std::runtime_error([&] {
        std::string text = with_line(line, message);
        for (const auto& d : details) text += "\n  " + d;
        return text;
      }()),
      kind_(kind),
      message_(std::move(message)),
      details_(std::move(details)),
      line_(line) {}

std::string_view builtin_source() { return kBuiltinSource; }

Formula desugar_provable(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom:
      return f;
    case Op::Not:
      return Formula::negate(desugar_provable(f.child()));
    case Op::Box:
      return Formula::box(desugar_provable(f.child()));
    case Op::Provable: {
      Formula body = desugar_provable(f.child());
      if (f.level() == 0) return Formula::box(body);
      Formula consistent = Formula::negate(Formula::box(Formula::bottom(), f.level()));
      return Formula::box(Formula::implies(consistent, body));
    }
    default:
      return Formula::binary(f.op(), desugar_provable(f.left()), desugar_provable(f.right()));
  }
}

namespace {

bool is_placeholder(const std::string& name) { return name == "Self" || name == "Opp"; }

// Rewrites declared names to the canonical "Opp"/"Self" placeholders.
Formula normalize_atoms(const Formula& f, const std::string& opponent, const std::string& own) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
      return f;
    case Op::Atom: {
      const auto* raw = std::get_if<RawAtom>(&f.atom_id());
      if (raw == nullptr) return f;
      auto map = [&](const std::string& n) -> std::string {
        if (n == opponent) return "Opp";
        if (n == own) return "Self";
        return n;
      };
      return Formula::raw(map(raw->caller), map(raw->callee));
    }
    case Op::Not:
      return Formula::negate(normalize_atoms(f.child(), opponent, own));
    case Op::Box:
      return Formula::box(normalize_atoms(f.child(), opponent, own));
    case Op::Provable:
      return Formula::provable(f.level(), normalize_atoms(f.child(), opponent, own));
    default:
      return Formula::binary(f.op(), normalize_atoms(f.left(), opponent, own),
                             normalize_atoms(f.right(), opponent, own));
  }
}

// Returns the referenced concrete agents; throws BadAtomShape.
std::vector<std::string> referenced_agents(const Formula& f, int line) {
  std::set<std::string> refs;
  for (const AtomId& id : atoms_of(f)) {
    const auto* raw = std::get_if<RawAtom>(&id);
    if (raw == nullptr) {
      throw ValidationError(ValidationError::Kind::BadAtomShape,
                            "agent template contains a grounded matchup " + to_string(id), {}, line);
    }
    const bool caller_opp = raw->caller == "Opp";
    const bool callee_opp = raw->callee == "Opp";
    if (caller_opp && raw->callee == "Self") continue;
    if (raw->caller == "Self" && callee_opp) continue;
    if (caller_opp && !is_placeholder(raw->callee)) {
      refs.insert(raw->callee);
      continue;
    }
    if (callee_opp && !is_placeholder(raw->caller)) {
      refs.insert(raw->caller);
      continue;
    }
    std::string why;
    if (!caller_opp && !callee_opp) {
      why = "does not involve the opponent (a constant matchup is not a function of the opponent)";
    } else {
      why = "is not one of Opp(Self), Self(Opp), Opp(A), A(Opp)";
    }
    throw ValidationError(ValidationError::Kind::BadAtomShape,
                          "bad atom shape: " + to_string(id) + " " + why, {}, line);
  }
  return {refs.begin(), refs.end()};
}

std::shared_ptr<const AgentDef> lookup_instance(const AgentTable& table, std::string_view name) {
  auto split = split_instance_name(name);
  if (!split || !table.is_family(split->first)) return nullptr;
  return std::make_shared<const AgentDef>(instantiate_family(table, split->first, split->second));
}

}  // namespace

// ---------------------------------------------------------------------------
// AgentTable

std::shared_ptr<const AgentDef> AgentTable::find(std::string_view name) const {
  if (auto it = agents_.find(name); it != agents_.end()) return it->second;
  if (!split_instance_name(name)) return nullptr;
  {
    std::lock_guard lock(instances_->mutex);
    if (auto it = instances_->defs.find(name); it != instances_->defs.end()) return it->second;
  }
  auto def = lookup_instance(*this, name);
  if (def) {
    std::lock_guard lock(instances_->mutex);
    instances_->defs.emplace(std::string(name), def);
  }
  return def;
}

std::shared_ptr<const AgentDef> AgentTable::get(std::string_view name) const {
  auto def = find(name);
  if (!def) {
    throw ValidationError(ValidationError::Kind::UnknownAgent,
                          "unknown agent '" + std::string(name) + "'");
  }
  return def;
}

const AgentDef& AgentTable::at(std::string_view name) const {
  if (auto it = agents_.find(name); it != agents_.end()) return *it->second;
  throw ValidationError(ValidationError::Kind::UnknownAgent,
                        "unknown agent '" + std::string(name) + "'");
}

bool AgentTable::contains(std::string_view name) const { return agents_.count(name) > 0; }

bool AgentTable::is_family(std::string_view name) const { return families_.count(name) > 0; }

int AgentTable::rank(std::string_view name) const {
  if (auto it = families_.find(name); it != families_.end()) return it->second.rank;
  return get(name)->rank;
}

std::string AgentTable::canonical_name(std::string_view name) const {
  if (contains(name) || is_family(name)) return std::string(name);
  if (auto split = split_instance_name(name); split && is_family(split->first)) {
    return std::string(name);
  }
  static const std::map<std::string, std::string, std::less<>> kAliases = {
      {"CB", "CooperateBot"}, {"DB", "DefectBot"}, {"FB", "FairBot"},
      {"PB", "PrudentBot"},   {"TB", "TrollBot"},  {"JB", "JustBot"},
  };
  if (auto it = kAliases.find(name); it != kAliases.end() && contains(it->second)) {
    return it->second;
  }
  // WFB<K>, WFB_K
  for (std::string_view prefix : {"WFB<", "WFB_"}) {
    if (name.starts_with(prefix) && is_family("WaitFairBot")) {
      std::string_view digits = name.substr(prefix.size());
      if (prefix.back() == '<') {
        if (!digits.ends_with('>')) break;
        digits.remove_suffix(1);
      }
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(),
                                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return "WaitFairBot<" + std::string(digits) + ">";
      }
    }
  }
  return std::string(name);
}

std::vector<std::string> AgentTable::agent_names() const {
  std::vector<std::string> names;
  for (const auto& [name, def] : agents_) names.push_back(name);
  return names;
}

void AgentTable::insert(std::shared_ptr<const AgentDef> def) {
  std::string name = def->name;
  agents_[name] = std::move(def);
}

// ---------------------------------------------------------------------------
// Validation

AgentDef validate_agent(const AgentDef& def, const AgentSource& table) {
  using Kind = ValidationError::Kind;
  if (contains_provable(def.formula)) {
    return validate_agent(AgentDef{def.name, def.parameter, def.written, desugar_provable(def.formula),
                                   def.references, def.rank},
                          table);
  }
  if (!is_fully_modalized(def.formula)) {
    throw ValidationError(Kind::NotFullyModalized,
                          "agent " + def.name + " is not fully modalized: every atom must lie under a box",
                          unguarded_atom_paths(def.formula));
  }
  AgentDef out = def;
  out.references = referenced_agents(def.formula, 0);

  // Cycle search through the table's reference graph.
  std::set<std::string> visited;
  std::vector<std::string> path{def.name};
  std::function<bool(const std::string&)> reaches_self = [&](const std::string& name) -> bool {
    path.push_back(name);
    if (name == def.name) return true;
    if (visited.insert(name).second) {
      auto sub = table.find(name);
      if (sub) {
        for (const auto& next : sub->references) {
          if (reaches_self(next)) return true;
        }
      }
    }
    path.pop_back();
    return false;
  };

  int rank = 0;
  for (const auto& ref : out.references) {
    if (reaches_self(ref)) {
      throw ValidationError(Kind::CyclicReference, "cyclic reference involving " + def.name, path);
    }
    auto sub = table.find(ref);
    if (!sub) {
      throw ValidationError(Kind::UndeclaredAgent,
                            "agent " + def.name + " references undeclared agent '" + ref + "'");
    }
    rank = std::max(rank, sub->rank + 1);
  }
  out.rank = rank;
  return out;
}

AgentDef instantiate_family(const AgentTable& table, std::string_view name, int parameter) {
  using Kind = ValidationError::Kind;
  auto it = table.families().find(name);
  if (it == table.families().end()) {
    throw ValidationError(Kind::NotAFamily, "'" + std::string(name) + "' is not a parameterized agent family");
  }
  if (parameter < 0 || parameter > table.family_cap()) {
    throw ValidationError(Kind::ParameterCap,
                          "parameter " + std::to_string(parameter) + " for " + std::string(name) +
                              " exceeds the cap of " + std::to_string(table.family_cap()));
  }
  const AgentFamily& family = it->second;
  ParseOptions options;
  options.allow_provable = true;
  options.parameter = ParameterBinding{family.parameter, parameter};
  options.line = family.line;
  options.column = family.column;
  AgentDef def;
  def.name = instance_name(family.name, parameter);
  def.parameter = parameter;
  def.written = normalize_atoms(parse_formula(family.body, options), family.opponent, def.name);
  def.formula = desugar_provable(def.written);
  def.references = referenced_agents(def.formula, family.line);
  return validate_agent(def, table);
}

// ---------------------------------------------------------------------------
// Agent files

namespace {

struct RawDecl {
  enum class Kind { Agent, Family, Clique } kind = Kind::Agent;
  std::string name;
  std::string parameter;
  std::string opponent;
  std::string body;
  int line = 0;
  int column = 0;
};

class LineCursor {
 public:
  LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_).starts_with(token)) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view token) {
    if (!accept(token)) error("expected '" + std::string(token) + "'");
  }
  std::string identifier(const char* what) {
    skip_space();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
    }
    if (start == pos_) error(std::string("expected ") + what);
    return std::string(text_.substr(start, pos_ - start));
  }
  std::string quoted() {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '"') error("expected a quoted source string");
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) error("unterminated string");
    ++pos_;
    return out;
  }
  std::string_view rest() const { return text_.substr(pos_); }
  int column() const { return static_cast<int>(pos_) + 1; }

  [[noreturn]] void error(const std::string& what) const {
    throw ValidationError(ValidationError::Kind::Syntax,
                          "syntax error at column " + std::to_string(column()) + ": " + what, {}, line_);
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

// Drops a trailing `#` comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::vector<RawDecl> scan_declarations(std::string_view text) {
  std::vector<RawDecl> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    line = strip_comment(line);
    LineCursor cur(line, line_no);
    if (cur.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    RawDecl decl;
    decl.line = line_no;
    if (cur.accept("clique")) {
      decl.kind = RawDecl::Kind::Clique;
      decl.name = cur.identifier("agent name");
      cur.expect(":=");
      decl.body = cur.quoted();
      if (!cur.at_end()) cur.error("unexpected text after source string");
    } else if (cur.accept("agent")) {
      decl.name = cur.identifier("agent name");
      if (cur.accept("<")) {
        decl.kind = RawDecl::Kind::Family;
        decl.parameter = cur.identifier("parameter name");
        cur.expect(">");
      }
      cur.expect("(");
      decl.opponent = cur.identifier("opponent name");
      cur.expect(")");
      cur.expect(":=");
      cur.skip_space();
      decl.column = cur.column();
      decl.body = std::string(cur.rest());
      if (decl.opponent == "Self" || decl.opponent == decl.name) {
        cur.error("opponent name must differ from 'Self' and the agent's own name");
      }
      if (decl.body.find_first_not_of(" \t") == std::string::npos) cur.error("missing formula");
    } else {
      cur.error("expected 'agent' or 'clique'");
    }
    out.push_back(std::move(decl));
    if (end == text.size()) break;
  }
  return out;
}

Formula parse_body(const RawDecl& decl, std::optional<ParameterBinding> binding) {
  ParseOptions options;
  options.allow_provable = true;
  options.parameter = std::move(binding);
  options.line = decl.line;
  options.column = decl.column;
  try {
    return parse_formula(decl.body, options);
  } catch (const ParseError& e) {
    std::string message = "syntax error at column " + std::to_string(e.column()) + ": " + e.detail();
    if (!e.expected().empty()) {
      message += " (expected";
      for (std::size_t i = 0; i < e.expected().size(); ++i) message += (i ? ", " : " ") + e.expected()[i];
      message += ")";
    }
    throw ValidationError(ValidationError::Kind::Syntax, message, {}, e.line());
  }
}

}  // namespace

class TableBuilder {
 public:
  explicit TableBuilder(const AgentFileOptions& options) { table_.family_cap_ = options.family_cap; }

  void add(const std::vector<RawDecl>& decls, bool from_file) {
    std::set<std::string> seen;
    for (const auto& decl : decls) {
      if (from_file && !seen.insert(decl.name).second) {
        throw ValidationError(ValidationError::Kind::DuplicateName,
                              "duplicate agent name '" + decl.name + "'", {}, decl.line);
      }
      Entry entry = prepare(decl);
      if (auto it = entries_.find(decl.name); it != entries_.end()) {
        if (!same_definition(it->second, entry)) {
          warnings_.push_back("line " + std::to_string(decl.line) + ": " + decl.name +
                              " shadows the builtin agent of the same name");
        }
        entries_.erase(it);
      }
      entries_.emplace(decl.name, std::move(entry));
      if (from_file) {
        table_.declared_.push_back(decl.kind == RawDecl::Kind::Family
                                       ? decl.name + "<" + decl.parameter + ">"
                                       : decl.name);
      }
    }
  }

  AgentTable finish() {
    check_references();
    for (const auto& [name, entry] : entries_) visit(name, {});
    table_.warnings_ = warnings_;
    return std::move(table_);
  }

 private:
  struct Entry {
    RawDecl decl;
    AgentDef def;  // Agent and Family (Family: instance at parameter 0)
  };

  Entry prepare(const RawDecl& decl) {
    Entry entry{decl, {}};
    if (decl.kind == RawDecl::Kind::Clique) return entry;
    const bool family = decl.kind == RawDecl::Kind::Family;
    std::optional<ParameterBinding> binding;
    if (family) binding = ParameterBinding{decl.parameter, 0};
    AgentDef& def = entry.def;
    def.name = family ? instance_name(decl.name, 0) : decl.name;
    if (family) def.parameter = 0;
    def.written = normalize_atoms(parse_body(decl, binding), decl.opponent, def.name);
    def.formula = desugar_provable(def.written);
    if (!is_fully_modalized(def.formula)) {
      throw ValidationError(ValidationError::Kind::NotFullyModalized,
                            "agent " + decl.name + " is not fully modalized: every atom must lie under a box",
                            unguarded_atom_paths(def.formula), decl.line);
    }
    def.references = referenced_agents(def.formula, decl.line);
    return entry;
  }

  static bool same_definition(const Entry& a, const Entry& b) {
    if (a.decl.kind != b.decl.kind) return false;
    if (a.decl.kind == RawDecl::Kind::Clique) return a.decl.body == b.decl.body;
    if (a.decl.kind == RawDecl::Kind::Family) {
      return a.decl.parameter == b.decl.parameter && a.decl.opponent == b.decl.opponent &&
             a.decl.body == b.decl.body;
    }
    return a.def.written == b.def.written;
  }

  // Name of the graph node a reference points at (family instances -> family).
  std::string node_of(const std::string& ref, const Entry& from) const {
    if (entries_.count(ref)) {
      if (entries_.at(ref).decl.kind == RawDecl::Kind::Clique) {
        throw ValidationError(ValidationError::Kind::BadAtomShape,
                              "agent " + from.decl.name + " references '" + ref +
                                  "', which is a syntactic (non-modal) agent",
                              {}, from.decl.line);
      }
      if (entries_.at(ref).decl.kind == RawDecl::Kind::Agent) return ref;
    }
    if (auto split = split_instance_name(ref); split && entries_.count(split->first) &&
                                               entries_.at(split->first).decl.kind == RawDecl::Kind::Family) {
      if (split->second > table_.family_cap_) {
        throw ValidationError(ValidationError::Kind::ParameterCap,
                              "reference " + ref + " exceeds the family parameter cap of " +
                                  std::to_string(table_.family_cap_),
                              {}, from.decl.line);
      }
      return split->first;
    }
    throw ValidationError(ValidationError::Kind::UndeclaredAgent,
                          "agent " + from.decl.name + " references undeclared agent '" + ref + "'", {},
                          from.decl.line);
  }

  void check_references() {
    for (const auto& [name, entry] : entries_) {
      for (const auto& ref : entry.def.references) node_of(ref, entry);
    }
  }

  // Depth-first validation in dependency order; detects cycles.
  void visit(const std::string& name, std::vector<std::string> stack) {
    if (done_.count(name)) return;
    if (std::find(stack.begin(), stack.end(), name) != stack.end()) {
      auto first = std::find(stack.begin(), stack.end(), name);
      std::vector<std::string> cycle(first, stack.end());
      cycle.push_back(name);
      std::string text;
      for (std::size_t i = 0; i < cycle.size(); ++i) text += (i ? " -> " : "") + cycle[i];
      throw ValidationError(ValidationError::Kind::CyclicReference, "cyclic reference: " + text, cycle,
                            entries_.at(name).decl.line);
    }
    const Entry& entry = entries_.at(name);
    stack.push_back(name);
    for (const auto& ref : entry.def.references) visit(node_of(ref, entry), stack);

    switch (entry.decl.kind) {
      case RawDecl::Kind::Clique:
        table_.syntactic_.push_back({entry.decl.name, entry.decl.body, entry.decl.line});
        break;
      case RawDecl::Kind::Agent: {
        AgentDef def = validate(entry);
        table_.agents_[name] = std::make_shared<const AgentDef>(std::move(def));
        break;
      }
      case RawDecl::Kind::Family: {
        AgentDef def = validate(entry);
        AgentFamily family{entry.decl.name, entry.decl.parameter, entry.decl.opponent, entry.decl.body,
                           entry.decl.line, entry.decl.column, def.references, def.rank};
        table_.families_[name] = std::move(family);
        break;
      }
    }
    done_.insert(name);
  }

  AgentDef validate(const Entry& entry) {
    try {
      return validate_agent(entry.def, table_);
    } catch (const ValidationError& e) {
      if (e.line() != 0) throw;
      throw ValidationError(e.kind(), e.message(), e.details(), entry.decl.line);
    }
  }

  AgentTable table_;
  std::map<std::string, Entry> entries_;
  std::set<std::string> done_;
  std::vector<std::string> warnings_;
};

AgentTable parse_agent_file(std::string_view text, const AgentFileOptions& options) {
  TableBuilder builder(options);
  if (options.include_builtins) builder.add(scan_declarations(builtin_source()), false);
  builder.add(scan_declarations(text), true);
  return builder.finish();
}

const AgentTable& builtin_library() {
  static const AgentTable table = parse_agent_file(builtin_source(), {.include_builtins = false});
  return table;
}

}  // namespace modalpd
