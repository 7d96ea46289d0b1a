#ifndef MODALPD_AGENTS_HPP_
#define MODALPD_AGENTS_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "modalpd/formula.hpp"

namespace modalpd {

class ValidationError : public std::runtime_error {
 public:
  enum class Kind {
    Syntax,
    DuplicateName,
    UndeclaredAgent,
    NotFullyModalized,
    CyclicReference,
    BadAtomShape,
    NotAFamily,
    ParameterCap,
    UnknownAgent,
  };

  ValidationError(Kind kind, std::string message, std::vector<std::string> details = {},
                  int line = 0);

  Kind kind() const { return kind_; }
  /// Message without line prefix or details.
  const std::string& message() const { return message_; }
  /// Offending atom paths, cycle members, etc.
  const std::vector<std::string>& details() const { return details_; }
  /// 1-based source line, or 0 when not tied to a file.
  int line() const { return line_; }

 private:
  Kind kind_;
  std::string message_;
  std::vector<std::string> details_;
  int line_;
};

/// A modal agent: cooperates with Opp iff `formula` holds, where the formula
/// speaks about Opp(Self), Self(Opp), Opp(A) and A(Opp) for lower-rank agents A.
struct AgentDef {
  std::string name;
  /// Set for instances of a parameterized family such as WaitFairBot<K>.
  std::optional<int> parameter;
  /// As declared, possibly with provable<n>(...) sugar. Atoms use "Self"/"Opp".
  Formula written;
  /// Desugared template.
  Formula formula;
  /// Concrete agents the template mentions, sorted.
  std::vector<std::string> references;
  int rank = 0;
};

struct AgentFamily {
  std::string name;
  std::string parameter;
  std::string opponent;
  std::string body;
  int line = 0;
  int column = 0;
  std::vector<std::string> references;
  int rank = 0;
};

/// Non-modal agent declared with `clique NAME := "source"`.
struct SyntacticDecl {
  std::string name;
  std::string source;
  int line = 0;
};

class AgentSource {
 public:
  virtual ~AgentSource() = default;
  /// Resolves plain names and family instances ("Name<K>"); null if unknown.
  virtual std::shared_ptr<const AgentDef> find(std::string_view name) const = 0;
};

inline constexpr int kDefaultFamilyCap = 64;

class AgentTable : public AgentSource {
 public:
  std::shared_ptr<const AgentDef> find(std::string_view name) const override;
  /// Throws ValidationError(UnknownAgent).
  const AgentDef& at(std::string_view name) const;
  std::shared_ptr<const AgentDef> get(std::string_view name) const;

  bool contains(std::string_view name) const;
  bool is_family(std::string_view name) const;
  int rank(std::string_view name) const;

  /// Maps the short names used in the literature (CB, DB, FB, PB, TB, JB,
  /// WFB<K>) to builtin names unless the table defines them itself.
  std::string canonical_name(std::string_view name) const;

  /// Sorted names of all non-family agents.
  std::vector<std::string> agent_names() const;
  /// Names declared by the parsed file, in file order. Families appear as "Name<K>".
  const std::vector<std::string>& declared() const { return declared_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::map<std::string, AgentFamily, std::less<>>& families() const { return families_; }
  const std::vector<SyntacticDecl>& syntactic() const { return syntactic_; }
  int family_cap() const { return family_cap_; }

  /// Inserts an already validated agent.
  void insert(std::shared_ptr<const AgentDef> def);

 private:
  friend class TableBuilder;

  std::map<std::string, std::shared_ptr<const AgentDef>, std::less<>> agents_;
  std::map<std::string, AgentFamily, std::less<>> families_;
  std::vector<SyntacticDecl> syntactic_;
  std::vector<std::string> declared_;
  std::vector<std::string> warnings_;
  int family_cap_ = kDefaultFamilyCap;

  struct InstanceCache {
    std::mutex mutex;
    std::map<std::string, std::shared_ptr<const AgentDef>, std::less<>> defs;
  };
  std::shared_ptr<InstanceCache> instances_ = std::make_shared<InstanceCache>();
};

struct AgentFileOptions {
  bool include_builtins = true;
  int family_cap = kDefaultFamilyCap;
};

/// Line-oriented agent file:
///   agent NAME ("<" PARAM ">")? "(" OPPNAME ")" ":=" formula
///   clique NAME ":=" "\"" source "\""
/// `#` starts a comment. Inside the formula, OPPNAME(Self), Self(OPPNAME),
/// OPPNAME(A) and A(OPPNAME) are the admissible atoms, and provable<n>(f)
/// abbreviates [](~[]^n false -> f).
AgentTable parse_agent_file(std::string_view text, const AgentFileOptions& options = {});

/// Checks full modalization, atom shapes, resolvability and acyclicity
/// against `table`, and returns the definition with its rank filled in.
AgentDef validate_agent(const AgentDef& def, const AgentSource& table);

AgentDef instantiate_family(const AgentTable& table, std::string_view name, int parameter);

Formula desugar_provable(const Formula& f);

/// Source text of the builtin library (also shipped as agents/builtins.agents).
std::string_view builtin_source();

const AgentTable& builtin_library();

}  // namespace modalpd

#endif  // MODALPD_AGENTS_HPP_
