#ifndef MODALPD_PARSE_HPP_
#define MODALPD_PARSE_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "modalpd/formula.hpp"

namespace modalpd {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string detail, std::vector<std::string> expected = {});

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }
  /// Sorted token descriptions that would have been accepted.
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::string detail_;
  std::vector<std::string> expected_;
};

enum class AtomKind { Raw, MatchVar };

struct ParameterBinding {
  std::string name;
  int value = 0;
};

struct ParseOptions {
  /// Accept `provable<n>(f)` sugar (agent definitions).
  bool allow_provable = false;
  /// Whether `A(B)` parses to a RawAtom or a MatchVar.
  AtomKind atoms = AtomKind::Raw;
  /// Family parameter usable in `box^K`, `box^(K+1)`, `provable<K>` and `Name<K>`.
  std::optional<ParameterBinding> parameter;
  /// Position of the first character of `text` within its enclosing source.
  int line = 1;
  int column = 1;
};

/// Largest literal accepted as a box exponent or provability level.
inline constexpr int kMaxExponent = 4096;

/// Grammar, loosest to tightest:
///   formula := iff
///   iff     := imp ("<->" imp)*
///   imp     := or ("->" imp)?
///   or      := and ("|" and)*
///   and     := unary ("&" unary)*
///   unary   := ("~" | "[]" | "box" ("^" exponent)?)* primary
///   primary := "true" | "false" | name "(" name ")" | "(" formula ")"
///              | "provable" "<" exponent ">" "(" formula ")"
///   name    := IDENT ("<" exponent ">")?
/// Unicode forms (¬ □ ⊤ ⊥ ∧ ∨ → ↔) are accepted for the ASCII tokens.
Formula parse_formula(std::string_view text);
Formula parse_formula(std::string_view text, const ParseOptions& options);

/// Canonical name of a family instance, e.g. "WaitFairBot<2>".
std::string instance_name(std::string_view family, int parameter);

/// Splits "Name<K>" into ("Name", K). Returns nullopt for plain names.
std::optional<std::pair<std::string, int>> split_instance_name(std::string_view name);

bool is_identifier(std::string_view text);

}  // namespace modalpd

#endif  // MODALPD_PARSE_HPP_
