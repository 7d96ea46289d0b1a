#include "modalpd/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace modalpd {

namespace {

std::string format_message(int line, int column, const std::string& detail,
                           const std::vector<std::string>& expected) {
  std::string msg = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + detail;
  if (!expected.empty()) {
    msg += " (expected one of:";
    for (const auto& e : expected) msg += " " + e;
    msg += ")";
  }
  return msg;
}

}  // namespace

ParseError::ParseError(int line, int column, std::string detail, std::vector<std::string> expected)
    : std::runtime_error(format_message(line, column, detail, expected)),
      line_(line),
      column_(column),
      detail_(std::move(detail)),
      expected_(std::move(expected)) {}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(text[0])) || text[0] == '_')) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string instance_name(std::string_view family, int parameter) {
  return std::string(family) + "<" + std::to_string(parameter) + ">";
}

std::optional<std::pair<std::string, int>> split_instance_name(std::string_view name) {
  auto lt = name.find('<');
  if (lt == std::string_view::npos || name.back() != '>') return std::nullopt;
  std::string_view base = name.substr(0, lt);
  std::string_view digits = name.substr(lt + 1, name.size() - lt - 2);
  if (!is_identifier(base) || digits.empty()) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || value < 0) return std::nullopt;
  return std::make_pair(std::string(base), value);
}

namespace {

enum class Tok {
  Ident,
  Int,
  LParen,
  RParen,
  Not,
  Box,
  BoxWord,
  And,
  Or,
  Imp,
  Iff,
  True,
  False,
  Caret,
  Lt,
  Gt,
  Plus,
  Minus,
  End,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "name";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Not: return "'~'";
    case Tok::Box: return "'[]'";
    case Tok::BoxWord: return "'box'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Imp: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::Caret: return "'^'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

struct Unicode {
  std::string_view bytes;
  Tok kind;
};

constexpr Unicode kUnicodeTokens[] = {
    {"□", Tok::Box},  {"¬", Tok::Not}, {"⊤", Tok::True}, {"⊥", Tok::False},
    {"∧", Tok::And},  {"∨", Tok::Or},  {"→", Tok::Imp},  {"↔", Tok::Iff},
};

std::vector<Token> tokenize(std::string_view text, int line, int column) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto advance = [&](std::size_t bytes, int columns) {
    i += bytes;
    column += columns;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      column = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1, 1);
      continue;
    }
    const int tl = line;
    const int tc = column;
    auto push = [&](Tok kind, std::size_t bytes, std::string tok_text = {}) {
      out.push_back({kind, std::move(tok_text), tl, tc});
      advance(bytes, static_cast<int>(bytes));
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      std::string word(text.substr(i, j - i));
      Tok kind = Tok::Ident;
      if (word == "true") kind = Tok::True;
      else if (word == "false") kind = Tok::False;
      else if (word == "box") kind = Tok::BoxWord;
      out.push_back({kind, word, tl, tc});
      advance(j - i, static_cast<int>(j - i));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::Int, std::string(text.substr(i, j - i)), tl, tc});
      advance(j - i, static_cast<int>(j - i));
      continue;
    }
    std::string_view rest = text.substr(i);
    if (rest.starts_with("<->")) { push(Tok::Iff, 3); continue; }
    if (rest.starts_with("->")) { push(Tok::Imp, 2); continue; }
    if (rest.starts_with("[]")) { push(Tok::Box, 2); continue; }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '~': push(Tok::Not, 1); continue;
      case '&': push(Tok::And, 1); continue;
      case '|': push(Tok::Or, 1); continue;
      case '^': push(Tok::Caret, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '>': push(Tok::Gt, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '-': push(Tok::Minus, 1); continue;
      default: break;
    }
    bool matched = false;
    for (const auto& u : kUnicodeTokens) {
      if (rest.starts_with(u.bytes)) {
        out.push_back({u.kind, std::string(u.bytes), tl, tc});
        i += u.bytes.size();
        column += 1;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    // Report the whole UTF-8 sequence of an unknown character.
    std::size_t len = 1;
    const auto lead = static_cast<unsigned char>(c);
    if (lead >= 0xF0) len = 4;
    else if (lead >= 0xE0) len = 3;
    else if (lead >= 0xC0) len = 2;
    throw ParseError(tl, tc, "unknown token '" + std::string(text.substr(i, len)) + "'");
  }
  out.push_back({Tok::End, "", line, column});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& options)
      : tokens_(std::move(tokens)), options_(options) {}

  Formula parse_all() {
    Formula f = parse_iff();
    if (peek().kind == Tok::RParen) {
      throw ParseError(peek().line, peek().column, "unbalanced parentheses: unexpected ')'");
    }
    if (peek().kind != Tok::End) {
      fail({Tok::And, Tok::Or, Tok::Imp, Tok::Iff, Tok::End});
    }
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(std::initializer_list<Tok> expected) {
    std::set<std::string> names;
    for (Tok t : expected) names.insert(describe(t));
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    if (t.kind != Tok::End && t.text.empty()) found = describe(t.kind);
    throw ParseError(t.line, t.column, "unexpected " + found,
                     std::vector<std::string>(names.begin(), names.end()));
  }

  void expect_close(const Token& open) {
    if (accept(Tok::RParen)) return;
    if (peek().kind == Tok::End) {
      throw ParseError(open.line, open.column,
                       "unbalanced parentheses: '(' is never closed", {describe(Tok::RParen)});
    }
    fail({Tok::RParen});
  }

  void expect(Tok kind) {
    if (!accept(kind)) fail({kind});
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept(Tok::Iff)) f = Formula::iff(f, parse_imp());
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (accept(Tok::Imp)) return Formula::implies(f, parse_imp());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::Or)) f = Formula::disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept(Tok::And)) f = Formula::conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    if (accept(Tok::Not)) return Formula::negate(parse_unary());
    if (accept(Tok::Box)) return Formula::box(parse_unary());
    if (accept(Tok::BoxWord)) {
      int times = 1;
      if (accept(Tok::Caret)) times = parse_exponent();
      return Formula::box(parse_unary(), times);
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::True: take(); return Formula::top();
      case Tok::False: take(); return Formula::bottom();
      case Tok::LParen: {
        const Token& open = take();
        Formula f = parse_iff();
        expect_close(open);
        return f;
      }
      case Tok::Ident: {
        if (t.text == "provable") return parse_provable();
        std::string caller = parse_name();
        const Token& open = peek();
        expect(Tok::LParen);
        if (peek().kind != Tok::Ident) fail({Tok::Ident});
        std::string callee = parse_name();
        expect_close(open);
        if (options_.atoms == AtomKind::MatchVar) return Formula::var(caller, callee);
        return Formula::raw(caller, callee);
      }
      case Tok::RParen:
        throw ParseError(t.line, t.column, "unbalanced parentheses: unexpected ')'");
      default:
        fail({Tok::True, Tok::False, Tok::LParen, Tok::Ident, Tok::Not, Tok::Box, Tok::BoxWord});
    }
  }

  Formula parse_provable() {
    const Token& kw = take();
    if (!options_.allow_provable) {
      throw ParseError(kw.line, kw.column, "provable<n>(...) is only allowed in agent definitions");
    }
    expect(Tok::Lt);
    int level = parse_exponent();
    expect(Tok::Gt);
    const Token& open = peek();
    expect(Tok::LParen);
    Formula body = parse_iff();
    expect_close(open);
    return Formula::provable(level, body);
  }

  std::string parse_name() {
    const Token& t = take();
    std::string name = t.text;
    if (accept(Tok::Lt)) {
      int k = parse_exponent();
      expect(Tok::Gt);
      name = instance_name(name, k);
    }
    return name;
  }

  int parse_exponent() {
    const Token& start = peek();
    int value = 0;
    if (accept(Tok::LParen)) {
      value = parse_term();
      while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
        bool plus = take().kind == Tok::Plus;
        int rhs = parse_term();
        value = plus ? value + rhs : value - rhs;
        if (value > kMaxExponent) throw ParseError(start.line, start.column, "exponent too large");
      }
      expect_close(start);
    } else {
      value = parse_term();
    }
    if (value < 0) throw ParseError(start.line, start.column, "negative exponent");
    return value;
  }

  int parse_term() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      take();
      int value = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
      if (ec != std::errc() || value > kMaxExponent) {
        throw ParseError(t.line, t.column, "exponent too large (max " + std::to_string(kMaxExponent) + ")");
      }
      return value;
    }
    if (t.kind == Tok::Ident) {
      if (!options_.parameter || options_.parameter->name != t.text) {
        throw ParseError(t.line, t.column, "unknown parameter '" + t.text + "'");
      }
      take();
      return options_.parameter->value;
    }
    fail({Tok::Int, Tok::Ident, Tok::LParen});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const ParseOptions& options_;
};

}  // namespace

Formula parse_formula(std::string_view text) { return parse_formula(text, ParseOptions{}); }

Formula parse_formula(std::string_view text, const ParseOptions& options) {
  Parser parser(tokenize(text, options.line, options.column), options);
  return parser.parse_all();
}

}  // namespace modalpd
