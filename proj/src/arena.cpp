#include "modalpd/arena.hpp"

#include <charconv>
#include <cstdlib>

#include "modalpd/parse.hpp"

namespace modalpd {

namespace {

long long parse_integer(std::string_view text, std::string_view whole) {
  long long value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const long long den = parse_integer(text.substr(slash + 1), whole);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
    return Rational(parse_integer(text.substr(0, slash), whole), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 12 || frac.front() == '-' || frac.front() == '+') {
      throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
    }
    long long scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::string_view int_part = text.substr(0, dot);
    const bool negative = !int_part.empty() && int_part.front() == '-';
    const long long ip = (int_part.empty() || int_part == "-") ? 0 : parse_integer(int_part, whole);
    const long long fp = parse_integer(frac, whole);
    const long long magnitude = std::llabs(ip) * scale + fp;
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  return Rational(parse_integer(text, whole));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Payoffs Payoffs::parse(std::string_view text) {
  std::vector<Rational> parts;
  while (true) {
    const auto comma = text.find(',');
    parts.push_back(parse_rational(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (parts.size() != 4) throw std::invalid_argument("payoffs must be given as T,R,P,S");
  Payoffs p{parts[0], parts[1], parts[2], parts[3]};
  p.validate();
  return p;
}

void Payoffs::validate() const {
  if (!(T > R && R > P && P > S)) {
    throw std::invalid_argument("payoffs must satisfy T > R > P > S, got " + to_string(T) + "," +
                                to_string(R) + "," + to_string(P) + "," + to_string(S));
  }
}

std::vector<std::string> Payoffs::warnings() const {
  if (2 * R > T + S) return {};
  return {"2R > T + S fails: alternating exploitation pays as well as mutual cooperation"};
}

Rational Payoffs::row(Action mine, Action theirs) const {
  if (mine == Action::Cooperate) return theirs == Action::Cooperate ? R : S;
  return theirs == Action::Cooperate ? T : P;
}

std::string_view clique_bot_source() {
  return "CliqueBot(X): if X = CliqueBot then return C else return D";
}

std::optional<SyntacticAgent> find_syntactic(const AgentTable& table, std::string_view name) {
  for (const auto& decl : table.syntactic()) {
    if (decl.name == name) return SyntacticAgent{decl.name, decl.source};
  }
  if (name == kCliqueBotName && !table.find(name)) {
    return SyntacticAgent{std::string(kCliqueBotName), std::string(clique_bot_source())};
  }
  return std::nullopt;
}

MatchResult play(std::string_view x_in, std::string_view y_in, const AgentTable& table,
                 const Payoffs& payoffs, const PlayOptions& options) {
  const std::string x = table.canonical_name(x_in);
  const std::string y = table.canonical_name(y_in);
  MatchResult result;
  result.agents = {x, y};

  const auto sx = find_syntactic(table, x);
  const auto sy = find_syntactic(table, y);
  if (sx || sy) {
    if (!sx || !sy) {
      const std::string& modal = sx ? y : x;
      table.get(modal);
      throw MixedKindsUnsupported("no modal reading of syntactic agent '" + (sx ? x : y) +
                                  "'; cannot play it against modal agent '" + modal + "'");
    }
    const Action a = sx->source == sy->source ? Action::Cooperate : Action::Defect;
    result.syntactic = true;
    result.actions = {a, a};
  } else {
    const EquationSystem system = build_equation_system(x, y, table);
    SolutionTrace trace = solve(system);
    const MatchVar forward{x, y};
    const MatchVar backward{y, x};
    const Verdict vx = verdict(trace, forward);
    const Verdict vy = verdict(trace, backward);
    result.actions = {vx.action, vy.action};
    result.proof_levels = {vx.proof_level, vy.proof_level};
    if (options.normal_forms) {
      result.normal_forms = {normal_form(trace, forward), normal_form(trace, backward)};
    }
    if (options.keep_trace) result.trace = std::move(trace);
  }
  result.payoffs = {payoffs.row(result.actions[0], result.actions[1]),
                    payoffs.row(result.actions[1], result.actions[0])};
  return result;
}

namespace {

MatchResult mirrored(const MatchResult& m) {
  MatchResult r = m;
  std::swap(r.agents[0], r.agents[1]);
  std::swap(r.actions[0], r.actions[1]);
  std::swap(r.proof_levels[0], r.proof_levels[1]);
  std::swap(r.payoffs[0], r.payoffs[1]);
  std::swap(r.normal_forms[0], r.normal_forms[1]);
  return r;
}

}  // namespace

TournamentReport round_robin(const std::vector<std::string>& agents, const AgentTable& table,
                             const Payoffs& payoffs, const PlayOptions& options) {
  if (agents.empty()) throw std::invalid_argument("tournament needs at least one agent");
  TournamentReport report;
  for (const auto& a : agents) report.agents.push_back(table.canonical_name(a));
  const std::size_t n = agents.size();
  report.matches.assign(n, std::vector<MatchResult>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      report.matches[i][j] = play(report.agents[i], report.agents[j], table, payoffs, options);
      if (j != i) report.matches[j][i] = mirrored(report.matches[i][j]);
    }
  }
  report.scores.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) report.scores[i] += report.matches[i][j].payoffs[0];
  return report;
}

}  // namespace modalpd
