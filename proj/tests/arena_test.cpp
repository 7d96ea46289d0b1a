#include <gtest/gtest.h>

#include "modalpd/arena.hpp"

using namespace modalpd;

namespace {

const AgentTable& lib() { return builtin_library(); }

constexpr Action C = Action::Cooperate;
constexpr Action D = Action::Defect;

std::array<Action, 2> actions(std::string_view x, std::string_view y, const AgentTable& t = lib()) {
  return play(x, y, t).actions;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("2.5"), Rational(5, 2));
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
  EXPECT_EQ(to_string(Rational(-2)), "-2");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(Payoffs, DefaultsAndParsing) {
  const Payoffs p;
  EXPECT_EQ(p.T, Rational(5));
  EXPECT_EQ(p.S, Rational(0));
  EXPECT_TRUE(p.warnings().empty());
  const Payoffs q = Payoffs::parse("4, 2.5, 1/2, -1");
  EXPECT_EQ(q.R, Rational(5, 2));
  EXPECT_EQ(q.P, Rational(1, 2));
  EXPECT_THROW(Payoffs::parse("3,5,1,0"), std::invalid_argument);
  EXPECT_THROW(Payoffs::parse("5,3,1"), std::invalid_argument);
  EXPECT_EQ(Payoffs::parse("10,3,1,0").warnings().size(), 1u);
}

TEST(Play, FairBotCooperateBot) {
  const MatchResult m = play("FairBot", "CooperateBot", lib());
  EXPECT_EQ(m.actions, (std::array<Action, 2>{C, C}));
  EXPECT_EQ(m.payoffs[0], Rational(3));
  EXPECT_EQ(m.payoffs[1], Rational(3));
}

TEST(Play, PrudentBotCooperateBot) {
  const MatchResult m = play("PrudentBot", "CooperateBot", lib());
  EXPECT_EQ(m.actions, (std::array<Action, 2>{D, C}));
  EXPECT_EQ(m.payoffs[0], Rational(5));
  EXPECT_EQ(m.payoffs[1], Rational(0));
  EXPECT_EQ(m.proof_levels[0], 2);
  EXPECT_EQ(m.proof_levels[1], 0);
}

TEST(Play, ShortNamesAndOptions) {
  PlayOptions opts;
  opts.keep_trace = true;
  opts.normal_forms = true;
  const MatchResult m = play("PB", "DB", lib(), Payoffs{}, opts);
  EXPECT_EQ(m.agents[0], "PrudentBot");
  ASSERT_TRUE(m.trace);
  ASSERT_TRUE(m.normal_forms[0]);
  EXPECT_EQ(*m.normal_forms[0], Formula::box(Formula::bottom()));
  EXPECT_EQ(*m.normal_forms[1], Formula::bottom());
}

TEST(Play, CliqueBot) {
  const AgentTable t = parse_agent_file(
      "clique Copy := \"" + std::string(clique_bot_source()) + "\"\n"
      "clique CliqueBotRenamedCopy := \"CliqueBotRenamedCopy(X): if X = CliqueBotRenamedCopy then return C else return D\"\n");
  EXPECT_EQ(actions("CliqueBot", "Copy", t), (std::array<Action, 2>{C, C}));
  EXPECT_EQ(actions("CliqueBot", "CliqueBotRenamedCopy", t), (std::array<Action, 2>{D, D}));
  EXPECT_EQ(actions("CliqueBot", "CliqueBot", t), (std::array<Action, 2>{C, C}));
  const MatchResult m = play("CliqueBot", "Copy", t);
  EXPECT_TRUE(m.syntactic);
  EXPECT_FALSE(m.proof_levels[0]);
}

TEST(Play, MixedKindsRefused) {
  EXPECT_THROW(play("CliqueBot", "FairBot", lib()), MixedKindsUnsupported);
  EXPECT_THROW(play("FairBot", "CliqueBot", lib()), MixedKindsUnsupported);
  EXPECT_THROW(play("CliqueBot", "Ghost", lib()), ValidationError);
}

TEST(Play, UnknownAgent) { EXPECT_THROW(play("FairBot", "Ghost", lib()), ValidationError); }

TEST(Play, PrudentBotVerdicts) {
  EXPECT_EQ(actions("PrudentBot", "PrudentBot"), (std::array<Action, 2>{C, C}));
  EXPECT_EQ(actions("PrudentBot", "FairBot"), (std::array<Action, 2>{C, C}));
  EXPECT_EQ(actions("PrudentBot", "DefectBot"), (std::array<Action, 2>{D, D}));
  EXPECT_EQ(actions("PrudentBot", "CooperateBot"), (std::array<Action, 2>{D, C}));
}

TEST(Play, ImprudentBotLosesSelfCooperation) {
  EXPECT_EQ(actions("ImprudentBot", "ImprudentBot"), (std::array<Action, 2>{D, D}));
}

TEST(Play, TrollBotAndFairBotWaitZero) {
  EXPECT_EQ(actions("TrollBot", "CooperateBot")[0], C);
  EXPECT_EQ(actions("TrollBot", "DefectBot")[0], D);
  EXPECT_EQ(actions("FairBot", "WaitFairBot<0>"), (std::array<Action, 2>{D, D}));
}

TEST(RoundRobin, PrudentBotRow) {
  const TournamentReport r = round_robin({"CB", "DB", "FB", "PB"}, lib());
  ASSERT_EQ(r.agents.size(), 4u);
  std::vector<Action> row;
  for (const auto& m : r.matches[3]) row.push_back(m.actions[0]);
  EXPECT_EQ(row, (std::vector<Action>{D, D, C, C}));
}

TEST(RoundRobin, FairBotJustBotAllCooperate) {
  const TournamentReport r = round_robin({"FairBot", "JustBot"}, lib());
  for (const auto& row : r.matches)
    for (const auto& m : row) EXPECT_EQ(m.actions, (std::array<Action, 2>{C, C}));
}

TEST(RoundRobin, SingleAgent) {
  const TournamentReport r = round_robin({"DefectBot"}, lib());
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0][0].actions, (std::array<Action, 2>{D, D}));
  EXPECT_EQ(r.scores[0], Payoffs{}.P);
  EXPECT_THROW(round_robin({}, lib()), std::invalid_argument);
}

TEST(RoundRobin, ScoreAccounting) {
  const Payoffs p = Payoffs::parse("7/2,3,1/3,-2");
  const TournamentReport r =
      round_robin({"CB", "DB", "FB", "PB", "TB", "JB", "ImprudentBot", "WFB<1>"}, lib(), p);
  const std::set<Rational> totals{2 * p.R, p.T + p.S, 2 * p.P};
  for (std::size_t i = 0; i < r.agents.size(); ++i) {
    Rational sum = 0;
    for (std::size_t j = 0; j < r.agents.size(); ++j) {
      const MatchResult& m = r.matches[i][j];
      sum += m.payoffs[0];
      EXPECT_EQ(m.payoffs[0], p.row(m.actions[0], m.actions[1]));
      EXPECT_TRUE(totals.count(m.payoffs[0] + m.payoffs[1]));
      EXPECT_EQ(m.actions[0], r.matches[j][i].actions[1]);
    }
    EXPECT_EQ(sum, r.scores[i]);
  }
}

TEST(RoundRobin, RenamingInvariance) {
  const AgentTable t = parse_agent_file(
      "agent FairCopy(Them) := [] Them(FairCopy)\n"
      "agent PrudentCopy(X) := [] X(Self) & provable<1>(~X(DefectBot))\n");
  const std::vector<std::string> roster{"CB", "DB", "FB", "PB", "TB", "JB", "WFB<1>", "FairCopy", "PrudentCopy"};
  const TournamentReport r = round_robin(roster, t);
  for (const auto& [orig, copy] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 7}, {3, 8}}) {
    for (std::size_t j = 0; j < roster.size(); ++j) {
      EXPECT_EQ(r.matches[orig][j].actions, r.matches[copy][j].actions) << roster[j];
      EXPECT_EQ(r.matches[orig][j].proof_levels, r.matches[copy][j].proof_levels) << roster[j];
    }
  }
}
