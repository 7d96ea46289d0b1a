#include <gtest/gtest.h>

#include "modalpd/report.hpp"

using namespace modalpd;

namespace {

ReportDocument sample() {
  PlayOptions opts;
  opts.keep_trace = true;
  opts.normal_forms = true;
  const AgentTable& lib = builtin_library();
  ReportDocument doc;
  doc.command = {"play", "PB", "CB", "--trace"};
  doc.agents = {make_agent_entry("PB", lib), make_agent_entry("CB", lib), make_agent_entry("CliqueBot", lib)};
  doc.matches.push_back(make_match_entry(play("PB", "CB", lib, Payoffs::parse("5/2,2,1,0"), opts)));
  doc.tournament = TournamentEntry{{"PrudentBot"}, "5,3,1,0", {{"PrudentBot", "1"}}};
  SearchEntry s;
  s.kind = "exploiter";
  s.targets = {"FairBot"};
  s.witness = "[]Opp(Self)";
  s.witness_actions = {"C", "D"};
  s.summary = "x";
  doc.search = s;
  return doc;
}

}  // namespace

TEST(Report, MatchEntryTraceLength) {
  const ReportDocument doc = sample();
  const MatchEntry& m = doc.matches[0];
  ASSERT_TRUE(m.stabilization);
  EXPECT_EQ(*m.stabilization, 2);
  for (const auto& t : m.traces) EXPECT_EQ(t.values.size(), 4u);
  EXPECT_EQ(m.payoffs[0], "5/2");
  EXPECT_EQ(m.actions[0], "D");
  EXPECT_EQ(m.normal_forms.size(), 2u);
}

TEST(Report, RoundTripIsByteIdentical) {
  const std::string text = to_json(sample());
  EXPECT_EQ(to_json(from_json(text)), text);
  ReportDocument bare;
  bare.command = {"check", "x"};
  const std::string t2 = to_json(bare);
  EXPECT_EQ(to_json(from_json(t2)), t2);
}

TEST(Report, SchemaVersionFirst) {
  const std::string text = to_json(sample());
  EXPECT_EQ(text.rfind("{\n  \"schema_version\": \"1\"", 0), 0u);
}

TEST(Report, ValidatesGoodDocument) { EXPECT_TRUE(validate_report(to_json(sample())).empty()); }

TEST(Report, DetectsProblems) {
  ReportDocument doc = sample();
  doc.schema_version = "2";
  doc.agents[0].formula = "[](";
  doc.matches[0].traces[0].values.clear();
  doc.matches[0].actions[1] = "X";
  const auto problems = validate_report(to_json(doc));
  EXPECT_EQ(problems.size(), 4u);
  EXPECT_FALSE(validate_report("{").empty());
  EXPECT_FALSE(validate_report("{\"schema_version\": \"1\"}").empty());
  EXPECT_THROW(from_json("[1,2]"), std::invalid_argument);
}

TEST(Report, AgentEntries) {
  const AgentEntry pb = make_agent_entry("PB", builtin_library());
  EXPECT_EQ(pb.name, "PrudentBot");
  EXPECT_EQ(pb.rank, 1);
  EXPECT_EQ(pb.formula, "[]Opp(Self) & provable<1>(~Opp(DefectBot))");
  const AgentEntry cb = make_agent_entry("CliqueBot", builtin_library());
  EXPECT_EQ(cb.kind, "syntactic");
  EXPECT_FALSE(cb.rank);
}
