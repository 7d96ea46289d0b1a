#include <gtest/gtest.h>

#include "modalpd/kripke.hpp"
#include "modalpd/parse.hpp"

using namespace modalpd;

namespace {

// 0 <- 1 <- ... <- n-1, transitively closed: world k sees every j < k.
Frame chain(int n) {
  Frame f(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < a; ++b) f.add_edge(a, b);
  return f;
}

}  // namespace

TEST(Frame, Properties) {
  Frame f(3);
  f.add_edge(2, 1);
  f.add_edge(1, 0);
  EXPECT_FALSE(f.is_transitive());
  f.close_transitively();
  EXPECT_TRUE(f.is_transitive());
  EXPECT_TRUE(f.is_irreflexive());
  EXPECT_EQ(f.heights(), (std::vector<int>{0, 1, 2}));
}

TEST(Frame, HeightIsLongestChain) {
  // 3 sees 0 and 2; 2 sees 1; 1 sees nothing.
  Frame f(4);
  f.add_edge(3, 0);
  f.add_edge(3, 2);
  f.add_edge(2, 1);
  f.close_transitively();
  EXPECT_EQ(f.heights(), (std::vector<int>{0, 0, 1, 2}));
}

TEST(Kripke, BoxBottomAtTerminalWorlds) {
  Frame f(5);
  f.add_edge(4, 0);
  f.add_edge(4, 1);
  f.add_edge(3, 1);
  f.close_transitively();
  const auto values = kripke_values(Formula::box(Formula::bottom()), f);
  const auto height = f.heights();
  for (int w = 0; w < f.size(); ++w) EXPECT_EQ(values[w], height[w] == 0);
  EXPECT_TRUE(height_semantics_crosscheck(Formula::box(Formula::bottom()), f));
}

TEST(Kripke, DoubleBoxOnThreeChain) {
  const auto values = kripke_values(Formula::box(Formula::bottom(), 2), chain(3));
  EXPECT_EQ(values, (std::vector<bool>{true, true, false}));
  EXPECT_TRUE(height_semantics_crosscheck(parse_formula("[][]false"), chain(3)));
}

TEST(Kripke, LobAxiomValidOnFiniteFrames) {
  const Formula f = parse_formula("[]([][]false -> []false) -> [][]false");
  const Frame fr = chain(6);
  for (bool v : kripke_values(parse_formula("[]([]false -> false) -> []false"), fr)) EXPECT_TRUE(v);
  EXPECT_TRUE(height_semantics_crosscheck(f, fr));
}

TEST(Kripke, RejectsBadInput) {
  Frame reflexive(2);
  reflexive.add_edge(0, 0);
  EXPECT_THROW(height_semantics_crosscheck(Formula::top(), reflexive), std::invalid_argument);
  Frame intransitive(3);
  intransitive.add_edge(2, 1);
  intransitive.add_edge(1, 0);
  EXPECT_THROW(height_semantics_crosscheck(Formula::top(), intransitive), std::invalid_argument);
  EXPECT_THROW(height_semantics_crosscheck(Formula::box(Formula::raw("A", "B")), chain(2)), std::invalid_argument);
  EXPECT_THROW(height_semantics_crosscheck(Formula::top(), chain(9)), std::invalid_argument);
  EXPECT_THROW(Frame(2).add_edge(0, 5), std::out_of_range);
}
