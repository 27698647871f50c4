#include <catch2/catch_amalgamated.hpp>

#include "kh/resolution.hpp"

using namespace kh;

namespace {

KauffmanState state_of_mask(int n, unsigned mask) {
  KauffmanState s;
  s.markers.resize(n);
  for (int i = 0; i < n; ++i)
    s.markers[i] = ((mask >> (n - 1 - i)) & 1) ? Marker::B : Marker::A;
  return s;
}

}  // namespace

TEST_CASE("state enumeration counts like binary with crossing 0 most significant") {
  LinkDiagram h = torus_diagram(2);
  auto states = enumerate_states(h);
  REQUIRE(states.size() == 4);
  CHECK(states[0].markers == std::vector<Marker>{Marker::A, Marker::A});
  CHECK(states[1].markers == std::vector<Marker>{Marker::A, Marker::B});
  CHECK(states[2].markers == std::vector<Marker>{Marker::B, Marker::A});
  CHECK(states[3].markers == std::vector<Marker>{Marker::B, Marker::B});

  CHECK(sigma(states[0]) == 2);
  CHECK(sigma(states[1]) == 0);
  CHECK(sigma(states[3]) == -2);
}

TEST_CASE("circle counts of the hopf smoothings") {
  LinkDiagram h = torus_diagram(2);
  int expected[] = {2, 1, 1, 2};
  for (unsigned m = 0; m < 4; ++m)
    CHECK(smooth(h, state_of_mask(2, m)).count == expected[m]);
}

TEST_CASE("circle ids are canonical by smallest arc") {
  LinkDiagram t = torus_diagram(3);
  // all-A splits the closed braid into its two strands
  CircleSystem cs = smooth(t, state_of_mask(3, 0));
  REQUIRE(cs.count == 2);
  CHECK(cs.arc_circles == 2);
  CHECK(cs.min_arc == std::vector<ArcId>{1, 2});
  for (ArcId a : {1, 3, 5}) CHECK(cs.arc_circle.at(a) == 0);
  for (ArcId a : {2, 4, 6}) CHECK(cs.arc_circle.at(a) == 1);
  CHECK(cs.circle_of_slot(0, 0) == 1);  // slot 0 of crossing 0 carries arc 2
  CHECK(cs.circle_of_slot(0, 3) == 0);  // slot 3 carries arc 1

  // all-B pairs the strands crossing by crossing: three circles {1,2} {3,4} {5,6}
  CHECK(smooth(t, state_of_mask(3, 7)).count == 3);
  CHECK(smooth(t, state_of_mask(3, 7)).min_arc == std::vector<ArcId>{1, 3, 5});
}

TEST_CASE("free loops extend the circle list after arc-bearing circles") {
  LinkDiagram d = torus_diagram(2);
  d.free_loops = 2;
  CircleSystem cs = smooth(d, state_of_mask(2, 1));
  CHECK(cs.arc_circles == 1);
  CHECK(cs.count == 3);

  LinkDiagram loops;
  loops.free_loops = 2;
  CircleSystem only = smooth(loops, KauffmanState{});
  CHECK(only.count == 2);
  CHECK(only.arc_circles == 0);
}

TEST_CASE("state size must match the diagram") {
  CHECK_THROWS_AS(smooth(torus_diagram(2), state_of_mask(3, 0)), std::invalid_argument);
}

TEST_CASE("enhancement gradings") {
  LinkDiagram h = torus_diagram(2);
  EnhancedState e;
  e.state = state_of_mask(2, 0);
  e.signs = {CircleSign::plus, CircleSign::plus};
  CHECK(tau(e) == 2);
  CHECK(bigrading(e) == std::pair{2, 6});

  e.signs = {CircleSign::plus, CircleSign::minus};
  CHECK(tau(e) == 0);
  CHECK(bigrading(e) == std::pair{2, 2});

  e.state = state_of_mask(2, 3);
  e.signs = {CircleSign::minus, CircleSign::minus};
  CHECK(bigrading(e) == std::pair{-2, -6});
}

TEST_CASE("enhanced enumeration order and counts") {
  LinkDiagram h = torus_diagram(2);
  auto all = enumerate_enhanced(h);
  REQUIRE(all.size() == 12);

  // first block: the all-A state with sign vectors counting +,+ then +,-
  CHECK(all[0].signs == std::vector<CircleSign>{CircleSign::plus, CircleSign::plus});
  CHECK(all[1].signs == std::vector<CircleSign>{CircleSign::plus, CircleSign::minus});
  CHECK(all[2].signs == std::vector<CircleSign>{CircleSign::minus, CircleSign::plus});
  CHECK(all[3].signs == std::vector<CircleSign>{CircleSign::minus, CircleSign::minus});
  CHECK(all[4].state == state_of_mask(2, 1));
  REQUIRE(all[4].signs.size() == 1);

  CHECK(enumerate_enhanced(torus_diagram(1)).size() == 6);

  int streamed = 0;
  for_each_enhanced(h, [&](const EnhancedState& e) {
    CHECK(e == all[streamed]);
    ++streamed;
  });
  CHECK(streamed == 12);
}

TEST_CASE("enhanced states of a crossingless diagram") {
  LinkDiagram loops;
  loops.free_loops = 1;
  auto all = enumerate_enhanced(loops);
  REQUIRE(all.size() == 2);
  CHECK(bigrading(all[0]) == std::pair{0, 2});
  CHECK(bigrading(all[1]) == std::pair{0, -2});
}
