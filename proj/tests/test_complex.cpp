#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "kh/complex.hpp"

using namespace kh;

namespace {

LinkDiagram fixture(const char* name) {
  std::ifstream f(std::string(FIXTURE_DIR) + "/" + name);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_pd(ss.str());
}

/// Every matrix entry must equal the pairwise incidence coefficient.
void compare_against_incidence(const LinkDiagram& d) {
  BigradedComplex cx = build_complex(d);
  auto all = enumerate_enhanced(d);
  for (const auto& from : all) {
    auto [a, b] = bigrading(from);
    const GradedBasis* src = cx.basis(a, b);
    REQUIRE(src != nullptr);
    int col = src->index_of(key_of(d, from));
    REQUIRE(col >= 0);
    for (const auto& to : all) {
      int coeff = differential_coefficient(d, from, to);
      auto [a2, b2] = bigrading(to);
      if (coeff != 0) {
        REQUIRE(a2 == a - 2);
        REQUIRE(b2 == b);
      }
      if (a2 != a - 2 || b2 != b) continue;
      const IntegerMatrix* mat = cx.find_differential(a, b);
      REQUIRE(mat != nullptr);
      int row = cx.basis(a - 2, b)->index_of(key_of(d, to));
      REQUIRE(row >= 0);
      CHECK(mat->get(row, col) == coeff);
    }
  }
}

}  // namespace

TEST_CASE("chain group dimensions of the hopf diagram") {
  BigradedComplex cx = build_complex(torus_diagram(2));
  CHECK(cx.dim(2, 6) == 1);
  CHECK(cx.dim(2, 2) == 2);
  CHECK(cx.dim(2, -2) == 1);
  CHECK(cx.dim(0, 2) == 2);
  CHECK(cx.dim(0, -2) == 2);
  CHECK(cx.dim(-2, 2) == 1);
  CHECK(cx.dim(-2, -2) == 2);
  CHECK(cx.dim(-2, -6) == 1);
  CHECK(cx.dim(4, 0) == 0);

  int total = 0;
  for (const auto& [key, basis] : cx.bases) total += static_cast<int>(basis.states.size());
  CHECK(total == 12);

  CHECK(cx.basis(2, 6) != nullptr);
  CHECK(cx.basis(9, 9) == nullptr);
  IntegerMatrix empty = cx.differential(6, 0);
  CHECK(empty.rows() == 0);
  CHECK(empty.cols() == 0);
}

TEST_CASE("matrices agree with pairwise incidence") {
  compare_against_incidence(torus_diagram(2));
  compare_against_incidence(framed_unknot(2));
  compare_against_incidence(framed_unknot(-2));
  compare_against_incidence(fixture("r3_a.pd"));
}

TEST_CASE("sign conventions") {
  KauffmanState s;
  s.markers = {Marker::B, Marker::A, Marker::B};
  CHECK(t_exponent(s, 0) == 1);
  CHECK(t_exponent(s, 1) == 1);
  CHECK(t_exponent(s, 2) == 0);

  // B markers at later crossings flip the coefficient
  LinkDiagram t = torus_diagram(3);
  auto all = enumerate_enhanced(t);
  bool found_negative = false;
  for (const auto& from : all)
    for (const auto& to : all)
      if (differential_coefficient(t, from, to) == -1) found_negative = true;
  CHECK(found_negative);
}

TEST_CASE("composite of consecutive differentials vanishes") {
  for (const char* name : {"hopf.pd", "trefoil.pd", "r3_a.pd", "r3_b.pd", "fig8.pd"})
    CHECK(verify_dd_zero(build_complex(fixture(name))));
  for (int k : {-2, -1, 0, 1, 2}) CHECK(verify_dd_zero(build_complex(framed_unknot(k))));
}

TEST_CASE("euler characteristic equals the bracket") {
  for (const char* name : {"hopf.pd", "trefoil.pd", "trefoil_r2.pd", "fig8.pd"}) {
    LinkDiagram d = fixture(name);
    CHECK(euler_characteristic(build_complex(d)) == bracket_state_sum(d));
  }
  for (int k : {-2, 0, 1}) {
    LinkDiagram d = framed_unknot(k);
    CHECK(euler_characteristic(build_complex(d)) == bracket_state_sum(d));
  }
}

TEST_CASE("state keys round trip through the bases") {
  LinkDiagram h = torus_diagram(2);
  BigradedComplex cx = build_complex(h);
  for (const auto& [key, basis] : cx.bases) {
    for (StateKey k : basis.states) {
      EnhancedState e = state_of(h, k);
      CHECK(key_of(h, e) == k);
      CHECK(bigrading(e) == key);
      CHECK(basis.index_of(k) >= 0);
    }
    CHECK(basis.index_of(StateKey{0xffffu, 0xffffu}) == -1);
  }
}

TEST_CASE("debug dump lists entries by grading, row, column") {
  BigradedComplex cx = build_complex(framed_unknot(1));
  CHECK(debug_dump(cx) ==
        "1 -3 0 0 1\n"
        "1 1 0 0 1\n"
        "1 1 0 1 1\n");
}

TEST_CASE("free loops double the complex per sign choice") {
  LinkDiagram h = torus_diagram(2);
  LinkDiagram hl = h;
  hl.free_loops = 1;
  BigradedComplex cx = build_complex(hl);

  int total = 0;
  for (const auto& [key, basis] : cx.bases) total += static_cast<int>(basis.states.size());
  CHECK(total == 24);
  CHECK(cx.dim(2, 4) == 3);  // loop sign shifts b by two in either direction
  CHECK(cx.dim(2, 8) == 1);
  CHECK(verify_dd_zero(cx));
  CHECK(euler_characteristic(cx) == bracket_state_sum(hl));
}

TEST_CASE("a gluing that is neither fusion nor split is rejected") {
  CHECK_THROWS_AS(build_complex(parse_pd("X 1 2 1 2\n")), std::invalid_argument);
}
