#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "kh/bracket.hpp"

using namespace kh;

namespace {

LinkDiagram fixture(const char* name) {
  std::ifstream f(std::string(FIXTURE_DIR) + "/" + name);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_pd(ss.str());
}

LaurentPoly poly(std::initializer_list<std::pair<int, long long>> terms) {
  LaurentPoly p;
  for (auto [e, c] : terms) p += LaurentPoly::monomial(e, c);
  return p;
}

}  // namespace

TEST_CASE("bracket values of small diagrams") {
  CHECK(bracket_state_sum(framed_unknot(0)) == poly({{2, -1}, {-2, -1}}));
  CHECK(bracket_state_sum(framed_unknot(1)) == poly({{5, 1}, {1, 1}}));
  CHECK(bracket_state_sum(framed_unknot(-1)) == poly({{-1, 1}, {-5, 1}}));
  CHECK(bracket_state_sum(framed_unknot(-2)) == poly({{-4, -1}, {-8, -1}}));
  CHECK(bracket_state_sum(torus_diagram(2)) == poly({{6, 1}, {2, 1}, {-2, 1}, {-6, 1}}));
  CHECK(bracket_state_sum(torus_diagram(3)) == poly({{7, 1}, {3, 1}, {-1, 1}, {-9, -1}}));
}

TEST_CASE("state sum and enhanced sum agree") {
  for (const char* name : {"hopf.pd", "trefoil.pd", "r3_a.pd", "fig8.pd"}) {
    LinkDiagram d = fixture(name);
    CHECK(bracket_state_sum(d) == bracket_enhanced_sum(d));
  }
  for (int k : {-2, -1, 0, 1, 2})
    CHECK(bracket_state_sum(framed_unknot(k)) == bracket_enhanced_sum(framed_unknot(k)));
  CHECK(bracket_state_sum(torus_diagram(4)) == bracket_enhanced_sum(torus_diagram(4)));
}

TEST_CASE("smoothing relation holds at every crossing") {
  for (const char* name : {"trefoil.pd", "fig8.pd", "r3_b.pd"}) {
    LinkDiagram d = fixture(name);
    for (int v = 0; v < d.crossing_count(); ++v) CHECK(satisfies_skein(d, v));
  }
  CHECK(satisfies_skein(framed_unknot(1), 0));
}

TEST_CASE("free loops multiply the bracket by the circle value") {
  LinkDiagram h = torus_diagram(2);
  LinkDiagram hl = h;
  hl.free_loops = 1;
  CHECK(bracket_state_sum(hl) == bracket_state_sum(h) * circle_poly());
}

TEST_CASE("mirror image swaps A with its inverse") {
  for (const char* name : {"trefoil.pd", "fig8.pd"}) {
    LinkDiagram d = fixture(name);
    LaurentPoly p = bracket_state_sum(d);
    LaurentPoly q = bracket_state_sum(mirror(d));
    for (const auto& [e, c] : p.terms()) CHECK(q.coeff(-e) == c);
    for (const auto& [e, c] : q.terms()) CHECK(p.coeff(-e) == c);
  }
}

TEST_CASE("polynomial arithmetic") {
  LaurentPoly a = poly({{1, 1}, {0, 1}});   // A + 1
  LaurentPoly b = poly({{1, 1}, {0, -1}});  // A - 1
  CHECK(a * b == poly({{2, 1}, {0, -1}}));
  CHECK(a - a == LaurentPoly());
  CHECK((a - a).is_zero());
  CHECK(a.shifted(3) == poly({{4, 1}, {3, 1}}));
  CHECK(a.shifted(-2).coeff(-1) == 1);
  CHECK(LaurentPoly::monomial(4, 0).is_zero());
  CHECK(circle_poly().coeff(2) == -1);
  CHECK(circle_poly().coeff(0) == 0);
}

TEST_CASE("polynomial rendering") {
  CHECK(LaurentPoly().to_string() == "0");
  CHECK(LaurentPoly::one().to_string() == "1");
  CHECK(poly({{5, 1}, {1, 1}}).to_string() == "A^5 + A");
  CHECK(poly({{-4, -1}, {-8, -1}}).to_string() == "-A^-4 - A^-8");
  CHECK(poly({{3, 2}, {0, -3}}).to_string() == "2A^3 - 3");
  CHECK(poly({{7, 1}, {3, 1}, {-1, 1}, {-9, -1}}).to_string() == "A^7 + A^3 + A^-1 - A^-9");
  CHECK(circle_poly().to_string() == "-A^2 - A^-2");

  CHECK(LaurentPoly().to_json() == "{}");
  CHECK(circle_poly().to_json() == "{\"-2\": -1, \"2\": -1}");
  CHECK(poly({{0, 5}}).to_json() == "{\"0\": 5}");
}
