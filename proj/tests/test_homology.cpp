#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "kh/homology.hpp"

using namespace kh;

namespace {

LinkDiagram fixture(const char* name) {
  std::ifstream f(std::string(FIXTURE_DIR) + "/" + name);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_pd(ss.str());
}

void z(HomologyTable& t, int a, int b) { t.groups[{a, b}] = AbelianGroup{1, {}}; }
void z2(HomologyTable& t, int a, int b) { t.groups[{a, b}] = AbelianGroup{0, {2}}; }

HomologyTable trefoil_table() {
  HomologyTable t;
  z(t, 3, 7);
  z(t, 3, 3);
  z(t, -1, -1);
  z(t, -3, -9);
  z2(t, -3, -5);
  return t;
}

HomologyTable of(const LinkDiagram& d, int threads = 1) {
  return compute_homology(build_complex(d), threads);
}

}  // namespace

TEST_CASE("homology of the one-kink unknots") {
  for (int k : {-2, -1, 0, 1, 2}) {
    HomologyTable expect;
    z(expect, k, 3 * k + 2);
    z(expect, k, 3 * k - 2);
    CHECK(of(framed_unknot(k)) == expect);
  }
}

TEST_CASE("homology of the hopf diagram") {
  HomologyTable expect;
  z(expect, 2, 6);
  z(expect, 2, 2);
  z(expect, -2, -2);
  z(expect, -2, -6);
  CHECK(of(torus_diagram(2)) == expect);
}

TEST_CASE("homology of the trefoil diagram") {
  CHECK(of(fixture("trefoil.pd")) == trefoil_table());
}

TEST_CASE("homology of the four and five crossing torus diagrams") {
  HomologyTable four;
  z(four, 4, 4);
  z(four, 4, 8);
  z(four, 0, 0);
  z(four, -2, -8);
  z(four, -4, -8);
  z(four, -4, -12);
  z2(four, -2, -4);
  CHECK(of(torus_diagram(4)) == four);

  HomologyTable five;
  z(five, 5, 5);
  z(five, 5, 9);
  z(five, 1, 1);
  z(five, -1, -7);
  z(five, -3, -7);
  z(five, -5, -15);
  z2(five, -1, -3);
  z2(five, -5, -11);
  CHECK(of(torus_diagram(5)) == five);
}

TEST_CASE("homology does not depend on the crossing order") {
  HomologyTable base = trefoil_table();
  LinkDiagram t = fixture("trefoil.pd");
  CHECK(of(reorder_crossings(t, {2, 0, 1})) == base);
  CHECK(of(reorder_crossings(t, {1, 0, 2})) == base);

  LinkDiagram f8 = fixture("fig8.pd");
  CHECK(of(reorder_crossings(f8, {3, 2, 1, 0})) == of(f8));
}

TEST_CASE("kink moves shift the support") {
  LinkDiagram t = fixture("trefoil.pd");
  HomologyTable base = of(t);
  CHECK(tables_shifted(of(apply_r1(t, 1, +1)), base, +1, +3));
  CHECK(tables_shifted(of(apply_r1(t, 1, -1)), base, -1, -3));
  CHECK(tables_shifted(of(framed_unknot(1)), of(framed_unknot(0)), +1, +3));
}

TEST_CASE("cancelling pair and triangle moves preserve the table") {
  CHECK(of(fixture("trefoil_r2.pd")) == trefoil_table());
  CHECK(of(fixture("r3_a.pd")) == of(fixture("r3_b.pd")));
}

TEST_CASE("table shift comparison is exact") {
  HomologyTable base = trefoil_table();
  CHECK(tables_shifted(base, base, 0, 0));
  CHECK_FALSE(tables_shifted(base, base, 2, 0));
  CHECK(tables_equal(base, trefoil_table()));
}

TEST_CASE("classical regrading") {
  HomologyTable classical = classical_table(trefoil_table(), 3);
  HomologyTable expect;
  expect.groups[{0, 1}] = AbelianGroup{1, {}};
  expect.groups[{0, 3}] = AbelianGroup{1, {}};
  expect.groups[{2, 5}] = AbelianGroup{1, {}};
  expect.groups[{3, 9}] = AbelianGroup{1, {}};
  expect.groups[{3, 7}] = AbelianGroup{0, {2}};
  CHECK(classical == expect);

  CHECK_THROWS_AS(classical_table(trefoil_table(), 2), std::invalid_argument);
}

TEST_CASE("free ranks recover the bracket") {
  for (const char* name : {"trefoil.pd", "fig8.pd", "hopf.pd"}) {
    LinkDiagram d = fixture(name);
    CHECK(euler_from_homology(of(d)) == bracket_state_sum(d));
  }
}

TEST_CASE("worker count does not change the result") {
  BigradedComplex cx = build_complex(torus_diagram(4));
  CHECK(compute_homology(cx, 4) == compute_homology(cx, 1));
}

TEST_CASE("a broken differential is reported, not silently absorbed") {
  BigradedComplex cx;
  for (int a : {2, 0, -2}) {
    GradedBasis basis;
    basis.a = a;
    basis.b = 0;
    basis.states.push_back(StateKey{0, 0});
    cx.bases.emplace(std::pair{a, 0}, std::move(basis));
  }
  IntegerMatrix one(1, 1);
  one.set(0, 0, 1);
  cx.differentials.emplace(std::pair{2, 0}, one);
  cx.differentials.emplace(std::pair{0, 0}, one);
  CHECK_THROWS_AS(compute_homology(cx), std::logic_error);
}

TEST_CASE("group formatting") {
  CHECK(AbelianGroup{}.to_string() == "0");
  CHECK(AbelianGroup{1, {}}.to_string() == "Z");
  CHECK(AbelianGroup{2, {}}.to_string() == "Z^2");
  CHECK(AbelianGroup{0, {2}}.to_string() == "Z_2");
  CHECK(AbelianGroup{1, {2}}.to_string() == "Z+Z_2");
  CHECK(AbelianGroup{0, {2, 4}}.to_string() == "Z_2+Z_4");
}

TEST_CASE("table rendering") {
  CHECK(render_table(trefoil_table()) ==
        "b\\a   -3  -1  3\n"
        "  7    .   .  Z\n"
        "  3    .   .  Z\n"
        " -1    .   Z  .\n"
        " -5  Z_2   .  .\n"
        " -9    Z   .  .\n");
  CHECK(render_table(HomologyTable{}) == "(trivial)\n");

  HomologyTable classical = classical_table(trefoil_table(), 3);
  std::string grid = render_table(classical, "j", "i");
  CHECK(grid.find("j\\i") == 0);
}

TEST_CASE("json and csv rendering") {
  HomologyTable hopf;
  z(hopf, 2, 6);
  z(hopf, 2, 2);
  z(hopf, -2, -2);
  z(hopf, -2, -6);
  CHECK(render_json(hopf) ==
        "[\n"
        "  {\"a\": -2, \"b\": -6, \"free_rank\": 1, \"torsion\": []},\n"
        "  {\"a\": -2, \"b\": -2, \"free_rank\": 1, \"torsion\": []},\n"
        "  {\"a\": 2, \"b\": 2, \"free_rank\": 1, \"torsion\": []},\n"
        "  {\"a\": 2, \"b\": 6, \"free_rank\": 1, \"torsion\": []}\n"
        "]\n");

  CHECK(render_csv(trefoil_table()) ==
        "a,b,free_rank,torsion\n"
        "-3,-9,1,\n"
        "-3,-5,0,2\n"
        "-1,-1,1,\n"
        "3,3,1,\n"
        "3,7,1,\n");

  HomologyTable torsion;
  torsion.groups[{0, 0}] = AbelianGroup{1, {2, 4}};
  CHECK(render_csv(torsion) == "a,b,free_rank,torsion\n0,0,1,2;4\n");
  CHECK(render_json(torsion).find("\"torsion\": [2, 4]") != std::string::npos);
}
