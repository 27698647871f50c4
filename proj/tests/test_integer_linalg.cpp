#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kh/integer_linalg.hpp"

using namespace kh;

namespace {

IntegerMatrix random_matrix(std::mt19937& rng, int max_dim = 6, int max_abs = 9) {
  std::uniform_int_distribution<int> dim(0, max_dim);
  std::uniform_int_distribution<int> val(-max_abs, max_abs);
  std::uniform_int_distribution<int> fill(0, 2);
  int r = dim(rng), c = dim(rng);
  IntegerMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (fill(rng) != 0) m.set(i, j, val(rng));
  return m;
}

void check_snf_contract(const IntegerMatrix& m) {
  SNFResult snf = smith_normal_form(m);

  CHECK(snf.U * m * snf.V == snf.S);
  CHECK(snf.U * snf.u_inv == IntegerMatrix::identity(m.rows()));
  CHECK(snf.u_inv * snf.U == IntegerMatrix::identity(m.rows()));
  CHECK(snf.V * snf.v_inv == IntegerMatrix::identity(m.cols()));
  CHECK(snf.v_inv * snf.V == IntegerMatrix::identity(m.cols()));

  const auto& f = snf.invariant_factors;
  for (size_t i = 0; i < f.size(); ++i) {
    CHECK(f[i] > 0);
    if (i + 1 < f.size()) CHECK(f[i + 1] % f[i] == 0);
  }
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      BigInt expect = (i == j && i < snf.rank()) ? f[i] : BigInt(0);
      CHECK(snf.S.get(i, j) == expect);
    }
}

}  // namespace

TEST_CASE("known normal forms") {
  auto inv = smith_normal_form(IntegerMatrix::from_rows({{2, 4}, {6, 8}})).invariant_factors;
  REQUIRE(inv.size() == 2);
  CHECK(inv[0] == 2);
  CHECK(inv[1] == 4);

  CHECK(smith_normal_form(IntegerMatrix::from_rows({{0}})).invariant_factors.empty());
  CHECK(smith_normal_form(IntegerMatrix::identity(3)).invariant_factors ==
        std::vector<BigInt>{1, 1, 1});

  auto diag = smith_normal_form(IntegerMatrix::from_rows({{4, 0}, {0, 6}})).invariant_factors;
  CHECK(diag == std::vector<BigInt>{2, 12});
}

TEST_CASE("normal form contract on random matrices") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 150; ++trial) check_snf_contract(random_matrix(rng));
}

TEST_CASE("degenerate shapes") {
  check_snf_contract(IntegerMatrix(0, 3));
  check_snf_contract(IntegerMatrix(3, 0));
  check_snf_contract(IntegerMatrix(0, 0));
  CHECK(rank(IntegerMatrix(0, 3)) == 0);
  CHECK(kernel_basis(IntegerMatrix(0, 3)) == IntegerMatrix::identity(3));
}

TEST_CASE("invariant factors ignore unimodular changes of basis") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    IntegerMatrix m = random_matrix(rng, 5, 6);
    auto base = smith_invariants(m);

    // swap two rows, add one column to another
    IntegerMatrix u = IntegerMatrix::identity(m.rows());
    if (m.rows() >= 2) {
      u.set(0, 0, 0);
      u.set(1, 1, 0);
      u.set(0, 1, 1);
      u.set(1, 0, 1);
    }
    IntegerMatrix v = IntegerMatrix::identity(m.cols());
    if (m.cols() >= 2) v.set(0, 1, 3);
    CHECK(smith_invariants(u * m * v) == base);
  }
}

TEST_CASE("sparse and dense engines agree") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    IntegerMatrix m = random_matrix(rng, 7, 9);
    CHECK(smith_invariants(m) == smith_normal_form(m).invariant_factors);
  }
}

TEST_CASE("kernel basis spans the kernel lattice") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    IntegerMatrix m = random_matrix(rng);
    IntegerMatrix k = kernel_basis(m);
    CHECK(k.rows() == m.cols());
    CHECK(k.cols() == m.cols() - rank(m));
    if (k.cols() > 0) CHECK((m * k).is_zero());
    CHECK(rank(k) == k.cols());
  }
}

TEST_CASE("membership in the column lattice") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coeff(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    IntegerMatrix m = random_matrix(rng);
    std::vector<BigInt> x(m.cols());
    for (auto& v : x) v = coeff(rng);
    std::vector<BigInt> target = m.apply(x);
    SolveResult res = solve_in_image(m, target);
    REQUIRE(res.solvable);
    CHECK(m.apply(res.x) == target);
  }

  IntegerMatrix two = IntegerMatrix::from_rows({{2}});
  CHECK_FALSE(solve_in_image(two, {BigInt(1)}).solvable);
  CHECK(solve_in_image(two, {BigInt(-6)}).solvable);

  IntegerMatrix wide = IntegerMatrix::from_rows({{1, 0}, {0, 2}, {0, 0}});
  CHECK_FALSE(solve_in_image(wide, {BigInt(0), BigInt(0), BigInt(1)}).solvable);
  CHECK_FALSE(solve_in_image(wide, {BigInt(0), BigInt(3), BigInt(0)}).solvable);
  CHECK(solve_in_image(wide, {BigInt(5), BigInt(4), BigInt(0)}).solvable);
}

TEST_CASE("arbitrary precision entries survive elimination") {
  BigInt big = BigInt(1) << 40;
  IntegerMatrix m(2, 2);
  m.set(0, 0, big);
  m.set(1, 1, 3);
  auto inv = smith_invariants(m);
  REQUIRE(inv.size() == 2);
  CHECK(inv[0] == 1);
  CHECK(inv[1] == big * 3);

  IntegerMatrix p = m * m;
  CHECK(p.get(0, 0) == big * big);
}

TEST_CASE("matrix plumbing") {
  IntegerMatrix m = IntegerMatrix::from_rows({{1, 0, -2}, {0, 3, 0}});
  CHECK(m.nnz() == 3);
  CHECK_FALSE(m.is_zero());
  CHECK(m.transpose().transpose() == m);
  CHECK(m.get(0, 2) == -2);
  CHECK(m.get(1, 0) == 0);

  auto trip = m.triplets();
  REQUIRE(trip.size() == 3);
  CHECK(trip[0] == std::tuple{0, 0, BigInt(1)});
  CHECK(trip[1] == std::tuple{0, 2, BigInt(-2)});
  CHECK(trip[2] == std::tuple{1, 1, BigInt(3)});

  CHECK(m.apply({BigInt(1), BigInt(1), BigInt(1)}) == std::vector<BigInt>{-1, 3});

  m.set(0, 0, 0);
  CHECK(m.nnz() == 2);

  IntegerMatrix f(2, 2);
  f.fill_column(0, {{0, BigInt(5)}});
  CHECK_THROWS_AS(f.fill_column(0, {{1, BigInt(2)}}), std::invalid_argument);
  CHECK_THROWS_AS(m.get(5, 0), std::out_of_range);
  CHECK_THROWS_AS(IntegerMatrix::from_rows({{1, 2}, {3}}), std::invalid_argument);
  CHECK_THROWS_AS(IntegerMatrix(2, 2) * IntegerMatrix(3, 3), std::invalid_argument);
}
