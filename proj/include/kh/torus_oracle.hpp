#pragma once

#include <stdexcept>
#include <utility>

#include "kh/homology.hpp"

namespace kh {

/// Closed-form homology of the standard T(2,n) diagram (n positive
/// crossings, writhe n), n >= 1. The clauses overlap at (-n, -3n) for odd
/// n; gradings are collected as a set, so the group there stays Z.
inline HomologyTable torus_kh(int n) {
  if (n < 1) throw std::invalid_argument("torus_kh requires n >= 1");
  HomologyTable t;
  auto z = [&](int a, int b) { t.groups.insert({{a, b}, AbelianGroup{1, {}}}); };
  auto z2 = [&](int a, int b) { t.groups.insert({{a, b}, AbelianGroup{0, {2}}}); };

  z(n, n);
  if (n >= 2) z(-n, -3 * n);
  for (int s = 0; s <= n; s += 2) z(n - 2 * s, n - 4 * s + 4);
  for (int s = 3; s <= n; s += 2) z(n - 2 * s, n - 4 * s);
  for (int s = 3; s <= n; s += 2) z2(n - 2 * s, n - 4 * s + 4);
  return t;
}

/// Homology of the k-kink unknot diagram: Z at (k, 3k+2) and (k, 3k-2).
inline HomologyTable framed_unknot_kh(int k) {
  HomologyTable t;
  t.groups.insert({{k, 3 * k + 2}, AbelianGroup{1, {}}});
  t.groups.insert({{k, 3 * k - 2}, AbelianGroup{1, {}}});
  return t;
}

/// Degree of the connecting map probed at connecting_probe_grading(n):
/// multiplication by 2 for odd n, zero for even n.
inline int predicted_connecting_degree(int n) {
  if (n < 2) throw std::invalid_argument("predicted_connecting_degree requires n >= 2");
  return (n % 2 == 1) ? 2 : 0;
}

/// Parent bigrading at which the connecting map of the last crossing of
/// T(2,n) runs between two infinite cyclic groups: the quotient side is
/// the top nontrivial group of the T(2,n-1) column.
inline std::pair<int, int> connecting_probe_grading(int n) {
  if (n < 3) throw std::invalid_argument("connecting_probe_grading requires n >= 3");
  return {2 - n, 4 - 3 * n};
}

}  // namespace kh
