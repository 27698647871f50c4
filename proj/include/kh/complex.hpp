#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kh/bracket.hpp"
#include "kh/integer_linalg.hpp"
#include "kh/resolution.hpp"

namespace kh {

/// Compact handle for an enhanced state of a fixed diagram. `markers` is
/// the state's position in enumerate_states order (bit n-1-i holds
/// crossing i, set for B); `signs` is the position in enhancement order
/// (bit c-1-i holds circle i, set for minus).
struct StateKey {
  std::uint32_t markers = 0;
  std::uint32_t signs = 0;

  auto operator<=>(const StateKey&) const = default;
};

inline StateKey key_of(const LinkDiagram& d, const EnhancedState& e) {
  int n = d.crossing_count();
  int c = static_cast<int>(e.signs.size());
  StateKey k;
  for (int i = 0; i < n; ++i)
    if (e.state.markers[i] == Marker::B) k.markers |= std::uint32_t{1} << (n - 1 - i);
  for (int i = 0; i < c; ++i)
    if (e.signs[i] == CircleSign::minus) k.signs |= std::uint32_t{1} << (c - 1 - i);
  return k;
}

inline EnhancedState state_of(const LinkDiagram& d, StateKey k) {
  int n = d.crossing_count();
  EnhancedState e;
  e.state.markers.resize(n);
  for (int i = 0; i < n; ++i)
    e.state.markers[i] = ((k.markers >> (n - 1 - i)) & 1) ? Marker::B : Marker::A;
  int c = smooth(d, e.state).count;
  e.signs.resize(c);
  for (int i = 0; i < c; ++i)
    e.signs[i] = ((k.signs >> (c - 1 - i)) & 1) ? CircleSign::minus : CircleSign::plus;
  return e;
}

/// Number of B-marked crossings ordered after v; the differential
/// coefficient is (-1) to this count.
inline int t_exponent(const KauffmanState& s, int v) {
  int t = 0;
  for (int w = v + 1; w < static_cast<int>(s.markers.size()); ++w)
    if (s.markers[w] == Marker::B) ++t;
  return t;
}

/// Whether `to` is incident to `from`: the states differ by a single
/// A-to-B flip, untouched circles (free loops included) keep their signs,
/// and the touched circles follow the fusion and split sign rules.
inline bool incident(const LinkDiagram& d, const EnhancedState& from, const EnhancedState& to) {
  int n = d.crossing_count();
  int v = -1;
  for (int i = 0; i < n; ++i)
    if (from.state.markers[i] != to.state.markers[i]) {
      if (v >= 0) return false;
      v = i;
    }
  if (v < 0) return false;
  if (from.state.markers[v] != Marker::A) return false;

  CircleSystem cs = smooth(d, from.state);
  CircleSystem ct = smooth(d, to.state);
  for (int j = 0; j < d.free_loops; ++j)
    if (from.signs[cs.arc_circles + j] != to.signs[ct.arc_circles + j]) return false;

  int a1 = cs.circle_of_slot(v, 0), a2 = cs.circle_of_slot(v, 2);
  int b1 = ct.circle_of_slot(v, 0), b2 = ct.circle_of_slot(v, 1);
  for (int c = 0; c < cs.arc_circles; ++c) {
    if (c == a1 || c == a2) continue;
    int img = ct.arc_circle.at(cs.min_arc[c]);
    if (img == b1 || img == b2) return false;
    if (from.signs[c] != to.signs[img]) return false;
  }

  if (a1 != a2) {
    // fusion
    if (b1 != b2) return false;
    bool p1 = from.signs[a1] == CircleSign::plus;
    bool p2 = from.signs[a2] == CircleSign::plus;
    if (p1 && p2) return false;
    return to.signs[b1] == ((p1 || p2) ? CircleSign::plus : CircleSign::minus);
  }
  // split
  if (b1 == b2) return false;
  if (from.signs[a1] == CircleSign::plus)
    return to.signs[b1] == CircleSign::plus && to.signs[b2] == CircleSign::plus;
  return to.signs[b1] != to.signs[b2];
}

/// The matrix entry of the differential between two enhanced states:
/// (-1)^t times the incidence number.
inline int differential_coefficient(const LinkDiagram& d, const EnhancedState& from,
                                    const EnhancedState& to) {
  if (!incident(d, from, to)) return 0;
  int v = 0;
  while (from.state.markers[v] == to.state.markers[v]) ++v;
  return (t_exponent(from.state, v) % 2 == 0) ? 1 : -1;
}

/// Basis of one chain group: the enhanced states of bigrading (a, b) in
/// enumeration order (ascending StateKey).
struct GradedBasis {
  int a = 0;
  int b = 0;
  std::vector<StateKey> states;

  int index_of(StateKey k) const {
    auto it = std::lower_bound(states.begin(), states.end(), k);
    if (it == states.end() || *it != k) return -1;
    return static_cast<int>(it - states.begin());
  }
};

/// The enhanced-state chain complex of a diagram. The differential keyed
/// by (a, b) maps C_{a,b} to C_{a-2,b}.
struct BigradedComplex {
  LinkDiagram diagram;
  std::map<std::pair<int, int>, GradedBasis> bases;
  std::map<std::pair<int, int>, IntegerMatrix> differentials;

  int dim(int a, int b) const {
    auto it = bases.find({a, b});
    return it == bases.end() ? 0 : static_cast<int>(it->second.states.size());
  }

  const GradedBasis* basis(int a, int b) const {
    auto it = bases.find({a, b});
    return it == bases.end() ? nullptr : &it->second;
  }

  const IntegerMatrix* find_differential(int a, int b) const {
    auto it = differentials.find({a, b});
    return it == differentials.end() ? nullptr : &it->second;
  }

  /// Copy of the differential out of (a, b), correctly sized even when no
  /// states live there.
  IntegerMatrix differential(int a, int b) const {
    if (const IntegerMatrix* m = find_differential(a, b)) return *m;
    return IntegerMatrix(dim(a - 2, b), dim(a, b));
  }
};

/// Builds bases and differentials for the whole diagram. Walks sources and
/// emits their incident targets directly; every coefficient is +-1. Throws
/// if some smoothing change fails to be a fusion or a split, which cannot
/// happen for diagrams of planar curves.
inline BigradedComplex build_complex(const LinkDiagram& d) {
  int n = d.crossing_count();
  if (n > 24) throw std::invalid_argument("too many crossings to build the complex");
  std::uint32_t num_states = std::uint32_t{1} << n;

  BigradedComplex cx;
  cx.diagram = d;

  std::vector<CircleSystem> systems;
  systems.reserve(num_states);
  {
    KauffmanState s;
    s.markers.resize(n);
    for (std::uint32_t x = 0; x < num_states; ++x) {
      for (int i = 0; i < n; ++i)
        s.markers[i] = ((x >> (n - 1 - i)) & 1) ? Marker::B : Marker::A;
      systems.push_back(smooth(d, s));
    }
  }

  for (std::uint32_t x = 0; x < num_states; ++x) {
    int c = systems[x].count;
    if (c > 30) throw std::invalid_argument("too many circles to enumerate enhancements");
    int a = n - 2 * std::popcount(x);
    for (std::uint32_t y = 0; y < (std::uint32_t{1} << c); ++y) {
      int tau = c - 2 * std::popcount(y);
      int b = a + 2 * tau;
      auto& basis = cx.bases[{a, b}];
      basis.a = a;
      basis.b = b;
      basis.states.push_back({x, y});
    }
  }

  for (const auto& [key, basis] : cx.bases) {
    auto [a, b] = key;
    cx.differentials.emplace(key, IntegerMatrix(cx.dim(a - 2, b), static_cast<int>(basis.states.size())));
  }

  struct Flip {
    std::uint32_t bit;        // marker bit of the flipped crossing
    bool fusion;
    int a1, a2;               // touched circles in the source system
    int b1, b2;               // touched circles in the target system
    int coeff;                // (-1)^t
    std::vector<int> map;     // untouched source circle -> target circle
  };

  std::map<std::pair<int, int>, int> next_col;
  std::vector<Flip> flips;
  for (std::uint32_t x = 0; x < num_states; ++x) {
    const CircleSystem& cs = systems[x];
    int c = cs.count;
    int a = n - 2 * std::popcount(x);

    flips.clear();
    for (int v = 0; v < n; ++v) {
      std::uint32_t bit = std::uint32_t{1} << (n - 1 - v);
      if (x & bit) continue;  // crossing already B
      const CircleSystem& ct = systems[x | bit];
      Flip f;
      f.bit = bit;
      f.a1 = cs.circle_of_slot(v, 0);
      f.a2 = cs.circle_of_slot(v, 2);
      f.b1 = ct.circle_of_slot(v, 0);
      f.b2 = ct.circle_of_slot(v, 1);
      f.fusion = (f.a1 != f.a2);
      if (f.fusion == (f.b1 != f.b2))
        throw std::invalid_argument("smoothing flip is neither fusion nor split");
      f.coeff = (std::popcount(x & (bit - 1)) % 2 == 0) ? 1 : -1;
      f.map.assign(c, -1);
      for (int i = 0; i < cs.arc_circles; ++i) {
        if (i == f.a1 || i == f.a2) continue;
        f.map[i] = ct.arc_circle.at(cs.min_arc[i]);
      }
      for (int j = 0; j < d.free_loops; ++j) f.map[cs.arc_circles + j] = ct.arc_circles + j;
      flips.push_back(std::move(f));
    }

    for (std::uint32_t y = 0; y < (std::uint32_t{1} << c); ++y) {
      int tau = c - 2 * std::popcount(y);
      int b = a + 2 * tau;
      int col = next_col[{a, b}]++;

      IntegerMatrix::Column entries;
      const GradedBasis* target_basis = cx.basis(a - 2, b);
      for (const Flip& f : flips) {
        const CircleSystem& ct = systems[x | f.bit];
        int c2 = ct.count;
        std::uint32_t base = 0;
        for (int i = 0; i < c; ++i)
          if (f.map[i] >= 0 && ((y >> (c - 1 - i)) & 1))
            base |= std::uint32_t{1} << (c2 - 1 - f.map[i]);

        auto sign_bit = [&](int circle) { return (y >> (c - 1 - circle)) & 1; };
        std::uint32_t tb1 = std::uint32_t{1} << (c2 - 1 - f.b1);
        std::uint32_t tb2 = std::uint32_t{1} << (c2 - 1 - f.b2);

        std::uint32_t targets[2];
        int count = 0;
        if (f.fusion) {
          bool m1 = sign_bit(f.a1), m2 = sign_bit(f.a2);
          if (m1 && m2)
            targets[count++] = base | tb1;  // minus circles fuse to minus
          else if (m1 || m2)
            targets[count++] = base;        // mixed signs fuse to plus
          // two plus circles are not incident
        } else {
          if (!sign_bit(f.a1)) {
            targets[count++] = base;        // plus splits to plus, plus
          } else {
            targets[count++] = base | tb2;  // minus splits both ways
            targets[count++] = base | tb1;
          }
        }
        for (int t = 0; t < count; ++t) {
          int row = target_basis->index_of({x | f.bit, targets[t]});
          entries.push_back({row, f.coeff});
        }
      }
      std::sort(entries.begin(), entries.end(),
                [](const auto& l, const auto& r) { return l.first < r.first; });
      cx.differentials.at({a, b}).fill_column(col, std::move(entries));
    }
  }
  return cx;
}

/// True iff every composite of consecutive differentials vanishes.
inline bool verify_dd_zero(const BigradedComplex& cx) {
  for (const auto& [key, mat] : cx.differentials) {
    auto [a, b] = key;
    const IntegerMatrix* next = cx.find_differential(a - 2, b);
    if (!next || mat.cols() == 0 || next->rows() == 0) continue;
    if (!((*next) * mat).is_zero()) return false;
  }
  return true;
}

/// One line per nonzero differential entry: `a b row col value`, gradings
/// in ascending (a, b) order, entries sorted by row then column.
inline std::string debug_dump(const BigradedComplex& cx) {
  std::ostringstream out;
  for (const auto& [key, mat] : cx.differentials) {
    auto [a, b] = key;
    for (const auto& [r, c, v] : mat.triplets())
      out << a << ' ' << b << ' ' << r << ' ' << c << ' ' << v.str() << '\n';
  }
  return out.str();
}

/// Graded Euler characteristic of the chain groups,
/// sum of (-1)^((b-a)/2) dim C_{a,b} A^b. Equals the bracket.
inline LaurentPoly euler_characteristic(const BigradedComplex& cx) {
  LaurentPoly total;
  for (const auto& [key, basis] : cx.bases) {
    auto [a, b] = key;
    int tau = (b - a) / 2;
    BigInt coeff = static_cast<int>(basis.states.size());
    if (((tau % 2) + 2) % 2 == 1) coeff = -coeff;
    total += LaurentPoly::monomial(b, coeff);
  }
  return total;
}

}  // namespace kh
