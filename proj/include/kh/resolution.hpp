#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kh/diagram.hpp"

namespace kh {

/// One marker per crossing, indexed like the diagram's crossing list.
struct KauffmanState {
  std::vector<Marker> markers;

  bool operator==(const KauffmanState&) const = default;
};

/// sigma = (number of A markers) - (number of B markers).
inline int sigma(const KauffmanState& s) {
  int a = 0;
  for (Marker m : s.markers) a += (m == Marker::A) ? 1 : -1;
  return a;
}

/// The circles obtained by smoothing every crossing of a diagram per a
/// state. Circle ids are canonical: arc-bearing circles first, ordered by
/// their smallest arc label, then the diagram's free loops in order.
struct CircleSystem {
  int count = 0;         // total number of circles
  int arc_circles = 0;   // how many carry arcs; free loops take ids arc_circles..count-1
  std::vector<int> slot_circle;   // 4*crossing + slot -> circle id
  std::map<ArcId, int> arc_circle;
  std::vector<ArcId> min_arc;     // canonical key per arc-bearing circle

  int circle_of_slot(int v, int s) const { return slot_circle[4 * v + s]; }
};

/// Computes the circle system of a state by joining slot endpoints: each
/// arc glues its two occurrences, each marker glues the smoothing pairs.
inline CircleSystem smooth(const LinkDiagram& d, const KauffmanState& s) {
  int n = d.crossing_count();
  if (static_cast<int>(s.markers.size()) != n)
    throw std::invalid_argument("state size does not match crossing count");

  std::vector<int> parent(4 * n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int x, int y) { parent[find(x)] = find(y); };

  for (auto& [arc, occ] : arc_occurrences(d)) {
    (void)arc;
    unite(4 * occ[0].first + occ[0].second, 4 * occ[1].first + occ[1].second);
  }
  for (int v = 0; v < n; ++v) {
    if (s.markers[v] == Marker::A) {
      unite(4 * v + 0, 4 * v + 1);
      unite(4 * v + 2, 4 * v + 3);
    } else {
      unite(4 * v + 0, 4 * v + 3);
      unite(4 * v + 1, 4 * v + 2);
    }
  }

  // Canonical ids: sort classes by their minimum arc label.
  std::map<int, ArcId> class_min;
  for (int v = 0; v < n; ++v)
    for (int sl = 0; sl < 4; ++sl) {
      ArcId a = d.crossings[v].slots[sl];
      int root = find(4 * v + sl);
      auto [it, fresh] = class_min.try_emplace(root, a);
      if (!fresh) it->second = std::min(it->second, a);
    }
  std::vector<std::pair<ArcId, int>> ordered;  // (min arc, root)
  for (auto& [root, m] : class_min) ordered.push_back({m, root});
  std::sort(ordered.begin(), ordered.end());

  CircleSystem cs;
  cs.arc_circles = static_cast<int>(ordered.size());
  cs.count = cs.arc_circles + d.free_loops;
  cs.slot_circle.assign(4 * n, -1);
  std::map<int, int> id_of_root;
  for (int i = 0; i < cs.arc_circles; ++i) {
    id_of_root[ordered[i].second] = i;
    cs.min_arc.push_back(ordered[i].first);
  }
  for (int v = 0; v < n; ++v)
    for (int sl = 0; sl < 4; ++sl) {
      cs.slot_circle[4 * v + sl] = id_of_root[find(4 * v + sl)];
      cs.arc_circle[d.crossings[v].slots[sl]] = cs.slot_circle[4 * v + sl];
    }
  return cs;
}

/// All Kauffman states, ordered like binary counting with crossing 0 as
/// the most significant digit and A < B. State 0 is all-A.
inline std::vector<KauffmanState> enumerate_states(const LinkDiagram& d) {
  int n = d.crossing_count();
  if (n > 24) throw std::invalid_argument("too many crossings to enumerate states");
  std::vector<KauffmanState> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t x = 0; x < (std::uint32_t{1} << n); ++x) {
    KauffmanState s;
    s.markers.resize(n);
    for (int i = 0; i < n; ++i)
      s.markers[i] = ((x >> (n - 1 - i)) & 1) ? Marker::B : Marker::A;
    out.push_back(std::move(s));
  }
  return out;
}

enum class CircleSign : std::uint8_t { plus, minus };

/// A Kauffman state with a sign attached to every circle of its smoothing,
/// signs listed in canonical circle order.
struct EnhancedState {
  KauffmanState state;
  std::vector<CircleSign> signs;

  bool operator==(const EnhancedState&) const = default;
};

/// tau = (number of + circles) - (number of - circles).
inline int tau(const EnhancedState& e) {
  int t = 0;
  for (CircleSign c : e.signs) t += (c == CircleSign::plus) ? 1 : -1;
  return t;
}

/// The bigrading (a, b) of an enhanced state: a = sigma, b = sigma + 2 tau.
inline std::pair<int, int> bigrading(const EnhancedState& e) {
  int a = sigma(e.state);
  return {a, a + 2 * tau(e)};
}

/// Streams every enhanced state in canonical order: states as in
/// enumerate_states, sign vectors per state ordered like binary counting
/// with circle 0 most significant and + < -.
template <typename F>
void for_each_enhanced(const LinkDiagram& d, F&& f) {
  for (const auto& s : enumerate_states(d)) {
    CircleSystem cs = smooth(d, s);
    int c = cs.count;
    if (c > 30) throw std::invalid_argument("too many circles to enumerate signs");
    for (std::uint32_t y = 0; y < (std::uint32_t{1} << c); ++y) {
      EnhancedState e;
      e.state = s;
      e.signs.resize(c);
      for (int i = 0; i < c; ++i)
        e.signs[i] = ((y >> (c - 1 - i)) & 1) ? CircleSign::minus : CircleSign::plus;
      f(static_cast<const EnhancedState&>(e));
    }
  }
}

inline std::vector<EnhancedState> enumerate_enhanced(const LinkDiagram& d) {
  std::vector<EnhancedState> out;
  for_each_enhanced(d, [&](const EnhancedState& e) { out.push_back(e); });
  return out;
}

}  // namespace kh
