#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kh {

/// Positive identifier of a diagram arc. Every arc occurs exactly twice
/// among the crossing slots of a valid diagram; crossingless circles are
/// tracked by a free-loop counter and contribute no arcs.
using ArcId = int;

/// One crossing, encoded by its four arc slots listed counterclockwise
/// starting at the incoming under-strand. Slots 0 and 2 carry the
/// under-strand, slots 1 and 3 the over-strand. The A-smoothing joins
/// slot 0 with slot 1 and slot 2 with slot 3; the B-smoothing joins
/// slot 0 with slot 3 and slot 1 with slot 2.
struct Crossing {
  std::array<ArcId, 4> slots{};

  bool operator==(const Crossing&) const = default;
};

/// Unoriented link diagram: an ordered crossing list (the position in the
/// list is the crossing index used by every ordering-sensitive sign) plus
/// a count of crossingless circle components.
struct LinkDiagram {
  std::vector<Crossing> crossings;
  int free_loops = 0;

  bool operator==(const LinkDiagram&) const = default;

  int crossing_count() const { return static_cast<int>(crossings.size()); }

  /// Sorted list of distinct arc identifiers.
  std::vector<ArcId> arcs() const {
    std::set<ArcId> seen;
    for (const auto& c : crossings)
      for (ArcId a : c.slots) seen.insert(a);
    return {seen.begin(), seen.end()};
  }

  ArcId max_arc() const {
    ArcId m = 0;
    for (const auto& c : crossings)
      for (ArcId a : c.slots) m = std::max(m, a);
    return m;
  }
};

/// Error raised by the PD parser, carrying a 1-based source position.
struct ParseError : std::runtime_error {
  int line = 0;
  int column = 0;
  ParseError(const std::string& msg, int line_, int column_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                           std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
};

/// (crossing index, slot index) pairs per arc, in scan order: crossings by
/// index, slots 0..3 within a crossing.
inline std::map<ArcId, std::vector<std::pair<int, int>>> arc_occurrences(const LinkDiagram& d) {
  std::map<ArcId, std::vector<std::pair<int, int>>> occ;
  for (int v = 0; v < d.crossing_count(); ++v)
    for (int s = 0; s < 4; ++s) occ[d.crossings[v].slots[s]].push_back({v, s});
  return occ;
}

/// Checks arc incidence (every arc exactly twice), positivity of labels and
/// the free-loop count. Throws std::invalid_argument on violation.
inline void validate(const LinkDiagram& d) {
  if (d.free_loops < 0) throw std::invalid_argument("free_loops must be non-negative");
  for (const auto& c : d.crossings)
    for (ArcId a : c.slots)
      if (a <= 0) throw std::invalid_argument("arc labels must be positive");
  for (const auto& [arc, occ] : arc_occurrences(d))
    if (occ.size() != 2)
      throw std::invalid_argument("arc " + std::to_string(arc) + " occurs " +
                                  std::to_string(occ.size()) + " times, expected 2");
}

/// Parses the PD text format: `X a b c d` declares a crossing (slots
/// counterclockwise from the incoming under-strand), `L k` adds k free
/// loops, `#` starts a comment, blank lines are ignored. Crossing order
/// equals file order.
inline LinkDiagram parse_pd(const std::string& text) {
  LinkDiagram d;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);

    // Tokenize, remembering 1-based start columns.
    std::vector<std::pair<std::string, int>> tokens;
    for (size_t i = 0; i < line.size();) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      tokens.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
      i = j;
    }
    if (tokens.empty()) continue;

    auto parse_int = [&](size_t k) {
      const auto& [tok, col] = tokens[k];
      size_t pos = 0;
      long value = 0;
      try {
        value = std::stol(tok, &pos);
      } catch (const std::exception&) {
        throw ParseError("expected integer, got '" + tok + "'", lineno, col);
      }
      if (pos != tok.size()) throw ParseError("expected integer, got '" + tok + "'", lineno, col);
      return static_cast<int>(value);
    };

    const auto& [head, head_col] = tokens[0];
    if (head == "X") {
      if (tokens.size() != 5)
        throw ParseError("X takes exactly four arc labels", lineno, head_col);
      Crossing c;
      for (int s = 0; s < 4; ++s) {
        int a = parse_int(s + 1);
        if (a <= 0) throw ParseError("arc labels must be positive", lineno, tokens[s + 1].second);
        c.slots[s] = a;
      }
      d.crossings.push_back(c);
    } else if (head == "L") {
      if (tokens.size() != 2) throw ParseError("L takes exactly one count", lineno, head_col);
      int k = parse_int(1);
      if (k < 0) throw ParseError("free-loop count must be non-negative", lineno, tokens[1].second);
      d.free_loops += k;
    } else {
      throw ParseError("unknown directive '" + head + "'", lineno, head_col);
    }
  }
  validate(d);
  return d;
}

inline std::string emit_pd(const LinkDiagram& d) {
  std::ostringstream out;
  for (const auto& c : d.crossings)
    out << "X " << c.slots[0] << ' ' << c.slots[1] << ' ' << c.slots[2] << ' ' << c.slots[3]
        << '\n';
  if (d.free_loops > 0) out << "L " << d.free_loops << '\n';
  return out.str();
}

/// Closure of the 2-strand braid with n positive crossings: the standard
/// T(2,n) diagram. Crossing i has slots (r_i, r_{i+1}, l_{i+1}, l_i) with
/// l_i = 2i+1 and r_i = 2i+2, indices cyclic. n = 1 is a one-kink unknot.
inline LinkDiagram torus_diagram(int n) {
  if (n < 1) throw std::invalid_argument("torus_diagram requires n >= 1");
  LinkDiagram d;
  auto l = [n](int i) { return 2 * (i % n) + 1; };
  auto r = [n](int i) { return 2 * (i % n) + 2; };
  for (int i = 0; i < n; ++i)
    d.crossings.push_back(Crossing{{r(i), r(i + 1), l(i + 1), l(i)}});
  validate(d);
  return d;
}

/// Unknot diagram with |k| kinks of sign(k); k = 0 is the crossingless
/// circle. Positive kinks put the curl arc on the slot-0/slot-1 pair,
/// negative kinks on the slot-1/slot-2 pair.
inline LinkDiagram framed_unknot(int k) {
  LinkDiagram d;
  if (k == 0) {
    d.free_loops = 1;
    return d;
  }
  int count = std::abs(k);
  auto m = [count](int i) { return 2 * (i % count) + 1; };
  auto c = [](int i) { return 2 * i + 2; };
  for (int i = 0; i < count; ++i) {
    if (k > 0)
      d.crossings.push_back(Crossing{{c(i), c(i), m(i + 1), m(i)}});
    else
      d.crossings.push_back(Crossing{{m(i), c(i), c(i), m(i + 1)}});
  }
  validate(d);
  return d;
}

/// Inserts one kink of the given sign on an existing arc; the new crossing
/// is appended last in the ordering.
inline LinkDiagram apply_r1(const LinkDiagram& d, ArcId arc, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("kink sign must be +1 or -1");
  auto occ = arc_occurrences(d);
  auto it = occ.find(arc);
  if (it == occ.end()) throw std::invalid_argument("unknown arc " + std::to_string(arc));
  LinkDiagram out = d;
  ArcId b = out.max_arc() + 1;
  ArcId c = b + 1;
  auto [v, s] = it->second[1];
  out.crossings[v].slots[s] = b;
  if (sign > 0)
    out.crossings.push_back(Crossing{{c, c, b, arc}});
  else
    out.crossings.push_back(Crossing{{arc, c, c, b}});
  validate(out);
  return out;
}

/// Kink variant for a crossingless circle: consumes one free loop and
/// produces the 1-crossing curl diagram for it.
inline LinkDiagram apply_r1_loop(const LinkDiagram& d, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("kink sign must be +1 or -1");
  if (d.free_loops < 1) throw std::invalid_argument("no free loop to kink");
  LinkDiagram out = d;
  out.free_loops -= 1;
  ArcId b = out.max_arc() + 1;
  ArcId c = b + 1;
  if (sign > 0)
    out.crossings.push_back(Crossing{{c, c, b, b}});
  else
    out.crossings.push_back(Crossing{{b, c, c, b}});
  validate(out);
  return out;
}

/// Mirror image: every crossing swaps its under- and over-strand, which
/// rotates the slot tuple one step (the old over-in endpoint becomes the
/// incoming under-strand).
inline LinkDiagram mirror(const LinkDiagram& d) {
  LinkDiagram out = d;
  for (auto& c : out.crossings) c.slots = {c.slots[3], c.slots[0], c.slots[1], c.slots[2]};
  return out;
}

/// Same diagram with crossings listed in a new order; perm[i] is the old
/// index of the crossing placed at position i.
inline LinkDiagram reorder_crossings(const LinkDiagram& d, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != d.crossing_count())
    throw std::invalid_argument("permutation size mismatch");
  std::vector<bool> seen(perm.size(), false);
  LinkDiagram out;
  out.free_loops = d.free_loops;
  for (int old : perm) {
    if (old < 0 || old >= d.crossing_count() || seen[old])
      throw std::invalid_argument("not a permutation of crossing indices");
    seen[old] = true;
    out.crossings.push_back(d.crossings[old]);
  }
  return out;
}

/// Relabels arcs (and reorders crossings) by breadth-first traversal from
/// crossing 0, restarting at the lowest-index unvisited crossing per
/// component. Two diagrams that differ only by arc names and a consistent
/// traversal order get equal canonical forms.
inline LinkDiagram canonical_form(const LinkDiagram& d) {
  auto occ = arc_occurrences(d);
  int k = d.crossing_count();
  std::vector<bool> visited(k, false);
  std::vector<int> order;
  order.reserve(k);
  for (int root = 0; root < k; ++root) {
    if (visited[root]) continue;
    std::queue<int> q;
    q.push(root);
    visited[root] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      order.push_back(v);
      for (int s = 0; s < 4; ++s) {
        for (auto [w, ws] : occ[d.crossings[v].slots[s]]) {
          if (!visited[w]) {
            visited[w] = true;
            q.push(w);
          }
        }
      }
    }
  }
  std::map<ArcId, ArcId> relabel;
  LinkDiagram out;
  out.free_loops = d.free_loops;
  ArcId next = 1;
  for (int v : order) {
    Crossing c;
    for (int s = 0; s < 4; ++s) {
      ArcId a = d.crossings[v].slots[s];
      auto [it, fresh] = relabel.try_emplace(a, next);
      if (fresh) ++next;
      c.slots[s] = it->second;
    }
    out.crossings.push_back(c);
  }
  return out;
}

inline bool canonically_equal(const LinkDiagram& a, const LinkDiagram& b) {
  return canonical_form(a) == canonical_form(b);
}

/// Result of removing one crossing by smoothing it: the rewritten diagram,
/// the surviving-arc relabeling, and the arcs of each strand closed into a
/// fresh free loop (loop j becomes free-loop index old_free_loops + j).
struct SmoothedCrossing {
  LinkDiagram diagram;
  std::map<ArcId, ArcId> arc_map;            // old arc -> new label; absent if closed away
  std::vector<std::vector<ArcId>> closed_loops;  // old arcs of each newly closed circle
};

enum class Marker : std::uint8_t { A, B };

/// Rewrites the diagram with crossing v replaced by its A- or B-smoothing,
/// merging the joined arcs. A strand that closes up with no remaining
/// crossing becomes a free loop.
inline SmoothedCrossing smooth_crossing(const LinkDiagram& d, int v, Marker m) {
  if (v < 0 || v >= d.crossing_count()) throw std::invalid_argument("invalid crossing index");
  const auto& slots = d.crossings[v].slots;
  std::array<std::pair<ArcId, ArcId>, 2> joins;
  if (m == Marker::A)
    joins = {{{slots[0], slots[1]}, {slots[2], slots[3]}}};
  else
    joins = {{{slots[0], slots[3]}, {slots[1], slots[2]}}};

  // Union-find over the (at most four) arcs incident to v.
  std::map<ArcId, ArcId> parent;
  for (ArcId a : slots) parent.emplace(a, a);
  auto find = [&](ArcId a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (auto [x, y] : joins) parent[find(x)] = find(y);

  // Group the incident arcs into merge classes.
  std::map<ArcId, std::vector<ArcId>> classes;
  for (auto& [a, p] : parent) classes[find(a)].push_back(a);

  // Occurrences of each class outside crossing v decide survival.
  SmoothedCrossing out;
  out.diagram.free_loops = d.free_loops;
  std::map<ArcId, ArcId> label;  // involved arc -> new label (or 0 if closed)
  for (auto& [root, members] : classes) {
    std::sort(members.begin(), members.end());
    int external = 0;
    for (int w = 0; w < d.crossing_count(); ++w) {
      if (w == v) continue;
      for (ArcId a : d.crossings[w].slots)
        if (parent.count(a) && find(a) == find(root)) ++external;
    }
    if (external == 0) {
      out.diagram.free_loops += 1;
      out.closed_loops.push_back(members);
    } else {
      ArcId fresh = members.front();
      for (ArcId a : members) label[a] = fresh;
    }
  }

  for (int w = 0; w < d.crossing_count(); ++w) {
    if (w == v) continue;
    Crossing c = d.crossings[w];
    for (auto& a : c.slots)
      if (auto it = label.find(a); it != label.end()) a = it->second;
    out.diagram.crossings.push_back(c);
  }

  for (ArcId a : d.arcs()) {
    if (auto it = label.find(a); it != label.end())
      out.arc_map[a] = it->second;
    else if (!parent.count(a))
      out.arc_map[a] = a;
    // arcs in a closed class are absent from arc_map
  }
  validate(out.diagram);
  return out;
}

// ---------------------------------------------------------------------------
// Orientation overlay and writhe

/// Direction of an arc relative to its two occurrences in scan order:
/// forward means the head (inflow end) is the second occurrence.
enum class Direction : std::uint8_t { forward, backward };

struct OrientedDiagram {
  LinkDiagram base;
  std::map<ArcId, Direction> arc_directions;
};

namespace detail {

/// True iff the directed arc flows into the crossing at occurrence `which`
/// (0 = first, 1 = second) of its two endpoints.
inline bool inflow_at(Direction dir, int which) {
  return (dir == Direction::forward) ? which == 1 : which == 0;
}

}  // namespace detail

/// Validates that the direction assignment is consistent through both
/// strands of every crossing and returns the oriented diagram.
inline OrientedDiagram oriented(const LinkDiagram& d, const std::map<ArcId, Direction>& dirs) {
  auto occ = arc_occurrences(d);
  for (auto& [arc, places] : occ)
    if (!dirs.count(arc))
      throw std::invalid_argument("arc " + std::to_string(arc) + " has no direction");

  auto inflow = [&](int v, int s) {
    ArcId a = d.crossings[v].slots[s];
    const auto& places = occ[a];
    int which = (places[0] == std::pair<int, int>{v, s}) ? 0 : 1;
    return detail::inflow_at(dirs.at(a), which);
  };
  for (int v = 0; v < d.crossing_count(); ++v) {
    if (inflow(v, 0) == inflow(v, 2) || inflow(v, 1) == inflow(v, 3))
      throw std::invalid_argument("inconsistent orientation at crossing " + std::to_string(v));
  }
  return OrientedDiagram{d, dirs};
}

/// Parses `O arcId +|-` overlay lines (comments and blanks as in PD files).
inline std::map<ArcId, Direction> parse_orientation(const std::string& text) {
  std::map<ArcId, Direction> dirs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head != "O") throw ParseError("unknown directive '" + head + "'", lineno, 1);
    int arc = 0;
    std::string flag;
    if (!(ls >> arc >> flag) || arc <= 0 || (flag != "+" && flag != "-"))
      throw ParseError("expected 'O arcId +|-'", lineno, 1);
    dirs[arc] = (flag == "+") ? Direction::forward : Direction::backward;
  }
  return dirs;
}

/// Orients every component by strand traversal, seeding each component at
/// its smallest arc with direction forward. For knots the choice of seed
/// direction does not affect the writhe.
inline OrientedDiagram orient_by_traversal(const LinkDiagram& d) {
  auto occ = arc_occurrences(d);
  std::map<ArcId, Direction> dirs;
  for (auto& [seed, places] : occ) {
    if (dirs.count(seed)) continue;
    ArcId arc = seed;
    Direction dir = Direction::forward;
    while (true) {
      dirs[arc] = dir;
      // Walk through the crossing at the arc's head.
      auto head = occ[arc][dir == Direction::forward ? 1 : 0];
      auto [v, s] = head;
      int t = (s + 2) % 4;  // partner slot on the same strand
      ArcId next = d.crossings[v].slots[t];
      auto& nplaces = occ[next];
      int which = (nplaces[0] == std::pair<int, int>{v, t}) ? 0 : 1;
      // The next arc's tail is at (v, t): head at the other occurrence.
      Direction ndir = (which == 0) ? Direction::forward : Direction::backward;
      if (dirs.count(next)) {
        if (dirs[next] != ndir)
          throw std::invalid_argument("strand traversal produced inconsistent directions");
        break;
      }
      arc = next;
      dir = ndir;
    }
  }
  return oriented(d, dirs);
}

/// The coherent braid-closure orientation of torus_diagram(n): both
/// strands flow upward through every crossing.
inline OrientedDiagram torus_braid_orientation(int n) {
  LinkDiagram d = torus_diagram(n);
  auto occ = arc_occurrences(d);
  std::map<ArcId, Direction> dirs;
  for (auto& [arc, places] : occ) {
    // Upward flow: each arc's head is its under-in (slot 0) or over-in
    // (slot 3) endpoint.
    int head_which = -1;
    for (int which = 0; which < 2; ++which) {
      int s = places[which].second;
      if (s == 0 || s == 3) head_which = which;
    }
    dirs[arc] = (head_which == 1) ? Direction::forward : Direction::backward;
  }
  return oriented(d, dirs);
}

/// Sign of an oriented crossing: +1 iff the under-strand flows slot0 to
/// slot2 and the over-strand flows slot3 to slot1, or both are reversed.
inline int crossing_sign(const OrientedDiagram& od, int v) {
  const auto& d = od.base;
  auto occ = arc_occurrences(d);
  auto inflow = [&](int s) {
    ArcId a = d.crossings[v].slots[s];
    const auto& places = occ[a];
    int which = (places[0] == std::pair<int, int>{v, s}) ? 0 : 1;
    return detail::inflow_at(od.arc_directions.at(a), which);
  };
  int under = inflow(0) ? 1 : -1;
  int over = inflow(3) ? 1 : -1;
  return under * over;
}

/// Writhe: the sum of crossing signs. Reversing every component at once
/// preserves it; reversing a single component of a link does not.
inline int writhe(const OrientedDiagram& od) {
  int w = 0;
  for (int v = 0; v < od.base.crossing_count(); ++v) w += crossing_sign(od, v);
  return w;
}

}  // namespace kh
