#pragma once

#include <atomic>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kh/complex.hpp"

namespace kh {

/// Finitely generated abelian group: free rank plus torsion invariant
/// factors, each at least 2 and each dividing the next.
struct AbelianGroup {
  int free_rank = 0;
  std::vector<BigInt> torsion;

  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  bool operator==(const AbelianGroup&) const = default;

  /// "0", "Z", "Z^2", "Z_2", "Z+Z_2", ...
  std::string to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream out;
    bool first = true;
    if (free_rank > 0) {
      out << 'Z';
      if (free_rank > 1) out << '^' << free_rank;
      first = false;
    }
    for (const auto& d : torsion) {
      if (!first) out << '+';
      first = false;
      out << "Z_" << d.str();
    }
    return out.str();
  }
};

/// Homology groups keyed by bigrading; trivial gradings are omitted.
struct HomologyTable {
  std::map<std::pair<int, int>, AbelianGroup> groups;

  AbelianGroup at(int a, int b) const {
    auto it = groups.find({a, b});
    return it == groups.end() ? AbelianGroup{} : it->second;
  }

  bool operator==(const HomologyTable&) const = default;
};

inline bool tables_equal(const HomologyTable& x, const HomologyTable& y) { return x == y; }

/// True iff x at (a + da, b + db) equals y at (a, b) everywhere.
inline bool tables_shifted(const HomologyTable& x, const HomologyTable& y, int da, int db) {
  for (const auto& [key, g] : x.groups)
    if (y.at(key.first - da, key.second - db) != g) return false;
  for (const auto& [key, g] : y.groups)
    if (x.at(key.first + da, key.second + db) != g) return false;
  return true;
}

namespace detail {

/// Invariant-factor cache for the differentials of one b column.
struct ColumnWorker {
  const BigradedComplex& cx;
  std::map<std::pair<int, int>, std::vector<BigInt>> factors;

  const std::vector<BigInt>& invariants(int a, int b) {
    auto [it, fresh] = factors.try_emplace({a, b});
    if (!fresh) return it->second;
    if (const IntegerMatrix* m = cx.find_differential(a, b)) {
      if (m->rows() > 0 && m->cols() > 0) it->second = smith_invariants(*m);
    }
    return it->second;
  }

  void grading(int a, int b, std::map<std::pair<int, int>, AbelianGroup>& out) {
    int dim = cx.dim(a, b);
    const auto& out_inv = invariants(a, b);
    const auto& in_inv = invariants(a + 2, b);
    AbelianGroup g;
    g.free_rank = dim - static_cast<int>(out_inv.size()) - static_cast<int>(in_inv.size());
    if (g.free_rank < 0) throw std::logic_error("negative free rank; differential is broken");
    for (const auto& d : in_inv)
      if (d > 1) g.torsion.push_back(d);
    if (!g.is_trivial()) out.emplace(std::pair{a, b}, std::move(g));
  }
};

}  // namespace detail

/// Homology of the whole complex: at each grading, free rank
/// dim - rank(out) - rank(in) and torsion from the invariant factors of
/// the incoming differential. Work is partitioned by b columns; `threads`
/// caps the worker count.
inline HomologyTable compute_homology(const BigradedComplex& cx, int threads = 1) {
  std::map<int, std::vector<std::pair<int, int>>> columns;
  for (const auto& [key, basis] : cx.bases) columns[key.second].push_back(key);

  std::vector<std::vector<std::pair<int, int>>> jobs;
  jobs.reserve(columns.size());
  for (auto& [b, keys] : columns) jobs.push_back(std::move(keys));

  std::vector<std::map<std::pair<int, int>, AbelianGroup>> results(jobs.size());
  auto run_job = [&](size_t j) {
    detail::ColumnWorker worker{cx, {}};
    for (auto [a, b] : jobs[j]) worker.grading(a, b, results[j]);
  };

  if (threads <= 1 || jobs.size() <= 1) {
    for (size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
    std::atomic<size_t> next{0};
    auto work = [&] {
      for (size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1)) run_job(j);
    };
    std::vector<std::thread> pool;
    int count = std::min<int>(threads, static_cast<int>(jobs.size()));
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  HomologyTable table;
  for (auto& part : results) table.groups.insert(part.begin(), part.end());
  return table;
}

/// Reindexes a framed table to classical gradings via i = (w - a) / 2,
/// j = (3w - b) / 2 for writhe w. Parities must line up.
inline HomologyTable classical_table(const HomologyTable& framed, int w) {
  HomologyTable out;
  for (const auto& [key, g] : framed.groups) {
    auto [a, b] = key;
    if ((w - a) % 2 != 0 || (3 * w - b) % 2 != 0)
      throw std::invalid_argument("grading parity incompatible with writhe");
    out.groups.emplace(std::pair{(w - a) / 2, (3 * w - b) / 2}, g);
  }
  return out;
}

/// Alternating sum of free ranks, sum of (-1)^((b-a)/2) rank A^b. Equals
/// the bracket, like the chain-level Euler characteristic.
inline LaurentPoly euler_from_homology(const HomologyTable& t) {
  LaurentPoly total;
  for (const auto& [key, g] : t.groups) {
    auto [a, b] = key;
    if (g.free_rank == 0) continue;
    int tau = (b - a) / 2;
    BigInt coeff = g.free_rank;
    if (((tau % 2) + 2) % 2 == 1) coeff = -coeff;
    total += LaurentPoly::monomial(b, coeff);
  }
  return total;
}

/// Text grid: rows are the second grading descending, columns the first
/// grading ascending, trivial cells shown as ".".
inline std::string render_table(const HomologyTable& t, const std::string& row_label = "b",
                                const std::string& col_label = "a") {
  if (t.groups.empty()) return "(trivial)\n";
  std::set<int> avals, bvals;
  for (const auto& [key, g] : t.groups) {
    avals.insert(key.first);
    bvals.insert(key.second);
  }
  std::string corner = row_label + "\\" + col_label;

  std::map<int, size_t> width;
  for (int a : avals) width[a] = std::to_string(a).size();
  for (const auto& [key, g] : t.groups)
    width[key.first] = std::max(width[key.first], g.to_string().size());
  size_t label_width = corner.size();
  for (int b : bvals) label_width = std::max(label_width, std::to_string(b).size());

  std::ostringstream out;
  auto pad = [&](const std::string& s, size_t w) {
    for (size_t i = s.size(); i < w; ++i) out << ' ';
    out << s;
  };
  pad(corner, label_width);
  for (int a : avals) {
    out << "  ";
    pad(std::to_string(a), width[a]);
  }
  out << '\n';
  for (auto it = bvals.rbegin(); it != bvals.rend(); ++it) {
    pad(std::to_string(*it), label_width);
    for (int a : avals) {
      out << "  ";
      AbelianGroup g = t.at(a, *it);
      pad(g.is_trivial() ? "." : g.to_string(), width[a]);
    }
    out << '\n';
  }
  return out.str();
}

/// JSON array of {grading, free_rank, torsion} objects, ascending by
/// grading pair.
inline std::string render_json(const HomologyTable& t, const std::string& key_a = "a",
                               const std::string& key_b = "b") {
  std::ostringstream out;
  out << "[";
  bool first = true;
  for (const auto& [key, g] : t.groups) {
    if (!first) out << ",";
    first = false;
    out << "\n  {\"" << key_a << "\": " << key.first << ", \"" << key_b << "\": " << key.second
        << ", \"free_rank\": " << g.free_rank << ", \"torsion\": [";
    for (size_t i = 0; i < g.torsion.size(); ++i) {
      if (i) out << ", ";
      out << g.torsion[i].str();
    }
    out << "]}";
  }
  out << "\n]\n";
  return out.str();
}

/// CSV with header, torsion factors joined by ';'.
inline std::string render_csv(const HomologyTable& t, const std::string& key_a = "a",
                              const std::string& key_b = "b") {
  std::ostringstream out;
  out << key_a << ',' << key_b << ",free_rank,torsion\n";
  for (const auto& [key, g] : t.groups) {
    out << key.first << ',' << key.second << ',' << g.free_rank << ',';
    for (size_t i = 0; i < g.torsion.size(); ++i) {
      if (i) out << ';';
      out << g.torsion[i].str();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace kh
