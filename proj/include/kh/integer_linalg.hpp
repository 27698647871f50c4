#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kh {

using BigInt = boost::multiprecision::cpp_int;

/// Sparse integer matrix, stored per column as sorted (row, value) pairs
/// with no explicit zeros. Arithmetic is exact.
class IntegerMatrix {
 public:
  using Column = std::vector<std::pair<int, BigInt>>;

  IntegerMatrix() = default;
  IntegerMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  }

  static IntegerMatrix identity(int n) {
    IntegerMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.data_[i].push_back({i, 1});
    return m;
  }

  /// Dense row-major construction, mainly for tests and small fixtures.
  static IntegerMatrix from_rows(const std::vector<std::vector<long long>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    IntegerMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rows[i].size()) != c)
        throw std::invalid_argument("ragged row lengths");
      for (int j = 0; j < c; ++j)
        if (rows[i][j] != 0) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const Column& column(int c) const { return data_.at(c); }

  void set(int r, int c, BigInt v) {
    check_index(r, c);
    auto& col = data_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const auto& e, int row) { return e.first < row; });
    if (it != col.end() && it->first == r) {
      if (v == 0)
        col.erase(it);
      else
        it->second = std::move(v);
    } else if (v != 0) {
      col.insert(it, {r, std::move(v)});
    }
  }

  BigInt get(int r, int c) const {
    check_index(r, c);
    const auto& col = data_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const auto& e, int row) { return e.first < row; });
    if (it != col.end() && it->first == r) return it->second;
    return 0;
  }

  /// Appends entries to an empty column; entries must be sorted by row and
  /// nonzero. The column must not have been written yet.
  void fill_column(int c, Column entries) {
    if (c < 0 || c >= cols_) throw std::out_of_range("matrix index out of range");
    if (!data_[c].empty()) throw std::invalid_argument("column already filled");
    for (const auto& [r, v] : entries)
      if (r < 0 || r >= rows_) throw std::out_of_range("matrix index out of range");
    data_[c] = std::move(entries);
  }

  long long nnz() const {
    long long t = 0;
    for (const auto& col : data_) t += static_cast<long long>(col.size());
    return t;
  }

  bool is_zero() const { return nnz() == 0; }

  IntegerMatrix transpose() const {
    IntegerMatrix t(cols_, rows_);
    for (int c = 0; c < cols_; ++c)
      for (const auto& [r, v] : data_[c]) t.data_[r].push_back({c, v});
    return t;
  }

  IntegerMatrix operator*(const IntegerMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("dimension mismatch in product");
    IntegerMatrix p(rows_, o.cols_);
    for (int j = 0; j < o.cols_; ++j) {
      std::unordered_map<int, BigInt> acc;
      for (const auto& [k, v] : o.data_[j])
        for (const auto& [r, w] : data_[k]) acc[r] += v * w;
      Column col;
      for (auto& [r, v] : acc)
        if (v != 0) col.push_back({r, std::move(v)});
      std::sort(col.begin(), col.end());
      p.data_[j] = std::move(col);
    }
    return p;
  }

  std::vector<BigInt> apply(const std::vector<BigInt>& x) const {
    if (static_cast<int>(x.size()) != cols_)
      throw std::invalid_argument("dimension mismatch in apply");
    std::vector<BigInt> y(rows_, 0);
    for (int c = 0; c < cols_; ++c)
      for (const auto& [r, v] : data_[c]) y[r] += v * x[c];
    return y;
  }

  /// Entries sorted by (row, column).
  std::vector<std::tuple<int, int, BigInt>> triplets() const {
    std::vector<std::tuple<int, int, BigInt>> out;
    for (int c = 0; c < cols_; ++c)
      for (const auto& [r, v] : data_[c]) out.push_back({r, c, v});
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) {
                return std::pair{std::get<0>(x), std::get<1>(x)} <
                       std::pair{std::get<0>(y), std::get<1>(y)};
              });
    return out;
  }

  bool operator==(const IntegerMatrix&) const = default;

 private:
  void check_index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
      throw std::out_of_range("matrix index out of range");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Column> data_;
};

inline BigInt big_abs(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

/// Diagonalization U * M * V = S with unimodular U, V. S holds the
/// invariant factors (positive, each dividing the next) on its diagonal.
struct SNFResult {
  IntegerMatrix U, S, V;
  IntegerMatrix u_inv, v_inv;
  std::vector<BigInt> invariant_factors;

  int rank() const { return static_cast<int>(invariant_factors.size()); }
};

namespace detail {

/// Textbook elimination on a dense copy, tracking all four transform
/// matrices. Pivot choice: minimal |value|, ties broken by lowest row,
/// then lowest column. Meant for small matrices; the sparse engine below
/// handles the large homology differentials.
class DenseSmith {
 public:
  explicit DenseSmith(const IntegerMatrix& M)
      : m(M.rows()),
        n(M.cols()),
        a(m, std::vector<BigInt>(n, 0)),
        U(dense_identity(m)),
        Ui(dense_identity(m)),
        V(dense_identity(n)),
        Vi(dense_identity(n)) {
    for (int c = 0; c < n; ++c)
      for (const auto& [r, v] : M.column(c)) a[r][c] = v;
  }

  SNFResult run() {
    int k = 0;
    while (true) {
      auto pivot = find_pivot(k);
      if (!pivot) break;
      auto [pr, pc] = *pivot;
      if (pr != k) row_swap(k, pr);
      if (pc != k) col_swap(k, pc);
      reduce_at(k);
      ++k;
    }
    for (int i = 0; i < k; ++i)
      if (a[i][i] < 0) row_neg(i);
    enforce_divisibility(k);

    SNFResult res;
    res.U = to_matrix(U);
    res.u_inv = to_matrix(Ui);
    res.V = to_matrix(V);
    res.v_inv = to_matrix(Vi);
    res.S = IntegerMatrix(m, n);
    for (int i = 0; i < k; ++i) {
      res.S.set(i, i, a[i][i]);
      res.invariant_factors.push_back(a[i][i]);
    }
    return res;
  }

 private:
  static std::vector<std::vector<BigInt>> dense_identity(int s) {
    std::vector<std::vector<BigInt>> id(s, std::vector<BigInt>(s, 0));
    for (int i = 0; i < s; ++i) id[i][i] = 1;
    return id;
  }

  static IntegerMatrix to_matrix(const std::vector<std::vector<BigInt>>& d) {
    int r = static_cast<int>(d.size());
    int c = r ? static_cast<int>(d[0].size()) : 0;
    IntegerMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (d[i][j] != 0) m.set(i, j, d[i][j]);
    return m;
  }

  std::optional<std::pair<int, int>> find_pivot(int k) const {
    std::optional<std::pair<int, int>> best;
    BigInt best_abs = 0;
    for (int i = k; i < m; ++i)
      for (int j = k; j < n; ++j) {
        if (a[i][j] == 0) continue;
        BigInt v = big_abs(a[i][j]);
        if (!best || v < best_abs) {
          best = {{i, j}};
          best_abs = v;
        }
      }
    return best;
  }

  void reduce_at(int k) {
    while (true) {
      bool moved = false;
      for (int i = k + 1; i < m; ++i) {
        if (a[i][k] == 0) continue;
        BigInt q = a[i][k] / a[k][k];
        if (q != 0) row_add(i, k, -q);
        if (a[i][k] != 0) {
          row_swap(k, i);  // remainder is strictly smaller, adopt as pivot
          moved = true;
        }
      }
      if (moved) continue;
      for (int j = k + 1; j < n; ++j) {
        if (a[k][j] == 0) continue;
        BigInt q = a[k][j] / a[k][k];
        if (q != 0) col_add(j, k, -q);
        if (a[k][j] != 0) {
          col_swap(k, j);
          moved = true;
        }
      }
      if (!moved) return;
    }
  }

  void enforce_divisibility(int rank) {
    bool again = true;
    while (again) {
      again = false;
      for (int i = 0; i + 1 < rank; ++i)
        if (a[i + 1][i + 1] % a[i][i] != 0) {
          fix_pair(i, i + 1);
          again = true;
        }
    }
  }

  /// Replaces diag entries (x, y) at positions (i, j) by (gcd, lcm) via
  /// unimodular operations.
  void fix_pair(int i, int j) {
    row_add(i, j, 1);  // brings y into position (i, j)
    while (a[i][j] != 0) {
      BigInt q = a[i][i] / a[i][j];
      if (q != 0) col_add(i, j, -q);
      if (a[i][j] != 0) col_swap(i, j);
    }
    if (a[i][i] < 0) row_neg(i);
    if (a[j][i] != 0) row_add(j, i, -a[j][i] / a[i][i]);
    if (a[j][j] < 0) row_neg(j);
  }

  // Elementary operations, mirrored into the transform matrices so that
  // U * M0 * V stays equal to the working matrix.
  void row_add(int i, int p, const BigInt& f) {
    for (int j = 0; j < n; ++j) a[i][j] += f * a[p][j];
    for (int j = 0; j < m; ++j) U[i][j] += f * U[p][j];
    for (int r = 0; r < m; ++r) Ui[r][p] -= f * Ui[r][i];
  }
  void row_swap(int i, int p) {
    std::swap(a[i], a[p]);
    std::swap(U[i], U[p]);
    for (int r = 0; r < m; ++r) std::swap(Ui[r][i], Ui[r][p]);
  }
  void row_neg(int i) {
    for (auto& v : a[i]) v = -v;
    for (auto& v : U[i]) v = -v;
    for (int r = 0; r < m; ++r) Ui[r][i] = -Ui[r][i];
  }
  void col_add(int j, int c, const BigInt& f) {
    for (int r = 0; r < m; ++r) a[r][j] += f * a[r][c];
    for (int r = 0; r < n; ++r) V[r][j] += f * V[r][c];
    for (int s = 0; s < n; ++s) Vi[c][s] -= f * Vi[j][s];
  }
  void col_swap(int j, int c) {
    for (int r = 0; r < m; ++r) std::swap(a[r][j], a[r][c]);
    for (int r = 0; r < n; ++r) std::swap(V[r][j], V[r][c]);
    std::swap(Vi[j], Vi[c]);
  }

  int m, n;
  std::vector<std::vector<BigInt>> a;
  std::vector<std::vector<BigInt>> U, Ui, V, Vi;
};

/// Sparse elimination that only tracks the diagonal. Prefers +-1 pivots
/// in a cheapest-fill order (lazy Markowitz heap), then falls back to
/// minimal-|value| pivots for whatever remains.
class SparseSmith {
 public:
  explicit SparseSmith(const IntegerMatrix& M)
      : m(M.rows()), n(M.cols()), rows(m), cols(n), row_done(m, false), col_done(n, false) {
    for (int c = 0; c < n; ++c)
      for (const auto& [r, v] : M.column(c)) {
        rows[r].emplace(c, v);
        cols[c].insert(r);
      }
  }

  std::vector<BigInt> run() {
    for (int r = 0; r < m; ++r)
      for (const auto& [c, v] : rows[r])
        if (big_abs(v) == 1) push_unit(r, c);
    unit_phase();
    general_phase();
    normalize();
    return diag;
  }

 private:
  using HeapEntry = std::tuple<long long, int, int>;  // fill cost, row, col

  void push_unit(int r, int c) {
    long long cost = static_cast<long long>(rows[r].size() - 1) *
                     static_cast<long long>(cols[c].size() - 1);
    heap.push({cost, r, c});
  }

  void unit_phase() {
    while (!heap.empty()) {
      auto [cost, r, c] = heap.top();
      heap.pop();
      if (row_done[r] || col_done[c]) continue;
      auto it = rows[r].find(c);
      if (it == rows[r].end() || big_abs(it->second) != 1) continue;
      long long fresh = static_cast<long long>(rows[r].size() - 1) *
                        static_cast<long long>(cols[c].size() - 1);
      if (fresh > cost && !heap.empty() && fresh > std::get<0>(heap.top())) {
        heap.push({fresh, r, c});
        continue;
      }
      eliminate_unit(r, c);
    }
  }

  void eliminate_unit(int r, int c) {
    BigInt p = rows[r].at(c);  // +-1
    std::vector<int> below(cols[c].begin(), cols[c].end());
    std::sort(below.begin(), below.end());
    for (int i : below) {
      if (i == r) continue;
      BigInt f = rows[i].at(c) * p;
      row_axpy(i, r, -f);
    }
    for (const auto& [j, v] : rows[r]) cols[j].erase(r);
    rows[r].clear();
    row_done[r] = true;
    col_done[c] = true;
    diag.push_back(1);
  }

  /// row_i += f * row_p, maintaining the column index and feeding fresh
  /// unit entries to the heap.
  void row_axpy(int i, int p, const BigInt& f) {
    for (const auto& [j, v] : rows[p]) {
      auto it = rows[i].find(j);
      if (it == rows[i].end()) {
        BigInt nv = f * v;
        if (nv != 0) {
          cols[j].insert(i);
          if (big_abs(nv) == 1) {
            rows[i].emplace(j, std::move(nv));
            push_unit(i, j);
          } else {
            rows[i].emplace(j, std::move(nv));
          }
        }
      } else {
        it->second += f * v;
        if (it->second == 0) {
          rows[i].erase(it);
          cols[j].erase(i);
        } else if (big_abs(it->second) == 1) {
          push_unit(i, j);
        }
      }
    }
  }

  void general_phase() {
    while (true) {
      int br = -1, bc = -1;
      BigInt best;
      for (int r = 0; r < m; ++r) {
        if (row_done[r]) continue;
        for (const auto& [c, v] : rows[r]) {
          BigInt av = big_abs(v);
          if (br < 0 || av < best || (av == best && (r < br || (r == br && c < bc)))) {
            best = av;
            br = r;
            bc = c;
          }
        }
      }
      if (br < 0) break;
      isolate_pivot(br, bc);
    }
  }

  void isolate_pivot(int r, int c) {
    while (true) {
      bool improved = false;
      BigInt p = rows[r].at(c);
      std::vector<int> in_col(cols[c].begin(), cols[c].end());
      std::sort(in_col.begin(), in_col.end());
      for (int i : in_col) {
        if (i == r) continue;
        BigInt q = rows[i].at(c) / p;
        if (q != 0) row_axpy(i, r, -q);
        auto it = rows[i].find(c);
        if (it != rows[i].end() && big_abs(it->second) < big_abs(p)) {
          r = i;
          p = it->second;
          improved = true;
        }
      }
      if (improved) continue;
      // Column c is clean, so a column operation with pivot column c only
      // touches row r; run the row reduction in place. Once the pivot
      // moves to a new column that guarantee is gone, so restart there.
      std::vector<std::pair<int, BigInt>> entries(rows[r].begin(), rows[r].end());
      std::sort(entries.begin(), entries.end());
      for (const auto& [j, v] : entries) {
        if (j == c) continue;
        BigInt q = v / p;
        BigInt nv = v - q * p;
        if (nv == 0) {
          rows[r].erase(j);
          cols[j].erase(r);
        } else {
          rows[r][j] = nv;
          c = j;
          p = nv;
          improved = true;
          break;
        }
      }
      if (!improved && rows[r].size() == 1 && cols[c].size() == 1) break;
    }
    diag.push_back(big_abs(rows[r].at(c)));
    rows[r].clear();
    cols[c].clear();
    row_done[r] = true;
    col_done[c] = true;
  }

  /// Pairwise gcd/lcm passes until the divisibility chain holds; valid
  /// because a diagonal matrix is equivalent to the chain-normalized one.
  void normalize() {
    bool again = true;
    while (again) {
      again = false;
      for (size_t i = 0; i + 1 < diag.size(); ++i)
        if (diag[i + 1] % diag[i] != 0) {
          BigInt g = gcd(diag[i], diag[i + 1]);
          diag[i + 1] = diag[i] / g * diag[i + 1];
          diag[i] = g;
          again = true;
        }
    }
  }

  int m, n;
  std::vector<std::unordered_map<int, BigInt>> rows;
  std::vector<std::unordered_set<int>> cols;
  std::vector<bool> row_done, col_done;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
  std::vector<BigInt> diag;
};

}  // namespace detail

/// Full Smith normal form with transforms. Intended for matrices small
/// enough for dense elimination.
inline SNFResult smith_normal_form(const IntegerMatrix& M) {
  return detail::DenseSmith(M).run();
}

/// Invariant factors only, computed sparsely. Agrees with
/// smith_normal_form(M).invariant_factors.
inline std::vector<BigInt> smith_invariants(const IntegerMatrix& M) {
  return detail::SparseSmith(M).run();
}

inline int rank(const IntegerMatrix& M) {
  return static_cast<int>(smith_invariants(M).size());
}

/// Columns form a basis of the integer kernel lattice of M.
inline IntegerMatrix kernel_basis(const IntegerMatrix& M) {
  SNFResult snf = smith_normal_form(M);
  int n = M.cols();
  int r = snf.rank();
  IntegerMatrix K(n, n - r);
  for (int j = r; j < n; ++j) {
    IntegerMatrix::Column col;
    for (int i = 0; i < n; ++i) {
      BigInt v = snf.V.get(i, j);
      if (v != 0) col.push_back({i, std::move(v)});
    }
    K.fill_column(j - r, std::move(col));
  }
  return K;
}

struct SolveResult {
  bool solvable = false;
  std::vector<BigInt> x;  // a solution of M x = target when solvable
};

/// Decides membership of `target` in the column lattice of M and produces
/// a witness. Exact; no rational arithmetic involved.
inline SolveResult solve_in_image(const IntegerMatrix& M, const std::vector<BigInt>& target) {
  if (static_cast<int>(target.size()) != M.rows())
    throw std::invalid_argument("target size mismatch");
  SNFResult snf = smith_normal_form(M);
  std::vector<BigInt> y = snf.U.apply(target);
  int r = snf.rank();
  std::vector<BigInt> t(M.cols(), 0);
  for (int i = 0; i < M.rows(); ++i) {
    if (i < r) {
      if (y[i] % snf.invariant_factors[i] != 0) return {};
      t[i] = y[i] / snf.invariant_factors[i];
    } else if (y[i] != 0) {
      return {};
    }
  }
  SolveResult res;
  res.solvable = true;
  res.x = snf.V.apply(t);
  return res;
}

}  // namespace kh
