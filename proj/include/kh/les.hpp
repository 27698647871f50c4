#pragma once

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kh/complex.hpp"
#include "kh/homology.hpp"

namespace kh {

namespace detail {

inline std::optional<std::vector<BigInt>> solve_with_snf(const SNFResult& snf, int cols,
                                                         const std::vector<BigInt>& target) {
  std::vector<BigInt> y = snf.U.apply(target);
  int r = snf.rank();
  std::vector<BigInt> s(cols, 0);
  for (int i = 0; i < static_cast<int>(y.size()); ++i) {
    if (i < r) {
      if (y[i] % snf.invariant_factors[i] != 0) return std::nullopt;
      s[i] = y[i] / snf.invariant_factors[i];
    } else if (y[i] != 0) {
      return std::nullopt;
    }
  }
  return snf.V.apply(s);
}

}  // namespace detail

/// Presentation of one homology group ker/im inside its chain group, with
/// chain representatives for a minimal generator list and coordinates for
/// arbitrary cycles. Generators of order 1 are dropped; order 0 means
/// infinite.
class GradedPresentation {
 public:
  GradedPresentation() = default;

  /// `out` is the differential leaving the grading, `in` the one entering.
  GradedPresentation(int dim, const IntegerMatrix& out, const IntegerMatrix& in) : dim_(dim) {
    kernel_ = kernel_basis(out);
    k_ = kernel_.cols();
    kernel_snf_ = smith_normal_form(kernel_);

    IntegerMatrix p(k_, in.cols());
    for (int j = 0; j < in.cols(); ++j) {
      std::vector<BigInt> t(dim_, 0);
      for (const auto& [r, v] : in.column(j)) t[r] = v;
      auto sol = detail::solve_with_snf(kernel_snf_, k_, t);
      if (!sol) throw std::logic_error("incoming image does not lie in the kernel");
      for (int i = 0; i < k_; ++i)
        if ((*sol)[i] != 0) p.set(i, j, (*sol)[i]);
    }

    SNFResult ps = smith_normal_form(p);
    u_p_ = ps.U;
    std::vector<BigInt> all(k_, 0);
    for (int i = 0; i < ps.rank(); ++i) all[i] = ps.invariant_factors[i];
    for (int i = 0; i < k_; ++i)
      if (all[i] != 1) {
        kept_.push_back(i);
        orders_.push_back(all[i]);
      }

    IntegerMatrix reps = kernel_ * ps.u_inv;
    gens_ = IntegerMatrix(dim_, static_cast<int>(kept_.size()));
    for (size_t g = 0; g < kept_.size(); ++g) {
      IntegerMatrix::Column col;
      for (int r = 0; r < dim_; ++r) {
        BigInt v = reps.get(r, kept_[g]);
        if (v != 0) col.push_back({r, std::move(v)});
      }
      gens_.fill_column(static_cast<int>(g), std::move(col));
    }
  }

  int chain_dim() const { return dim_; }
  int generators() const { return static_cast<int>(kept_.size()); }
  const std::vector<BigInt>& orders() const { return orders_; }

  AbelianGroup group() const {
    AbelianGroup g;
    for (const auto& d : orders_) {
      if (d == 0)
        ++g.free_rank;
      else
        g.torsion.push_back(d);
    }
    return g;
  }

  std::vector<BigInt> representative(int i) const {
    std::vector<BigInt> chain(dim_, 0);
    for (const auto& [r, v] : gens_.column(i)) chain[r] = v;
    return chain;
  }

  /// Coordinates of a cycle in the generator list, torsion coordinates
  /// reduced into [0, order). Throws if the chain is not a cycle.
  std::vector<BigInt> express(const std::vector<BigInt>& cycle) const {
    auto sol = detail::solve_with_snf(kernel_snf_, k_, cycle);
    if (!sol) throw std::invalid_argument("chain is not a cycle");
    std::vector<BigInt> y = u_p_.apply(*sol);
    std::vector<BigInt> coords(kept_.size(), 0);
    for (size_t g = 0; g < kept_.size(); ++g) {
      coords[g] = y[kept_[g]];
      if (orders_[g] != 0) coords[g] = ((coords[g] % orders_[g]) + orders_[g]) % orders_[g];
    }
    return coords;
  }

 private:
  int dim_ = 0;
  int k_ = 0;
  IntegerMatrix kernel_;
  SNFResult kernel_snf_;
  IntegerMatrix u_p_;
  IntegerMatrix gens_;
  std::vector<BigInt> orders_;
  std::vector<int> kept_;
};

inline GradedPresentation presentation_at(const BigradedComplex& cx, int a, int b) {
  return GradedPresentation(cx.dim(a, b), cx.differential(a, b), cx.differential(a + 2, b));
}

/// A map on homology written in the generator coordinates of two
/// presentations, with its rank after tensoring with Q.
struct InducedMap {
  IntegerMatrix matrix;
  int q_rank = 0;
};

/// Computes the induced map of a chain-level f: source grading -> target
/// grading. Verifies that generator images are cycles (express would fail
/// otherwise) and that source boundaries land in target boundaries.
inline InducedMap induced_map(const GradedPresentation& src, const GradedPresentation& tgt,
                              const std::function<std::vector<BigInt>(const std::vector<BigInt>&)>& f,
                              const IntegerMatrix& src_in, const IntegerMatrix& tgt_in) {
  for (int j = 0; j < src_in.cols(); ++j) {
    std::vector<BigInt> chain(src_in.rows(), 0);
    for (const auto& [r, v] : src_in.column(j)) chain[r] = v;
    if (!solve_in_image(tgt_in, f(chain)).solvable)
      throw std::logic_error("chain map does not respect boundaries");
  }

  InducedMap out;
  out.matrix = IntegerMatrix(tgt.generators(), src.generators());
  for (int i = 0; i < src.generators(); ++i) {
    std::vector<BigInt> coords = tgt.express(f(src.representative(i)));
    for (int r = 0; r < tgt.generators(); ++r)
      if (coords[r] != 0) out.matrix.set(r, i, coords[r]);
  }

  // Rank over Q: torsion generators die, so restrict to free rows and
  // columns.
  std::vector<int> free_rows, free_cols;
  for (int r = 0; r < tgt.generators(); ++r)
    if (tgt.orders()[r] == 0) free_rows.push_back(r);
  for (int c = 0; c < src.generators(); ++c)
    if (src.orders()[c] == 0) free_cols.push_back(c);
  IntegerMatrix fm(static_cast<int>(free_rows.size()), static_cast<int>(free_cols.size()));
  for (size_t c = 0; c < free_cols.size(); ++c)
    for (size_t r = 0; r < free_rows.size(); ++r) {
      BigInt v = out.matrix.get(free_rows[r], free_cols[c]);
      if (v != 0) fm.set(static_cast<int>(r), static_cast<int>(c), std::move(v));
    }
  out.q_rank = rank(fm);
  return out;
}

/// Relation lattice of a presentation's generators: one column d_i e_i per
/// torsion generator.
inline IntegerMatrix lattice_matrix(const std::vector<BigInt>& orders) {
  int g = static_cast<int>(orders.size());
  int t = 0;
  for (const auto& d : orders)
    if (d != 0) ++t;
  IntegerMatrix L(g, t);
  int c = 0;
  for (int i = 0; i < g; ++i)
    if (orders[i] != 0) L.set(i, c++, orders[i]);
  return L;
}

/// Integral injectivity: every class with image in the target relation
/// lattice must itself be a source relation.
inline bool induced_injective(const InducedMap& f, const GradedPresentation& src,
                              const GradedPresentation& tgt) {
  int g1 = src.generators();
  IntegerMatrix l2 = lattice_matrix(tgt.orders());
  IntegerMatrix m(tgt.generators(), g1 + l2.cols());
  for (int c = 0; c < g1; ++c)
    for (const auto& [r, v] : f.matrix.column(c)) m.set(r, c, v);
  for (int c = 0; c < l2.cols(); ++c)
    for (const auto& [r, v] : l2.column(c)) m.set(r, g1 + c, -v);

  IntegerMatrix k = kernel_basis(m);
  IntegerMatrix l1 = lattice_matrix(src.orders());
  for (int j = 0; j < k.cols(); ++j) {
    std::vector<BigInt> x(g1, 0);
    for (const auto& [r, v] : k.column(j))
      if (r < g1) x[r] = v;
    if (!solve_in_image(l1, x).solvable) return false;
  }
  return true;
}

/// Integral surjectivity: image columns and target relations together span
/// the full generator lattice.
inline bool induced_surjective(const InducedMap& f, const GradedPresentation& tgt) {
  int g2 = tgt.generators();
  IntegerMatrix l2 = lattice_matrix(tgt.orders());
  IntegerMatrix m(g2, f.matrix.cols() + l2.cols());
  for (int c = 0; c < f.matrix.cols(); ++c)
    for (const auto& [r, v] : f.matrix.column(c)) m.set(r, c, v);
  for (int c = 0; c < l2.cols(); ++c)
    for (const auto& [r, v] : l2.column(c)) m.set(r, f.matrix.cols() + c, v);
  auto inv = smith_invariants(m);
  if (static_cast<int>(inv.size()) != g2) return false;
  for (const auto& d : inv)
    if (d != 1) return false;
  return true;
}

/// The short exact decomposition of a complex at one crossing: the
/// subcomplex of states with a B marker there, the quotient of states with
/// an A marker, both graded by the parent bigrading.
struct ComplexSplit {
  int crossing = 0;
  BigradedComplex parent;
  BigradedComplex sub;
  BigradedComplex quotient;
  std::map<std::pair<int, int>, std::vector<int>> sub_rows, quot_rows;
};

namespace detail {

/// Transports one Kauffman state across smooth_crossing: compressed marker
/// mask for the smaller diagram plus the circle correspondence.
struct StateTransport {
  std::uint32_t markers = 0;
  std::vector<int> circle_map;
};

inline StateTransport transport_state(const LinkDiagram& d, const SmoothedCrossing& sm, int v,
                                      std::uint32_t markers) {
  int n = d.crossing_count();
  std::uint32_t low = (std::uint32_t{1} << (n - 1 - v)) - 1;
  StateTransport t;
  t.markers = ((markers >> (n - v)) << (n - 1 - v)) | (markers & low);

  KauffmanState s;
  s.markers.resize(n);
  for (int i = 0; i < n; ++i)
    s.markers[i] = ((markers >> (n - 1 - i)) & 1) ? Marker::B : Marker::A;
  CircleSystem cs = smooth(d, s);

  KauffmanState s2;
  s2.markers.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i)
    s2.markers[i] = ((t.markers >> (n - 2 - i)) & 1) ? Marker::B : Marker::A;
  CircleSystem ct = smooth(sm.diagram, s2);

  if (cs.count != ct.count)
    throw std::logic_error("smoothing the marked crossing changed the circle count");

  std::vector<std::vector<ArcId>> members(cs.arc_circles);
  for (const auto& [arc, c] : cs.arc_circle) members[c].push_back(arc);

  t.circle_map.assign(cs.count, -1);
  for (int c = 0; c < cs.arc_circles; ++c) {
    int img = -1;
    for (ArcId arc : members[c]) {
      auto it = sm.arc_map.find(arc);
      if (it != sm.arc_map.end()) {
        img = ct.arc_circle.at(it->second);
        break;
      }
    }
    if (img < 0) {
      // Entirely closed away: find which fresh free loop it became.
      for (size_t j = 0; j < sm.closed_loops.size(); ++j)
        if (std::find(members[c].begin(), members[c].end(), sm.closed_loops[j][0]) !=
            members[c].end())
          img = ct.arc_circles + d.free_loops + static_cast<int>(j);
      if (img < 0) throw std::logic_error("lost a circle while transporting a state");
    }
    t.circle_map[c] = img;
  }
  for (int j = 0; j < d.free_loops; ++j) t.circle_map[cs.arc_circles + j] = ct.arc_circles + j;
  return t;
}

/// Checks that `part` matches the complex of the smoothed diagram under
/// the grading shift (da, db) and the per-state sign twist.
inline void verify_identification(const LinkDiagram& d, int v, const BigradedComplex& part,
                                  const SmoothedCrossing& sm, const BigradedComplex& small,
                                  int da, int db, bool twisted) {
  int n = d.crossing_count();
  std::map<std::uint32_t, StateTransport> cache;
  auto transport = [&](std::uint32_t markers) -> const StateTransport& {
    auto it = cache.find(markers);
    if (it == cache.end()) it = cache.emplace(markers, transport_state(d, sm, v, markers)).first;
    return it->second;
  };
  auto twist = [&](std::uint32_t markers) {
    if (!twisted) return 1;
    return (std::popcount(markers >> (n - v)) % 2 == 0) ? 1 : -1;
  };

  // Position maps per grading, both directions.
  std::map<std::pair<int, int>, std::vector<int>> to_small;
  for (const auto& [key, basis] : part.bases) {
    auto [a, b] = key;
    const GradedBasis* sb = small.basis(a + da, b + db);
    if (!sb || sb->states.size() != basis.states.size())
      throw std::logic_error("graded dimensions disagree with the smoothed diagram");
    std::vector<int>& perm = to_small[key];
    perm.reserve(basis.states.size());
    for (StateKey k : basis.states) {
      const StateTransport& t = transport(k.markers);
      int c = static_cast<int>(t.circle_map.size());
      std::uint32_t y2 = 0;
      for (int i = 0; i < c; ++i)
        if ((k.signs >> (c - 1 - i)) & 1) y2 |= std::uint32_t{1} << (c - 1 - t.circle_map[i]);
      int pos = sb->index_of({t.markers, y2});
      if (pos < 0) throw std::logic_error("state transport misses the smoothed basis");
      perm.push_back(pos);
    }
  }
  for (const auto& [key, basis] : small.bases) {
    auto [a, b] = key;
    if (part.dim(a - da, b - db) != static_cast<int>(basis.states.size()))
      throw std::logic_error("graded dimensions disagree with the smoothed diagram");
  }

  for (const auto& [key, mat] : part.differentials) {
    auto [a, b] = key;
    IntegerMatrix other = small.differential(a + da, b + db);
    if (mat.nnz() != other.nnz())
      throw std::logic_error("differential sparsity disagrees with the smoothed diagram");
    if (mat.nnz() == 0) continue;
    const auto& src_perm = to_small.at(key);
    auto tgt_it = to_small.find({a - 2, b});
    const GradedBasis& src_basis = *part.basis(a, b);
    const GradedBasis* tgt_basis = part.basis(a - 2, b);
    for (const auto& [r, c, val] : mat.triplets()) {
      int sign = twist(src_basis.states[c].markers) * twist(tgt_basis->states[r].markers);
      if (other.get(tgt_it->second.at(r), src_perm.at(c)) != val * sign)
        throw std::logic_error("differential entries disagree with the smoothed diagram");
    }
  }
}

}  // namespace detail

/// Splits a complex along one crossing. With `verify` set, additionally
/// checks closure of the subcomplex and matches both pieces against the
/// complexes of the two smoothed diagrams (sub against the B-smoothing at
/// grading shift (+1,+1) with the B-count sign twist, quotient against the
/// A-smoothing at (-1,-1)).
inline ComplexSplit split_at_crossing(const BigradedComplex& cx, int v, bool verify = true) {
  int n = cx.diagram.crossing_count();
  if (v < 0 || v >= n) throw std::invalid_argument("invalid crossing index");
  std::uint32_t vbit = std::uint32_t{1} << (n - 1 - v);

  ComplexSplit sp;
  sp.crossing = v;
  sp.parent = cx;
  sp.sub.diagram = cx.diagram;
  sp.quotient.diagram = cx.diagram;

  for (const auto& [key, basis] : cx.bases) {
    GradedBasis bs, bq;
    bs.a = bq.a = key.first;
    bs.b = bq.b = key.second;
    std::vector<int>&rs = sp.sub_rows[key], &rq = sp.quot_rows[key];
    for (int i = 0; i < static_cast<int>(basis.states.size()); ++i) {
      if (basis.states[i].markers & vbit) {
        bs.states.push_back(basis.states[i]);
        rs.push_back(i);
      } else {
        bq.states.push_back(basis.states[i]);
        rq.push_back(i);
      }
    }
    if (!bs.states.empty()) sp.sub.bases.emplace(key, std::move(bs));
    if (!bq.states.empty()) sp.quotient.bases.emplace(key, std::move(bq));
  }

  for (const auto& [key, mat] : cx.differentials) {
    auto [a, b] = key;
    const auto& src_s = sp.sub_rows.at(key);
    const auto& src_q = sp.quot_rows.at(key);
    auto tgt_it_s = sp.sub_rows.find({a - 2, b});
    auto tgt_it_q = sp.quot_rows.find({a - 2, b});

    std::vector<int> tgt_pos_s(mat.rows(), -1), tgt_pos_q(mat.rows(), -1);
    if (tgt_it_s != sp.sub_rows.end())
      for (int i = 0; i < static_cast<int>(tgt_it_s->second.size()); ++i)
        tgt_pos_s[tgt_it_s->second[i]] = i;
    if (tgt_it_q != sp.quot_rows.end())
      for (int i = 0; i < static_cast<int>(tgt_it_q->second.size()); ++i)
        tgt_pos_q[tgt_it_q->second[i]] = i;

    if (!src_s.empty()) {
      IntegerMatrix ms(sp.sub.dim(a - 2, b), static_cast<int>(src_s.size()));
      for (size_t j = 0; j < src_s.size(); ++j) {
        IntegerMatrix::Column col;
        for (const auto& [r, val] : mat.column(src_s[j])) {
          if (tgt_pos_s[r] < 0)
            throw std::logic_error("subcomplex is not closed under the differential");
          col.push_back({tgt_pos_s[r], val});
        }
        ms.fill_column(static_cast<int>(j), std::move(col));
      }
      sp.sub.differentials.emplace(key, std::move(ms));
    }
    if (!src_q.empty()) {
      IntegerMatrix mq(sp.quotient.dim(a - 2, b), static_cast<int>(src_q.size()));
      for (size_t j = 0; j < src_q.size(); ++j) {
        IntegerMatrix::Column col;
        for (const auto& [r, val] : mat.column(src_q[j]))
          if (tgt_pos_q[r] >= 0) col.push_back({tgt_pos_q[r], val});
        mq.fill_column(static_cast<int>(j), std::move(col));
      }
      sp.quotient.differentials.emplace(key, std::move(mq));
    }
  }

  if (verify) {
    SmoothedCrossing db = smooth_crossing(cx.diagram, v, Marker::B);
    detail::verify_identification(cx.diagram, v, sp.sub, db, build_complex(db.diagram), 1, 1,
                                  /*twisted=*/true);
    SmoothedCrossing da = smooth_crossing(cx.diagram, v, Marker::A);
    detail::verify_identification(cx.diagram, v, sp.quotient, da, build_complex(da.diagram), -1, -1,
                                  /*twisted=*/false);
  }
  return sp;
}

namespace detail {

/// Chain-level pieces of the connecting map: lift a quotient cycle with
/// zero B part, push it through the parent differential, land in the sub.
inline std::vector<BigInt> connect_chain(const ComplexSplit& sp, int a, int b,
                                         const std::vector<BigInt>& z) {
  const std::vector<int>* src = nullptr;
  if (auto it = sp.quot_rows.find({a, b}); it != sp.quot_rows.end()) src = &it->second;
  int pdim = sp.parent.dim(a, b);
  std::vector<BigInt> lift(pdim, 0);
  if (src)
    for (size_t i = 0; i < src->size(); ++i) lift[(*src)[i]] = z[i];
  std::vector<BigInt> image = sp.parent.differential(a, b).apply(lift);

  std::vector<BigInt> out(sp.sub.dim(a - 2, b), 0);
  std::vector<char> seen(image.size(), 0);
  if (auto it = sp.sub_rows.find({a - 2, b}); it != sp.sub_rows.end())
    for (size_t i = 0; i < it->second.size(); ++i) {
      out[i] = image[it->second[i]];
      seen[it->second[i]] = 1;
    }
  for (size_t i = 0; i < image.size(); ++i)
    if (!seen[i] && image[i] != 0)
      throw std::logic_error("connecting lift has a nonzero quotient image");
  return out;
}

}  // namespace detail

/// One group of the long exact sequence with the rank data of its
/// neighboring maps. `a`, `b` are parent gradings; rendering shifts sub
/// and quotient nodes to their own gradings.
struct LESNode {
  enum class Kind { sub, parent, quotient };
  Kind kind = Kind::parent;
  int a = 0, b = 0;
  AbelianGroup group;
  std::string out_label;  // "a*", "b*", "conn"; empty on the final node
  int in_rank = 0;
  int out_rank = 0;
  bool exact = false;

  std::pair<int, int> display_grading() const {
    switch (kind) {
      case Kind::sub: return {a + 1, b + 1};
      case Kind::quotient: return {a - 1, b - 1};
      default: return {a, b};
    }
  }
};

struct LESColumn {
  int b = 0;
  std::vector<LESNode> nodes;
};

struct LESReport {
  int crossing = 0;
  bool all_exact = false;
  std::string failure;  // diagnostic when the construction itself broke
  std::vector<LESColumn> columns;
};

/// Builds the full long exact sequence of the split at crossing v and
/// checks exactness over Q at every node: rank(in) + rank(out) must match
/// the free rank. A structurally broken complex (d*d != 0 upstream) is
/// reported as a failure, not an error.
inline LESReport verify_les_exact(const BigradedComplex& cx, int v, bool verify_split = true) {
  LESReport report;
  report.crossing = v;
  try {
    ComplexSplit sp = split_at_crossing(cx, v, verify_split);

    std::map<int, std::pair<int, int>> span;  // b -> (min a, max a)
    for (const auto& [key, basis] : cx.bases) {
      auto [a, b] = key;
      auto [it, fresh] = span.try_emplace(b, std::pair{a, a});
      if (!fresh) {
        it->second.first = std::min(it->second.first, a);
        it->second.second = std::max(it->second.second, a);
      }
    }

    bool all = true;
    for (const auto& [b, arange] : span) {
      auto [alo, ahi] = arange;
      LESColumn column;
      column.b = b;

      std::map<int, GradedPresentation> psub, ppar, pquot;
      for (int a = ahi + 4; a >= alo - 4; a -= 2) {
        psub.emplace(a, presentation_at(sp.sub, a, b));
        ppar.emplace(a, presentation_at(sp.parent, a, b));
        pquot.emplace(a, presentation_at(sp.quotient, a, b));
      }

      std::map<int, InducedMap> alpha, beta, conn;
      for (int a = ahi + 2; a >= alo - 2; a -= 2) {
        const auto& rows_s = sp.sub_rows[{a, b}];
        const auto& rows_q = sp.quot_rows[{a, b}];
        int pdim = sp.parent.dim(a, b);

        auto emb = [&rows_s, pdim](const std::vector<BigInt>& z) {
          std::vector<BigInt> out(pdim, 0);
          for (size_t i = 0; i < rows_s.size(); ++i) out[rows_s[i]] = z[i];
          return out;
        };
        alpha.emplace(a, induced_map(psub.at(a), ppar.at(a), emb,
                                     sp.sub.differential(a + 2, b),
                                     sp.parent.differential(a + 2, b)));

        auto proj = [&rows_q](const std::vector<BigInt>& z) {
          std::vector<BigInt> out(rows_q.size(), 0);
          for (size_t i = 0; i < rows_q.size(); ++i) out[i] = z[rows_q[i]];
          return out;
        };
        beta.emplace(a, induced_map(ppar.at(a), pquot.at(a), proj,
                                    sp.parent.differential(a + 2, b),
                                    sp.quotient.differential(a + 2, b)));

        auto con = [&sp, a, b](const std::vector<BigInt>& z) {
          return detail::connect_chain(sp, a, b, z);
        };
        conn.emplace(a, induced_map(pquot.at(a), psub.at(a - 2), con,
                                    sp.quotient.differential(a + 2, b),
                                    sp.sub.differential(a, b)));
      }

      auto rank_of = [](const std::map<int, InducedMap>& m, int a) {
        auto it = m.find(a);
        return it == m.end() ? 0 : it->second.q_rank;
      };
      for (int a = ahi + 2; a >= alo - 2; a -= 2) {
        LESNode ns;
        ns.kind = LESNode::Kind::sub;
        ns.a = a;
        ns.b = b;
        ns.group = psub.at(a).group();
        ns.in_rank = rank_of(conn, a + 2);
        ns.out_rank = rank_of(alpha, a);
        ns.out_label = "a*";

        LESNode np;
        np.kind = LESNode::Kind::parent;
        np.a = a;
        np.b = b;
        np.group = ppar.at(a).group();
        np.in_rank = rank_of(alpha, a);
        np.out_rank = rank_of(beta, a);
        np.out_label = "b*";

        LESNode nq;
        nq.kind = LESNode::Kind::quotient;
        nq.a = a;
        nq.b = b;
        nq.group = pquot.at(a).group();
        nq.in_rank = rank_of(beta, a);
        nq.out_rank = rank_of(conn, a);
        nq.out_label = (a > alo - 2) ? "conn" : "";

        for (LESNode* node : {&ns, &np, &nq}) {
          node->exact = (node->in_rank + node->out_rank == node->group.free_rank);
          all = all && node->exact;
          column.nodes.push_back(std::move(*node));
        }
      }
      report.columns.push_back(std::move(column));
    }
    report.all_exact = all;
  } catch (const std::exception& e) {
    report.all_exact = false;
    report.failure = e.what();
  }
  return report;
}

inline LESReport verify_les_exact(const LinkDiagram& d, int v, bool verify_split = true) {
  return verify_les_exact(build_complex(d), v, verify_split);
}

/// Hypotheses and integral conclusions for the quotient-restriction map
/// out of parent grading (a, b): vanishing of the sub homology there
/// forces injectivity, vanishing one step down forces surjectivity.
struct RestrictionForcing {
  int a = 0, b = 0;
  AbelianGroup sub_at, sub_below;
  bool mono_predicted = false, epi_predicted = false;
  bool mono_observed = false, epi_observed = false;

  bool consistent() const {
    return (!mono_predicted || mono_observed) && (!epi_predicted || epi_observed);
  }
};

inline RestrictionForcing restriction_forcing(const ComplexSplit& sp, int a, int b) {
  RestrictionForcing st;
  st.a = a;
  st.b = b;

  GradedPresentation sub_at = presentation_at(sp.sub, a, b);
  GradedPresentation sub_below = presentation_at(sp.sub, a - 2, b);
  GradedPresentation par = presentation_at(sp.parent, a, b);
  GradedPresentation quo = presentation_at(sp.quotient, a, b);

  st.sub_at = sub_at.group();
  st.sub_below = sub_below.group();
  st.mono_predicted = st.sub_at.is_trivial();
  st.epi_predicted = st.sub_below.is_trivial();

  const auto& rows_q = sp.quot_rows.count({a, b}) ? sp.quot_rows.at({a, b}) : std::vector<int>{};
  auto proj = [&rows_q](const std::vector<BigInt>& z) {
    std::vector<BigInt> out(rows_q.size(), 0);
    for (size_t i = 0; i < rows_q.size(); ++i) out[i] = z[rows_q[i]];
    return out;
  };
  InducedMap beta = induced_map(par, quo, proj, sp.parent.differential(a + 2, b),
                                sp.quotient.differential(a + 2, b));
  st.mono_observed = induced_injective(beta, par, quo);
  st.epi_observed = induced_surjective(beta, quo);
  return st;
}

/// The connecting map out of parent grading (a, b) as an explicit matrix
/// between the quotient and sub homology groups.
struct ConnectingProbe {
  int a = 0, b = 0;
  AbelianGroup source, target;
  IntegerMatrix matrix;
};

inline ConnectingProbe connecting_probe(const ComplexSplit& sp, int a, int b) {
  ConnectingProbe probe;
  probe.a = a;
  probe.b = b;
  GradedPresentation src = presentation_at(sp.quotient, a, b);
  GradedPresentation tgt = presentation_at(sp.sub, a - 2, b);
  probe.source = src.group();
  probe.target = tgt.group();
  auto con = [&sp, a, b](const std::vector<BigInt>& z) {
    return detail::connect_chain(sp, a, b, z);
  };
  probe.matrix = induced_map(src, tgt, con, sp.quotient.differential(a + 2, b),
                             sp.sub.differential(a, b))
                     .matrix;
  return probe;
}

namespace detail {

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

}  // namespace detail

/// One line per b column: `H(a,b)[group] --map--> ...` using the display
/// gradings of each node.
inline std::string render_les(const LESReport& r) {
  std::ostringstream out;
  if (!r.failure.empty()) {
    out << "construction failed: " << r.failure << '\n';
    return out.str();
  }
  for (const auto& col : r.columns) {
    bool first = true;
    for (const auto& node : col.nodes) {
      if (!first) out << " ";
      first = false;
      auto [da, db] = node.display_grading();
      out << "H(" << da << ',' << db << ")[" << node.group.to_string() << ']';
      if (!node.out_label.empty()) out << " --" << node.out_label << "-->";
    }
    out << '\n';
  }
  out << (r.all_exact ? "exact\n" : "NOT EXACT\n");
  return out.str();
}

inline std::string render_les_json(const LESReport& r) {
  std::ostringstream out;
  out << "{\"crossing\": " << r.crossing << ", \"all_exact\": " << (r.all_exact ? "true" : "false");
  if (!r.failure.empty()) out << ", \"failure\": \"" << detail::json_escape(r.failure) << '"';
  out << ", \"columns\": [";
  bool firstc = true;
  for (const auto& col : r.columns) {
    if (!firstc) out << ',';
    firstc = false;
    out << "\n  {\"b\": " << col.b << ", \"nodes\": [";
    bool firstn = true;
    for (const auto& node : col.nodes) {
      if (!firstn) out << ',';
      firstn = false;
      auto [da, db] = node.display_grading();
      const char* kind = node.kind == LESNode::Kind::sub ? "sub"
                         : node.kind == LESNode::Kind::parent ? "parent"
                                                              : "quotient";
      out << "\n    {\"kind\": \"" << kind << "\", \"a\": " << da << ", \"b\": " << db
          << ", \"group\": \"" << node.group.to_string() << "\", \"out\": \"" << node.out_label
          << "\", \"in_rank\": " << node.in_rank << ", \"out_rank\": " << node.out_rank
          << ", \"exact\": " << (node.exact ? "true" : "false") << '}';
    }
    out << "\n  ]}";
  }
  out << "\n]}\n";
  return out.str();
}

}  // namespace kh
