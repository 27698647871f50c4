#pragma once

#include <map>
#include <sstream>
#include <string>

#include "kh/integer_linalg.hpp"
#include "kh/resolution.hpp"

namespace kh {

/// Laurent polynomial in the variable A with arbitrary-precision integer
/// coefficients. Stored as exponent -> nonzero coefficient.
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly monomial(int exp, BigInt coeff) {
    LaurentPoly p;
    if (coeff != 0) p.c_[exp] = std::move(coeff);
    return p;
  }

  static LaurentPoly one() { return monomial(0, 1); }

  bool is_zero() const { return c_.empty(); }

  BigInt coeff(int exp) const {
    auto it = c_.find(exp);
    return it == c_.end() ? BigInt(0) : it->second;
  }

  const std::map<int, BigInt>& terms() const { return c_; }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [e, v] : o.c_) {
      auto it = c_.find(e);
      if (it == c_.end()) {
        c_.emplace(e, v);
      } else {
        it->second += v;
        if (it->second == 0) c_.erase(it);
      }
    }
    return *this;
  }

  LaurentPoly operator-() const {
    LaurentPoly p = *this;
    for (auto& [e, v] : p.c_) v = -v;
    return p;
  }

  LaurentPoly& operator-=(const LaurentPoly& o) { return *this += -o; }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly p;
    for (const auto& [ea, va] : a.c_)
      for (const auto& [eb, vb] : b.c_) {
        auto it = p.c_.find(ea + eb);
        if (it == p.c_.end()) {
          BigInt v = va * vb;
          if (v != 0) p.c_.emplace(ea + eb, std::move(v));
        } else {
          it->second += va * vb;
          if (it->second == 0) p.c_.erase(it);
        }
      }
    return p;
  }

  /// Multiplies by A^de.
  LaurentPoly shifted(int de) const {
    LaurentPoly p;
    for (const auto& [e, v] : c_) p.c_[e + de] = v;
    return p;
  }

  bool operator==(const LaurentPoly&) const = default;

  /// Terms in decreasing exponent order; unit coefficients drop the "1",
  /// exponent 1 drops the caret, exponent 0 drops the variable.
  std::string to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      const auto& [e, v] = *it;
      bool neg = v < 0;
      BigInt mag = neg ? BigInt(-v) : v;
      if (first)
        out << (neg ? "-" : "");
      else
        out << (neg ? " - " : " + ");
      first = false;
      if (mag != 1 || e == 0) out << mag.str();
      if (e != 0) {
        out << 'A';
        if (e != 1) out << '^' << e;
      }
    }
    return out.str();
  }

  /// JSON object mapping exponent (as a string key) to coefficient, in
  /// increasing exponent order.
  std::string to_json() const {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto& [e, v] : c_) {
      if (!first) out << ", ";
      first = false;
      out << '"' << e << "\": " << v.str();
    }
    out << '}';
    return out.str();
  }

 private:
  std::map<int, BigInt> c_;
};

/// The circle value -A^2 - A^-2.
inline LaurentPoly circle_poly() {
  return LaurentPoly::monomial(2, -1) + LaurentPoly::monomial(-2, -1);
}

/// The bracket as a sum over Kauffman states: each state contributes
/// A^sigma times (-A^2 - A^-2)^circles.
inline LaurentPoly bracket_state_sum(const LinkDiagram& d) {
  LaurentPoly total;
  std::vector<LaurentPoly> delta_pow{LaurentPoly::one()};
  for (const auto& s : enumerate_states(d)) {
    int circles = smooth(d, s).count;
    while (static_cast<int>(delta_pow.size()) <= circles)
      delta_pow.push_back(delta_pow.back() * circle_poly());
    total += delta_pow[circles].shifted(sigma(s));
  }
  return total;
}

/// The bracket as a sum over enhanced states: each contributes
/// (-1)^circles A^(sigma + 2 tau). Must agree with bracket_state_sum.
inline LaurentPoly bracket_enhanced_sum(const LinkDiagram& d) {
  LaurentPoly total;
  for_each_enhanced(d, [&](const EnhancedState& e) {
    int circles = static_cast<int>(e.signs.size());
    auto [a, b] = bigrading(e);
    (void)a;
    total += LaurentPoly::monomial(b, (circles % 2 == 0) ? 1 : -1);
  });
  return total;
}

/// Checks the skein relation at crossing v:
/// bracket(d) == A bracket(d_A) + A^-1 bracket(d_B).
inline bool satisfies_skein(const LinkDiagram& d, int v) {
  LaurentPoly lhs = bracket_state_sum(d);
  LaurentPoly rhs = bracket_state_sum(smooth_crossing(d, v, Marker::A).diagram).shifted(1) +
                    bracket_state_sum(smooth_crossing(d, v, Marker::B).diagram).shifted(-1);
  return lhs == rhs;
}

}  // namespace kh
