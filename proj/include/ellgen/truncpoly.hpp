#pragma once

// Dense truncated polynomials over a coefficient ring: the workhorse for
// every auxiliary nilpotent variable in the engine — the elliptic variable u,
// the exterior-power bookkeeping variable t, numeric jet variables, and
// one-variable rational Taylor scratch work. Exponents at or past `bound` are
// discarded; mixing takes the minimum bound. A default-constructed value is
// the exact zero with an unbounded cap, so it composes with any bound.

#include <climits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellgen/ring.hpp"

namespace ellgen {

template <CoefficientRing C>
class TruncPoly {
 public:
  TruncPoly() = default;  // exact zero, unbounded
  explicit TruncPoly(int bound) : bound_(bound) {
    if (bound < 0) throw std::domain_error("TruncPoly: negative bound");
  }

  static TruncPoly constant(const C& c, int bound = INT_MAX) {
    TruncPoly p(bound);
    p.set_coeff(0, c);
    return p;
  }
  static TruncPoly variable(const C& c, int bound) {
    TruncPoly p(bound);
    p.set_coeff(1, c);
    return p;
  }

  int bound() const { return bound_; }
  int size() const { return static_cast<int>(c_.size()); }  // degree + 1 of stored part

  C coeff(int k) const {
    if (k < 0) throw std::logic_error("TruncPoly: negative exponent");
    if (k >= bound_)
      throw std::logic_error("TruncPoly: coefficient query at X^" + std::to_string(k) +
                             " is beyond the bound " + std::to_string(bound_));
    return k < size() ? c_[k] : ring_zero<C>();
  }

  void set_coeff(int k, const C& c) {
    if (k < 0) throw std::logic_error("TruncPoly: negative exponent");
    if (k >= bound_) return;
    if (k >= size()) {
      if (ellgen::is_zero(c)) return;
      c_.resize(k + 1, ring_zero<C>());
    }
    c_[k] = c;
    normalize();
  }

  bool is_zero_poly() const { return c_.empty(); }

  TruncPoly truncated(int bound) const {
    TruncPoly out(std::min(bound, bound_));
    for (int k = 0; k < size() && k < out.bound_; ++k) out.raw_add(k, c_[k]);
    out.normalize();
    return out;
  }

  TruncPoly scale(const Rational& q) const {
    TruncPoly out(bound_);
    for (int k = 0; k < size(); ++k) out.raw_add(k, ellgen::scale(c_[k], q));
    out.normalize();
    return out;
  }

  TruncPoly scalar_mul(const C& c) const {
    TruncPoly out(bound_);
    for (int k = 0; k < size(); ++k) out.raw_add(k, C(c_[k] * c));
    out.normalize();
    return out;
  }

  friend TruncPoly operator+(const TruncPoly& a, const TruncPoly& b) {
    TruncPoly out(std::min(a.bound_, b.bound_));
    for (int k = 0; k < a.size() && k < out.bound_; ++k) out.raw_add(k, a.c_[k]);
    for (int k = 0; k < b.size() && k < out.bound_; ++k) out.raw_add(k, b.c_[k]);
    out.normalize();
    return out;
  }
  friend TruncPoly operator-(const TruncPoly& a, const TruncPoly& b) {
    TruncPoly out(std::min(a.bound_, b.bound_));
    for (int k = 0; k < a.size() && k < out.bound_; ++k) out.raw_add(k, a.c_[k]);
    for (int k = 0; k < b.size() && k < out.bound_; ++k) out.raw_add(k, C(-b.c_[k]));
    out.normalize();
    return out;
  }
  TruncPoly operator-() const {
    TruncPoly out(bound_);
    for (int k = 0; k < size(); ++k) out.raw_add(k, C(-c_[k]));
    out.normalize();
    return out;
  }

  friend TruncPoly operator*(const TruncPoly& a, const TruncPoly& b) {
    TruncPoly out(std::min(a.bound_, b.bound_));
    for (int i = 0; i < a.size(); ++i) {
      if (ellgen::is_zero(a.c_[i])) continue;
      for (int j = 0; j < b.size(); ++j) {
        if (i + j >= out.bound_) break;
        out.raw_add(i + j, C(a.c_[i] * b.c_[j]));
      }
    }
    out.normalize();
    return out;
  }

  friend bool operator==(const TruncPoly& a, const TruncPoly& b) {
    return a.bound_ == b.bound_ && a.c_ == b.c_;
  }

 private:
  void raw_add(int k, const C& c) {
    if (k >= size()) c_.resize(k + 1, ring_zero<C>());
    c_[k] = C(c_[k] + c);
  }
  void normalize() {
    while (!c_.empty() && ellgen::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<C> c_;
  int bound_ = INT_MAX;
};

template <CoefficientRing C>
struct ring_traits<TruncPoly<C>> {
  using P = TruncPoly<C>;
  static P zero() { return P(); }
  static P one() { return P::constant(ring_one<C>()); }
  static bool is_zero(const P& x) { return x.is_zero_poly(); }
  static P from_rational(const Rational& q) { return P::constant(ellgen::from_rational<C>(q)); }
  static P scale(const P& x, const Rational& q) { return x.scale(q); }

  // Unit constant term + nilpotent rest: invert by a finite geometric sum.
  static P invert(const P& x) {
    if (x.is_zero_poly()) throw std::domain_error("TruncPoly: inverting zero");
    C c0inv = ring_invert(x.coeff(0));
    P u = x.scalar_mul(c0inv);  // 1 + n
    P n = one() - u;
    if (!n.is_zero_poly() && x.bound() == INT_MAX)
      throw std::domain_error("TruncPoly: inverting a non-constant needs a finite bound");
    P acc = P::constant(ring_one<C>(), u.bound());
    P term = acc;
    for (int guard = 0; guard < 4096; ++guard) {
      term = term * n;
      if (term.is_zero_poly()) return acc.scalar_mul(c0inv);
      acc = acc + term;
    }
    throw std::domain_error("TruncPoly: inverse sum did not terminate");
  }

  static P imaginary_unit()
    requires requires { ring_traits<C>::imaginary_unit(); }
  {
    return P::constant(ring_traits<C>::imaginary_unit());
  }

  static std::string str(const P& x) {
    std::string out;
    for (int k = 0; k < x.size(); ++k) {
      C c = x.coeff(k);
      if (ellgen::is_zero(c)) continue;
      if (!out.empty()) out += " + ";
      std::string cs = ring_traits<C>::str(c);
      if (k == 0)
        out += cs;
      else if (k == 1)
        out += cs + "*u";
      else
        out += cs + "*u^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
  }
};

}  // namespace ellgen
