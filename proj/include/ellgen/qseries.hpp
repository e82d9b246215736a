#pragma once

// Truncated q-expansions on the 1/24 exponent grid, over any CoefficientRing.
// A series carries a hard truncation bound `trunc` (exclusive): terms with
// exponent >= trunc are unknown and never stored. Mixing two series takes the
// minimum of the bounds; a factor with negative valuation (only produced by
// inverting a series with positive leading exponent) additionally lowers the
// bound by that valuation, so the stored terms are always genuinely known.
// No zero coefficient is ever stored.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "ellgen/exp24.hpp"
#include "ellgen/ring.hpp"

namespace ellgen {

template <CoefficientRing R>
class Q24Series {
 public:
  using map_type = std::map<Exp24, R>;

  Q24Series() : trunc_(EXP24_UNBOUNDED) {}  // exact zero
  explicit Q24Series(Exp24 trunc) : trunc_(trunc) {}

  static Q24Series zero(Exp24 trunc = EXP24_UNBOUNDED) { return Q24Series(trunc); }
  static Q24Series constant(const R& c, Exp24 trunc = EXP24_UNBOUNDED) {
    Q24Series s(trunc);
    s.add_to(Exp24{0}, c);
    return s;
  }
  static Q24Series monomial(const R& c, Exp24 e, Exp24 trunc = EXP24_UNBOUNDED) {
    Q24Series s(trunc);
    s.add_to(e, c);
    return s;
  }

  Exp24 trunc() const { return trunc_; }
  const map_type& terms() const { return terms_; }
  bool is_zero_series() const { return terms_.empty(); }

  Exp24 valuation() const {
    if (terms_.empty()) throw std::logic_error("valuation of zero series");
    return terms_.begin()->first;
  }

  // Coefficient at e; exactly zero below the bound, a precision bug at/past it.
  R coeff(Exp24 e) const {
    if (e >= trunc_)
      throw std::logic_error("coefficient query at q^(" + exp24_str(e) +
                             ") is beyond the truncation bound q^(" + exp24_str(trunc_) + ")");
    auto it = terms_.find(e);
    return it == terms_.end() ? ring_zero<R>() : it->second;
  }

  // Terms at/past the bound are silently discarded (that is their semantics);
  // zeros are never stored.
  void add_to(Exp24 e, const R& c) {
    if (e >= trunc_ || ellgen::is_zero(c)) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
      it->second = R(it->second + c);
      if (ellgen::is_zero(it->second)) terms_.erase(it);
    }
  }

  void set_coeff(Exp24 e, const R& c) {
    terms_.erase(e);
    add_to(e, c);
  }

  bool all_exponents_integral() const {
    for (const auto& [e, c] : terms_)
      if (!e.integral()) return false;
    return true;
  }

  Q24Series truncated(Exp24 tr) const {
    Q24Series out(std::min(tr, trunc_));
    for (const auto& [e, c] : terms_) out.add_to(e, c);
    return out;
  }

  Q24Series shifted(Exp24 delta) const {
    Q24Series out(trunc_add(trunc_, delta));
    for (const auto& [e, c] : terms_) out.add_to(e + delta, c);
    return out;
  }

  Q24Series scalar_mul(const R& c) const {
    Q24Series out(trunc_);
    for (const auto& [e, t] : terms_) out.add_to(e, R(t * c));
    return out;
  }

  Q24Series scale(const Rational& q) const {
    Q24Series out(trunc_);
    for (const auto& [e, t] : terms_) out.add_to(e, ellgen::scale(t, q));
    return out;
  }

  friend Q24Series operator+(const Q24Series& a, const Q24Series& b) {
    Q24Series out(std::min(a.trunc_, b.trunc_));
    for (const auto& [e, c] : a.terms_) out.add_to(e, c);
    for (const auto& [e, c] : b.terms_) out.add_to(e, c);
    return out;
  }
  friend Q24Series operator-(const Q24Series& a, const Q24Series& b) {
    Q24Series out(std::min(a.trunc_, b.trunc_));
    for (const auto& [e, c] : a.terms_) out.add_to(e, c);
    for (const auto& [e, c] : b.terms_) out.add_to(e, R(-c));
    return out;
  }
  Q24Series operator-() const {
    Q24Series out(trunc_);
    for (const auto& [e, c] : terms_) out.add_to(e, R(-c));
    return out;
  }

  friend Q24Series operator*(const Q24Series& a, const Q24Series& b) {
    // Negative valuations erode what the other factor's bound can promise.
    Exp24 va = a.terms_.empty() ? Exp24{0} : std::min(a.terms_.begin()->first, Exp24{0});
    Exp24 vb = b.terms_.empty() ? Exp24{0} : std::min(b.terms_.begin()->first, Exp24{0});
    Q24Series out(std::min(trunc_add(a.trunc_, vb), trunc_add(b.trunc_, va)));
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exp24 e = ea + eb;
        if (e < out.trunc_) out.add_to(e, R(ca * cb));
      }
    }
    return out;
  }

  friend bool operator==(const Q24Series& a, const Q24Series& b) {
    return a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
  }

 private:
  map_type terms_;
  Exp24 trunc_;
};

template <CoefficientRing R>
struct SeriesMismatch {
  Exp24 e;
  R lhs, rhs;
};

// First differing coefficient below the common bound; nullopt if the series
// agree there.
template <CoefficientRing R>
std::optional<SeriesMismatch<R>> first_mismatch(const Q24Series<R>& a, const Q24Series<R>& b) {
  Exp24 tr = std::min(a.trunc(), b.trunc());
  std::map<Exp24, int> exps;
  for (const auto& [e, c] : a.terms())
    if (e < tr) exps.emplace(e, 0);
  for (const auto& [e, c] : b.terms())
    if (e < tr) exps.emplace(e, 0);
  for (const auto& [e, unused] : exps) {
    R ca = a.coeff(e), cb = b.coeff(e);
    if (!(ca == cb)) return SeriesMismatch<R>{e, ca, cb};
  }
  return std::nullopt;
}

template <CoefficientRing R>
bool equal_on_common(const Q24Series<R>& a, const Q24Series<R>& b) {
  return !first_mismatch(a, b).has_value();
}

namespace detail {
inline int guard_for(Exp24 trunc) {
  if (trunc == EXP24_UNBOUNDED) return 512;
  std::int64_t units = trunc.num > 0 ? trunc.num : 0;  // iterations step >= 1/24
  return static_cast<int>(units) + 512;
}
}  // namespace detail

// 1/f. The leading monomial q^s * c0 is peeled off (c0 must be invertible in
// R) and the unit part inverted by a geometric sum. The result's bound is
// trunc(f) - 2s: one s from the exponent shift, one from multiplying the
// unknown tail by q^{-s}.
template <CoefficientRing R>
Q24Series<R> series_invert(const Q24Series<R>& f) {
  if (f.is_zero_series()) throw std::domain_error("series_invert: zero series");
  Exp24 s = f.valuation();
  R c0inv = ring_invert(f.terms().begin()->second);
  Q24Series<R> u = f.shifted(-s).scalar_mul(c0inv);  // 1 + h, h of positive valuation
  Q24Series<R> neg_h = Q24Series<R>::constant(ring_one<R>(), u.trunc()) - u;
  if (!neg_h.is_zero_series() && u.trunc() == EXP24_UNBOUNDED)
    throw std::domain_error("series_invert: non-monomial series needs a finite bound");
  Q24Series<R> acc = Q24Series<R>::constant(ring_one<R>(), u.trunc());
  Q24Series<R> term = acc;
  int guard = detail::guard_for(u.trunc());
  for (int k = 0; k < guard; ++k) {
    term = term * neg_h;
    if (term.is_zero_series()) break;
    acc = acc + term;
  }
  return acc.scalar_mul(c0inv).shifted(-s);
}

// exp(f): finite sum whenever f's constant term is nilpotent (or absent) and
// the rest has positive valuation. Everything here is a Q-algebra, so the
// 1/k! divisions are exact.
template <CoefficientRing R>
Q24Series<R> series_exp(const Q24Series<R>& f) {
  Q24Series<R> sum = Q24Series<R>::constant(ring_one<R>(), f.trunc());
  Q24Series<R> term = sum;
  int guard = detail::guard_for(f.trunc());
  for (int k = 1; k <= guard; ++k) {
    term = (term * f).scale(Rational(1, k));
    if (term.is_zero_series()) return sum;
    sum = sum + term;
  }
  throw std::domain_error(
      "series_exp: constant term is not nilpotent (exponential sum does not terminate)");
}

// log(f) for f = 1 + h with h nilpotent-plus-positive-valuation; inverse of
// series_exp on its domain.
template <CoefficientRing R>
Q24Series<R> series_log(const Q24Series<R>& f) {
  Q24Series<R> h = f - Q24Series<R>::constant(ring_one<R>(), f.trunc());
  Q24Series<R> sum = Q24Series<R>::zero(f.trunc());
  Q24Series<R> power = Q24Series<R>::constant(ring_one<R>(), f.trunc());
  int guard = detail::guard_for(f.trunc());
  for (int k = 1; k <= guard; ++k) {
    power = power * h;
    if (power.is_zero_series()) return sum;
    sum = sum + power.scale(Rational(k % 2 ? 1 : -1, k));
  }
  throw std::domain_error("series_log: argument is not 1 + nilpotent");
}

template <CoefficientRing R>
Q24Series<R> series_pow(const Q24Series<R>& f, long n) {
  if (n < 0) return ring_pow(series_invert(f), static_cast<unsigned long>(-n));
  Q24Series<R> base = f;
  Q24Series<R> acc = Q24Series<R>::constant(ring_one<R>(), f.trunc());
  unsigned long m = static_cast<unsigned long>(n);
  while (m) {
    if (m & 1) acc = acc * base;
    m >>= 1;
    if (m) base = base * base;
  }
  return acc;
}

// ---- Euler-product builders -------------------------------------------------

// phi(q) = prod_{j>=1} (1 - q^j), truncated past q^order.
template <CoefficientRing R = Rational>
Q24Series<R> phi_series(int order) {
  if (order < 0) throw std::domain_error("phi_series: negative order");
  Exp24 tr = q_int(order + 1);
  Q24Series<R> acc = Q24Series<R>::constant(ring_one<R>(), tr);
  for (int j = 1; j <= order; ++j) {
    Q24Series<R> factor = Q24Series<R>::constant(ring_one<R>(), tr);
    factor.add_to(q_int(j), -ring_one<R>());
    acc = acc * factor;
  }
  return acc;
}

template <CoefficientRing R = Rational>
Q24Series<R> phi_pow_series(long k, int order) {
  return series_pow(phi_series<R>(order), k);
}

// eta = q^{1/24} * phi
template <CoefficientRing R = Rational>
Q24Series<R> eta_series(int order) {
  return phi_series<R>(order).shifted(Exp24{1});
}

// eta^3 = q^{1/8} * phi^3
template <CoefficientRing R = Rational>
Q24Series<R> eta3_series(int order) {
  return series_pow(phi_series<R>(order), 3).shifted(Exp24{3});
}

template <CoefficientRing R>
std::string debug_str(const Q24Series<R>& s) {
  std::string out;
  for (const auto& [e, c] : s.terms()) {
    if (!out.empty()) out += " + ";
    std::string cs = ring_str(c);
    if (e == Exp24{0}) {
      out += cs;
    } else {
      if (cs == "1")
        out += "q^(" + exp24_str(e) + ")";
      else
        out += cs + "*q^(" + exp24_str(e) + ")";
    }
  }
  if (out.empty()) out = "0";
  if (s.trunc() != EXP24_UNBOUNDED) out += " + O(q^(" + exp24_str(s.trunc()) + "))";
  return out;
}

template <CoefficientRing R>
struct ring_traits<Q24Series<R>> {
  using S = Q24Series<R>;
  static S zero() { return S(); }
  static S one() { return S::constant(ring_one<R>()); }
  static bool is_zero(const S& x) { return x.is_zero_series(); }
  static S from_rational(const Rational& q) { return S::constant(ellgen::from_rational<R>(q)); }
  static S scale(const S& x, const Rational& q) { return x.scale(q); }
  static S invert(const S& x) { return series_invert(x); }
  static std::string str(const S& x) { return debug_str(x); }
};

}  // namespace ellgen
