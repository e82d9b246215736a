#pragma once

// Jacobi theta functions in three interchangeable guises, classical numbering
// theta_1 (odd) through theta_4:
//
//   theta_1 = -i q^{1/8} (y^{1/2}-y^{-1/2}) prod (1-q^j)(1-yq^j)(1-y^{-1}q^j)
//   theta_2 =    q^{1/8} (y^{1/2}+y^{-1/2}) prod (1-q^j)(1+yq^j)(1+y^{-1}q^j)
//   theta_3 = prod (1-q^j)(1+yq^{j-1/2})(1+y^{-1}q^{j-1/2})
//   theta_4 = prod (1-q^j)(1-yq^{j-1/2})(1-y^{-1}q^{j-1/2})
//
// with q = e^{2 pi i tau}, y = e^v, v = 2 pi i z.
//
//  * jet mode: v is a nilpotent element of an arbitrary coefficient ring, so
//    y^{1/2} = exp(v/2) is a terminating sum and the theta function becomes an
//    exact q-series with ring coefficients.  theta_1 needs an imaginary unit
//    in the ring; the even thetas stay rational.
//  * two-variable mode: y^{1/2} is kept as a formal Laurent symbol with
//    half-integer exponents over the Gaussian rationals.  Exact, and the
//    right home for product-vs-sum and lattice-shift identities.
//  * numeric mode: everything evaluated in double-precision complex
//    arithmetic directly from (tau, z).  Fractional powers of q are taken as
//    exp(2 pi i tau * frac), never as powers of a computed q, so the
//    tau -> tau+1 behaviour is genuinely testable.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ellgen/gaussian.hpp"
#include "ellgen/qseries.hpp"

namespace ellgen {

// ---------------------------------------------------------------------------
// jet mode

namespace detail {

// (exp(v/2) - exp(-v/2)) / v = sum_k v^{2k} / (4^k (2k+1)!), terminating
// because v is nilpotent.
template <CoefficientRing R>
R sinch_half(const R& v, int guard = 512) {
  R v2 = v * v;
  R term = ring_one<R>();
  R acc = term;
  for (int k = 1; k <= guard; ++k) {
    term = ellgen::scale(term * v2, Rational(1, 4 * (2 * k) * (2 * k + 1)));
    if (is_zero(term)) return acc;
    acc = acc + term;
  }
  throw std::domain_error("sinch argument is not nilpotent");
}

}  // namespace detail

// The common triple-product tail: prod_{j=1}^{order} (1 + s a q^j)(1 + s a^{-1} q^j)
// times prod (1-q^j), with a = exp(v) given by its inverse pair.
template <CoefficientRing R>
Q24Series<R> theta_jet(int k, const R& v, int q_order) {
  if (k < 1 || k > 4) throw std::invalid_argument("theta index must be 1..4");
  Exp24 tr = q_int(q_order + 1);
  Q24Series<R> out = phi_series<R>(q_order);
  R a = ring_exp(v);
  R ainv = ring_exp(-v);
  if (k == 1 || k == 2) {
    for (int j = 1; j <= q_order; ++j) {
      Q24Series<R> f = Q24Series<R>::constant(ring_one<R>(), tr);
      f.add_to(q_int(j), ellgen::scale(a, Rational(k == 1 ? -1 : 1)));
      Q24Series<R> g = Q24Series<R>::constant(ring_one<R>(), tr);
      g.add_to(q_int(j), ellgen::scale(ainv, Rational(k == 1 ? -1 : 1)));
      out = out * f * g;
    }
    R ah = ring_exp(ellgen::scale(v, Rational(1, 2)));
    R ahinv = ring_exp(ellgen::scale(v, Rational(-1, 2)));
    R pre = (k == 1) ? ah - ahinv : ah + ahinv;
    if (k == 1) {
      // -i (e^{v/2} - e^{-v/2}); the even thetas never touch the imaginary
      // unit, so they stay available over plain rational coefficient rings
      if constexpr (has_imaginary_unit<R>::value) {
        pre = -(ring_traits<R>::imaginary_unit() * pre);
      } else {
        throw std::domain_error("theta_1 needs an imaginary unit in the coefficient ring");
      }
    }
    out = out.shifted(q_frac(1, 8)) * Q24Series<R>::constant(pre, tr + q_frac(1, 8));
  } else {
    Rational s(k == 3 ? 1 : -1);
    for (int j = 1; j <= q_order + 1; ++j) {
      Exp24 e = q_int(j) - q_frac(1, 2);
      if (!(e < tr)) break;
      Q24Series<R> f = Q24Series<R>::constant(ring_one<R>(), tr);
      f.add_to(e, ellgen::scale(a, s));
      Q24Series<R> g = Q24Series<R>::constant(ring_one<R>(), tr);
      g.add_to(e, ellgen::scale(ainv, s));
      out = out * f * g;
    }
  }
  return out;
}

// theta_1(v)/v: drops the simple zero at v = 0, so the q^{1/8} coefficient is
// a unit (-i times a 1 + nilpotent element) and the series can be inverted.
template <CoefficientRing R>
Q24Series<R> theta1_jet_over_v(const R& v, int q_order) {
  Exp24 tr = q_int(q_order + 1);
  Q24Series<R> out = phi_series<R>(q_order);
  R a = ring_exp(v);
  R ainv = ring_exp(-v);
  for (int j = 1; j <= q_order; ++j) {
    Q24Series<R> f = Q24Series<R>::constant(ring_one<R>(), tr);
    f.add_to(q_int(j), -a);
    Q24Series<R> g = Q24Series<R>::constant(ring_one<R>(), tr);
    g.add_to(q_int(j), -ainv);
    out = out * f * g;
  }
  R pre = -(ring_traits<R>::imaginary_unit() * detail::sinch_half(v));
  return out.shifted(q_frac(1, 8)) * Q24Series<R>::constant(pre, tr + q_frac(1, 8));
}

// ---------------------------------------------------------------------------
// two-variable mode: Laurent polynomials in y^{1/2} over Gaussian rationals

class YPoly {
 public:
  YPoly() = default;
  // key: twice the y-exponent, so half-integer powers stay integral
  static YPoly monomial(GaussianRational c, long m2) {
    YPoly p;
    if (!(c == GaussianRational{})) p.c_[m2] = std::move(c);
    return p;
  }
  static YPoly constant(GaussianRational c) { return monomial(std::move(c), 0); }

  const std::map<long, GaussianRational>& coeffs() const { return c_; }
  bool is_zero_poly() const { return c_.empty(); }
  GaussianRational coeff(long m2) const {
    auto it = c_.find(m2);
    return it == c_.end() ? GaussianRational{} : it->second;
  }
  long min_m2() const { return c_.empty() ? 0 : c_.begin()->first; }
  long max_m2() const { return c_.empty() ? 0 : c_.rbegin()->first; }

  GaussianRational eval_at_one() const {  // y = 1
    GaussianRational s{};
    for (const auto& [m2, c] : c_) s = s + c;
    return s;
  }

  friend YPoly operator+(const YPoly& a, const YPoly& b) {
    YPoly out = a;
    for (const auto& [m2, c] : b.c_) out.add(m2, c);
    return out;
  }
  friend YPoly operator-(const YPoly& a, const YPoly& b) {
    YPoly out = a;
    for (const auto& [m2, c] : b.c_) out.add(m2, -c);
    return out;
  }
  YPoly operator-() const {
    YPoly out;
    for (const auto& [m2, c] : c_) out.c_.emplace(m2, -c);
    return out;
  }
  friend YPoly operator*(const YPoly& a, const YPoly& b) {
    YPoly out;
    for (const auto& [ma, ca] : a.c_)
      for (const auto& [mb, cb] : b.c_) out.add(ma + mb, ca * cb);
    return out;
  }
  friend bool operator==(const YPoly& a, const YPoly& b) { return a.c_ == b.c_; }

  void add(long m2, const GaussianRational& c) {
    auto it = c_.find(m2);
    if (it == c_.end()) {
      if (!(c == GaussianRational{})) c_.emplace(m2, c);
      return;
    }
    it->second = it->second + c;
    if (it->second == GaussianRational{}) c_.erase(it);
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m2, c] : c_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << ring_traits<GaussianRational>::str(c) << ")";
      if (m2 != 0) {
        os << "*y^";
        if (m2 % 2 == 0)
          os << (m2 / 2);
        else
          os << "(" << m2 << "/2)";
      }
    }
    return os.str();
  }

 private:
  std::map<long, GaussianRational> c_;
};

template <>
struct ring_traits<YPoly> {
  static YPoly zero() { return YPoly(); }
  static YPoly one() { return YPoly::constant(ring_one<GaussianRational>()); }
  static bool is_zero(const YPoly& p) { return p.is_zero_poly(); }
  static YPoly from_rational(const Rational& c) {
    return YPoly::constant(GaussianRational(c, Rational(0)));
  }
  static YPoly scale(const YPoly& p, const Rational& s) {
    YPoly out;
    for (const auto& [m2, c] : p.coeffs()) out.add(m2, ellgen::scale(c, s));
    return out;
  }
  static YPoly invert(const YPoly& p) {
    if (p.coeffs().size() != 1)
      throw std::domain_error("only y-monomials can be inverted");
    const auto& [m2, c] = *p.coeffs().begin();
    return YPoly::monomial(ring_invert(c), -m2);
  }
  static YPoly imaginary_unit() {
    return YPoly::constant(ring_traits<GaussianRational>::imaginary_unit());
  }
  static std::string str(const YPoly& p) { return p.str(); }
};

using ThetaExpansion = Q24Series<YPoly>;

// Product representation, exact through q^{q_order}.
inline ThetaExpansion theta_qy(int k, int q_order) {
  YPoly y = YPoly::monomial(ring_one<GaussianRational>(), 2);
  if (k == 1 || k == 2) {
    // reuse the jet-mode assembly with v treated as the symbol log y: here we
    // just inline the same product with explicit Laurent monomials
    Exp24 tr = q_int(q_order + 1);
    ThetaExpansion out = phi_series<YPoly>(q_order);
    Rational s(k == 1 ? -1 : 1);
    for (int j = 1; j <= q_order; ++j) {
      ThetaExpansion f = ThetaExpansion::constant(ring_one<YPoly>(), tr);
      f.add_to(q_int(j), ring_traits<YPoly>::scale(y, s));
      ThetaExpansion g = ThetaExpansion::constant(ring_one<YPoly>(), tr);
      g.add_to(q_int(j), YPoly::monomial(GaussianRational(s, Rational(0)), -2));
      out = out * f * g;
    }
    YPoly pre = YPoly::monomial(ring_one<GaussianRational>(), 1) +
                YPoly::monomial(GaussianRational(s, Rational(0)), -1);
    if (k == 1) pre = -(ring_traits<YPoly>::imaginary_unit() * pre);
    return out.shifted(q_frac(1, 8)) * ThetaExpansion::constant(pre, tr + q_frac(1, 8));
  }
  if (k == 3 || k == 4) {
    Exp24 tr = q_int(q_order + 1);
    ThetaExpansion out = phi_series<YPoly>(q_order);
    Rational s(k == 3 ? 1 : -1);
    for (int j = 1; j <= q_order + 1; ++j) {
      Exp24 e = q_int(j) - q_frac(1, 2);
      if (!(e < tr)) break;
      ThetaExpansion f = ThetaExpansion::constant(ring_one<YPoly>(), tr);
      f.add_to(e, YPoly::monomial(GaussianRational(s, Rational(0)), 2));
      ThetaExpansion g = ThetaExpansion::constant(ring_one<YPoly>(), tr);
      g.add_to(e, YPoly::monomial(GaussianRational(s, Rational(0)), -2));
      out = out * f * g;
    }
    return out;
  }
  throw std::invalid_argument("theta index must be 1..4");
}

// Sum representation via the Jacobi triple product:
//   theta_3 = sum q^{n^2/2} y^n            theta_4 = sum (-1)^n q^{n^2/2} y^n
//   theta_2 = sum q^{(n+1/2)^2/2} y^{n+1/2}
//   theta_1 = -i sum (-1)^n q^{(n+1/2)^2/2} y^{n+1/2}
inline ThetaExpansion theta_qy_sum(int k, int q_order) {
  Exp24 tr = q_int(q_order + 1);
  ThetaExpansion out = ThetaExpansion::zero(tr);
  GaussianRational one = ring_one<GaussianRational>();
  GaussianRational minus_i = -ring_traits<GaussianRational>::imaginary_unit();
  for (long n = -2 * q_order - 4; n <= 2 * q_order + 4; ++n) {
    if (k == 3 || k == 4) {
      // q-exponent n^2/2
      Exp24 e{12 * n * n};
      if (!(e < tr)) continue;
      GaussianRational c = (k == 4 && (n % 2 != 0)) ? -one : one;
      out.add_to(e, YPoly::monomial(c, 2 * n));
    } else {
      // q-exponent (n + 1/2)^2 / 2 = (2n+1)^2 / 8 -> 3 (2n+1)^2 in 24ths
      long t = 2 * n + 1;
      Exp24 e{3 * t * t};
      if (!(e < tr)) continue;
      GaussianRational c = one;
      if (k == 1) c = (n % 2 == 0) ? minus_i : -minus_i;
      out.add_to(e, YPoly::monomial(c, t));
    }
  }
  return out;
}

// z -> z + 1: y^m picks up e^{2 pi i m}, a sign on half-integer powers.
inline ThetaExpansion shift_z_by_one(const ThetaExpansion& f) {
  ThetaExpansion out = ThetaExpansion::zero(f.trunc());
  for (const auto& [e, p] : f.terms()) {
    YPoly q;
    for (const auto& [m2, c] : p.coeffs()) q.add(m2, (m2 % 2 == 0) ? c : -c);
    out.add_to(e, q);
  }
  return out;
}

inline ThetaExpansion negate_z(const ThetaExpansion& f) {
  ThetaExpansion out = ThetaExpansion::zero(f.trunc());
  for (const auto& [e, p] : f.terms()) {
    YPoly q;
    for (const auto& [m2, c] : p.coeffs()) q.add(-m2, c);
    out.add_to(e, q);
  }
  return out;
}

// z -> z + tau: y^m becomes q^m y^m.  Negative y-powers pull terms downward
// in q, so knowledge past the input bound would be needed to fill the top of
// the window; the output bound backs off by the deepest staircase step
// sqrt(2T)+1 that a theta-type series (|m| <= sqrt(2e) + 1 at q^e) can take.
inline ThetaExpansion shift_z_by_tau(const ThetaExpansion& f) {
  if (f.trunc() == EXP24_UNBOUNDED)
    throw std::invalid_argument("lattice shift needs a truncated series");
  double t_whole = static_cast<double>(f.trunc().num) / 24.0;
  long back = static_cast<long>(std::floor(std::sqrt(2.0 * t_whole))) + 1;
  Exp24 out_tr = f.trunc() - q_int(back);
  ThetaExpansion out = ThetaExpansion::zero(out_tr);
  for (const auto& [e, p] : f.terms())
    for (const auto& [m2, c] : p.coeffs()) {
      Exp24 shifted = e + Exp24{12 * m2};
      if (shifted < out_tr) out.add_to(shifted, YPoly::monomial(c, m2));
    }
  return out;
}

// Multiply by c * q^{qshift} y^{m2/2} (for stating lattice laws).
inline ThetaExpansion mul_qy_monomial(const ThetaExpansion& f, Exp24 qshift, long m2,
                                      GaussianRational c) {
  ThetaExpansion out = ThetaExpansion::zero(trunc_add(f.trunc(), qshift));
  for (const auto& [e, p] : f.terms()) {
    YPoly q;
    for (const auto& [pm2, pc] : p.coeffs()) q.add(pm2 + m2, pc * c);
    out.add_to(e + qshift, q);
  }
  return out;
}

// ---------------------------------------------------------------------------
// numeric mode

inline std::complex<double> theta_numeric(int k, std::complex<double> tau,
                                          std::complex<double> z, double tol = 1e-15) {
  if (k < 1 || k > 4) throw std::invalid_argument("theta index must be 1..4");
  if (tau.imag() <= 0) throw std::domain_error("tau must lie in the upper half-plane");
  using cd = std::complex<double>;
  const cd I(0, 1);
  const double two_pi = 2.0 * M_PI;
  cd q = std::exp(I * two_pi * tau);
  cd y = std::exp(I * two_pi * z);
  cd yh = std::exp(I * M_PI * z);        // y^{1/2} from z, not from y
  cd q8 = std::exp(I * two_pi * tau / 8.0);  // q^{1/8} from tau, not from q
  cd qh = std::exp(I * M_PI * tau);      // q^{1/2}

  double absq = std::abs(q);
  double m = std::max(std::abs(y), 1.0 / std::abs(y)) + 2.0;
  int J = 1;
  double p = absq;
  while (p * m > tol / 16.0 && J < 10000) {
    ++J;
    p *= absq;
  }

  cd out(1, 0);
  cd qj(1, 0);
  for (int j = 1; j <= J; ++j) {
    qj *= q;  // q^j
    out *= (1.0 - qj);
    switch (k) {
      case 1:
        out *= (1.0 - y * qj) * (1.0 - qj / y);
        break;
      case 2:
        out *= (1.0 + y * qj) * (1.0 + qj / y);
        break;
      case 3:
        out *= (1.0 + y * qj / qh) * (1.0 + qj / (y * qh));
        break;
      case 4:
        out *= (1.0 - y * qj / qh) * (1.0 - qj / (y * qh));
        break;
    }
  }
  if (k == 1) out *= -I * q8 * (yh - 1.0 / yh);
  if (k == 2) out *= q8 * (yh + 1.0 / yh);
  return out;
}

// Dedekind eta, same product cutoff policy.
inline std::complex<double> eta_numeric(std::complex<double> tau, double tol = 1e-15) {
  if (tau.imag() <= 0) throw std::domain_error("tau must lie in the upper half-plane");
  using cd = std::complex<double>;
  const cd I(0, 1);
  cd q = std::exp(I * 2.0 * M_PI * tau);
  cd q24 = std::exp(I * 2.0 * M_PI * tau / 24.0);
  double absq = std::abs(q);
  int J = 1;
  double p = absq;
  while (p > tol / 16.0 && J < 10000) {
    ++J;
    p *= absq;
  }
  cd out = q24;
  cd qj(1, 0);
  for (int j = 1; j <= J; ++j) {
    qj *= q;
    out *= (1.0 - qj);
  }
  return out;
}

}  // namespace ellgen
