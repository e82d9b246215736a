#pragma once

// Gaussian extension R[i]/(i^2 + 1) of a coefficient ring. Used wherever the
// odd theta function's sin-prefactor introduces a factor 1/(2i): over exact
// rationals for two-variable theta series, and over graded polynomial rings in
// the theta-product genus route (where every imaginary part must cancel by the
// end — kept as a loud assertion there).

#include <string>

#include "ellgen/ring.hpp"

namespace ellgen {

template <CoefficientRing R>
struct Gaussian {
  R re = ring_zero<R>();
  R im = ring_zero<R>();

  Gaussian() = default;
  Gaussian(R real, R imag) : re(std::move(real)), im(std::move(imag)) {}
  explicit Gaussian(R real) : re(std::move(real)), im(ring_zero<R>()) {}

  friend Gaussian operator+(const Gaussian& a, const Gaussian& b) {
    return {R(a.re + b.re), R(a.im + b.im)};
  }
  friend Gaussian operator-(const Gaussian& a, const Gaussian& b) {
    return {R(a.re - b.re), R(a.im - b.im)};
  }
  friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
    return {R(a.re * b.re - a.im * b.im), R(a.re * b.im + a.im * b.re)};
  }
  Gaussian operator-() const { return {R(-re), R(-im)}; }
  friend bool operator==(const Gaussian& a, const Gaussian& b) {
    return a.re == b.re && a.im == b.im;
  }
};

using GaussianRational = Gaussian<Rational>;

template <CoefficientRing R>
struct ring_traits<Gaussian<R>> {
  using G = Gaussian<R>;
  static G zero() { return G(); }
  static G one() { return G(ring_one<R>()); }
  static bool is_zero(const G& x) {
    return ring_traits<R>::is_zero(x.re) && ring_traits<R>::is_zero(x.im);
  }
  static G from_rational(const Rational& q) { return G(ellgen::from_rational<R>(q)); }
  static G scale(const G& x, const Rational& q) {
    return {ellgen::scale(x.re, q), ellgen::scale(x.im, q)};
  }
  // (re + i*im)^{-1} = (re - i*im) * (re^2 + im^2)^{-1}; needs the norm to be
  // invertible in R.
  static G invert(const G& x) {
    R norm = x.re * x.re + x.im * x.im;
    R ninv = ring_invert(norm);
    return {R(x.re * ninv), R(-(x.im * ninv))};
  }
  static G imaginary_unit() { return {ring_zero<R>(), ring_one<R>()}; }
  static std::string str(const G& x) {
    if (ring_traits<R>::is_zero(x.im)) return ring_traits<R>::str(x.re);
    return "(" + ring_traits<R>::str(x.re) + " + (" + ring_traits<R>::str(x.im) + ")*i)";
  }
};

// i^k as a Gaussian scalar over R, any integer k.
template <CoefficientRing R>
Gaussian<R> gaussian_i_pow(long k) {
  long m = ((k % 4) + 4) % 4;
  switch (m) {
    case 0: return ring_one<Gaussian<R>>();
    case 1: return ring_traits<Gaussian<R>>::imaginary_unit();
    case 2: return -ring_one<Gaussian<R>>();
    default: return -ring_traits<Gaussian<R>>::imaginary_unit();
  }
}

}  // namespace ellgen
