#pragma once

// Coefficient-ring protocol. Every ring the series engine can run over
// (exact rationals, Gaussian rationals, graded polynomial rings, truncated
// polynomials, complex doubles, and nestings of these) specializes
// ring_traits<R>. All rings here are commutative Q-algebras: `scale` by an
// exact rational must be available so exponential sums can divide by k!.
//
// `invert` is optional in spirit: rings that cannot invert a given element
// throw std::domain_error. Nilpotency is not declared up front; the generic
// exponential/logarithm helpers detect termination dynamically (a power of a
// nilpotent or truncation-killed element eventually becomes exactly zero) and
// throw if a guard iteration count is exceeded.

#include <complex>
#include <concepts>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ellgen/rational.hpp"

namespace ellgen {

template <class R>
struct ring_traits;  // specialize per ring

template <class R>
concept CoefficientRing = requires(const R a, const R b) {
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { -a } -> std::convertible_to<R>;
  { a == b } -> std::convertible_to<bool>;
  { ring_traits<R>::zero() } -> std::convertible_to<R>;
  { ring_traits<R>::one() } -> std::convertible_to<R>;
  { ring_traits<R>::is_zero(a) } -> std::convertible_to<bool>;
  { ring_traits<R>::from_rational(Rational(1)) } -> std::convertible_to<R>;
  { ring_traits<R>::scale(a, Rational(1)) } -> std::convertible_to<R>;
  { ring_traits<R>::str(a) } -> std::convertible_to<std::string>;
};

template <class R>
R ring_zero() {
  return ring_traits<R>::zero();
}
template <class R>
R ring_one() {
  return ring_traits<R>::one();
}
template <class R>
bool is_zero(const R& x) {
  return ring_traits<R>::is_zero(x);
}
template <class R>
R from_rational(const Rational& q) {
  return ring_traits<R>::from_rational(q);
}
template <class R>
R scale(const R& x, const Rational& q) {
  return ring_traits<R>::scale(x, q);
}
template <class R>
R ring_invert(const R& x) {
  return ring_traits<R>::invert(x);
}
template <class R>
std::string ring_str(const R& x) {
  return ring_traits<R>::str(x);
}

template <class R, class = void>
struct has_imaginary_unit : std::false_type {};
template <class R>
struct has_imaginary_unit<R, std::void_t<decltype(ring_traits<R>::imaginary_unit())>>
    : std::true_type {};

// x^n by repeated squaring, n >= 0.
template <class R>
R ring_pow(R base, unsigned long n) {
  R acc = ring_one<R>();
  while (n) {
    if (n & 1) acc = acc * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return acc;
}

// exp(x) = sum x^k / k!. Terminates when the running term becomes exactly
// zero (nilpotent or truncation-bounded argument); otherwise throws after
// `guard` iterations.
template <class R>
R ring_exp(const R& x, int guard = 512) {
  R sum = ring_one<R>();
  R term = ring_one<R>();
  for (int k = 1; k <= guard; ++k) {
    term = scale(term * x, Rational(1, k));
    if (is_zero(term)) return sum;
    sum = sum + term;
  }
  throw std::domain_error("ring_exp: argument is not nilpotent (guard exceeded)");
}

// log(x) for x = 1 + h with h nilpotent; inverse of ring_exp on its domain.
template <class R>
R ring_log(const R& x, int guard = 512) {
  R h = x - ring_one<R>();
  R sum = ring_zero<R>();
  R power = ring_one<R>();
  for (int k = 1; k <= guard; ++k) {
    power = power * h;
    if (is_zero(power)) return sum;
    sum = sum + scale(power, Rational(k % 2 ? 1 : -1, k));
  }
  throw std::domain_error("ring_log: argument is not 1 + nilpotent (guard exceeded)");
}

// ---- scalar rings ----------------------------------------------------------

template <>
struct ring_traits<Rational> {
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static Rational from_rational(const Rational& q) { return q; }
  static Rational scale(const Rational& x, const Rational& q) { return Rational(x * q); }
  static Rational invert(const Rational& x) {
    if (is_zero(x)) throw std::domain_error("division by zero rational");
    return Rational(Rational(1) / x);
  }
  static std::string str(const Rational& x) { return x.get_str(); }
};

template <>
struct ring_traits<std::complex<double>> {
  using C = std::complex<double>;
  static C zero() { return {0.0, 0.0}; }
  static C one() { return {1.0, 0.0}; }
  static bool is_zero(const C& x) { return x.real() == 0.0 && x.imag() == 0.0; }
  static C from_rational(const Rational& q) { return {q.get_d(), 0.0}; }
  static C scale(const C& x, const Rational& q) { return x * q.get_d(); }
  static C invert(const C& x) {
    if (is_zero(x)) throw std::domain_error("division by zero complex value");
    return 1.0 / x;
  }
  static C imaginary_unit() { return {0.0, 1.0}; }
  static std::string str(const C& x) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << x.real() << (x.imag() < 0 ? "" : "+") << x.imag() << "i)";
    return os.str();
  }
};

}  // namespace ellgen
