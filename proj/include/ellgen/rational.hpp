#pragma once

// Exact rational scalars. GMP does the bignum heavy lifting; everything in the
// engine that divides (exp sums, Todd coefficients, basis solves) stays exact.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ellgen {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Canonical form: "p/q", or bare "p" when the denominator is 1.
inline std::string rat_str(const Rational& r) { return r.get_str(); }

inline Rational rat_parse(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("unparsable rational: " + s);
  if (r.get_den() == 0) throw std::domain_error("rational with zero denominator: " + s);
  r.canonicalize();
  return r;
}

inline double rat_double(const Rational& r) { return r.get_d(); }

inline Rational factorial_rat(unsigned long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

inline Rational binomial_rat(unsigned long n, unsigned long k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational(b);
}

}  // namespace ellgen
