#pragma once

// Eisenstein series and the weight-graded algebra they generate.
//
// Conventions: G_{2k} carries the constant term -B_{2k}/4k and raw divisor
// power sums, so G_2 = -1/24 + q + 3q^2 + ...; the normalized variants E_{2k}
// rescale the constant term to 1.  Everything is exact over the rationals.
// decompose_weight() expresses a series as a linear combination of the
// E_4^a E_6^b monomial basis of its weight and reports the first coefficient
// where the claim breaks down, if any.

#include <optional>
#include <stdexcept>
#include <vector>

#include "ellgen/qseries.hpp"
#include "ellgen/rational.hpp"

namespace ellgen {

// Exact Bernoulli numbers, B_1 = -1/2 convention.  Only small indices are
// ever requested; the defining recurrence is plenty.
inline Rational bernoulli(int n) {
  if (n < 0) throw std::invalid_argument("bernoulli index must be nonnegative");
  std::vector<Rational> b(n + 1);
  for (int m = 0; m <= n; ++m) {
    if (m == 0) {
      b[0] = 1;
      continue;
    }
    // sum_{j<m} C(m+1, j) B_j = -C(m+1, m) B_m
    Rational s = 0;
    for (int j = 0; j < m; ++j) s += binomial_rat(m + 1, j) * b[j];
    b[m] = -s / binomial_rat(m + 1, m);
  }
  return b[n];
}

inline Rational sigma_power(long n, int k) {
  if (n <= 0) throw std::invalid_argument("divisor sum needs n >= 1");
  mpz_class total = 0;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k));
    total += p;
    long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(k));
      total += p;
    }
  }
  return Rational(total);
}

// G_{2k} = -B_{2k}/4k + sum_{n>=1} sigma_{2k-1}(n) q^n, truncated past q_order.
inline Q24Series<Rational> eisenstein_g(int two_k, int q_order) {
  if (two_k < 2 || two_k % 2 != 0) throw std::invalid_argument("weight must be a positive even integer");
  Q24Series<Rational> s = Q24Series<Rational>::zero(q_int(q_order + 1));
  s.add_to(q_int(0), -bernoulli(two_k) / (2 * two_k));
  for (long n = 1; n <= q_order; ++n) s.add_to(q_int(n), sigma_power(n, two_k - 1));
  return s;
}

// Normalized to constant term 1 (E_2 = 1 - 24q - 72q^2 - ...).
inline Q24Series<Rational> eisenstein_e(int two_k, int q_order) {
  Rational c0 = -bernoulli(two_k) / (2 * two_k);
  return eisenstein_g(two_k, q_order).scale(1 / c0);
}

struct WeightBasisElement {
  int a;  // exponent of E_4
  int b;  // exponent of E_6
  Q24Series<Rational> series;
};

// Monomials E_4^a E_6^b with 4a + 6b = weight, listed with a descending.
// Empty exactly when no such form exists (odd or negative weight, weight 2).
inline std::vector<WeightBasisElement> weight_basis(int weight, int q_order) {
  std::vector<WeightBasisElement> out;
  if (weight < 0) return out;
  Q24Series<Rational> e4 = eisenstein_e(4, q_order);
  Q24Series<Rational> e6 = eisenstein_e(6, q_order);
  for (int a = weight / 4; a >= 0; --a) {
    int rem = weight - 4 * a;
    if (rem % 6 != 0) continue;
    int b = rem / 6;
    Q24Series<Rational> s = series_pow(e4, a) * series_pow(e6, b);
    out.push_back({a, b, std::move(s)});
  }
  return out;
}

struct ModularDecomposition {
  bool exact = false;
  std::vector<WeightBasisElement> basis;   // what the coefficients refer to
  std::vector<Rational> coeffs;            // one per basis element
  std::optional<SeriesMismatch<Rational>> mismatch;  // first failure when !exact
};

// Solve for f = sum_i coeffs[i] * basis[i] using the leading coefficients,
// then verify every remaining coefficient up to the truncation bound.  The
// leading N x N system is always nonsingular for this basis: a weight-w form
// vanishing to order dim M_w at infinity is identically zero.
inline ModularDecomposition decompose_weight(const Q24Series<Rational>& f, int weight) {
  ModularDecomposition out;
  if (f.trunc() == EXP24_UNBOUNDED)
    throw std::invalid_argument("decomposition needs a truncated series");
  if (!f.all_exponents_integral() || (!f.is_zero_series() && f.valuation() < q_int(0))) {
    out.exact = false;
    out.mismatch = SeriesMismatch<Rational>{f.terms().begin()->first,
                                            f.terms().begin()->second, Rational(0)};
    return out;
  }
  long order = f.trunc().num / 24 - 1;  // highest whole power still inside the bound
  out.basis = weight_basis(weight, static_cast<int>(order));
  size_t n = out.basis.size();
  if (n == 0) {
    out.exact = f.is_zero_series();
    if (!out.exact)
      out.mismatch = SeriesMismatch<Rational>{f.terms().begin()->first,
                                              f.terms().begin()->second, Rational(0)};
    return out;
  }
  if (order + 1 < static_cast<long>(n))
    throw std::invalid_argument("series too short to pin down its weight-" +
                                std::to_string(weight) + " combination");

  // Gaussian elimination on the leading n x n block, exact over Q.
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < n; ++c) m[r][c] = out.basis[c].series.coeff(q_int(r));
    m[r][n] = f.coeff(q_int(r));
  }
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && sgn(m[piv][col].get_num()) == 0) ++piv;
    if (piv == n) throw std::logic_error("modular basis matrix is singular");
    std::swap(m[col], m[piv]);
    Rational d = m[col][col];
    for (size_t c = col; c <= n; ++c) m[col][c] /= d;
    for (size_t r = 0; r < n; ++r) {
      if (r == col || sgn(m[r][col].get_num()) == 0) continue;
      Rational factor = m[r][col];
      for (size_t c = col; c <= n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  out.coeffs.resize(n);
  for (size_t r = 0; r < n; ++r) out.coeffs[r] = m[r][n];

  Q24Series<Rational> recon = Q24Series<Rational>::zero(f.trunc());
  for (size_t i = 0; i < n; ++i)
    recon = recon + out.basis[i].series.truncated(f.trunc()).scale(out.coeffs[i]);
  out.mismatch = first_mismatch(f, recon);
  out.exact = !out.mismatch.has_value();
  return out;
}

}  // namespace ellgen
