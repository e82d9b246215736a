#pragma once

// Bundle calculus over the capped graded ring. A bundle enters as a
// RootFamily: a rank plus its Chern classes (graded polynomials, possibly
// zero). Everything the genus formulas consume is derived from that data
// through the Newton identities: power sums of the formal roots, Adams
// characters ch(psi^m E) = sum e^{m w_i}, the exterior-power generating
// polynomial ch(Lambda_t E), symmetric powers via 1/Lambda_{-t}, the Todd
// form, and signed weighted sums over exterior powers.
//
// Two conventions hold throughout. The computational root variables are the
// 2-pi-i-normalized ones (x-hat = 2*pi*i*x), so every coefficient stays an
// exact rational. And ch(Lambda_t E) is kept as an exact polynomial of degree
// rank(E) in a *free* variable t; evaluation at series arguments (t = -y q^m
// and friends) is a Horner pass, which sidesteps the non-terminating
// exponential one would hit evaluating the log-Adams sum at a unit like -y.

#include <string>
#include <utility>
#include <vector>

#include "ellgen/gradedpoly.hpp"
#include "ellgen/truncpoly.hpp"

namespace ellgen {

struct RootFamily {
  std::string name;
  int rank = 0;
  std::vector<GradedPoly> chern;  // chern[k-1] = c_k; always exactly `rank` entries
};

// chern may be shorter than rank (trailing classes zero) but never longer.
inline RootFamily root_family(std::string name, int rank, std::vector<GradedPoly> chern = {}) {
  if (rank < 0) throw std::invalid_argument("bundle rank must be nonnegative");
  if (static_cast<int>(chern.size()) > rank)
    throw std::invalid_argument("family " + name + " has more Chern classes than its rank");
  chern.resize(rank, GradedPoly());
  return {std::move(name), rank, std::move(chern)};
}

// The generator set the family's classes live in; null for a trivial family
// (all classes zero), in which case everything below degenerates to rank
// constants.
inline RingPtr family_ring(const RootFamily& f) {
  for (const auto& c : f.chern)
    if (c.ring()) return c.ring();
  return nullptr;
}

// Newton-Girard: p_k = (-1)^{k-1} k e_k + sum_{i=1}^{k-1} (-1)^{i-1} e_i p_{k-i},
// with e_i = 0 past the rank. Returned as p_1..p_k_max (out[k-1] = p_k); the
// degree cap silently kills every p_k with 2k beyond it.
inline std::vector<GradedPoly> power_sums(const RootFamily& f, int k_max) {
  if (k_max < 1) throw std::invalid_argument("power sums need k_max >= 1");
  auto e = [&f](int i) -> GradedPoly {
    return (i >= 1 && i <= f.rank) ? f.chern[i - 1] : GradedPoly();
  };
  std::vector<GradedPoly> p(k_max);
  for (int k = 1; k <= k_max; ++k) {
    GradedPoly s = e(k).scaled(Rational((k % 2 ? 1 : -1) * k));
    for (int i = 1; i < k; ++i) {
      GradedPoly term = e(i) * p[k - i - 1];
      s = (i % 2) ? s + term : s - term;
    }
    p[k - 1] = s;
  }
  return p;
}

// ch(psi^m E) = rank + sum_k m^k p_k / k!; `dual` negates the roots. Negative
// m composes with dual in the obvious way (m^k carries the sign).
inline GradedPoly adams_ch(const RootFamily& f, long m, bool dual = false) {
  RingPtr ring = family_ring(f);
  GradedPoly out = ring ? GradedPoly::constant_in(ring, Rational(f.rank))
                        : GradedPoly::constant(Rational(f.rank));
  int k_max = ring ? ring->degree_cap() / 2 : 0;
  if (k_max < 1) return out;
  std::vector<GradedPoly> p = power_sums(f, k_max);
  Rational mk(1);
  for (int k = 1; k <= k_max; ++k) {
    mk *= m;
    Rational c = mk / factorial_rat(k);
    if (dual && (k % 2)) c = -c;
    out = out + p[k - 1].scaled(c);
  }
  return out;
}

// ch(Lambda_t E) as an exact polynomial in a free variable t, built from
// exp(sum_m (-1)^{m-1} t^m/m ch(psi^m E)). K-theory promises the degree stays
// at rank(E); the t^{rank+1} coefficient is computed anyway and must vanish,
// which cross-checks the whole Newton bridge on every call.
inline TruncPoly<GradedPoly> lambda_poly_ch(const RootFamily& f, bool dual = false) {
  TruncPoly<GradedPoly> arg(f.rank + 2);
  for (int m = 1; m <= f.rank + 1; ++m)
    arg.set_coeff(m, adams_ch(f, m, dual).scaled(Rational(m % 2 ? 1 : -1, m)));
  TruncPoly<GradedPoly> lam = ring_exp(arg);
  if (!lam.coeff(f.rank + 1).is_zero_poly())
    throw std::logic_error("exterior-power series of " + f.name +
                           " does not terminate at its rank " + std::to_string(f.rank));
  return lam.truncated(f.rank + 1);
}

// Horner evaluation of a GradedPoly-coefficient polynomial at a point of any
// coefficient ring S; `lift` embeds the coefficients into S.
template <CoefficientRing S, class Lift>
S poly_eval(const TruncPoly<GradedPoly>& p, const S& t, Lift&& lift) {
  if (p.is_zero_poly()) return ring_zero<S>();
  int top = p.size() - 1;
  S acc = lift(p.coeff(top));
  for (int k = top - 1; k >= 0; --k) acc = S(acc * t + lift(p.coeff(k)));
  return acc;
}

// ch(Lambda_t E) at a concrete t. Fine for any t (unit or not): the
// underlying polynomial is exact of degree rank.
template <CoefficientRing S, class Lift>
S lambda_series_ch(const RootFamily& f, bool dual, const S& t, Lift&& lift) {
  return poly_eval(lambda_poly_ch(f, dual), t, lift);
}

// ch(S_t E) = 1 / ch(Lambda_{-t} E); t must make the value invertible in S
// (constant term 1 plus nilpotent-or-positive-valuation rest).
template <CoefficientRing S, class Lift>
S symmetric_series_ch(const RootFamily& f, bool dual, const S& t, Lift&& lift) {
  return ring_invert(lambda_series_ch(f, dual, S(-t), lift));
}

// Todd form exp(sum_k a_k p_k) with a_k the Taylor coefficients of
// log(x / (1 - e^{-x})); the product over roots of x/(1-e^{-x}).
inline GradedPoly todd_form(const RootFamily& f) {
  RingPtr ring = family_ring(f);
  int k_max = ring ? ring->degree_cap() / 2 : 0;
  if (k_max < 1)
    return ring ? GradedPoly::constant_in(ring, 1) : GradedPoly::constant(1);
  TruncPoly<Rational> den(k_max + 1);  // (1 - e^{-x}) / x
  for (int k = 0; k <= k_max; ++k)
    den.set_coeff(k, Rational(k % 2 ? -1 : 1) / factorial_rat(k + 1));
  TruncPoly<Rational> a = ring_log(ring_invert(den));
  std::vector<GradedPoly> p = power_sums(f, k_max);
  GradedPoly arg;
  for (int k = 1; k <= k_max; ++k) arg = arg + p[k - 1].scaled(a.coeff(k));
  return ring_exp(arg);
}

// sum_{rho=0}^{rank} (-1)^rho w(rho) ch(Lambda^rho E*), the building block of
// every a_n leading-term template. `weight` lists the coefficients of w as a
// polynomial in rho, constant term first, degree at most 4.
inline GradedPoly weighted_wedge_sum(const RootFamily& f, const std::vector<Rational>& weight) {
  if (weight.size() > 5)
    throw std::invalid_argument("weighted wedge sums only arise for weights of degree <= 4");
  TruncPoly<GradedPoly> lam = lambda_poly_ch(f, /*dual=*/true);
  GradedPoly out;
  for (int rho = 0; rho <= f.rank; ++rho) {
    Rational w(0), rp(1);
    for (const Rational& c : weight) {
      w += c * rp;
      rp *= rho;
    }
    if (sgn(w) == 0) continue;
    out = out + lam.coeff(rho).scaled(rho % 2 ? Rational(-w) : w);
  }
  return out;
}

inline GradedPoly degree_component(const GradedPoly& p, int k) { return p.degree_component(k); }

}  // namespace ellgen
