#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "ellgen/gaussian.hpp"
#include "ellgen/qseries.hpp"
#include "ellgen/truncpoly.hpp"

using namespace ellgen;

using QS = Q24Series<Rational>;

TEST_CASE("exponent grid arithmetic") {
  CHECK(q_frac(1, 8) + q_frac(1, 8) == q_frac(1, 4));
  CHECK(q_frac(1, 8).num == 3);
  CHECK(q_frac(-1, 2).num == -12);
  CHECK(q_int(2) - q_frac(1, 24) == Exp24{47});
  CHECK_THROWS_AS(q_frac(1, 5), std::domain_error);
  CHECK(exp24_str(q_frac(1, 8)) == "1/8");
  CHECK(exp24_str(q_int(3)) == "3");
  CHECK(trunc_add(EXP24_UNBOUNDED, q_int(-5)) == EXP24_UNBOUNDED);
}

TEST_CASE("simple products respect the grid and the bound") {
  QS one_minus_q = QS::constant(1, q_int(4));
  one_minus_q.add_to(q_int(1), -1);
  QS one_plus_q = QS::constant(1, q_int(4));
  one_plus_q.add_to(q_int(1), 1);

  QS prod = one_minus_q * one_plus_q;
  CHECK(prod.coeff(q_int(0)) == 1);
  CHECK(prod.coeff(q_int(1)) == 0);
  CHECK(prod.coeff(q_int(2)) == -1);
  CHECK(prod.trunc() == q_int(4));

  QS a = QS::monomial(1, q_frac(1, 8), q_int(3));
  QS sq = a * a;
  CHECK(sq.valuation() == q_frac(1, 4));

  // mixing truncation bounds takes the minimum
  QS wide = QS::constant(1, q_int(5));
  QS narrow = QS::constant(1, q_int(3));
  CHECK((wide * narrow).trunc() == q_int(3));
  CHECK((wide + narrow).trunc() == q_int(3));
}

TEST_CASE("no zero coefficient is ever stored") {
  QS s = QS::constant(1, q_int(3));
  s.add_to(q_int(1), Rational(5));
  s.add_to(q_int(1), Rational(-5));
  CHECK(s.terms().size() == 1);
  QS t = s - s;
  CHECK(t.is_zero_series());
}

TEST_CASE("coefficient queries past the bound are loud") {
  QS s = QS::constant(1, q_int(2));
  CHECK(s.coeff(q_int(1)) == 0);
  CHECK_THROWS_AS(s.coeff(q_int(2)), std::logic_error);
  CHECK_THROWS_AS(s.coeff(q_int(7)), std::logic_error);
}

TEST_CASE("phi matches the pentagonal-number expansion") {
  // prod (1-q^j) = sum_k (-1)^k q^{k(3k-1)/2}, k over all integers
  int order = 12;
  QS phi = phi_series<Rational>(order);
  QS pent = QS::zero(q_int(order + 1));
  for (long k = -10; k <= 10; ++k) {
    long e = k * (3 * k - 1) / 2;
    if (e >= 0 && e <= order) pent.add_to(q_int(e), rat((k % 2 == 0 || k == 0) ? 1 : -1));
  }
  CHECK(phi == pent);

  QS phi3 = phi_series<Rational>(3);
  CHECK(phi3.coeff(q_int(0)) == 1);
  CHECK(phi3.coeff(q_int(1)) == -1);
  CHECK(phi3.coeff(q_int(2)) == -1);
  CHECK(phi3.coeff(q_int(3)) == 0);
}

TEST_CASE("phi^3 and 1/phi^8 match frozen expansions") {
  // phi^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2}
  QS cubed = phi_pow_series<Rational>(3, 7);
  QS expect = QS::zero(q_int(8));
  for (long k = 0; k <= 3; ++k)
    expect.add_to(q_int(k * (k + 1) / 2), rat((k % 2 ? -1 : 1) * (2 * k + 1)));
  CHECK(cubed == expect);

  QS inv8 = phi_pow_series<Rational>(-8, 2);
  CHECK(inv8.coeff(q_int(0)) == 1);
  CHECK(inv8.coeff(q_int(1)) == 8);
  CHECK(inv8.coeff(q_int(2)) == 44);

  QS pos8 = phi_pow_series<Rational>(8, 2);
  CHECK(pos8.coeff(q_int(1)) == -8);
  CHECK(pos8.coeff(q_int(2)) == 20);
}

TEST_CASE("eta carries its fractional base exponent") {
  QS e3 = eta3_series<Rational>(3);
  CHECK(e3.valuation() == q_frac(1, 8));
  CHECK(e3.coeff(q_frac(1, 8) + q_int(1)) == -3);
  CHECK(eta_series<Rational>(2).valuation() == q_frac(1, 24));
}

TEST_CASE("inversion peels leading monomials and certifies itself") {
  QS f = QS::monomial(rat(2), q_frac(1, 8), q_int(3));
  f.add_to(q_frac(1, 8) + q_int(1), rat(5));
  f.add_to(q_frac(1, 8) + q_int(2), rat(-7, 3));

  QS g = series_invert(f);
  CHECK(g.valuation() == q_frac(-1, 8));
  QS prod = f * g;
  CHECK(prod.coeff(q_int(0)) == 1);
  CHECK(prod.coeff(q_int(1)) == 0);
  CHECK(prod.coeff(q_int(2)) == 0);
  // bound erodes by twice the leading exponent
  CHECK(g.trunc() == q_int(3) - q_frac(1, 4));

  CHECK_THROWS_AS(series_invert(QS::zero(q_int(2))), std::domain_error);
}

TEST_CASE("exp and log round-trip on random positive-valuation series") {
  std::mt19937 rng(20240817);
  auto random_series = [&](int terms) {
    QS s = QS::zero(q_int(4));
    for (int t = 0; t < terms; ++t) {
      long num = 1 + static_cast<long>(rng() % 95);        // valuation >= 1/24
      long cn = static_cast<long>(rng() % 41) - 20;        // small rational coeffs
      long cd = 1 + static_cast<long>(rng() % 12);
      s.add_to(Exp24{num}, rat(cn, cd));
    }
    return s;
  };
  for (int trial = 0; trial < 50; ++trial) {
    QS f = random_series(6);
    QS g = random_series(4);
    QS ef = series_exp(f);
    CHECK(series_log(ef) == f);
    CHECK(ef * series_exp(g) == series_exp(f + g));
    CHECK(ef * series_exp(-f) == QS::constant(1, q_int(4)));
  }
}

TEST_CASE("exp rejects a non-nilpotent constant term") {
  QS f = QS::constant(1, q_int(3));
  CHECK_THROWS_AS(series_exp(f), std::domain_error);
}

TEST_CASE("truncation monotonicity: recompute high, truncate down, agree") {
  QS lo = phi_pow_series<Rational>(-5, 3);
  QS hi = phi_pow_series<Rational>(-5, 9);
  CHECK(hi.truncated(lo.trunc()) == lo);

  QS elo = series_exp(phi_series<Rational>(3) - QS::constant(1, q_int(4)));
  QS ehi = series_exp(phi_series<Rational>(9) - QS::constant(1, q_int(10)));
  CHECK(ehi.truncated(elo.trunc()) == elo);
}

TEST_CASE("ring laws hold for random series over several rings") {
  std::mt19937 rng(7);
  auto rand_rat = [&]() { return rat(static_cast<long>(rng() % 21) - 10, 1 + rng() % 7); };
  auto rand_qs = [&]() {
    QS s = QS::zero(q_int(3));
    for (int t = 0; t < 5; ++t) s.add_to(Exp24{static_cast<long>(rng() % 72)}, rand_rat());
    return s;
  };
  for (int trial = 0; trial < 40; ++trial) {
    QS a = rand_qs(), b = rand_qs(), c = rand_qs();
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + QS::zero(q_int(3)) == a);
    CHECK(a * QS::constant(1, q_int(3)) == a);
    CHECK((a - a).is_zero_series());
  }

  // Gaussian rationals behave like a ring with i^2 = -1
  using G = GaussianRational;
  G i = ring_traits<G>::imaginary_unit();
  CHECK(i * i == -ring_one<G>());
  G x(rat(3), rat(-2));
  CHECK(x * ring_invert(x) == ring_one<G>());
  CHECK(gaussian_i_pow<Rational>(-1) == -i);

  // nesting: series over series
  using QQ = Q24Series<QS>;
  QQ outer = QQ::constant(phi_series<Rational>(2), q_int(2));
  outer.add_to(q_int(1), phi_pow_series<Rational>(-1, 2));
  QQ sq = outer * outer;
  CHECK(sq.coeff(q_int(1)) == phi_series<Rational>(2) * phi_pow_series<Rational>(-1, 2) +
                                  phi_pow_series<Rational>(-1, 2) * phi_series<Rational>(2));
}

TEST_CASE("truncated polynomial ring: caps, inversion, exponentials") {
  using TP = TruncPoly<Rational>;
  TP u = TP::variable(rat(1), 5);
  TP p = TP::constant(rat(1), 5) + u;
  TP q = ring_pow(p, 6);
  CHECK(q.coeff(4) == 15);  // C(6,4)
  CHECK_THROWS_AS(q.coeff(5), std::logic_error);

  TP inv = ring_invert(p);
  CHECK(inv * p == TP::constant(rat(1), 5));
  CHECK(inv.coeff(3) == -1);

  TP eu = ring_exp(u);
  CHECK(eu.coeff(4) == rat(1, 24));
  TP eneg = ring_exp(-u);
  CHECK(eu * eneg == TP::constant(rat(1), 5));

  // exp of a non-nilpotent constant cannot terminate
  CHECK_THROWS_AS(ring_exp(TP::constant(rat(1), 5)), std::domain_error);
}

TEST_CASE("series witnesses report the first mismatching exponent") {
  QS a = phi_series<Rational>(5);
  QS b = a;
  b.set_coeff(q_int(2), rat(9));
  auto mm = first_mismatch(a, b);
  REQUIRE(mm.has_value());
  CHECK(mm->e == q_int(2));
  CHECK(mm->lhs == -1);
  CHECK(mm->rhs == 9);
  CHECK(equal_on_common(a, a.truncated(q_int(3))));
}
