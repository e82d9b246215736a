#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "ellgen/e8char.hpp"
#include "ellgen/eisenstein.hpp"

using namespace ellgen;

using Poly = GradedPoly;
using PolySeries = Q24Series<GradedPoly>;
using Scalar = Q24Series<Rational>;

namespace {

// Independent oracle: expand the same three-theta combination from the
// *sum-form* theta expansions (Jacobi triple product identity), substituting
// y^{m/2} -> exp(m v/2) by hand.  No code is shared with theta_jet's product
// form or with the symmetrizer, so agreement pins both at once.
PolySeries sum_form_jet(int k, const Poly& v, int q_order) {
  ThetaExpansion s = theta_qy_sum(k, q_order);
  PolySeries out = PolySeries::zero(s.trunc());
  for (const auto& [e, yp] : s.terms()) {
    Poly g;
    for (const auto& [m2, c] : yp.coeffs()) {
      REQUIRE(sgn(c.im.get_num()) == 0);  // even thetas are rational
      g = g + ring_exp(v.scaled(rat(m2, 2))).scaled(c.re);
    }
    out.add_to(e, g);
  }
  return out;
}

PolySeries oracle_combo(const RingPtr& scratch, int q_order) {
  const Exp24 tr = q_int(q_order + 1);
  PolySeries combo = PolySeries::zero(tr);
  for (int k : {2, 3, 4}) {
    PolySeries prod = PolySeries::constant(ring_one<Poly>(), tr);
    for (int kappa = 0; kappa < 8; ++kappa)
      prod = prod * sum_form_jet(k, Poly::generator(scratch, kappa), q_order);
    combo = combo + prod.truncated(tr);
  }
  return combo.scale(rat(1, 2));
}

RingPtr eight_roots(int cap) {
  std::vector<GeneratorSet::Generator> gens;
  for (int k = 1; k <= 8; ++k) gens.push_back({"y" + std::to_string(k), 2});
  return GeneratorSet::make(gens, cap);
}

// the scalar q-series sitting on one exponent vector of the coefficients
Scalar coeff_series(const PolySeries& f, const Mono& m) {
  Scalar out = Scalar::zero(f.trunc());
  for (const auto& [e, p] : f.terms()) out.add_to(e, p.coeff(m));
  return out;
}

Scalar scalar_of(std::vector<long> coeffs, Exp24 tr) {
  Scalar out = Scalar::zero(tr);
  for (size_t n = 0; n < coeffs.size(); ++n) out.add_to(q_int(static_cast<int>(n)), coeffs[n]);
  return out;
}

}  // namespace

TEST_CASE("y = 0 slice is the weight-4 Eisenstein series") {
  // cap 2 sits below every P-generator, so the whole combination degenerates
  // to its scalar slice
  PolySeries combo = e8_theta_combo(3, 2);
  Scalar slice = coeff_series(combo, {0, 0, 0});
  CHECK(slice == eisenstein_e(4, 3));
  for (const auto& [e, p] : combo.terms()) {
    INFO("q-exponent " << exp24_str(e));
    CHECK(p.top_degree() <= 0);
  }

  // and the constant slice at a cap that keeps all generators alive agrees
  PolySeries full = e8_theta_combo(2, 12);
  CHECK(coeff_series(full, {0, 0, 0}) == eisenstein_e(4, 2));
}

TEST_CASE("q^0 coefficient is exactly 1") {
  PolySeries combo = e8_theta_combo(2, 12);
  CHECK(combo.coeff(q_int(0)) == Poly::constant(1));
}

TEST_CASE("theta combination matches the sum-form oracle through degree 12") {
  const int q_order = 2;
  PolySeries combo = e8_theta_combo(q_order, 12);
  RingPtr scratch = eight_roots(12);
  PolySeries oracle = oracle_combo(scratch, q_order);

  // evenness in each root separately, on the oracle side
  CHECK(coeff_series(oracle, {1, 0, 0, 0, 0, 0, 0, 0}).is_zero_series());
  CHECK(coeff_series(oracle, {3, 0, 0, 0, 0, 0, 0, 0}).is_zero_series());
  CHECK(coeff_series(oracle, {1, 1, 0, 0, 0, 0, 0, 0}).is_zero_series());
  CHECK(coeff_series(oracle, {2, 1, 0, 0, 0, 0, 0, 0}).is_zero_series());

  // degree 4: coefficient of P2 against the coefficient of y1^2
  Scalar B = coeff_series(combo, {1, 0, 0});
  CHECK(B == coeff_series(oracle, {2, 0, 0, 0, 0, 0, 0, 0}));

  // degree 8: P2^2 shows up twice in y1^2 y2^2, and P4 + P2^2 once in y1^4
  Scalar D = coeff_series(combo, {2, 0, 0});
  Scalar C = coeff_series(combo, {0, 1, 0});
  CHECK(D == coeff_series(oracle, {2, 2, 0, 0, 0, 0, 0, 0}).scale(rat(1, 2)));
  CHECK(C + D == coeff_series(oracle, {4, 0, 0, 0, 0, 0, 0, 0}));

  // degree 12: y1^2 y2^2 y3^2 isolates 6 P2^3; y1^4 y2^2 carries P2 P4 + 3 P2^3
  Scalar F = coeff_series(combo, {3, 0, 0});
  Scalar G = coeff_series(combo, {1, 1, 0});
  Scalar H = coeff_series(combo, {0, 0, 1});
  CHECK(F == coeff_series(oracle, {2, 2, 2, 0, 0, 0, 0, 0}).scale(rat(1, 6)));
  CHECK(G + F.scale(3) == coeff_series(oracle, {4, 2, 0, 0, 0, 0, 0, 0}));
  CHECK(G + H + F == coeff_series(oracle, {6, 0, 0, 0, 0, 0, 0, 0}));
}

TEST_CASE("lattice shell moments pin the P2 tower") {
  // Every q-coefficient of the combination is a sum of exp((x, v)) over one
  // shell of the even unimodular rank-8 lattice, so its degree-2k slice is
  // sum (x,v)^{2k} / (2k)!.  The shells are 2-, 4- and 6-designs (the Weyl
  // group has no invariants of degree 4 or 6), which forces
  //   sum (x,v)^2 = N r^2/8 (v,v),
  //   sum (x,v)^4 = 3 N r^4/80 (v,v)^2,
  //   sum (x,v)^6 = 15 N r^6/960 (v,v)^3
  // for a shell of N vectors of norm r^2.  With shells (240, 2) and
  // (2160, 4) this gives exact rational pins — and no P4 or P6 at all.
  PolySeries combo = e8_theta_combo(2, 12);
  const Exp24 tr = q_int(3);

  Scalar B = coeff_series(combo, {1, 0, 0});
  Scalar Bpin = Scalar::zero(tr);
  Bpin.add_to(q_int(1), rat(240 * 2, 8 * 2));      // 30
  Bpin.add_to(q_int(2), rat(2160 * 4, 8 * 2));     // 540
  CHECK(B == Bpin);

  Scalar D = coeff_series(combo, {2, 0, 0});
  Scalar Dpin = Scalar::zero(tr);
  Dpin.add_to(q_int(1), rat(3 * 240 * 4, 80 * 24));    // 3/2
  Dpin.add_to(q_int(2), rat(3 * 2160 * 16, 80 * 24));  // 54
  CHECK(D == Dpin);

  Scalar F = coeff_series(combo, {3, 0, 0});
  Scalar Fpin = Scalar::zero(tr);
  Fpin.add_to(q_int(1), rat(15 * 240 * 8, 960 * 720));    // 1/24
  Fpin.add_to(q_int(2), rat(15 * 2160 * 64, 960 * 720));  // 3
  CHECK(F == Fpin);

  CHECK(coeff_series(combo, {0, 1, 0}).is_zero_series());
  CHECK(coeff_series(combo, {1, 1, 0}).is_zero_series());
  CHECK(coeff_series(combo, {0, 0, 1}).is_zero_series());

  // third shell (6720, 6), degree 4 only
  PolySeries deeper = e8_theta_combo(3, 4);
  Scalar B3 = coeff_series(deeper, {1, 0, 0});
  CHECK(B3.coeff(q_int(3)) == rat(6720 * 6, 8 * 2));  // 2520
}

TEST_CASE("ch(V) dimensions and the q^0 normalization") {
  PolySeries chv = chV_series(2, 12);
  CHECK(chv.coeff(q_int(0)) == Poly::constant(1));
  CHECK(chv.coeff(q_int(1)).constant_part() == 248);
  CHECK(chv.coeff(q_int(2)).constant_part() == 4124);

  // scalar division oracle: (1 + 240q + 2160q^2) / phi^8
  Scalar dims = eisenstein_e(4, 2) * series_invert(phi_pow_series<Rational>(8, 2));
  for (int n = 0; n <= 2; ++n)
    CHECK(chv.coeff(q_int(n)).constant_part() == dims.coeff(q_int(n)));
}

TEST_CASE("adjoint characters and the second Chern class") {
  E8Family fam = e8_family(12);
  E8CharacterSeries chars = e8_characters_for(fam, 2);
  CHECK(chars.chW.constant_part() == 248);
  CHECK(chars.chWbar.constant_part() == 4124);
  CHECK(chars.c2 == chars.family.P2.scaled(-30));

  // ch(W) = 248 + 30 P2 + ...: the degree-4 slice knots ch(W) to c2(W) as
  // ch_2 = -c2, locking the -30 normalization
  CHECK(chars.chW.degree_component(4) == chars.family.P2.scaled(30));
  CHECK(chars.chW.degree_component(4) == chars.c2.scaled(-1));

  // a shallow q_order still exposes chW/chWbar (same family, same ring)
  E8CharacterSeries shallow = e8_characters_for(fam, 0);
  CHECK(shallow.chW == chars.chW);
  CHECK(shallow.chWbar == chars.chWbar);
  CHECK(shallow.chV.trunc() == q_int(1));
}

TEST_CASE("lower caps are exact truncations") {
  PolySeries at4 = e8_theta_combo(2, 4);
  PolySeries at12 = e8_theta_combo(2, 12);
  CHECK(coeff_series(at4, {1, 0, 0}) == coeff_series(at12, {1, 0, 0}));
  CHECK(coeff_series(at4, {0, 0, 0}) == coeff_series(at12, {0, 0, 0}));
  // and the P2^2 slot really is cut off at cap 4
  CHECK(coeff_series(at4, {2, 0, 0}).is_zero_series());
}

TEST_CASE("degree cap 16 is refused") {
  CHECK_THROWS_AS(e8_family(16), std::invalid_argument);
  CHECK_THROWS_AS(e8_theta_combo(2, 16), std::invalid_argument);
  CHECK_NOTHROW(e8_theta_combo(0, 14));
}

TEST_CASE("sanity: the known scalar slice values") {
  PolySeries combo = e8_theta_combo(3, 2);
  CHECK(coeff_series(combo, {0, 0, 0}) == scalar_of({1, 240, 2160, 6720}, q_int(4)));
}
