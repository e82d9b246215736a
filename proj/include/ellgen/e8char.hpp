#pragma once
// The E8 gauge factor.  One copy of E8 enters the genus through the
// three-theta combination
//
//   Theta(tau, y) = 1/2 ( prod_k theta2(y_k) + prod_k theta3(y_k) + prod_k theta4(y_k) )
//
// over eight formal roots y_1..y_8, together with the character series
// ch(V) = Theta / phi(q)^8 it generates.  The combination is even in every
// root and symmetric under permutations, so it is a polynomial in the even
// power sums P2 = sum y_k^2, P4, P6 — and with the ambient degree cap below 16
// those three generate everything that can appear.  We expand the products
// once in a scratch ring of eight nilpotent roots, rewrite the result in
// P2/P4/P6 by exact linear algebra, and cache the outcome as scalar
// q-series per P-monomial; instantiating into a caller's graded ring is then
// a cheap substitution.  The half-integer q-powers of the individual theta3
// and theta4 products must cancel in the sum, and the expansion is refused
// to the left of that identity: integrality is checked, not assumed.
//
// Conventions: the roots carry the same 2*pi*i normalization as every other
// first Chern class in this library, and q-series coefficients stay exact
// rationals throughout.

#include <array>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ellgen/gradedpoly.hpp"
#include "ellgen/qseries.hpp"
#include "ellgen/symmetrize.hpp"
#include "ellgen/theta.hpp"

namespace ellgen {

// Handles to the even power-sum generators of one E8 factor inside whatever
// graded ring the caller assembled.  When the ring's degree cap sits below a
// generator's degree the handle is simply the zero polynomial and the factor
// degenerates to its scalar (y = 0) slice.
struct E8Family {
  std::string label = "alpha";  // cosmetic, distinguishes the two E8xE8 copies
  RingPtr ring;
  GradedPoly P2, P4, P6;  // degrees 4, 8, 12
};

// Fresh ring holding exactly one family; `suffix` decorates the generator
// names so two copies can coexist after a merge elsewhere.
inline E8Family e8_family(int cap, std::string label = "alpha",
                          const std::string& suffix = "") {
  if (cap >= 16)
    throw std::invalid_argument(
        "E8 characters: degree cap must stay below 16 (degree-16 invariants "
        "are outside the P2/P4/P6 span)");
  RingPtr ring = GeneratorSet::make(
      {{"P2" + suffix, 4}, {"P4" + suffix, 8}, {"P6" + suffix, 12}}, cap);
  return {std::move(label), ring, GradedPoly::generator(ring, 0),
          GradedPoly::generator(ring, 1), GradedPoly::generator(ring, 2)};
}

namespace detail {

// The combination expanded at the maximal cap 14, as scalar q-series keyed by
// the exponents of P2^i P4^j P6^k.  Everything at lower caps is an exact
// truncation of this table: the scratch-ring arithmetic is degree-graded and
// division only ever happens in scalars.
using E8ComboTable = std::map<std::array<int, 3>, Q24Series<Rational>>;

inline E8ComboTable build_e8_combo_table(int q_order) {
  constexpr int kCap = 14;  // P2^3, P2*P4, P6 top out at degree 12
  std::vector<GeneratorSet::Generator> roots;
  roots.reserve(8);
  for (int k = 1; k <= 8; ++k) roots.push_back({"y" + std::to_string(k), 2});
  RingPtr scratch = GeneratorSet::make(std::move(roots), kCap);

  const Exp24 tr = q_int(q_order + 1);
  Q24Series<GradedPoly> combo = Q24Series<GradedPoly>::zero(tr);
  for (int which : {2, 3, 4}) {
    Q24Series<GradedPoly> prod =
        Q24Series<GradedPoly>::constant(ring_one<GradedPoly>(), tr);
    for (int kappa = 0; kappa < 8; ++kappa)
      prod = prod * theta_jet(which, GradedPoly::generator(scratch, kappa), q_order);
    combo = combo + prod;
  }
  combo = combo.scale(rat(1, 2));
  if (!combo.all_exponents_integral())
    throw std::logic_error(
        "E8 theta combination: half-integer q-powers failed to cancel");

  RingPtr pring = GeneratorSet::make({{"P2", 4}, {"P4", 8}, {"P6", 12}}, kCap);
  GradedPoly P2 = GradedPoly::generator(pring, 0);
  GradedPoly P4 = GradedPoly::generator(pring, 1);
  GradedPoly P6 = GradedPoly::generator(pring, 2);
  // elementary symmetric functions of the squared roots, written in the power
  // sums; e_4 and beyond sit at degree >= 16 and can never fire under the cap
  std::vector<GradedPoly> images = {
      P2,
      (P2 * P2 - P4).scaled(rat(1, 2)),
      (P2 * P2 * P2 - (P2 * P4).scaled(3) + P6.scaled(2)).scaled(rat(1, 6)),
  };
  images.resize(8);
  std::vector<int> vars(8);
  for (int i = 0; i < 8; ++i) vars[i] = i;
  const std::vector<SymmetricBlock> blocks = {{vars, images, /*squares=*/true}};

  E8ComboTable table;
  for (const auto& [e, coeff] : combo.terms()) {
    // symmetrize() doubles as the evenness check: an odd root exponent makes
    // it throw rather than silently land somewhere wrong
    GradedPoly sym = symmetrize(coeff, blocks);
    auto put = [&](std::array<int, 3> key, const Rational& c) {
      auto it = table.find(key);
      if (it == table.end())
        it = table.emplace(key, Q24Series<Rational>::zero(tr)).first;
      it->second.add_to(e, c);
    };
    Rational c0 = sym.constant_part();
    if (sgn(c0.get_num()) != 0) put({0, 0, 0}, c0);
    for (const auto& t : sym.sorted_terms())
      if (t.degree > 0) put({t.exps[0], t.exps[1], t.exps[2]}, t.coeff);
  }
  return table;
}

inline const E8ComboTable& e8_combo_table(int q_order) {
  static std::mutex mu;
  static std::map<int, E8ComboTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q_order);
  if (it == cache.end())
    it = cache.emplace(q_order, build_e8_combo_table(q_order)).first;
  return it->second;
}

}  // namespace detail

// Theta(tau, y) written in the family's P-generators, exact through q^q_order.
inline Q24Series<GradedPoly> e8_theta_combo_for(const E8Family& fam, int q_order) {
  if (!fam.ring)
    throw std::invalid_argument("E8 theta combination: family has no ambient ring");
  if (fam.ring->degree_cap() >= 16)
    throw std::invalid_argument(
        "E8 theta combination: degree cap must stay below 16");
  const auto& table = detail::e8_combo_table(q_order);
  Q24Series<GradedPoly> out = Q24Series<GradedPoly>::zero(q_int(q_order + 1));
  for (const auto& [key, series] : table) {
    GradedPoly mono = ring_pow(fam.P2, key[0]) * ring_pow(fam.P4, key[1]) *
                      ring_pow(fam.P6, key[2]);
    if (mono.is_zero_poly()) continue;
    for (const auto& [e, c] : series.terms()) out.add_to(e, mono.scaled(c));
  }
  return out;
}

inline Q24Series<GradedPoly> e8_theta_combo(int q_order, int cap) {
  return e8_theta_combo_for(e8_family(cap), q_order);
}

// ch(V) = Theta / phi^8; the q^0 coefficient is exactly 1.
inline Q24Series<GradedPoly> chV_series_for(const E8Family& fam, int q_order) {
  return e8_theta_combo_for(fam, q_order) *
         series_invert(phi_pow_series<GradedPoly>(8, q_order));
}

inline Q24Series<GradedPoly> chV_series(int q_order, int cap) {
  return chV_series_for(e8_family(cap), q_order);
}

// Everything the genus assembly consumes from one E8 factor: the theta
// combination, ch(V), the level-one coefficients ch(W) = [q^1] ch(V) and
// ch(Wbar) = [q^2] ch(V) (dimensions 248 and 4124), and the second Chern
// class c2(W) = -30 P2 of the adjoint bundle.
struct E8CharacterSeries {
  E8Family family;
  Q24Series<GradedPoly> theta_combo;
  Q24Series<GradedPoly> chV;
  GradedPoly chW, chWbar, c2;
};

inline E8CharacterSeries e8_characters_for(const E8Family& fam, int q_order) {
  E8CharacterSeries out;
  out.family = fam;
  out.theta_combo = e8_theta_combo_for(fam, q_order);
  // chW/chWbar need the series through q^2 even when the caller asked for less
  const int deep = q_order < 2 ? 2 : q_order;
  Q24Series<GradedPoly> chv = chV_series_for(fam, deep);
  out.chW = chv.coeff(q_int(1));
  out.chWbar = chv.coeff(q_int(2));
  out.chV = deep == q_order ? std::move(chv) : chv.truncated(q_int(q_order + 1));
  out.c2 = fam.P2.scaled(-30);
  return out;
}

inline E8CharacterSeries e8_characters(int q_order, int cap) {
  return e8_characters_for(e8_family(cap), q_order);
}

}  // namespace ellgen
