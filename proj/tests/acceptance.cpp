// Acceptance gate: one criterion per line, pass/fail with a witness on
// failure. Everything here is checked from scratch against the library's
// public interface; tolerances and time budgets are pinned below. The exit
// code is the number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ellgen/eisenstein.hpp"
#include "ellgen/e8char.hpp"
#include "ellgen/genus.hpp"
#include "ellgen/theta.hpp"

using namespace ellgen;

namespace {

constexpr double THETA_TOL = 1e-9;   // numeric theta transformation laws
constexpr double JACOBI_TOL = 1e-6;  // numeric genus functional equations

// per-criterion wall-clock budgets, milliseconds
constexpr std::array<double, 11> BUDGET_MS = {
    1000,    // 1: Eisenstein products
    1000,    // 2: E2 expansion
    5000,    // 3: theta laws
    120000,  // 4: route equivalence
    30000,   // 5: E8 character block
    300000,  // 6: expansion templates
    600000,  // 7: anomaly rows, one block
    600000,  // 8: anomaly rows, two blocks
    300000,  // 9: vanishing clauses
    120000,  // 10: numeric functional equations
    120000,  // 11: overdetermined weight-12 solve
};

struct Outcome {
  bool pass = true;
  std::string note;  // failure witness, or a clarifying remark on pass

  void fail(const std::string& why) {
    pass = false;
    if (!note.empty()) note += "; ";
    note += why;
  }
};

std::string squeeze(const std::string& s, std::size_t n = 220) {
  if (s.size() <= n) return s;
  return s.substr(0, n) + "...";
}

bool match_coeffs(const Q24Series<Rational>& s, const std::vector<long>& want, Outcome& out,
                  const std::string& label) {
  for (std::size_t j = 0; j < want.size(); ++j) {
    const Rational got = s.coeff(q_int(static_cast<int>(j)));
    if (got == rat(want[j])) continue;
    out.fail(label + " q^" + std::to_string(j) + " = " + rat_str(got) + ", expected " +
             std::to_string(want[j]));
    return false;
  }
  return true;
}

// 1. The normalized Eisenstein products that every coefficient table rests on.
Outcome criterion_eisenstein_products() {
  Outcome out;
  const auto e4 = eisenstein_e(4, 3), e6 = eisenstein_e(6, 3);
  match_coeffs(e4, {1, 240, 2160, 6720}, out, "E4");
  match_coeffs(e6, {1, -504, -16632, -122976}, out, "E6");
  match_coeffs(e4 * e4, {1, 480, 61920}, out, "E4^2");
  match_coeffs(e4 * e6, {1, -264, -135432}, out, "E4E6");
  match_coeffs(e4 * e4 * e4, {1, 720, 179280}, out, "E4^3");
  match_coeffs(e6 * e6, {1, -1008, 220752}, out, "E6^2");
  match_coeffs(e4 * e4 * e6, {1, -24, -196632}, out, "E4^2E6");
  match_coeffs(e4 * e4 * e4 * e4, {1, 960, 354240}, out, "E4^4");
  match_coeffs(e4 * e6 * e6, {1, -768, -19008}, out, "E4E6^2");
  return out;
}

// 2. The quasimodular E2.
Outcome criterion_e2() {
  Outcome out;
  match_coeffs(eisenstein_e(2, 2), {1, -24, -72}, out, "E2");
  return out;
}

// 3. Theta transformation laws numerically, lattice shifts exactly.
Outcome criterion_theta_laws() {
  using cd = std::complex<double>;
  Outcome out;
  const cd I(0, 1);
  const cd samples[5][2] = {
      {cd(0.30, 0.80), cd(0.17, 0.05)},  {cd(-0.40, 1.30), cd(-0.60, -0.20)},
      {cd(0.00, 0.90), cd(0.31, 0.00)},  {cd(0.15, 1.70), cd(0.00, 0.40)},
      {cd(-0.20, 2.00), cd(0.55, 0.10)},
  };
  auto rel = [](cd a, cd b) {
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };
  for (const auto& s : samples) {
    const cd tau = s[0], z = s[1];
    const cd root8 = std::exp(I * M_PI / 4.0);
    // tau -> tau + 1: eighth-root phases on theta_1/theta_2, swap of 3 and 4
    double r = rel(theta_numeric(1, tau + 1.0, z), root8 * theta_numeric(1, tau, z));
    r = std::max(r, rel(theta_numeric(2, tau + 1.0, z), root8 * theta_numeric(2, tau, z)));
    r = std::max(r, rel(theta_numeric(3, tau + 1.0, z), theta_numeric(4, tau, z)));
    r = std::max(r, rel(theta_numeric(4, tau + 1.0, z), theta_numeric(3, tau, z)));
    // tau -> -1/tau with z/tau and alpha = sqrt(-i tau) e^{i pi z^2/tau}
    const cd alpha = std::sqrt(-I * tau) * std::exp(I * M_PI * z * z / tau);
    const cd st = -1.0 / tau, sz = z / tau;
    r = std::max(r, rel(theta_numeric(1, st, sz), -I * alpha * theta_numeric(1, tau, z)));
    r = std::max(r, rel(theta_numeric(2, st, sz), alpha * theta_numeric(4, tau, z)));
    r = std::max(r, rel(theta_numeric(3, st, sz), alpha * theta_numeric(3, tau, z)));
    r = std::max(r, rel(theta_numeric(4, st, sz), alpha * theta_numeric(2, tau, z)));
    if (r >= THETA_TOL) {
      std::ostringstream os;
      os << "residual " << r << " at tau = " << tau.real() << "+" << tau.imag() << "i";
      out.fail(os.str());
      break;
    }
  }
  // z -> z + 1 and z -> z + tau as exact (q, y)-series
  const GaussianRational one = ring_one<GaussianRational>();
  for (int k = 1; k <= 4 && out.pass; ++k) {
    const ThetaExpansion t = theta_qy(k, 12);
    if (!(shift_z_by_one(t) == (k <= 2 ? -t : t)))
      out.fail("z+1 shift failed for theta_" + std::to_string(k));
    const ThetaExpansion lhs = shift_z_by_tau(t);
    const GaussianRational s = (k == 1 || k == 4) ? -one : one;
    const ThetaExpansion rhs = mul_qy_monomial(t, -q_frac(1, 2), -2, s);
    if (!equal_on_common(lhs, rhs) || !(std::min(lhs.trunc(), rhs.trunc()) > q_int(4)))
      out.fail("z+tau shift failed for theta_" + std::to_string(k));
  }
  return out;
}

// 4. The two assembly routes agree coefficient-for-coefficient.
Outcome criterion_route_equivalence() {
  Outcome out;
  struct Row {
    int d, l;
    Gauge g;
  };
  const std::vector<Row> rows = {{1, 1, Gauge::None}, {2, 2, Gauge::None}, {3, 2, Gauge::None},
                                 {1, 1, Gauge::E8},   {2, 2, Gauge::E8},   {3, 2, Gauge::E8},
                                 {1, 2, Gauge::E8xE8}};
  for (const Row& r : rows) {
    GenusInstance inst;
    inst.d = r.d;
    inst.l = r.l;
    inst.gauge = r.g;
    inst.q_order = 2;
    inst.u_order = 4;
    const VerificationReport rep = verify_route_equivalence(inst);
    if (!rep.pass) out.fail(instance_str(inst) + ": " + squeeze(rep.witness));
  }
  return out;
}

// 5. The E8 block: scalar slice, character dimensions, grid and parity.
Outcome criterion_e8_block() {
  Outcome out;
  const E8Family fam = e8_family(14);
  const auto combo = e8_theta_combo_for(fam, 3);
  if (!combo.all_exponents_integral()) out.fail("theta combo has fractional q-powers");
  const std::vector<long> e4 = {1, 240, 2160, 6720};
  for (int j = 0; j <= 3; ++j) {
    const Rational got = combo.coeff(q_int(j)).constant_part();
    if (!(got == rat(e4[j])))
      out.fail("combo scalar slice q^" + std::to_string(j) + " = " + rat_str(got));
  }
  const auto chv = chV_series_for(fam, 2);
  const std::vector<long> dims = {1, 248, 4124};
  for (int j = 0; j <= 2; ++j) {
    const Rational got = chv.coeff(q_int(j)).constant_part();
    if (!(got == rat(dims[j])))
      out.fail("ch(V) dimension at q^" + std::to_string(j) + " = " + rat_str(got));
  }
  // parity: rebuild the combo over explicit roots and push it through the
  // squares-symmetric rewriter, which refuses any odd power sum
  std::vector<GeneratorSet::Generator> gens;
  for (int i = 1; i <= 8; ++i) gens.push_back({"y" + std::to_string(i), 2});
  const RingPtr ring = GeneratorSet::make(gens, 6);
  const E8Family small = e8_family(6, "small");
  const Exp24 tr = q_int(3);
  PolySeries combo_roots = PolySeries::zero(tr);
  for (int k = 2; k <= 4; ++k) {
    PolySeries prod = PolySeries::constant(ring_one<GradedPoly>(), tr);
    for (int i = 0; i < 8; ++i) prod = prod * theta_jet(k, GradedPoly::generator(ring, i), 2);
    combo_roots = combo_roots + prod;
  }
  combo_roots = combo_roots.scale(rat(1, 2));
  SymmetricBlock by;
  by.squares = true;
  const GradedPoly z0 = GradedPoly::constant_in(small.ring, 0);
  by.e_images = {small.P2, z0, z0, z0, z0, z0, z0, z0};
  for (int i = 0; i < 8; ++i) by.vars.push_back(i);
  const auto small_combo = e8_theta_combo_for(small, 2);
  try {
    for (const auto& [e, g] : combo_roots.terms()) {
      const GradedPoly rewritten = symmetrize(g, {by});
      if (!(rewritten == small_combo.coeff(e)))
        out.fail("root-level combo disagrees with the P-level combo at q^" + exp24_str(e));
    }
  } catch (const std::exception& ex) {
    out.fail(std::string("root-level combo is not even in the roots: ") + ex.what());
  }
  return out;
}

// 6. Closed-form u-expansion templates against the pipeline.
Outcome criterion_expansion_templates() {
  Outcome out;
  for (const auto& [d, l, g] :
       std::vector<std::tuple<int, int, Gauge>>{{2, 2, Gauge::E8}, {1, 2, Gauge::E8xE8}}) {
    GenusInstance inst;
    inst.d = d;
    inst.l = l;
    inst.gauge = g;
    inst.q_order = 2;
    inst.u_order = 4;
    const VerificationReport rep = verify_prop_expansions(inst);
    if (!rep.pass) out.fail(instance_str(inst) + ": " + squeeze(rep.witness));
  }
  return out;
}

// 7/8. The anomaly ledger rows at the minimal instance of every case.
Outcome criterion_anomaly(Gauge gauge) {
  Outcome out;
  // smallest (d, l) realizing each case in ascending 2d - l order
  const std::vector<std::pair<int, int>> one = {{2, 4}, {2, 2}, {3, 2}, {4, 2},
                                                {5, 2}, {6, 2}, {7, 2}};
  const std::vector<std::pair<int, int>> two = {{1, 6}, {2, 6}, {2, 4}, {2, 2},
                                                {3, 2}, {4, 2}, {5, 2}};
  for (const auto& [d, l] : gauge == Gauge::E8 ? one : two) {
    const int t = 2 * d - l;
    GenusInstance inst;
    inst.d = d;
    inst.l = l;
    inst.gauge = gauge;
    inst.q_order = 2;
    inst.u_order = 0;
    const VerificationReport rep = verify_anomaly_case(inst, t);
    if (!rep.pass)
      out.fail("2d-l=" + std::to_string(t) + " at " + instance_str(inst) + ": " +
               squeeze(rep.witness, 160));
  }
  return out;
}

// 9. Vanishing clauses: one instance per clause and range, checked as exact
// zero polynomials straight from the u-expansion.
Outcome criterion_vanishing(Gauge gauge) {
  Outcome out;
  struct Pick {
    int n, d, l;
  };
  // parity picks: t = 2d - l makes t + n odd; low picks: t at the clause bound
  std::vector<Pick> picks = {{0, 2, 3}, {1, 2, 2}, {2, 2, 3}, {3, 2, 2}, {4, 2, 3}};
  const int lo0 = gauge == Gauge::E8 ? -2 : -6;
  for (int n = 0; n <= 4; ++n) picks.push_back({n, 2, 4 - (lo0 - n)});
  for (const Pick& p : picks) {
    GenusInstance inst;
    inst.d = p.d;
    inst.l = p.l;
    inst.gauge = gauge;
    inst.q_order = 2;
    inst.u_order = 4;
    const int t = 2 * p.d - p.l;
    if (!vanishing_applies(gauge, t, p.n)) {
      out.fail("internal: clause n=" + std::to_string(p.n) + " does not apply at 2d-l=" +
               std::to_string(t));
      continue;
    }
    const GenusContext ctx = make_context(inst);
    const auto an = a_n_expansion(ctx);
    for (int k = 0; k <= vanishing_q_coverage(p.n); ++k) {
      const GradedPoly v = an[p.n].second.coeff(q_int(k));
      if (v.is_zero_poly()) continue;
      out.fail("a" + std::to_string(p.n) + "[q^" + std::to_string(k) + "] at " +
               instance_str(inst) + " = " + squeeze(v.str(), 80));
    }
  }
  return out;
}

Outcome criterion_vanishing_both() {
  Outcome out = criterion_vanishing(Gauge::E8);
  const Outcome two = criterion_vanishing(Gauge::E8xE8);
  if (!two.pass) out.fail(two.note);
  return out;
}

// 10. The four functional equations numerically, every gauge.
Outcome criterion_jacobi_numeric() {
  using cd = std::complex<double>;
  Outcome out;
  const cd taus[2] = {cd(0.0, 2.0), cd(1.0, 1.5)};
  const cd zs[2] = {cd(0.2, 0.0), cd(0.1, 0.1)};
  for (Gauge g : {Gauge::None, Gauge::E8, Gauge::E8xE8}) {
    for (const cd& tau : taus)
      for (const cd& z : zs) {
        GenusInstance inst;
        inst.d = 2;
        inst.l = 2;
        inst.gauge = g;
        inst.tol = JACOBI_TOL;
        const VerificationReport rep = jacobi_numeric_check(inst, tau, z);
        if (!rep.pass && out.pass)  // report the first offender in full
          out.fail(gauge_str(g) + ": " + squeeze(rep.witness, 160));
        else if (!rep.pass)
          out.pass = false;
      }
  }
  return out;
}

// 11. Overdetermined two-parameter solve at asserted weight 12.
Outcome criterion_weight12_solve() {
  Outcome out;
  GenusInstance inst;
  inst.d = 5;
  inst.l = 2;
  inst.gauge = Gauge::E8;
  inst.q_order = 3;
  inst.u_order = 0;
  if (jacobi_weight(inst) != 12) {
    out.fail("internal: instance weight is not 12");
    return out;
  }
  const VerificationReport rep = decompose_a0(inst);
  if (!rep.pass) {
    out.fail(squeeze(rep.witness));
    return out;
  }
  // the minimal instance has a0 identically zero (odd d kills the top
  // class), so the solve is exact with both parameters zero — say so
  const GenusContext ctx = make_context(inst);
  if (ell_definition_route(ctx).coeff(0).is_zero_series())
    out.note = "a0 vanishes identically at the minimal instance; solve exact and vacuous";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* what;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"Eisenstein product expansions exact", criterion_eisenstein_products},
      {"E2 expansion exact", criterion_e2},
      {"theta transformation and lattice-shift laws", criterion_theta_laws},
      {"route equivalence across gauges", criterion_route_equivalence},
      {"E8 character block", criterion_e8_block},
      {"closed-form u-expansion templates", criterion_expansion_templates},
      {"anomaly coefficient rows, one block", [] { return criterion_anomaly(Gauge::E8); }},
      {"anomaly coefficient rows, two blocks", [] { return criterion_anomaly(Gauge::E8xE8); }},
      {"vanishing clauses, both gauges", criterion_vanishing_both},
      {"numeric functional equations", criterion_jacobi_numeric},
      {"overdetermined weight-12 decomposition", criterion_weight12_solve},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& ex) {
      out.pass = false;
      out.note = std::string("unexpected exception: ") + ex.what();
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = ms < BUDGET_MS[i];
    const bool pass = out.pass && in_budget;
    if (!pass) ++failures;
    std::printf("criterion %2zu: %s (%.0f ms) — %s%s%s\n", i + 1, pass ? "PASS" : "FAIL", ms,
                criteria[i].what, out.note.empty() ? "" : " — ", out.note.c_str());
    if (out.pass && !in_budget) std::printf("              over budget (%.0f ms allowed)\n",
                                            BUDGET_MS[i]);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failures, criteria.size());
  return failures;
}
