// ellgen: batch driver exposing every verification as a subcommand with
// machine-readable reports.
//
// Exit codes: 0 all checks pass, 1 at least one mathematical check failed
// (the report carries the witness), 2 bad usage or invalid configuration.
//
// JSON reports are deterministic — fixed key order, exact rationals as
// "p/q" strings, complex numbers as [re, im] — except for elapsed_ms,
// which is wall-clock and varies run to run.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellgen/eisenstein.hpp"
#include "ellgen/e8char.hpp"
#include "ellgen/genus.hpp"
#include "ellgen/theta.hpp"

using namespace ellgen;
using ojson = nlohmann::ordered_json;
using cd = std::complex<double>;

namespace {

struct Report {
  std::string check;
  bool has_instance = false;
  GenusInstance inst;
  bool pass = true;
  std::string witness;
  ojson expected;  // null unless the check pins a table
  ojson got;
  double elapsed_ms = 0.0;
};

struct Options {
  int d = 1, l = 0;
  std::string gauge = "none";
  int q_order = 3, u_order = 5;
  double tol = 1e-6;
  std::string format = "text";
  std::string output;
  int jobs = 0;  // 0 = env default, else 1
};

GenusInstance instance_of(const Options& opt) {
  GenusInstance inst;
  inst.d = opt.d;
  inst.l = opt.l;
  inst.gauge = gauge_parse(opt.gauge);
  inst.q_order = opt.q_order;
  inst.u_order = opt.u_order;
  inst.tol = opt.tol;
  return inst;
}

std::string cx_label(cd v) {
  std::ostringstream os;
  os << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
  return os.str();
}

// run one check under a stopwatch, converting config errors to usage errors
template <typename Fn>
Report timed(const std::string& check, Fn&& fn) {
  Report r;
  r.check = check;
  const auto t0 = std::chrono::steady_clock::now();
  fn(r);
  r.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Report from_engine(const std::string& check, const GenusInstance& inst,
                   const VerificationReport& rep) {
  Report r;
  r.check = check;
  r.has_instance = true;
  r.inst = inst;
  r.pass = rep.pass;
  if (!rep.pass) r.witness = rep.witness;
  r.elapsed_ms = rep.elapsed_ms;
  return r;
}

// ---- eisenstein-expand -----------------------------------------------------

struct NamedSeries {
  std::string name;
  Q24Series<Rational> series;
  std::vector<long> expected;
};

std::vector<NamedSeries> eisenstein_table() {
  const auto e4 = eisenstein_e(4, 3), e6 = eisenstein_e(6, 3);
  return {
      {"E2", eisenstein_e(2, 2), {1, -24, -72}},
      {"E4", e4, {1, 240, 2160, 6720}},
      {"E6", e6, {1, -504, -16632, -122976}},
      {"E4^2", e4 * e4, {1, 480, 61920}},
      {"E4*E6", e4 * e6, {1, -264, -135432}},
      {"E4^3", e4 * e4 * e4, {1, 720, 179280}},
      {"E6^2", e6 * e6, {1, -1008, 220752}},
      {"E4^2*E6", e4 * e4 * e6, {1, -24, -196632}},
      {"E4^4", e4 * e4 * e4 * e4, {1, 960, 354240}},
      {"E4*E6^2", e4 * e6 * e6, {1, -768, -19008}},
  };
}

std::vector<Report> run_eisenstein(int weight, int order) {
  std::vector<Report> out;
  if (weight > 0) {
    out.push_back(timed("eisenstein E" + std::to_string(weight), [&](Report& r) {
      const auto s = eisenstein_e(weight, order);
      ojson coeffs = ojson::array();
      for (int j = 0; j <= order; ++j) coeffs.push_back(rat_str(s.coeff(q_int(j))));
      r.got = coeffs;
    }));
    return out;
  }
  for (const NamedSeries& row : eisenstein_table()) {
    out.push_back(timed("eisenstein " + row.name, [&](Report& r) {
      ojson want = ojson::array(), have = ojson::array();
      for (std::size_t j = 0; j < row.expected.size(); ++j) {
        const Rational c = row.series.coeff(q_int(static_cast<int>(j)));
        want.push_back(std::to_string(row.expected[j]));
        have.push_back(rat_str(c));
        if (!(c == rat(row.expected[j]))) {
          r.pass = false;
          r.witness = "q^" + std::to_string(j) + " = " + rat_str(c) + ", expected " +
                      std::to_string(row.expected[j]);
        }
      }
      r.expected = want;
      r.got = have;
    }));
  }
  return out;
}

// ---- theta-check -----------------------------------------------------------

std::vector<Report> run_theta_check(double tol) {
  std::vector<Report> out;
  out.push_back(timed("theta numeric-laws", [&](Report& r) {
    const cd I(0, 1);
    const cd samples[5][2] = {
        {cd(0.30, 0.80), cd(0.17, 0.05)},  {cd(-0.40, 1.30), cd(-0.60, -0.20)},
        {cd(0.00, 0.90), cd(0.31, 0.00)},  {cd(0.15, 1.70), cd(0.00, 0.40)},
        {cd(-0.20, 2.00), cd(0.55, 0.10)},
    };
    auto rel = [](cd a, cd b) {
      return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };
    double worst = 0.0;
    std::string at;
    for (const auto& s : samples) {
      const cd tau = s[0], z = s[1];
      const cd root8 = std::exp(I * M_PI / 4.0);
      double m = rel(theta_numeric(1, tau + 1.0, z), root8 * theta_numeric(1, tau, z));
      m = std::max(m, rel(theta_numeric(2, tau + 1.0, z), root8 * theta_numeric(2, tau, z)));
      m = std::max(m, rel(theta_numeric(3, tau + 1.0, z), theta_numeric(4, tau, z)));
      m = std::max(m, rel(theta_numeric(4, tau + 1.0, z), theta_numeric(3, tau, z)));
      const cd alpha = std::sqrt(-I * tau) * std::exp(I * M_PI * z * z / tau);
      const cd st = -1.0 / tau, sz = z / tau;
      m = std::max(m, rel(theta_numeric(1, st, sz), -I * alpha * theta_numeric(1, tau, z)));
      m = std::max(m, rel(theta_numeric(2, st, sz), alpha * theta_numeric(4, tau, z)));
      m = std::max(m, rel(theta_numeric(3, st, sz), alpha * theta_numeric(3, tau, z)));
      m = std::max(m, rel(theta_numeric(4, st, sz), alpha * theta_numeric(2, tau, z)));
      if (m > worst) {
        worst = m;
        at = cx_label(tau);
      }
    }
    if (worst >= tol) {
      r.pass = false;
      std::ostringstream os;
      os << "residual " << worst << " at tau = " << at;
      r.witness = os.str();
    }
    r.got = worst;
  }));
  for (const char* which : {"shift-z-by-one", "shift-z-by-tau"}) {
    out.push_back(timed(std::string("theta ") + which, [&](Report& r) {
      const GaussianRational one = ring_one<GaussianRational>();
      for (int k = 1; k <= 4; ++k) {
        const ThetaExpansion t = theta_qy(k, 12);
        bool ok;
        if (std::string(which) == "shift-z-by-one") {
          ok = shift_z_by_one(t) == (k <= 2 ? -t : t);
        } else {
          const ThetaExpansion lhs = shift_z_by_tau(t);
          const GaussianRational s = (k == 1 || k == 4) ? -one : one;
          const ThetaExpansion rhs = mul_qy_monomial(t, -q_frac(1, 2), -2, s);
          ok = equal_on_common(lhs, rhs) && std::min(lhs.trunc(), rhs.trunc()) > q_int(4);
        }
        if (!ok) {
          r.pass = false;
          r.witness = "theta_" + std::to_string(k) + " lattice shift mismatch";
          break;
        }
      }
    }));
  }
  return out;
}

// ---- instance checks -------------------------------------------------------

std::vector<cd> default_taus() { return {cd(0, 2), cd(1, 1.5)}; }
std::vector<cd> default_zs() { return {cd(0.2, 0), cd(0.1, 0.1)}; }

Report run_jacobi_point(const GenusInstance& inst, cd tau, cd z) {
  const std::string check = "jacobi-numeric tau=" + cx_label(tau) + " z=" + cx_label(z);
  Report r = timed(check, [&](Report& rr) {
    const VerificationReport rep = jacobi_numeric_check(inst, tau, z);
    rr.pass = rep.pass;
    if (!rep.pass) rr.witness = rep.witness;
  });
  r.has_instance = true;
  r.inst = inst;
  return r;
}

// does any anomaly row or vanishing clause cover this instance?
bool anomaly_covered(const GenusInstance& inst, int target) {
  if (inst.gauge == Gauge::None) return false;
  if (anomaly_case_for(inst.gauge, target)) return true;
  for (int n = 0; n <= std::min(4, inst.u_order); ++n)
    if (vanishing_applies(inst.gauge, target, n)) return true;
  return false;
}

// ---- rendering -------------------------------------------------------------

ojson to_json(const Report& r) {
  ojson j;
  j["check"] = r.check;
  if (r.has_instance) {
    ojson inst;
    inst["d"] = r.inst.d;
    inst["l"] = r.inst.l;
    inst["gauge"] = gauge_str(r.inst.gauge);
    j["instance"] = inst;
  } else {
    j["instance"] = nullptr;
  }
  j["status"] = r.pass ? "pass" : "fail";
  if (!r.pass) j["witness"] = r.witness;
  if (!r.expected.is_null()) j["expected"] = r.expected;
  if (!r.got.is_null()) j["got"] = r.got;
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

std::string render(const std::vector<Report>& reports, const std::string& format) {
  if (format == "json") {
    ojson arr = ojson::array();
    for (const Report& r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  int passed = 0;
  bool expansions_only = true;
  for (const Report& r : reports) {
    if (r.pass) ++passed;
    // a bare expansion report prints just its coefficient row
    if (r.pass && r.expected.is_null() && r.got.is_array()) {
      for (std::size_t j = 0; j < r.got.size(); ++j)
        os << (j ? " " : "") << r.got[j].get<std::string>();
      os << "\n";
      continue;
    }
    expansions_only = false;
    os << r.check;
    if (r.has_instance) os << " [" << instance_str(r.inst) << "]";
    os << ": " << (r.pass ? "PASS" : "FAIL");
    if (!r.witness.empty()) os << " — " << r.witness;
    os << "\n";
  }
  if (!expansions_only) os << passed << "/" << reports.size() << " checks pass\n";
  return os.str();
}

int emit(const std::vector<Report>& reports, const Options& opt) {
  const std::string text = render(reports, opt.format);
  std::cout << text;
  if (!opt.output.empty()) {
    std::ofstream f(opt.output);
    if (!f) {
      std::cerr << "cannot write " << opt.output << "\n";
      return 2;
    }
    f << text;
  }
  for (const Report& r : reports)
    if (!r.pass) return 1;
  return 0;
}

// deterministic-order parallel runner for `all`
std::vector<Report> run_pool(std::vector<std::function<Report()>>& tasks, int jobs) {
  std::vector<Report> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) out[i] = tasks[i]();
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    const int n = std::min<int>(jobs, static_cast<int>(tasks.size()));
    for (int i = 0; i < n; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  return out;
}

int env_jobs() {
  const char* s = std::getenv("ELLGEN_JOBS");
  if (!s) return 1;
  const long v = std::strtol(s, nullptr, 10);
  return v >= 1 && v <= 256 ? static_cast<int>(v) : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verification of twisted elliptic genus expansions"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    sub->add_option("--output", opt.output, "also write the report to this file");
  };
  auto add_instance = [&](CLI::App* sub, bool need_gauge = false) {
    sub->add_option("--d", opt.d, "half the manifold dimension")->required();
    sub->add_option("--l", opt.l, "twist bundle rank")->required();
    auto* g = sub->add_option("--gauge", opt.gauge, "gauge bundle")
                  ->check(CLI::IsMember({"none", "e8", "e8xe8"}))
                  ->capture_default_str();
    if (need_gauge) g->required();
    sub->add_option("--q-order", opt.q_order, "q-truncation order")->capture_default_str();
    sub->add_option("--u-order", opt.u_order, "u-truncation order")->capture_default_str();
  };

  // eisenstein-expand
  int weight = 0, order = 3;
  CLI::App* eis = app.add_subcommand(
      "eisenstein-expand", "normalized Eisenstein expansions against the pinned tables");
  eis->add_option("--weight", weight, "expand a single even weight >= 2 instead");
  eis->add_option("--order", order, "q-order for --weight mode")->capture_default_str();
  add_common(eis);

  // theta-check
  double theta_tol = 1e-9;
  CLI::App* th = app.add_subcommand(
      "theta-check", "theta transformation laws numerically, lattice shifts exactly");
  th->add_option("--tol", theta_tol, "numeric residual tolerance")->capture_default_str();
  add_common(th);

  // route-equivalence
  CLI::App* route = app.add_subcommand(
      "route-equivalence", "compare the definition route against the theta-product route");
  add_instance(route);
  add_common(route);

  // prop-expansions
  CLI::App* props = app.add_subcommand(
      "prop-expansions", "closed-form u-expansion templates (needs q-order >= 2, u-order >= 4)");
  add_instance(props, true);
  add_common(props);

  // anomaly
  int anomaly_case = INT_MIN;
  CLI::App* anom = app.add_subcommand(
      "anomaly", "anomaly coefficient rows / vanishing clauses for one case");
  add_instance(anom, true);
  anom->add_option("--case", anomaly_case, "case label 2d-l (default: the instance's own)");
  add_common(anom);

  // decompose-a0
  CLI::App* dec = app.add_subcommand(
      "decompose-a0", "decompose a0 in the modular-form basis of its asserted weight");
  add_instance(dec);
  add_common(dec);

  // jacobi-numeric
  std::vector<double> tau_flag, z_flag;
  CLI::App* jac = app.add_subcommand(
      "jacobi-numeric", "functional equations at sample points (numeric)");
  add_instance(jac);
  jac->add_option("--tau", tau_flag, "tau as two doubles re im")->expected(2);
  jac->add_option("--z", z_flag, "z as two doubles re im")->expected(2);
  jac->add_option("--tol", opt.tol, "relative residual tolerance")->capture_default_str();
  add_common(jac);

  // all
  CLI::App* all = app.add_subcommand("all", "every check that applies to the instance");
  add_instance(all);
  all->add_option("--tol", opt.tol, "numeric tolerance")->capture_default_str();
  all->add_option("--jobs", opt.jobs, "parallel workers (default: ELLGEN_JOBS or 1)");
  add_common(all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::vector<Report> reports;
  try {
    if (eis->parsed()) {
      if (weight != 0 && (weight < 2 || weight % 2 != 0)) {
        std::cerr << "--weight must be even and >= 2\n";
        return 2;
      }
      reports = run_eisenstein(weight, order);
    } else if (th->parsed()) {
      reports = run_theta_check(theta_tol);
    } else if (route->parsed()) {
      const GenusInstance inst = instance_of(opt);
      reports.push_back(from_engine("route-equivalence", inst, verify_route_equivalence(inst)));
    } else if (props->parsed()) {
      const GenusInstance inst = instance_of(opt);
      reports.push_back(from_engine("prop-expansions", inst, verify_prop_expansions(inst)));
    } else if (anom->parsed()) {
      GenusInstance inst = instance_of(opt);
      const int target = anomaly_case == INT_MIN ? 2 * inst.d - inst.l : anomaly_case;
      // rows only consume the u^0 slice; don't pay for more unless asked
      if (!anom->count("--u-order") && anomaly_case_for(inst.gauge, target)) inst.u_order = 0;
      reports.push_back(from_engine("anomaly case " + std::to_string(target), inst,
                                    verify_anomaly_case(inst, target)));
    } else if (dec->parsed()) {
      const GenusInstance inst = instance_of(opt);
      reports.push_back(from_engine("decompose-a0", inst, decompose_a0(inst)));
    } else if (jac->parsed()) {
      const GenusInstance inst = instance_of(opt);
      const std::vector<cd> taus =
          tau_flag.size() == 2 ? std::vector<cd>{cd(tau_flag[0], tau_flag[1])} : default_taus();
      const std::vector<cd> zs =
          z_flag.size() == 2 ? std::vector<cd>{cd(z_flag[0], z_flag[1])} : default_zs();
      for (const cd& tau : taus)
        for (const cd& z : zs) reports.push_back(run_jacobi_point(inst, tau, z));
    } else if (all->parsed()) {
      const GenusInstance inst = instance_of(opt);
      make_context(inst);  // validate the configuration up front
      const int jobs = all->count("--jobs") ? std::max(1, opt.jobs) : env_jobs();
      std::vector<std::function<Report()>> tasks;
      tasks.emplace_back(
          [inst] { return from_engine("route-equivalence", inst, verify_route_equivalence(inst)); });
      if (inst.gauge != Gauge::None && inst.q_order >= 2 && inst.u_order >= 4)
        tasks.emplace_back(
            [inst] { return from_engine("prop-expansions", inst, verify_prop_expansions(inst)); });
      const int target = 2 * inst.d - inst.l;
      if (anomaly_covered(inst, target))
        tasks.emplace_back([inst, target] {
          return from_engine("anomaly case " + std::to_string(target), inst,
                             verify_anomaly_case(inst, target));
        });
      tasks.emplace_back([inst] { return from_engine("decompose-a0", inst, decompose_a0(inst)); });
      for (const cd& tau : default_taus())
        for (const cd& z : default_zs())
          tasks.emplace_back([inst, tau, z] { return run_jacobi_point(inst, tau, z); });
      reports = run_pool(tasks, jobs);
    }
  } catch (const std::invalid_argument& ex) {
    std::cerr << "invalid configuration: " << ex.what() << "\n";
    return 2;
  } catch (const std::domain_error& ex) {
    std::cerr << "invalid configuration: " << ex.what() << "\n";
    return 2;
  }

  return emit(reports, opt);
}
