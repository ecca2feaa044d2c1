#include "supra/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "supra/energy.hpp"
#include "supra/experiments.hpp"
#include "supra/stepper.hpp"

namespace supra {

bool ValidationReport::all_passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

namespace {

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

ValidationCheck greens_check() {
  ValidationCheck check{"greens-identity", true, "", 0.0};
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> length(1, 64);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> seq(static_cast<std::size_t>(length(rng)));
    for (double& x : seq) x = entry(rng);
    const GreensSides sides = greens_identity_check(seq);
    const double scale = std::max({1.0, std::abs(sides.lhs), std::abs(sides.rhs)});
    worst = std::max(worst, std::abs(sides.lhs - sides.rhs) / scale);
  }
  std::vector<double> geometric(60);
  for (std::size_t n = 0; n < geometric.size(); ++n) geometric[n] = std::ldexp(1.0, -static_cast<int>(n));
  const GreensSides g = greens_identity_check(geometric);
  const double geo_err = std::max(std::abs(g.lhs - 1.0 / 6.0), std::abs(g.rhs - 1.0 / 6.0));
  check.passed = worst <= 1e-12 && geo_err <= 1e-14;
  check.detail = "random max rel diff " + sci(worst) + ", geometric |side - 1/6| " + sci(geo_err);
  return check;
}

ValidationCheck energy_identity_check(const ChainConfig& base, double t_final) {
  ValidationCheck check{"energy-identity", true, "", 0.0};
  double worst = 0.0;
  std::string failures;
  for (double beta : {0.0, 0.1}) {
    for (double gamma : {0.0, 0.03}) {
      ChainConfig cfg = base;
      cfg.kappa = 0.0;
      cfg.beta = beta;
      cfg.gamma = gamma;
      cfg.t_final = t_final;
      cfg.drive.amplitude = 2.0;
      try {
        worst = std::max(worst, run(cfg).summary.max_relative_identity_residual);
      } catch (const std::exception& err) {
        failures += " [beta=" + fixed(beta, 2) + " gamma=" + fixed(gamma, 2) + ": " + err.what() + "]";
      }
    }
  }
  check.passed = failures.empty() && worst <= 1e-8;
  check.detail = "max |residual| / max(1, |E|) = " + sci(worst) + failures;
  return check;
}

ValidationCheck order_check(const std::string& name, const ConvergenceStudy& study, double lo,
                            double hi) {
  ValidationCheck check{name, true, "", 0.0};
  std::string detail = "errors";
  for (double e : study.errors) detail += " " + sci(e);
  detail += "; orders";
  for (double p : study.orders) {
    detail += " " + fixed(p, 2);
    if (!(p >= lo && p <= hi)) check.passed = false;
  }
  for (const auto& f : study.failures) {
    if (!f.empty()) {
      check.passed = false;
      detail += " [" + f + "]";
    }
  }
  check.detail = detail;
  return check;
}

/// Runs cfg and reports whether it blew up (or failed to step).
bool blows_up(const ChainConfig& cfg, std::string& what) {
  RunOptions options;
  options.record_energy = false;
  try {
    run(cfg, options);
    return false;
  } catch (const BlowUp& err) {
    what = err.what();
    return true;
  } catch (const StepFailure& err) {
    what = err.what();
    return true;
  }
}

ValidationCheck stability_check(const ChainConfig& base, double t_final, double user_dt) {
  ValidationCheck check{"stability-boundary", true, "", 0.0};
  std::vector<double> dts{0.3, 0.05};
  if (std::none_of(dts.begin(), dts.end(), [&](double d) { return d == user_dt; })) {
    dts.push_back(user_dt);
  }
  for (double dt : dts) {
    ChainConfig cfg = base;
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.drive.amplitude = 1.0;
    const bool expect_blow_up = !check_stability(cfg).satisfied;
    std::string what;
    const bool blew = blows_up(cfg, what);
    if (blew != expect_blow_up) check.passed = false;
    if (!check.detail.empty()) check.detail += "; ";
    check.detail += "dt=" + fixed(dt, 4) + (expect_blow_up ? " violates" : " satisfies") +
                    " the condition, " + (blew ? what : "no blow-up");
  }
  return check;
}

ValidationCheck evanescent_check(const ChainConfig& base) {
  ValidationCheck check{"evanescent-profile", true, "", 0.0};
  ChainConfig cfg = base;
  cfg.drive.amplitude = 0.01;
  cfg.drive.frequency = 0.9;
  cfg.t_final = 200.0;
  RunOptions options;
  options.probes = {20, 40, 60};
  options.record_energy = false;
  try {
    const double lambda = evanescent_decay(cfg.drive.frequency, cfg);
    const RunResult result = run(cfg, options);
    for (std::size_t p = 0; p < options.probes.size(); ++p) {
      const double measured =
          steady_envelope(result.trajectory.times, result.trajectory.values[p],
                          cfg.drive.frequency, cfg.drive.ramp_time, cfg.t_final);
      const double exact = cfg.drive.amplitude * std::exp(-lambda * options.probes[p]);
      const double rel = std::abs(measured / exact - 1.0);
      if (!(rel <= 0.05)) check.passed = false;
      if (!check.detail.empty()) check.detail += ", ";
      check.detail += "n=" + std::to_string(options.probes[p]) + " rel err " + fixed(100 * rel, 2) + "%";
    }
  } catch (const std::exception& err) {
    check.passed = false;
    check.detail = err.what();
  }
  return check;
}

}  // namespace

ValidationReport run_validation(const ChainConfig& base, const ValidationOptions& options) {
  validate(base);
  ChainConfig stable = base;
  if (!check_stability(stable).satisfied) stable.dt = 0.05;
  const bool quick = options.quick;
  const std::vector<double> ladder{0.05, 0.025, 0.0125};

  std::vector<std::function<ValidationCheck()>> checks;
  checks.emplace_back(greens_check);
  checks.emplace_back([&] { return energy_identity_check(stable, quick ? 20.0 : 200.0); });
  checks.emplace_back([&] {
    ChainConfig lin = stable;
    lin.drive.amplitude = 0.01;
    lin.t_final = quick ? 10.0 : 50.0;
    try {
      return order_check("order-implicit-linear", convergence_study(evanescent_problem(lin), ladder),
                         1.8, 2.2);
    } catch (const std::exception& err) {
      return ValidationCheck{"order-implicit-linear", false, err.what(), 0.0};
    }
  });
  checks.emplace_back([&] { return stability_check(stable, quick ? 20.0 : 50.0, base.dt); });
  if (!quick) {
    checks.emplace_back([&] {
      ChainConfig lin = stable;
      lin.drive.amplitude = 0.01;
      lin.t_final = 50.0;
      lin.scheme = Scheme::Rk4;
      try {
        return order_check("order-rk4-linear", convergence_study(evanescent_problem(lin), ladder),
                           3.6, 4.4);
      } catch (const std::exception& err) {
        return ValidationCheck{"order-rk4-linear", false, err.what(), 0.0};
      }
    });
    checks.emplace_back([&] { return evanescent_check(stable); });
    checks.emplace_back([&] {
      ChainConfig cfg = stable;
      cfg.drive.amplitude = 1.0;
      cfg.t_final = 100.0;
      const std::vector<int> probes{1, 10, 20, 40, 60};
      return order_check("newton-vs-rk4", scheme_comparison(cfg, ladder, probes), 1.8, 2.2);
    });
  }

  ValidationReport report;
  report.checks.resize(checks.size());
  parallel_for(checks.size(), options.workers, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    report.checks[i] = checks[i]();
    report.checks[i].seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return report;
}

}  // namespace supra
