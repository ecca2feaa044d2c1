// Acceptance battery: ten end-to-end criteria at desk scale (N = 200,
// dt = 0.05, T = 200 unless a criterion says otherwise). Prints one PASS/FAIL
// line per criterion and exits nonzero if any criterion fails or overruns its
// time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "supra/energy.hpp"
#include "supra/experiments.hpp"
#include "supra/model.hpp"
#include "supra/stepper.hpp"

using namespace supra;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> body;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

double threshold(const ChainConfig& cfg, double frequency) {
  ChainConfig c = cfg;
  c.drive.frequency = frequency;
  ExperimentOptions serial;
  serial.workers = 1;
  const ThresholdRecord r = find_threshold(c, frequency, {}, serial);
  return r.flagged ? std::nan("") : r.threshold;
}

// Thresholds for several (config, frequency) pairs, computed concurrently.
std::vector<double> thresholds(const std::vector<std::pair<ChainConfig, double>>& jobs) {
  std::vector<double> out(jobs.size());
  parallel_for(jobs.size(), 0, [&](std::size_t i) { out[i] = threshold(jobs[i].first, jobs[i].second); });
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Outcome threshold_reproduction() {
  const ChainConfig cfg;  // massless, undamped sine-Gordon, c = 4
  const double as = threshold_As(0.9, cfg);
  const double thr = threshold(cfg, 0.9);
  Outcome o;
  o.passed = std::abs(as - 1.80) < 0.01 && thr >= 1.77 && thr <= 1.79 && std::abs(thr - as) <= 0.05;
  o.detail = "A_thr = " + fmt("%.4f", thr) + ", A_s = " + fmt("%.4f", as) +
             ", |A_thr - A_s| = " + fmt("%.4f", std::abs(thr - as));
  return o;
}

Outcome klein_gordon_bifurcation() {
  ChainConfig cfg;
  cfg.potential = PotentialKind::KleinGordon;
  RunOptions opt;
  opt.probes = {60};
  opt.record_energy = false;
  std::vector<double> peak(2);
  const double amps[2] = {1.77, 1.79};
  parallel_for(2, 0, [&](std::size_t i) {
    ChainConfig c = cfg;
    c.drive.amplitude = amps[i];
    peak[i] = max_abs(run(c, opt).trajectory.values[0]);
  });
  Outcome o;
  o.passed = peak[0] < 0.5 && peak[1] > 1.0 && peak[1] > 10.0 * peak[0];
  o.detail = "max|u_60|: " + fmt("%.4f", peak[0]) + " at A = 1.77, " + fmt("%.4f", peak[1]) + " at A = 1.79";
  return o;
}

Outcome energy_identity() {
  std::vector<ChainConfig> cases;
  for (double beta : {0.0, 0.1}) {
    for (double gamma : {0.0, 0.03}) {
      ChainConfig cfg;
      cfg.kappa = 0.0;
      cfg.beta = beta;
      cfg.gamma = gamma;
      cfg.drive.amplitude = 1.79;
      cases.push_back(cfg);
    }
  }
  std::vector<double> worst(cases.size(), 0.0);
  std::vector<std::size_t> steps(cases.size(), 0);
  parallel_for(cases.size(), 0, [&](std::size_t i) {
    const RunResult r = run(cases[i]);
    steps[i] = r.energy.size();
    for (const EnergyReport& rep : r.energy) {
      worst[i] = std::max(worst[i], std::abs(rep.identity_residual) / std::max(1.0, std::abs(rep.total)));
    }
  });
  Outcome o;
  const double w = *std::max_element(worst.begin(), worst.end());
  o.passed = w <= 1e-8 && std::all_of(steps.begin(), steps.end(), [](std::size_t s) { return s == 4000; });
  o.detail = "max |residual| / max(1, |E_k|) over 4 x 4000 steps = " + fmt("%.3e", w);
  return o;
}

Outcome greens_identity() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> length(1, 100);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(static_cast<std::size_t>(length(rng)));
    for (double& x : a) x = entry(rng);
    const GreensSides s = greens_identity_check(a);
    worst = std::max(worst, std::abs(s.lhs - s.rhs) / std::max({1.0, std::abs(s.lhs), std::abs(s.rhs)}));
  }
  std::vector<double> geometric(64);
  for (std::size_t n = 0; n < geometric.size(); ++n) geometric[n] = std::ldexp(1.0, -static_cast<int>(n));
  const GreensSides g = greens_identity_check(geometric);
  const double geo = std::max(std::abs(g.lhs - 1.0 / 6.0), std::abs(g.rhs - 1.0 / 6.0));
  Outcome o;
  o.passed = worst <= 1e-12 && geo <= 1e-14;
  o.detail = "random: max rel diff " + fmt("%.2e", worst) + "; geometric: |side - 1/6| " + fmt("%.2e", geo);
  return o;
}

Outcome convergence_order() {
  ChainConfig base;
  base.drive.amplitude = 0.01;
  const std::vector<double> dts{0.05, 0.025, 0.0125};
  const ConvergenceStudy s = convergence_study(evanescent_problem(base), dts);
  Outcome o;
  o.passed = s.orders.size() == 2;
  std::string detail = "errors";
  for (double e : s.errors) detail += " " + fmt("%.3e", e);
  detail += ", orders";
  for (double p : s.orders) {
    detail += " " + fmt("%.3f", p);
    o.passed = o.passed && p >= 1.8 && p <= 2.2;
  }
  o.detail = detail;
  return o;
}

Outcome stability_necessity() {
  auto blows_up = [](double dt) {
    ChainConfig cfg;
    cfg.dt = dt;
    cfg.drive.amplitude = 1.0;
    RunOptions opt;
    opt.record_energy = false;
    try {
      run(cfg, opt);
    } catch (const BlowUp&) {
      return true;
    }
    return false;
  };
  ChainConfig unstable;
  unstable.dt = 0.3;
  const bool violated = !check_stability(unstable).satisfied;
  const bool coarse = blows_up(0.3);
  const bool fine = blows_up(0.05);
  Outcome o;
  o.passed = violated && coarse && !fine;
  o.detail = std::string("dt = 0.3 ") + (violated ? "violates" : "satisfies") + " the condition and " +
             (coarse ? "blows up" : "does not blow up") + "; dt = 0.05 " + (fine ? "blows up" : "runs to T");
  return o;
}

Outcome evanescent_regime() {
  ChainConfig cfg;
  cfg.drive.amplitude = 0.01;
  RunOptions opt;
  opt.probes = {20, 40, 60};
  opt.record_energy = false;
  const RunResult r = run(cfg, opt);
  const double lambda = evanescent_decay(0.9, cfg);
  Outcome o;
  o.passed = true;
  for (std::size_t p = 0; p < opt.probes.size(); ++p) {
    const double env = steady_envelope(r.trajectory.times, r.trajectory.values[p], 0.9,
                                       cfg.drive.ramp_time, cfg.t_final);
    const double exact = 0.01 * std::exp(-lambda * opt.probes[p]);
    const double rel = std::abs(env / exact - 1.0);
    o.passed = o.passed && rel <= 0.05;
    if (!o.detail.empty()) o.detail += ", ";
    o.detail += "n = " + std::to_string(opt.probes[p]) + ": " + fmt("%.2f", 100 * rel) + "%";
  }
  return o;
}

Outcome damping_monotonicity() {
  const std::vector<double> gammas{0.0, 0.01, 0.02, 0.03};
  const std::vector<double> betas{0.0, 0.1, 0.2, 0.3};
  std::vector<std::pair<ChainConfig, double>> jobs;
  for (double g : gammas) {
    ChainConfig cfg;
    cfg.gamma = g;
    jobs.emplace_back(cfg, 0.9);
  }
  for (double b : betas) {
    ChainConfig cfg;
    cfg.beta = b;
    jobs.emplace_back(cfg, 0.9);
  }
  const std::vector<double> thr = thresholds(jobs);

  std::vector<double> energy(gammas.size());
  parallel_for(gammas.size(), 0, [&](std::size_t i) {
    ChainConfig cfg;
    cfg.gamma = gammas[i];
    energy[i] = run_cell(cfg, 0.9, 2.2, {}).energy_physical;
  });

  auto nondecreasing = [](const double* v, std::size_t n) {
    for (std::size_t i = 1; i < n; ++i) {
      if (!(v[i] >= v[i - 1])) return false;
    }
    return true;
  };
  const bool gamma_ok = nondecreasing(thr.data(), 4);
  const bool beta_ok = nondecreasing(thr.data() + 4, 4);
  bool energy_ok = true;
  for (std::size_t i = 1; i < energy.size(); ++i) energy_ok = energy_ok && energy[i] <= energy[i - 1];

  Outcome o;
  o.passed = gamma_ok && beta_ok && energy_ok;
  std::ostringstream d;
  d << "A_thr(gamma) " << (gamma_ok ? "ok" : "NOT monotone") << ":";
  for (std::size_t i = 0; i < 4; ++i) d << ' ' << fmt("%.4f", thr[i]);
  d << "; A_thr(beta) " << (beta_ok ? "ok" : "NOT monotone") << ":";
  for (std::size_t i = 4; i < 8; ++i) d << ' ' << fmt("%.4f", thr[i]);
  d << "; E_phys(A=2.2, gamma) " << (energy_ok ? "ok" : "NOT monotone") << ":";
  for (double e : energy) d << ' ' << fmt("%.2f", e);
  o.detail = d.str();
  return o;
}

Outcome shift_laws() {
  const double beta = 0.4;
  const double m2 = 0.01;  // |m| = 0.1
  const double shift = std::sqrt(1.0 + m2) - 1.0;
  const ChainConfig undamped;
  ChainConfig damped;
  damped.beta = beta;
  ChainConfig massive;
  massive.mass_squared = m2;

  std::vector<std::pair<ChainConfig, double>> jobs;
  for (double omega : {0.8, 0.9}) {
    jobs.emplace_back(damped, omega);           // A(Omega; beta)
    jobs.emplace_back(undamped, omega - beta);  // A(Omega - beta; 0)
    jobs.emplace_back(massive, omega);          // A(Omega; m)
    jobs.emplace_back(undamped, omega - shift); // A(Omega - shift; 0)
    jobs.emplace_back(damped, omega - beta);    // opposite reading, reported only
    jobs.emplace_back(undamped, omega);
  }
  const std::vector<double> thr = thresholds(jobs);

  // NaN (a search that found no transition) compares as a miss
  auto rel = [](double target, double approx) { return std::abs(approx / target - 1.0); };
  auto within = [](double r) { return r <= 0.10; };
  bool beta_ok = true, mass_ok = true;
  std::ostringstream d;
  for (std::size_t k = 0; k < 2; ++k) {
    const double omega = k == 0 ? 0.8 : 0.9;
    const double* t = thr.data() + 6 * k;
    const double rb = rel(t[0], t[1]), rm = rel(t[2], t[3]), ro = rel(t[5], t[4]);
    beta_ok = beta_ok && within(rb);
    mass_ok = mass_ok && within(rm);
    d << (k ? "; " : "") << "Omega " << omega << ": A(W;b) " << fmt("%.4f", t[0]) << " vs A(W-b;0) "
      << fmt("%.4f", t[1]) << " (" << fmt("%.1f", 100 * rb) << "%), A(W;m) " << fmt("%.4f", t[2])
      << " vs A(W-shift;0) " << fmt("%.4f", t[3]) << " (" << fmt("%.1f", 100 * rm)
      << "%) [opposite beta reading A(W-b;b) " << fmt("%.4f", t[4]) << " vs A(W;0) " << fmt("%.4f", t[5])
      << ", " << fmt("%.1f", 100 * ro) << "%]";
  }
  d << " | beta law " << (beta_ok ? "holds" : "FAILS") << ", mass law " << (mass_ok ? "holds" : "FAILS");
  Outcome o;
  o.passed = beta_ok && mass_ok;
  o.detail = d.str();
  return o;
}

Outcome cross_integrator() {
  ChainConfig cfg;
  cfg.drive.amplitude = 1.0;
  cfg.t_final = 100.0;
  const std::vector<double> dts{0.05, 0.025, 0.0125};
  const std::vector<int> probes{1, 10, 20, 40, 60};
  const ConvergenceStudy s = scheme_comparison(cfg, dts, probes);
  Outcome o;
  o.passed = s.orders.size() == 2;
  std::string detail = "max deviation";
  for (double e : s.errors) detail += " " + fmt("%.3e", e);
  detail += ", orders";
  for (double p : s.orders) {
    detail += " " + fmt("%.3f", p);
    o.passed = o.passed && p >= 1.8 && p <= 2.2;
  }
  for (std::size_t i = 0; i + 1 < s.errors.size(); ++i) o.passed = o.passed && s.errors[i + 1] < s.errors[i];
  o.detail = detail;
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "threshold reproduction (sine-Gordon, Omega = 0.9)", 120, threshold_reproduction},
      {2, "Klein-Gordon bifurcation at site 60", 60, klein_gordon_bifurcation},
      {3, "exact discrete energy identity", 60, energy_identity},
      {4, "discrete Green identity", 1, greens_identity},
      {5, "convergence order vs exact evanescent solution", 60, convergence_order},
      {6, "stability condition is necessary", 30, stability_necessity},
      {7, "evanescent linear regime envelope", 30, evanescent_regime},
      {8, "damping monotonicity", 900, damping_monotonicity},
      {9, "shift laws in beta and mass", 900, shift_laws},
      {10, "Newton vs RK4 cross-integrator order", 120, cross_integrator},
  };
  int passed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& err) {
      o = {false, std::string("exception: ") + err.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool ok = o.passed && in_time;
    passed += ok ? 1 : 0;
    std::printf("%s  %2d  %s [%.2f s / %.0f s%s]: %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), seconds,
                c.budget_seconds, in_time ? "" : ", OVER BUDGET", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu acceptance criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
