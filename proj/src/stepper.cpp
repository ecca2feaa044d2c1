#include "supra/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "supra/potential.hpp"

namespace supra {

namespace {

std::string describe_failure(int step, double time, double residual,
                             const std::string& what) {
  std::ostringstream msg;
  msg << what << " at step " << step << " (t = " << time << ", residual " << residual << ")";
  return msg.str();
}

std::string describe_blow_up(int step, double time, double magnitude) {
  std::ostringstream msg;
  msg << "solution blew up at step " << step << " (t = " << time << ", max |u| = " << magnitude
      << ")";
  return msg.str();
}

}  // namespace

StepFailure::StepFailure(int step, double time, double residual, const std::string& what)
    : std::runtime_error(describe_failure(step, time, residual, what)),
      step_(step),
      time_(time),
      residual_(residual) {}

BlowUp::BlowUp(int step, double time, double magnitude)
    : std::runtime_error(describe_blow_up(step, time, magnitude)), step_(step), time_(time) {}

double discrete_gradient(double x, double w, PotentialKind potential) {
  const double gap = x - w;
  if (std::abs(gap) < kDiscreteGradientGuard) {
    return 0.5 * (potential_slope(potential, x) + potential_slope(potential, w));
  }
  return potential_divided_difference(potential, x, w);
}

double discrete_gradient_slope(double x, double w, PotentialKind potential) {
  const double gap = x - w;
  if (std::abs(gap) < kDiscreteGradientGuard) {
    return 0.5 * potential_curvature(potential, 0.5 * (x + w));
  }
  return potential_divided_difference_slope(potential, x, w);
}

DividedDifference discrete_gradient_pair(double x, double w, PotentialKind potential) {
  if (std::abs(x - w) < kDiscreteGradientGuard) {
    return {0.5 * (potential_slope(potential, x) + potential_slope(potential, w)),
            0.5 * potential_curvature(potential, 0.5 * (x + w))};
  }
  return potential_divided_difference_pair(potential, x, w);
}

SchemeCoefficients::SchemeCoefficients(const ChainConfig& cfg)
    : alpha(cfg.damping_profile()) {
  const double dt = cfg.dt;
  const double inv_dt2 = 1.0 / (dt * dt);
  c2 = cfg.coupling * cfg.coupling;
  a = -cfg.beta / (2.0 * dt);
  d = 2.0 * inv_dt2 - 2.0 * c2;
  b.resize(alpha.size());
  e.resize(alpha.size());
  for (std::size_t n = 0; n < alpha.size(); ++n) {
    const double damping = (alpha[n] + 2.0 * cfg.beta) / (2.0 * dt);
    b[n] = damping + 0.5 * cfg.mass_squared + inv_dt2;
    e[n] = damping - 0.5 * cfg.mass_squared - inv_dt2;
  }
  diagonally_dominant = strictly_diagonally_dominant(a, b);
}

Stepper::Stepper(ChainConfig cfg)
    : cfg_(std::move(cfg)), coeffs_(cfg_), solver_(static_cast<std::size_t>(cfg_.n_sites)) {
  validate(cfg_);
  const auto n = static_cast<std::size_t>(cfg_.n_sites);
  next_.resize(n);
  known_.resize(n);
  work_.resize(n);
  diag_.resize(n);
  for (auto& k : ku_) k.resize(n);
  for (auto& k : kv_) k.resize(n);
  stage_u_.resize(n);
  stage_v_.resize(n);
  history_.reserve(kNewtonMaxIterations);
}

void Stepper::acceleration(double t, bool right_limit, const std::vector<double>& u,
                           const std::vector<double>& v, std::vector<double>& out) const {
  const std::size_t n_sites = u.size();
  const double u0 = cfg_.drive.value(t);
  const double v0 = cfg_.drive.rate(t, right_limit);
  const double c2 = coeffs_.c2;
  for (std::size_t i = 0; i < n_sites; ++i) {
    const double ul = i == 0 ? u0 : u[i - 1];
    const double vl = i == 0 ? v0 : v[i - 1];
    const double ur = i + 1 < n_sites ? u[i + 1] : 0.0;
    const double vr = i + 1 < n_sites ? v[i + 1] : 0.0;
    out[i] = c2 * (ur - 2.0 * u[i] + ul) + cfg_.beta * (vr - 2.0 * v[i] + vl) -
             coeffs_.alpha[i] * v[i] - cfg_.mass_squared * u[i] -
             potential_slope(cfg_.potential, u[i]);
  }
}

ChainState Stepper::initial_state() const {
  const auto n = static_cast<std::size_t>(cfg_.n_sites);
  ChainState state;
  std::vector<double> phi =
      cfg_.initial_displacement.empty() ? std::vector<double>(n, 0.0) : cfg_.initial_displacement;
  std::vector<double> varphi =
      cfg_.initial_velocity.empty() ? std::vector<double>(n, 0.0) : cfg_.initial_velocity;

  if (cfg_.scheme == Scheme::Rk4) {
    state.u_prev = phi;
    state.u_curr = std::move(phi);
    state.velocity = std::move(varphi);
    state.step = 0;
    state.boundary_prev = cfg_.drive.value(0.0);
    state.boundary_curr = cfg_.drive.value(0.0);
    return state;
  }

  std::vector<double> first(n);
  for (std::size_t i = 0; i < n; ++i) first[i] = phi[i] + cfg_.dt * varphi[i];
  if (cfg_.second_order_start) {
    std::vector<double> acc(n);
    acceleration(0.0, true, phi, varphi, acc);
    for (std::size_t i = 0; i < n; ++i) first[i] += 0.5 * cfg_.dt * cfg_.dt * acc[i];
  }
  state.u_prev = std::move(phi);
  state.u_curr = std::move(first);
  state.step = 1;
  state.boundary_prev = cfg_.drive.value(0.0);
  state.boundary_curr = cfg_.drive.value(cfg_.dt);
  return state;
}

StepDiagnostics Stepper::step(ChainState& state) {
  switch (cfg_.scheme) {
    case Scheme::Newton: return step_newton(state);
    case Scheme::Linearized: return step_linearized(state);
    case Scheme::Rk4: return step_rk4(state);
  }
  return {};
}

// known_[n] = (B u^k + C u^{k-1})_n with the boundary contributions of u_0^k
// and u_0^{k-1}; the implicit side supplies -a u_0^{k+1}.
void Stepper::assemble_known(const ChainState& state, double boundary_next) {
  const std::size_t n_sites = state.u_curr.size();
  const auto& u = state.u_curr;
  const auto& w = state.u_prev;
  const double a = coeffs_.a;
  const double c2 = coeffs_.c2;
  for (std::size_t i = 0; i < n_sites; ++i) {
    const double ul = i == 0 ? state.boundary_curr : u[i - 1];
    const double wl = i == 0 ? state.boundary_prev : w[i - 1];
    const double ur = i + 1 < n_sites ? u[i + 1] : 0.0;
    const double wr = i + 1 < n_sites ? w[i + 1] : 0.0;
    known_[i] = coeffs_.d * u[i] + c2 * (ul + ur) + coeffs_.e[i] * w[i] + a * (wl + wr);
  }
  known_[0] -= a * boundary_next;
}

StepDiagnostics Stepper::step_newton(ChainState& state) {
  const std::size_t n_sites = state.u_curr.size();
  const int k = state.step;
  const double boundary_next = cfg_.drive.value((k + 1) * cfg_.dt);
  assemble_known(state, boundary_next);

  const auto& u = state.u_curr;
  const auto& w = state.u_prev;
  const double a = coeffs_.a;
  for (std::size_t i = 0; i < n_sites; ++i) next_[i] = 2.0 * u[i] - w[i];

  history_.clear();
  StepDiagnostics diag{0, 0.0, Scheme::Newton};
  for (int it = 1; it <= kNewtonMaxIterations; ++it) {
    // Residual F and Jacobian diagonal; off-diagonals are the constant a.
    for (std::size_t i = 0; i < n_sites; ++i) {
      const double xl = i == 0 ? 0.0 : next_[i - 1];
      const double xr = i + 1 < n_sites ? next_[i + 1] : 0.0;
      const DividedDifference grad = discrete_gradient_pair(next_[i], w[i], cfg_.potential);
      const double residual =
          coeffs_.b[i] * next_[i] + a * (xl + xr) - known_[i] + grad.value;
      work_[i] = -residual;
      diag_[i] = coeffs_.b[i] + grad.slope;
    }
    try {
      solver_.solve(a, diag_, work_);
    } catch (const MatrixDegenerate& err) {
      throw StepFailure(k, k * cfg_.dt, std::numeric_limits<double>::quiet_NaN(), err.what());
    }
    double correction = 0.0;
    double size = 1.0;
    for (std::size_t i = 0; i < n_sites; ++i) {
      next_[i] += work_[i];
      correction = std::max(correction, std::abs(work_[i]));
      size = std::max(size, std::abs(next_[i]));
    }
    history_.push_back(correction);
    diag.newton_iterations = it;
    diag.final_residual_inf_norm = correction;
    if (!std::isfinite(correction)) break;
    if (correction < kNewtonTolerance * size) {
      finish_step(state, next_, boundary_next);
      return diag;
    }
  }
  double magnitude = 0.0;
  bool finite = true;
  for (double x : next_) {
    finite = finite && std::isfinite(x);
    magnitude = std::max(magnitude, std::abs(x));
  }
  if (!finite || magnitude > kBlowUpLimit) throw BlowUp(k + 1, (k + 1) * cfg_.dt, magnitude);
  throw StepFailure(k, k * cfg_.dt, diag.final_residual_inf_norm,
                    "Newton iteration did not converge");
}

StepDiagnostics Stepper::step_linearized(ChainState& state) {
  const std::size_t n_sites = state.u_curr.size();
  const int k = state.step;
  const double boundary_next = cfg_.drive.value((k + 1) * cfg_.dt);
  assemble_known(state, boundary_next);
  for (std::size_t i = 0; i < n_sites; ++i) {
    next_[i] = known_[i] - potential_slope(cfg_.potential, state.u_curr[i]);
  }
  try {
    solver_.solve(coeffs_.a, coeffs_.b, next_);
  } catch (const MatrixDegenerate& err) {
    throw StepFailure(k, k * cfg_.dt, std::numeric_limits<double>::quiet_NaN(), err.what());
  }
  finish_step(state, next_, boundary_next);
  return {1, 0.0, Scheme::Linearized};
}

StepDiagnostics Stepper::step_rk4(ChainState& state) {
  const std::size_t n_sites = state.u_curr.size();
  const int k = state.step;
  const double dt = cfg_.dt;
  const double t = k * dt;
  const auto& u = state.u_curr;
  const auto& v = state.velocity;

  // k1
  ku_[0] = v;
  acceleration(t, true, u, v, kv_[0]);
  // k2, k3 at the midpoint, k4 at the end of the step.
  const std::array<double, 3> weights{0.5 * dt, 0.5 * dt, dt};
  const std::array<double, 3> times{t + 0.5 * dt, t + 0.5 * dt, (k + 1) * dt};
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < n_sites; ++i) {
      stage_u_[i] = u[i] + weights[s] * ku_[s][i];
      stage_v_[i] = v[i] + weights[s] * kv_[s][i];
    }
    ku_[s + 1] = stage_v_;
    acceleration(times[s], false, stage_u_, stage_v_, kv_[s + 1]);
  }
  for (std::size_t i = 0; i < n_sites; ++i) {
    next_[i] = u[i] + dt / 6.0 * (ku_[0][i] + 2.0 * ku_[1][i] + 2.0 * ku_[2][i] + ku_[3][i]);
    state.velocity[i] =
        v[i] + dt / 6.0 * (kv_[0][i] + 2.0 * kv_[1][i] + 2.0 * kv_[2][i] + kv_[3][i]);
  }
  finish_step(state, next_, cfg_.drive.value((k + 1) * dt));
  return {0, 0.0, Scheme::Rk4};
}

void Stepper::finish_step(ChainState& state, std::vector<double>& next, double boundary_next) {
  double magnitude = 0.0;
  bool finite = true;
  for (double x : next) {
    finite = finite && std::isfinite(x);
    magnitude = std::max(magnitude, std::abs(x));
  }
  if (!finite || magnitude > kBlowUpLimit) {
    throw BlowUp(state.step + 1, (state.step + 1) * cfg_.dt, magnitude);
  }
  // Rotate u^{k-1} <- u^k <- u^{k+1}; the old u^{k-1} buffer is reused.
  std::swap(state.u_prev, state.u_curr);
  std::swap(state.u_curr, next);
  state.boundary_prev = state.boundary_curr;
  state.boundary_curr = boundary_next;
  ++state.step;
}

namespace {

struct EnergyPair {
  double total = 0.0;
  double physical = 0.0;
};

EnergyPair energies(const ChainState& state, const ChainConfig& cfg) {
  return {discrete_energy(state.u_curr, state.u_prev, state.boundary_curr, state.boundary_prev,
                          cfg, cfg.n_sites),
          discrete_energy(state.u_curr, state.u_prev, state.boundary_curr, state.boundary_prev,
                          cfg, cfg.n_physical)};
}

void record_probes(const ChainState& state, const ChainConfig& cfg, bool latest_only,
                   Trajectory& traj) {
  auto push = [&](const std::vector<double>& layer, int step) {
    traj.times.push_back(step * cfg.dt);
    for (std::size_t p = 0; p < traj.sites.size(); ++p) {
      traj.values[p].push_back(layer[static_cast<std::size_t>(traj.sites[p] - 1)]);
    }
  };
  if (!latest_only && state.step == 1) push(state.u_prev, 0);
  push(state.u_curr, state.step);
}

}  // namespace

RunResult run(const ChainConfig& cfg, const RunOptions& options) {
  RunResult result;
  result.warnings = validate(cfg);
  result.stability = check_stability(cfg);
  for (int site : options.probes) {
    if (site < 1 || site > cfg.n_sites) {
      throw ConfigError("probes", "site " + std::to_string(site) + " outside 1..n");
    }
  }

  Stepper stepper(cfg);
  const int total_steps = cfg.steps();
  ChainState state = stepper.initial_state();

  Trajectory& traj = result.trajectory;
  traj.sites = options.probes;
  traj.values.assign(options.probes.size(), {});
  traj.times.reserve(static_cast<std::size_t>(total_steps) + 1);
  for (auto& series : traj.values) series.reserve(static_cast<std::size_t>(total_steps) + 1);
  if (!traj.sites.empty()) record_probes(state, cfg, state.step == 0, traj);

  const std::vector<double>& alpha = stepper.coefficients().alpha;
  RunSummary& summary = result.summary;
  EnergyPair last{};
  bool have_energy = false;
  double injected = 0.0;
  std::vector<double> older;

  // E_k needs layers k+1 and k, so reports trail the integration by a step.
  auto report_first = [&]() {
    last = energies(state, cfg);
    have_energy = true;
    if (options.record_energy) {
      EnergyReport rep;
      rep.step = state.step - 1;
      rep.time = rep.step * cfg.dt;
      rep.total = last.total;
      rep.physical = last.physical;
      result.energy.push_back(rep);
    }
  };
  if (state.step == 1) report_first();

  while (state.step < total_steps) {
    older = state.u_prev;
    const double boundary_older = state.boundary_prev;
    const StepDiagnostics diag = stepper.step(state);
    summary.max_newton_iterations = std::max(summary.max_newton_iterations, diag.newton_iterations);
    if (!traj.sites.empty()) record_probes(state, cfg, true, traj);

    if (state.step == 1) {
      report_first();
      continue;
    }
    // Balance at layer k = step - 1 from layers k-1, k, k+1.
    const BoundaryTriple boundary{boundary_older, state.boundary_prev, state.boundary_curr};
    const RateTerms terms =
        energy_rate_terms(older, state.u_prev, state.u_curr, boundary, cfg, alpha);
    injected += terms.flux_in * cfg.dt;

    const bool need_energy = options.record_energy || state.step == total_steps;
    if (!need_energy) {
      have_energy = false;
      continue;
    }
    const EnergyPair now = energies(state, cfg);
    if (options.record_energy) {
      if (!have_energy) last = {};
      EnergyReport rep;
      rep.step = state.step - 1;
      rep.time = rep.step * cfg.dt;
      rep.total = now.total;
      rep.physical = now.physical;
      rep.flux_in = terms.flux_in;
      rep.dissipation_gamma = terms.dissipation_gamma;
      rep.dissipation_beta = terms.dissipation_beta;
      rep.identity_residual = (now.total - last.total) / cfg.dt - terms.rhs();
      rep.injected_cumulative = injected;
      summary.max_relative_identity_residual =
          std::max(summary.max_relative_identity_residual,
                   std::abs(rep.identity_residual) / std::max(1.0, std::abs(now.total)));
      result.energy.push_back(rep);
    }
    last = now;
    have_energy = true;
  }

  if (!have_energy) last = energies(state, cfg);
  summary.steps = state.step;
  summary.energy_total = last.total;
  summary.energy_physical = last.physical;
  summary.energy_injected = injected;
  result.final_state = std::move(state);
  return result;
}

}  // namespace supra
