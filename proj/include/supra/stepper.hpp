#pragma once

// Time integration of the driven chain. Three interchangeable methods:
//   - Newton: the energy-consistent implicit scheme, whose nonlinear term is
//     the discrete gradient (V(u^{k+1}) - V(u^{k-1})) / (u^{k+1} - u^{k-1});
//   - Linearized: the same scheme with V'(u^k) in place of the discrete
//     gradient, one tridiagonal solve per step;
//   - Rk4: classical Runge-Kutta on the first-order semi-discrete system,
//     used as an independent reference.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "supra/energy.hpp"
#include "supra/model.hpp"
#include "supra/potential.hpp"
#include "supra/tridiagonal.hpp"

namespace supra {

inline constexpr double kDiscreteGradientGuard = 1e-7;
/// Newton stops once |correction|_inf < kNewtonTolerance * max(1, |u|_inf).
inline constexpr double kNewtonTolerance = 1e-12;
inline constexpr int kNewtonMaxIterations = 25;
/// |u| above this on any site counts as a blow-up.
inline constexpr double kBlowUpLimit = 1e6;

/// Failure to advance a step: Newton did not converge or the tridiagonal
/// elimination broke down.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(int step, double time, double residual, const std::string& what);
  int step() const noexcept { return step_; }
  double time() const noexcept { return time_; }
  double residual() const noexcept { return residual_; }

 private:
  int step_;
  double time_;
  double residual_;
};

/// Non-finite or runaway values in the new layer.
class BlowUp : public std::runtime_error {
 public:
  BlowUp(int step, double time, double magnitude);
  int step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  int step_;
  double time_;
};

/// Rolling two-layer state. `u_curr` is layer k, `u_prev` layer k-1 and
/// `boundary_*` the matching driven values psi(t). RK4 additionally carries
/// the velocity at layer k.
struct ChainState {
  std::vector<double> u_prev;
  std::vector<double> u_curr;
  std::vector<double> velocity;
  int step = 0;
  double boundary_prev = 0.0;
  double boundary_curr = 0.0;
};

struct StepDiagnostics {
  int newton_iterations = 0;
  /// Infinity norm of the last Newton correction; zero for direct methods.
  double final_residual_inf_norm = 0.0;
  Scheme scheme = Scheme::Newton;
};

/// (V(x) - V(w)) / (x - w), replaced by (V'(x) + V'(w)) / 2 when
/// |x - w| < kDiscreteGradientGuard. The quotient is evaluated in factored
/// form so it stays accurate as x approaches w.
double discrete_gradient(double x, double w, PotentialKind potential);

/// Partial derivative of discrete_gradient with respect to x. Falls back to
/// V''((x + w) / 2) / 2 inside the guard band.
double discrete_gradient_slope(double x, double w, PotentialKind potential);

/// Both of the above in one evaluation.
DividedDifference discrete_gradient_pair(double x, double w, PotentialKind potential);

/// Per-row constants of the tridiagonal systems:
///   A = tridiag(a, b_n, a), B = tridiag(c^2, d, c^2), C = tridiag(a, e_n, a).
struct SchemeCoefficients {
  double a = 0.0;
  double d = 0.0;
  double c2 = 0.0;
  std::vector<double> b;
  std::vector<double> e;
  std::vector<double> alpha;
  bool diagonally_dominant = false;

  explicit SchemeCoefficients(const ChainConfig& cfg);
};

class Stepper {
 public:
  explicit Stepper(ChainConfig cfg);

  const ChainConfig& config() const noexcept { return cfg_; }
  const SchemeCoefficients& coefficients() const noexcept { return coeffs_; }

  /// Layers u^0 = phi and u^1 = phi + dt varphi (step = 1) for the
  /// finite-difference schemes; u^0 with its velocity (step = 0) for RK4.
  ChainState initial_state() const;

  StepDiagnostics step(ChainState& state);
  StepDiagnostics step_newton(ChainState& state);
  StepDiagnostics step_linearized(ChainState& state);
  StepDiagnostics step_rk4(ChainState& state);

  /// Correction norms of the most recent Newton solve, one per iteration.
  const std::vector<double>& newton_history() const noexcept { return history_; }

  /// Right-hand side of v' for the first-order system at time t.
  void acceleration(double t, bool right_limit, const std::vector<double>& u,
                    const std::vector<double>& v, std::vector<double>& out) const;

 private:
  void finish_step(ChainState& state, std::vector<double>& next, double boundary_next);
  void assemble_known(const ChainState& state, double boundary_next);

  ChainConfig cfg_;
  SchemeCoefficients coeffs_;
  TridiagonalSolver solver_;
  std::vector<double> next_;
  std::vector<double> known_;
  std::vector<double> work_;
  std::vector<double> diag_;
  std::vector<double> history_;
  std::array<std::vector<double>, 4> ku_;
  std::array<std::vector<double>, 4> kv_;
  std::vector<double> stage_u_;
  std::vector<double> stage_v_;
};

struct RunOptions {
  /// 1-based sites to record at every layer.
  std::vector<int> probes;
  /// Keep one EnergyReport per step. When false only the final energies and
  /// the injected flux are tracked.
  bool record_energy = true;
};

struct Trajectory {
  std::vector<int> sites;
  std::vector<double> times;
  /// values[p][j]: site sites[p] at times[j].
  std::vector<std::vector<double>> values;
};

struct RunSummary {
  int steps = 0;
  double energy_total = 0.0;
  double energy_physical = 0.0;
  double energy_injected = 0.0;
  int max_newton_iterations = 0;
  double max_relative_identity_residual = 0.0;
};

struct RunResult {
  Trajectory trajectory;
  std::vector<EnergyReport> energy;
  ChainState final_state;
  RunSummary summary;
  StabilityCheck stability;
  std::vector<std::string> warnings;
};

/// Integrates from t = 0 to t_final with cfg.scheme. Throws StepFailure or
/// BlowUp carrying the failing step. Identical inputs give identical output.
RunResult run(const ChainConfig& cfg, const RunOptions& options = {});

}  // namespace supra
