#pragma once

// Discrete energy of the implicit scheme and the terms of its exact rate
// identity. Layers are spans of the N interior sites; the driven site u_0 is
// passed separately and the fictitious site N+1 is zero.

#include <span>

#include "supra/model.hpp"

namespace supra {

/// Boundary values u_0 at three consecutive layers.
struct BoundaryTriple {
  double prev = 0.0;
  double curr = 0.0;
  double next = 0.0;
};

struct EnergyReport {
  int step = 0;
  double time = 0.0;
  double total = 0.0;
  double physical = 0.0;
  double flux_in = 0.0;
  double dissipation_gamma = 0.0;
  double dissipation_beta = 0.0;
  double identity_residual = 0.0;
  double injected_cumulative = 0.0;
};

/// Right-hand side of the discrete energy balance at layer k, term by term.
/// Velocities are w_n = (u_n^{k+1} - u_n^{k-1}) / (2 dt).
struct RateTerms {
  double flux_in = 0.0;            // c^2 (u_0^k - u_1^k) w_0
  double velocity_sq_sum = 0.0;    // sum_n w_n^2
  double weighted_sq_sum = 0.0;    // sum_n alpha_n w_n^2
  double gradient_sq_sum = 0.0;    // sum_{n=1}^{N+1} (w_n - w_{n-1})^2
  double boundary_beta = 0.0;      // (w_1 - w_0) w_0
  double dissipation_gamma = 0.0;  // weighted_sq_sum
  double dissipation_beta = 0.0;   // beta (gradient_sq_sum + boundary_beta)

  double rhs() const { return flux_in - dissipation_gamma - dissipation_beta; }
};

/// E_k built from layers k+1 and k, summed over sites 1..site_limit.
double discrete_energy(std::span<const double> u_next, std::span<const double> u_curr,
                       double u0_next, double u0_curr, const ChainConfig& cfg,
                       int site_limit);

/// Balance terms with the site-dependent damping `alpha` (gamma + gamma'(n)).
/// With kappa = 0 this is exactly the printed balance with uniform gamma.
RateTerms energy_rate_terms(std::span<const double> u_prev, std::span<const double> u_curr,
                            std::span<const double> u_next, BoundaryTriple boundary,
                            const ChainConfig& cfg, std::span<const double> alpha);

/// (E_k - E_{k-1}) / dt minus the balance RHS. Vanishes up to solver
/// tolerance whenever the three layers satisfy one step of the scheme.
double energy_rate_identity(std::span<const double> u_prev, std::span<const double> u_curr,
                            std::span<const double> u_next, BoundaryTriple boundary,
                            const ChainConfig& cfg);

/// Semi-discrete energy rate, uniform gamma, velocities taken as centred
/// differences. Diagnostic only.
double continuous_rate_reference(std::span<const double> u_prev,
                                 std::span<const double> u_curr,
                                 std::span<const double> u_next, BoundaryTriple boundary,
                                 const ChainConfig& cfg);

struct GreensSides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of sum_{n>=1} (a_{n+1} - 2 a_n + a_{n-1}) a_n
///   = a_0 (a_0 - a_1) - sum_{n>=1} (a_n - a_{n-1})^2
/// for a finite sequence padded with zeros.
GreensSides greens_identity_check(std::span<const double> sequence);

}  // namespace supra
