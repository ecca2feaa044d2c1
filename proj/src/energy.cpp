#include "supra/energy.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "supra/potential.hpp"

namespace supra {

namespace {

// u_n for n = 0..N+1 given the interior layer and the driven boundary.
inline double site(std::span<const double> layer, double u0, std::size_t n) {
  if (n == 0) return u0;
  if (n > layer.size()) return 0.0;
  return layer[n - 1];
}

}  // namespace

double discrete_energy(std::span<const double> u_next, std::span<const double> u_curr,
                       double u0_next, double u0_curr, const ChainConfig& cfg,
                       int site_limit) {
  const std::size_t limit = static_cast<std::size_t>(site_limit);
  if (limit > u_next.size() || u_next.size() != u_curr.size()) {
    throw std::invalid_argument("discrete_energy: layer/site_limit size mismatch");
  }
  const double c2 = cfg.coupling * cfg.coupling;
  const double inv_dt = 1.0 / cfg.dt;

  double kinetic = 0.0;
  double coupling = 0.0;
  double mass = 0.0;
  double potential = 0.0;
  for (std::size_t n = 1; n <= limit; ++n) {
    const double x = u_next[n - 1];
    const double y = u_curr[n - 1];
    const double v = (x - y) * inv_dt;
    kinetic += v * v;
    coupling += (site(u_next, u0_next, n + 1) - x) * (site(u_curr, u0_curr, n + 1) - y);
    mass += x * x + y * y;
    potential += potential_value(cfg.potential, x) + potential_value(cfg.potential, y);
  }
  const double edge =
      (site(u_next, u0_next, 1) - u0_next) * (site(u_curr, u0_curr, 1) - u0_curr);
  return 0.5 * kinetic + 0.5 * c2 * coupling + 0.25 * cfg.mass_squared * mass +
         0.5 * potential + 0.5 * c2 * edge;
}

RateTerms energy_rate_terms(std::span<const double> u_prev, std::span<const double> u_curr,
                            std::span<const double> u_next, BoundaryTriple boundary,
                            const ChainConfig& cfg, std::span<const double> alpha) {
  const std::size_t n_sites = u_curr.size();
  const double c2 = cfg.coupling * cfg.coupling;
  const double scale = 0.5 / cfg.dt;

  RateTerms terms;
  const double w0 = (boundary.next - boundary.prev) * scale;
  terms.flux_in = c2 * (boundary.curr - site(u_curr, boundary.curr, 1)) * w0;

  double w_left = w0;
  for (std::size_t n = 1; n <= n_sites; ++n) {
    const double w = (u_next[n - 1] - u_prev[n - 1]) * scale;
    terms.velocity_sq_sum += w * w;
    terms.weighted_sq_sum += alpha[n - 1] * w * w;
    terms.gradient_sq_sum += (w - w_left) * (w - w_left);
    w_left = w;
  }
  // Bond to the fixed site N+1.
  terms.gradient_sq_sum += w_left * w_left;

  const double w1 = n_sites > 0 ? (u_next[0] - u_prev[0]) * scale : 0.0;
  terms.boundary_beta = (w1 - w0) * w0;
  terms.dissipation_gamma = terms.weighted_sq_sum;
  terms.dissipation_beta = cfg.beta * (terms.gradient_sq_sum + terms.boundary_beta);
  return terms;
}

double energy_rate_identity(std::span<const double> u_prev, std::span<const double> u_curr,
                            std::span<const double> u_next, BoundaryTriple boundary,
                            const ChainConfig& cfg) {
  const int n = static_cast<int>(u_curr.size());
  const double e_now = discrete_energy(u_next, u_curr, boundary.next, boundary.curr, cfg, n);
  const double e_before =
      discrete_energy(u_curr, u_prev, boundary.curr, boundary.prev, cfg, n);
  const std::vector<double> alpha = cfg.damping_profile();
  const RateTerms terms = energy_rate_terms(u_prev, u_curr, u_next, boundary, cfg, alpha);
  return (e_now - e_before) / cfg.dt - terms.rhs();
}

double continuous_rate_reference(std::span<const double> u_prev,
                                 std::span<const double> u_curr,
                                 std::span<const double> u_next, BoundaryTriple boundary,
                                 const ChainConfig& cfg) {
  const std::vector<double> uniform(u_curr.size(), cfg.gamma);
  return energy_rate_terms(u_prev, u_curr, u_next, boundary, cfg, uniform).rhs();
}

GreensSides greens_identity_check(std::span<const double> sequence) {
  const std::size_t len = sequence.size();
  auto at = [&](std::size_t n) { return n < len ? sequence[n] : 0.0; };

  GreensSides sides;
  for (std::size_t n = 1; n < len; ++n) {
    sides.lhs += (at(n + 1) - 2.0 * at(n) + at(n - 1)) * at(n);
  }
  double squares = 0.0;
  for (std::size_t n = 1; n <= len; ++n) {
    const double diff = at(n) - at(n - 1);
    squares += diff * diff;
  }
  sides.rhs = at(0) * (at(0) - at(1)) - squares;
  return sides;
}

}  // namespace supra
