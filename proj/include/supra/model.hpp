#pragma once

// Physical parameters and closed-form linear theory for a damped,
// boundary-driven chain of coupled oscillators:
//
//   u_n'' - (c^2 + beta d/dt) D2x u_n + alpha_n u_n' + m^2 u_n + V'(u_n) = 0,
//   u_0(t) = psi(t),  u_{N+1}(t) = 0,
//
// with alpha_n = gamma + gamma'(n) (uniform external damping plus a tanh
// absorbing layer on the last N - N0 sites).

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace supra {

/// Thrown for invalid configuration values. The message names the field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class PotentialKind {
  SineGordon,   // V(u) = 1 - cos u
  KleinGordon,  // V(u) = u^2/2! - u^4/4! + u^6/6!
  Harmonic,     // V(u) = u^2/2, the linearization shared by both chains
};

enum class Scheme { Newton, Linearized, Rk4 };

/// Argument of the tanh in the absorbing layer. `Ramped` uses (2n - N0 - N),
/// which rises from 0 to 2 kappa across (N0, N]. `Printed` keeps the
/// (2n - N0 + N) form, which is saturated over the whole layer.
enum class AbsorberForm { Ramped, Printed };

std::string_view to_string(PotentialKind kind);
std::string_view to_string(Scheme scheme);
std::string_view to_string(AbsorberForm form);
PotentialKind parse_potential(std::string_view text);
Scheme parse_scheme(std::string_view text);
AbsorberForm parse_absorber_form(std::string_view text);

/// psi(t) = A r(t) sin(Omega t), r(t) = min(t / ramp_time, 1).
struct DriveSpec {
  double amplitude = 0.0;
  double frequency = 0.9;
  double ramp_time = 50.0;

  double value(double t) const;
  /// Time derivative. At the ramp knee `right_limit` selects the branch.
  double rate(double t, bool right_limit = false) const;
};

struct ChainConfig {
  int n_sites = 200;
  int n_physical = 150;
  double coupling = 4.0;
  double beta = 0.0;
  double gamma = 0.0;
  double mass_squared = 0.0;
  double kappa = 0.5;
  double sigma = 3.0;
  double dt = 0.05;
  double t_final = 200.0;
  PotentialKind potential = PotentialKind::SineGordon;
  AbsorberForm absorber = AbsorberForm::Ramped;
  Scheme scheme = Scheme::Newton;
  bool second_order_start = false;
  DriveSpec drive;
  /// Empty means identically zero; otherwise exactly n_sites entries.
  std::vector<double> initial_displacement;
  std::vector<double> initial_velocity;

  /// Number of time layers after u^0, i.e. round(t_final / dt).
  int steps() const;
  /// alpha_n = gamma + gamma'(n), n = 1..N stored at index n - 1.
  std::vector<double> damping_profile() const;
};

struct StabilityCheck {
  bool satisfied = false;
  /// RHS - LHS of (c^2 - m^2/4) dt^2 < 1 + (alpha/4 + beta) dt.
  double margin = 0.0;
};

/// Throws ConfigError on hard violations (sizes, signs, m^2 <= -1, ...).
/// Returns warnings; currently only a failed stability condition.
std::vector<std::string> validate(const ChainConfig& cfg);

/// omega(k) = sqrt(m^2 + 1 + 2 c^2 (1 - cos k)).
double dispersion(double wavenumber, const ChainConfig& cfg);

/// Upper edge of the forbidden band, sqrt(m^2 + 1).
double gap_edge(const ChainConfig& cfg);

/// lambda = arccosh(1 + (m^2 + 1 - Omega^2) / (2 c^2)) for Omega inside the
/// gap. Throws std::domain_error otherwise.
double evanescent_decay(double frequency, const ChainConfig& cfg);

/// Continuum threshold A_s = 4 arctan(lambda c / Omega).
double threshold_As(double frequency, const ChainConfig& cfg);

/// gamma'(n) for 1 <= n <= N; zero on the physical part n <= N0.
double absorbing_profile(int site, const ChainConfig& cfg);

/// Necessary stability condition with alpha taken as the uniform gamma.
StabilityCheck check_stability(const ChainConfig& cfg);

}  // namespace supra
