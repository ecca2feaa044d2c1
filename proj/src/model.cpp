#include "supra/model.hpp"

#include <cmath>
#include <sstream>

namespace supra {

std::string_view to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::SineGordon: return "sine-gordon";
    case PotentialKind::KleinGordon: return "klein-gordon";
    case PotentialKind::Harmonic: return "harmonic";
  }
  return "?";
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Newton: return "newton";
    case Scheme::Linearized: return "linearized";
    case Scheme::Rk4: return "rk4";
  }
  return "?";
}

std::string_view to_string(AbsorberForm form) {
  switch (form) {
    case AbsorberForm::Ramped: return "ramped";
    case AbsorberForm::Printed: return "printed";
  }
  return "?";
}

PotentialKind parse_potential(std::string_view text) {
  if (text == "sine-gordon" || text == "sg") return PotentialKind::SineGordon;
  if (text == "klein-gordon" || text == "kg") return PotentialKind::KleinGordon;
  if (text == "harmonic" || text == "linear") return PotentialKind::Harmonic;
  throw ConfigError("potential", "unknown potential '" + std::string(text) +
                                     "' (expected sine-gordon, klein-gordon or harmonic)");
}

Scheme parse_scheme(std::string_view text) {
  if (text == "newton") return Scheme::Newton;
  if (text == "linearized" || text == "crout") return Scheme::Linearized;
  if (text == "rk4") return Scheme::Rk4;
  throw ConfigError("scheme", "unknown scheme '" + std::string(text) +
                                  "' (expected newton, linearized or rk4)");
}

AbsorberForm parse_absorber_form(std::string_view text) {
  if (text == "ramped") return AbsorberForm::Ramped;
  if (text == "printed") return AbsorberForm::Printed;
  throw ConfigError("absorber", "unknown absorber form '" + std::string(text) + "'");
}

double DriveSpec::value(double t) const {
  if (t <= 0.0) return 0.0;
  const double ramp = (ramp_time > 0.0 && t < ramp_time) ? t / ramp_time : 1.0;
  return amplitude * ramp * std::sin(frequency * t);
}

double DriveSpec::rate(double t, bool right_limit) const {
  if (t < 0.0) return 0.0;
  const bool on_ramp = right_limit ? t < ramp_time : t <= ramp_time;
  if (ramp_time > 0.0 && on_ramp) {
    const double ramp = t / ramp_time;
    return amplitude * (std::sin(frequency * t) / ramp_time +
                        ramp * frequency * std::cos(frequency * t));
  }
  return amplitude * frequency * std::cos(frequency * t);
}

int ChainConfig::steps() const { return static_cast<int>(std::lround(t_final / dt)); }

std::vector<double> ChainConfig::damping_profile() const {
  std::vector<double> alpha(static_cast<std::size_t>(n_sites));
  for (int n = 1; n <= n_sites; ++n) {
    alpha[static_cast<std::size_t>(n - 1)] = gamma + absorbing_profile(n, *this);
  }
  return alpha;
}

std::vector<std::string> validate(const ChainConfig& cfg) {
  if (cfg.n_sites < 1) throw ConfigError("n", "must be a positive integer");
  if (cfg.n_physical < 1 || cfg.n_physical > cfg.n_sites) {
    throw ConfigError("n0", "must satisfy 1 <= n0 <= n");
  }
  if (!(cfg.coupling > 0.0)) throw ConfigError("coupling", "must be positive");
  if (!(cfg.beta >= 0.0)) throw ConfigError("beta", "must be nonnegative");
  if (!(cfg.gamma >= 0.0)) throw ConfigError("gamma", "must be nonnegative");
  if (!(cfg.mass_squared > -1.0) || !std::isfinite(cfg.mass_squared)) {
    throw ConfigError("mass-squared", "must exceed -1 so that a band gap exists");
  }
  if (!(cfg.kappa >= 0.0)) throw ConfigError("kappa", "must be nonnegative");
  if (!(cfg.sigma > 0.0)) throw ConfigError("sigma", "must be positive");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt", "must be positive");
  if (!(cfg.t_final >= cfg.dt) || !std::isfinite(cfg.t_final)) {
    throw ConfigError("t-final", "must be at least dt");
  }
  if (!(cfg.drive.ramp_time >= 0.0)) throw ConfigError("ramp-time", "must be nonnegative");
  if (!(cfg.drive.amplitude >= 0.0)) throw ConfigError("amplitude", "must be nonnegative");
  if (!(cfg.drive.frequency > 0.0)) throw ConfigError("frequency", "must be positive");
  const auto sites = static_cast<std::size_t>(cfg.n_sites);
  if (!cfg.initial_displacement.empty() && cfg.initial_displacement.size() != sites) {
    throw ConfigError("initial-displacement", "must be empty or have n entries");
  }
  if (!cfg.initial_velocity.empty() && cfg.initial_velocity.size() != sites) {
    throw ConfigError("initial-velocity", "must be empty or have n entries");
  }

  std::vector<std::string> warnings;
  const StabilityCheck stab = check_stability(cfg);
  if (!stab.satisfied) {
    std::ostringstream msg;
    msg << "necessary stability condition violated (margin " << stab.margin << ")";
    warnings.push_back(msg.str());
  }
  return warnings;
}

double dispersion(double wavenumber, const ChainConfig& cfg) {
  const double c2 = cfg.coupling * cfg.coupling;
  return std::sqrt(cfg.mass_squared + 1.0 + 2.0 * c2 * (1.0 - std::cos(wavenumber)));
}

double gap_edge(const ChainConfig& cfg) { return std::sqrt(cfg.mass_squared + 1.0); }

double evanescent_decay(double frequency, const ChainConfig& cfg) {
  const double edge = gap_edge(cfg);
  if (!(frequency >= 0.0 && frequency < edge)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "frequency " << frequency << " lies outside the forbidden band gap [0, " << edge
        << ")";
    throw std::domain_error(msg.str());
  }
  const double c2 = cfg.coupling * cfg.coupling;
  return std::acosh(1.0 + (cfg.mass_squared + 1.0 - frequency * frequency) / (2.0 * c2));
}

double threshold_As(double frequency, const ChainConfig& cfg) {
  const double lambda = evanescent_decay(frequency, cfg);
  return 4.0 * std::atan(lambda * cfg.coupling / frequency);
}

double absorbing_profile(int site, const ChainConfig& cfg) {
  if (site <= cfg.n_physical || site > cfg.n_sites) return 0.0;
  const double n0 = cfg.n_physical;
  const double n = cfg.n_sites;
  const double arg = cfg.absorber == AbsorberForm::Ramped ? 2.0 * site - n0 - n
                                                          : 2.0 * site - n0 + n;
  return cfg.kappa * (1.0 + std::tanh(arg / (2.0 * cfg.sigma)));
}

StabilityCheck check_stability(const ChainConfig& cfg) {
  const double c2 = cfg.coupling * cfg.coupling;
  const double lhs = (c2 - cfg.mass_squared / 4.0) * cfg.dt * cfg.dt;
  const double rhs = 1.0 + (cfg.gamma / 4.0 + cfg.beta) * cfg.dt;
  return {lhs < rhs, rhs - lhs};
}

}  // namespace supra
