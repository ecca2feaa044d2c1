#include "supra/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

namespace supra {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void serial_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& body) {
  if (workers == 1 || count <= 1) {
    serial_for(count, body);
    return;
  }
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

ChainConfig cell_config(const ChainConfig& base, double frequency, double amplitude,
                        const ExperimentOptions& options) {
  ChainConfig cfg = base;
  cfg.drive.frequency = frequency;
  cfg.drive.amplitude = amplitude;
  if (options.extend_near_edge && frequency >= options.near_edge_frequency) {
    cfg.t_final = std::max(cfg.t_final, options.near_edge_t_final);
  }
  return cfg;
}

CellRecord run_cell(const ChainConfig& base, double frequency, double amplitude,
                    const ExperimentOptions& options) {
  CellRecord cell;
  cell.frequency = frequency;
  cell.amplitude = amplitude;
  RunOptions run_options;
  run_options.record_energy = false;
  try {
    const RunResult result = run(cell_config(base, frequency, amplitude, options), run_options);
    cell.energy_physical = result.summary.energy_physical;
    cell.energy_total = result.summary.energy_total;
    cell.energy_injected = result.summary.energy_injected;
  } catch (const std::exception& err) {
    cell.failed = true;
    cell.failure = err.what();
    cell.energy_physical = kNaN;
    cell.energy_total = kNaN;
    cell.energy_injected = kNaN;
  }
  return cell;
}

SweepResult energy_surface(const ChainConfig& base, std::span<const double> frequencies,
                           std::span<const double> amplitudes,
                           const ExperimentOptions& options) {
  if (frequencies.empty() || amplitudes.empty()) {
    throw std::invalid_argument("energy_surface: grids must be nonempty");
  }
  validate(base);
  const auto start = std::chrono::steady_clock::now();
  SweepResult result;
  result.frequencies.assign(frequencies.begin(), frequencies.end());
  result.amplitudes.assign(amplitudes.begin(), amplitudes.end());
  result.config = base;
  result.cells.resize(frequencies.size() * amplitudes.size());
  const std::size_t cols = amplitudes.size();
  parallel_for(result.cells.size(), options.workers, [&](std::size_t idx) {
    result.cells[idx] = run_cell(base, frequencies[idx / cols], amplitudes[idx % cols], options);
  });
  result.wall_seconds = seconds_since(start);
  return result;
}

SweepResult amplitude_sweep(const ChainConfig& base, std::span<const double> amplitudes,
                            const ExperimentOptions& options) {
  if (amplitudes.empty()) throw std::invalid_argument("amplitude_sweep: empty amplitude grid");
  for (std::size_t i = 1; i < amplitudes.size(); ++i) {
    if (!(amplitudes[i] > amplitudes[i - 1])) {
      throw std::invalid_argument("amplitude_sweep: amplitudes must be strictly increasing");
    }
  }
  const double frequency = base.drive.frequency;
  return energy_surface(base, std::span<const double>(&frequency, 1), amplitudes, options);
}

ThresholdRecord find_threshold(const ChainConfig& base, double frequency,
                               const ThresholdSearch& search,
                               const ExperimentOptions& options) {
  ThresholdRecord rec;
  rec.frequency = frequency;
  rec.ratio = search.ratio;
  rec.threshold = kNaN;

  double continuum = kNaN;
  if (frequency > 0.0 && frequency < gap_edge(base)) continuum = threshold_As(frequency, base);
  if ((!search.a_lo || !search.a_hi) && std::isnan(continuum)) {
    rec.flagged = true;
    rec.note = "frequency outside the band gap and no explicit bracket";
    rec.lo = search.a_lo.value_or(kNaN);
    rec.hi = search.a_hi.value_or(kNaN);
    return rec;
  }
  double lo = search.a_lo.value_or(0.25 * continuum);
  double hi = search.a_hi.value_or(2.0 * continuum);
  rec.lo = lo;
  rec.hi = hi;
  if (!(lo > 0.0 && hi > lo)) {
    rec.flagged = true;
    rec.note = "invalid bracket";
    return rec;
  }

  rec.baseline_amplitude = search.baseline_fraction * lo;
  const CellRecord baseline = run_cell(base, frequency, rec.baseline_amplitude, options);
  ++rec.runs;
  if (baseline.failed || !(baseline.energy_physical > 0.0)) {
    rec.flagged = true;
    rec.note = baseline.failed ? "baseline run failed: " + baseline.failure
                               : "baseline energy is not positive";
    return rec;
  }
  rec.baseline_energy = baseline.energy_physical;

  auto transmits = [&](double amplitude) {
    const CellRecord cell = run_cell(base, frequency, amplitude, options);
    ++rec.runs;
    if (cell.failed) {
      if (rec.note.empty()) rec.note = "run failed at A = " + std::to_string(amplitude);
      return true;
    }
    const double scale = amplitude / rec.baseline_amplitude;
    return cell.energy_physical > search.ratio * rec.baseline_energy * scale * scale;
  };

  const bool at_lo = transmits(lo);
  const bool at_hi = transmits(hi);
  if (at_lo || !at_hi) {
    rec.flagged = true;
    rec.note = at_lo ? "transmitting at the lower bracket end"
                     : "no transmission at the upper bracket end";
    return rec;
  }
  while (hi - lo > search.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (transmits(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  rec.lo = lo;
  rec.hi = hi;
  rec.threshold = 0.5 * (lo + hi);
  return rec;
}

BifurcationDiagram bifurcation_diagram(const ChainConfig& base,
                                       std::span<const double> frequencies,
                                       const ThresholdSearch& search,
                                       const ExperimentOptions& options) {
  if (frequencies.empty()) throw std::invalid_argument("bifurcation_diagram: no frequencies");
  validate(base);
  const auto start = std::chrono::steady_clock::now();
  BifurcationDiagram diagram;
  diagram.search = search;
  diagram.config = base;
  diagram.points.resize(frequencies.size());
  diagram.continuum_reference.resize(frequencies.size());
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    const double omega = frequencies[i];
    diagram.continuum_reference[i] =
        (omega > 0.0 && omega < gap_edge(base)) ? threshold_As(omega, base) : kNaN;
  }
  // Bisection is sequential per frequency; frequencies run concurrently.
  ExperimentOptions inner = options;
  inner.workers = 1;
  parallel_for(frequencies.size(), options.workers, [&](std::size_t i) {
    diagram.points[i] = find_threshold(base, frequencies[i], search, inner);
  });
  diagram.wall_seconds = seconds_since(start);
  return diagram;
}

ChainConfig evanescent_problem(const ChainConfig& base) {
  ChainConfig cfg = base;
  cfg.potential = PotentialKind::Harmonic;
  cfg.beta = 0.0;
  cfg.gamma = 0.0;
  cfg.kappa = 0.0;
  cfg.drive.ramp_time = 0.0;
  cfg.second_order_start = false;
  const double lambda = evanescent_decay(cfg.drive.frequency, cfg);
  const auto n = static_cast<std::size_t>(cfg.n_sites);
  cfg.initial_displacement.assign(n, 0.0);
  cfg.initial_velocity.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cfg.initial_velocity[i] = cfg.drive.amplitude * cfg.drive.frequency *
                              std::exp(-lambda * static_cast<double>(i + 1));
  }
  return cfg;
}

double evanescent_solution(const ChainConfig& cfg, int site, double t) {
  const double lambda = evanescent_decay(cfg.drive.frequency, cfg);
  return cfg.drive.amplitude * std::sin(cfg.drive.frequency * t) * std::exp(-lambda * site);
}

double steady_envelope(std::span<const double> times, std::span<const double> series,
                       double frequency, double t_start, double t_end) {
  if (times.size() != series.size()) throw std::invalid_argument("steady_envelope: size mismatch");
  if (!(t_end > t_start)) throw std::invalid_argument("steady_envelope: empty window");
  constexpr double kTwoPi = 6.283185307179586;
  const double width = t_end - t_start;
  double in_phase = 0.0;
  double quadrature = 0.0;
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double x = times[j] - t_start;
    if (x < 0.0 || x > width) continue;
    const double weight = 0.5 - 0.5 * std::cos(kTwoPi * x / width);
    in_phase += weight * series[j] * std::sin(frequency * times[j]);
    quadrature += weight * series[j] * std::cos(frequency * times[j]);
    weight_sum += weight;
  }
  if (!(weight_sum > 0.0)) throw std::invalid_argument("steady_envelope: no samples in window");
  return 2.0 * std::hypot(in_phase, quadrature) / weight_sum;
}

namespace {

int integer_ratio(double coarse, double fine) {
  const double ratio = coarse / fine;
  const long rounded = std::lround(ratio);
  if (rounded < 1 || std::abs(ratio - static_cast<double>(rounded)) > 1e-9 * ratio) {
    throw std::invalid_argument("time steps must divide the coarsest step");
  }
  return static_cast<int>(rounded);
}

void fill_orders(ConvergenceStudy& study) {
  study.orders.clear();
  for (std::size_t i = 0; i + 1 < study.dts.size(); ++i) {
    const double e0 = study.errors[i];
    const double e1 = study.errors[i + 1];
    study.orders.push_back(std::log(e0 / e1) / std::log(study.dts[i] / study.dts[i + 1]));
  }
}

Trajectory probe_run(ChainConfig cfg, double dt, Scheme scheme, std::span<const int> probes) {
  cfg.dt = dt;
  cfg.scheme = scheme;
  RunOptions run_options;
  run_options.probes.assign(probes.begin(), probes.end());
  run_options.record_energy = false;
  return run(cfg, run_options).trajectory;
}

}  // namespace

ConvergenceStudy convergence_study(const ChainConfig& base, std::span<const double> dts,
                                   const ConvergenceOptions& options) {
  if (dts.empty()) throw std::invalid_argument("convergence_study: empty dt list");
  ConvergenceStudy study;
  study.dts.assign(dts.begin(), dts.end());
  const double coarse = dts.front();
  const int coarse_steps = static_cast<int>(std::lround(base.t_final / coarse));

  Trajectory reference;
  int reference_stride = 0;
  if (options.reference == ConvergenceReference::FineRk4) {
    const double fine = *std::min_element(dts.begin(), dts.end()) / options.reference_refinement;
    reference_stride = integer_ratio(coarse, fine);
    reference = probe_run(base, fine, Scheme::Rk4, options.probes);
  }

  for (double dt : dts) {
    try {
      const int stride = integer_ratio(coarse, dt);
      const Trajectory traj = probe_run(base, dt, base.scheme, options.probes);
      double error = 0.0;
      for (int j = 0; j <= coarse_steps; ++j) {
        const auto idx = static_cast<std::size_t>(j) * static_cast<std::size_t>(stride);
        for (std::size_t p = 0; p < options.probes.size(); ++p) {
          double expected = 0.0;
          if (options.reference == ConvergenceReference::ExactEvanescent) {
            expected = evanescent_solution(base, options.probes[p], j * coarse);
          } else {
            expected = reference.values[p][static_cast<std::size_t>(j) *
                                           static_cast<std::size_t>(reference_stride)];
          }
          error = std::max(error, std::abs(traj.values[p][idx] - expected));
        }
      }
      study.errors.push_back(error);
      study.failures.emplace_back();
    } catch (const std::exception& err) {
      study.errors.push_back(kNaN);
      study.failures.emplace_back(err.what());
    }
  }
  fill_orders(study);
  return study;
}

ConvergenceStudy scheme_comparison(const ChainConfig& base, std::span<const double> dts,
                                   std::span<const int> probes) {
  ConvergenceStudy study;
  study.dts.assign(dts.begin(), dts.end());
  for (double dt : dts) {
    try {
      const Trajectory implicit = probe_run(base, dt, Scheme::Newton, probes);
      const Trajectory explicit_rk = probe_run(base, dt, Scheme::Rk4, probes);
      double deviation = 0.0;
      for (std::size_t p = 0; p < probes.size(); ++p) {
        for (std::size_t j = 0; j < implicit.times.size(); ++j) {
          deviation =
              std::max(deviation, std::abs(implicit.values[p][j] - explicit_rk.values[p][j]));
        }
      }
      study.errors.push_back(deviation);
      study.failures.emplace_back();
    } catch (const std::exception& err) {
      study.errors.push_back(kNaN);
      study.failures.emplace_back(err.what());
    }
  }
  fill_orders(study);
  return study;
}

}  // namespace supra
