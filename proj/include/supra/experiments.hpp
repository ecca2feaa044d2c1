#pragma once

// Parameter studies built on `run`: amplitude sweeps, threshold bisection,
// bifurcation diagrams over frequency, (frequency, amplitude) energy surfaces
// and time-step convergence studies. Grid cells are independent and execute
// on an OpenMP worker pool; output order never depends on the worker count.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "supra/model.hpp"
#include "supra/stepper.hpp"

namespace supra {

struct ExperimentOptions {
  /// Worker threads; 0 picks the OpenMP default, 1 runs the serial path.
  int workers = 0;
  /// Raise t_final for frequencies close to the gap edge, where the onset of
  /// transmission takes longer to develop.
  bool extend_near_edge = true;
  double near_edge_frequency = 0.95;
  double near_edge_t_final = 500.0;
};

/// Serial reference loop: calls body(i) for i = 0..count-1 in order.
void serial_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// OpenMP loop with dynamic scheduling. The first exception thrown by any
/// body is rethrown after the loop.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& body);

/// Configuration of one grid cell (drive frequency/amplitude set, near-edge
/// extension applied).
ChainConfig cell_config(const ChainConfig& base, double frequency, double amplitude,
                        const ExperimentOptions& options);

struct CellRecord {
  double frequency = 0.0;
  double amplitude = 0.0;
  double energy_physical = 0.0;
  double energy_total = 0.0;
  double energy_injected = 0.0;
  bool failed = false;
  std::string failure;
};

/// One full run per cell, summarised by its final energies. Failures are
/// recorded in the cell, never thrown.
CellRecord run_cell(const ChainConfig& base, double frequency, double amplitude,
                    const ExperimentOptions& options);

struct SweepResult {
  std::vector<double> frequencies;
  std::vector<double> amplitudes;
  /// Row-major: cells[i * amplitudes.size() + j] is (frequencies[i], amplitudes[j]).
  std::vector<CellRecord> cells;
  ChainConfig config;
  double wall_seconds = 0.0;
};

/// Requires a nonempty, strictly increasing amplitude grid.
SweepResult amplitude_sweep(const ChainConfig& base, std::span<const double> amplitudes,
                            const ExperimentOptions& options = {});

SweepResult energy_surface(const ChainConfig& base, std::span<const double> frequencies,
                           std::span<const double> amplitudes,
                           const ExperimentOptions& options = {});

struct ThresholdSearch {
  /// Bracket; defaults to 0.25 A_s and 2 A_s when Omega is inside the gap.
  std::optional<double> a_lo;
  std::optional<double> a_hi;
  double tolerance = 1e-3;
  /// Transmission is declared when E_physical exceeds ratio times the
  /// quadratically scaled baseline energy.
  double ratio = 10.0;
  /// Baseline amplitude as a fraction of a_lo.
  double baseline_fraction = 0.1;
};

struct ThresholdRecord {
  double frequency = 0.0;
  double threshold = 0.0;  // NaN when flagged
  double lo = 0.0;
  double hi = 0.0;
  double baseline_amplitude = 0.0;
  double baseline_energy = 0.0;
  double ratio = 0.0;
  /// No clean threshold inside the bracket (transmitting at lo, or not at hi).
  bool flagged = false;
  std::string note;
  int runs = 0;
};

ThresholdRecord find_threshold(const ChainConfig& base, double frequency,
                               const ThresholdSearch& search = {},
                               const ExperimentOptions& options = {});

struct BifurcationDiagram {
  std::vector<ThresholdRecord> points;
  /// Continuum threshold A_s per frequency; NaN outside the gap.
  std::vector<double> continuum_reference;
  ThresholdSearch search;
  ChainConfig config;
  double wall_seconds = 0.0;
};

BifurcationDiagram bifurcation_diagram(const ChainConfig& base,
                                       std::span<const double> frequencies,
                                       const ThresholdSearch& search = {},
                                       const ExperimentOptions& options = {});

/// Builds the linear test problem whose exact solution is
/// u_n(t) = A sin(Omega t) exp(-lambda n): harmonic potential, no damping or
/// absorber, no ramp, and initial velocity A Omega exp(-lambda n).
ChainConfig evanescent_problem(const ChainConfig& base);

/// Exact evanescent displacement of the linear chain.
double evanescent_solution(const ChainConfig& cfg, int site, double t);

/// Amplitude of the component at `frequency` in series(t) over
/// [t_start, t_end], from a Hann-windowed projection on sin and cos. Slowly
/// decaying phonons away from the drive frequency are suppressed.
double steady_envelope(std::span<const double> times, std::span<const double> series,
                       double frequency, double t_start, double t_end);

enum class ConvergenceReference {
  ExactEvanescent,  // base must come from evanescent_problem
  FineRk4,          // RK4 at min(dt) / refinement, compared on the coarse grid
};

struct ConvergenceOptions {
  std::vector<int> probes{1, 10, 20, 40, 60};
  ConvergenceReference reference = ConvergenceReference::ExactEvanescent;
  int reference_refinement = 8;
};

struct ConvergenceStudy {
  std::vector<double> dts;
  /// Max abs error over probes and coarse-grid times; NaN when the run failed.
  std::vector<double> errors;
  /// log(e_i / e_{i+1}) / log(dt_i / dt_{i+1}).
  std::vector<double> orders;
  std::vector<std::string> failures;
};

/// Runs base.scheme at each dt (a refinement ladder, each an integer divisor
/// of the first) and measures the error against the chosen reference.
ConvergenceStudy convergence_study(const ChainConfig& base, std::span<const double> dts,
                                   const ConvergenceOptions& options = {});

/// Max deviation between the Newton and RK4 trajectories at each dt, with
/// observed orders. Same layout as ConvergenceStudy.
ConvergenceStudy scheme_comparison(const ChainConfig& base, std::span<const double> dts,
                                   std::span<const int> probes);

}  // namespace supra
