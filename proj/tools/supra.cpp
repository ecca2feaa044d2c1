// supra: command-line front end for the driven-chain simulator.
//
//   supra simulate  [options]   trajectory.csv, energy.csv
//   supra sweep     [options]   sweep.csv
//   supra bifurcate [options]   bifurcation.csv
//   supra surface   [options]   surface.csv
//   supra validate  [options]   self-check battery (exit 2 on failure)
//
// Every chain parameter and every subcommand parameter is a string-valued
// key that can come from the built-in default, a --config file or a flag, in
// that order of precedence. The resolved set is the run manifest.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "supra/config_io.hpp"
#include "supra/experiments.hpp"
#include "supra/model.hpp"
#include "supra/output.hpp"
#include "supra/stepper.hpp"
#include "supra/validation.hpp"

namespace fs = std::filesystem;
using namespace supra;

namespace {

enum ExitCode { kOk = 0, kIoError = 1, kValidationFailed = 2, kBlowUp = 3, kConfigError = 4 };

struct Param {
  std::string key;
  std::string value;
  std::string help;
};

struct Command {
  std::string name;
  std::vector<Param> params;
  CLI::App* app = nullptr;

  // Command-line values; nullopt when the flag was not given.
  std::map<std::string, std::optional<std::string>> chain_flags;
  std::map<std::string, std::optional<std::string>> param_flags;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<int> workers;
  bool dump = false;
  bool svg = false;
  bool timestamp = false;
  bool seedless = false;
};

std::vector<Param> params_for(const std::string& name) {
  if (name == "simulate") {
    return {{"probes", "60", "1-based sites to record, comma separated"},
            {"compare", "none", "second scheme for a per-step deviation column"}};
  }
  if (name == "sweep") {
    return {{"amplitudes", "0.1:3:0.1", "amplitude grid, list or start:stop:step"},
            {"series", "", "key=v1,v2,... repeats the sweep per value"}};
  }
  if (name == "bifurcate") {
    return {{"frequencies", "0.1:0.95:0.05", "frequency grid"},
            {"a-lo", "auto", "lower bracket end (auto: 0.25 A_s)"},
            {"a-hi", "auto", "upper bracket end (auto: 2 A_s)"},
            {"tol", "0.001", "bisection tolerance"},
            {"ratio", "10", "transmission energy ratio R"},
            {"baseline-fraction", "0.1", "baseline amplitude as a fraction of a-lo"},
            {"near-edge-extension", "true", "use t-final 500 for frequencies >= 0.95"},
            {"series", "", "key=v1,v2,... repeats the diagram per value"}};
  }
  if (name == "surface") {
    return {{"frequencies", "0.1:0.95:0.05", "frequency grid"},
            {"amplitudes", "0.1:4:0.1", "amplitude grid"},
            {"near-edge-extension", "true", "use t-final 500 for frequencies >= 0.95"}};
  }
  if (name == "validate") return {{"quick", "false", "run only the fast checks"}};
  return {};
}

std::string flag_help(const std::string& key) {
  static const std::map<std::string, std::string> help = {
      {"n", "number of sites N"},
      {"n0", "last site of the physical part"},
      {"coupling", "coupling c"},
      {"beta", "internal damping"},
      {"gamma", "external damping"},
      {"mass-squared", "mass term m^2"},
      {"kappa", "absorber strength"},
      {"sigma", "absorber width"},
      {"absorber", "ramped | printed"},
      {"potential", "sine-gordon | klein-gordon | harmonic"},
      {"amplitude", "drive amplitude A"},
      {"frequency", "drive frequency"},
      {"ramp-time", "linear ramp duration of the drive"},
      {"dt", "time step"},
      {"t-final", "final time T"},
      {"scheme", "newton | linearized | rk4"},
      {"second-order-start", "include the dt^2/2 term in the first layer"},
      {"initial-displacement", "N comma-separated values (empty: zero)"},
      {"initial-velocity", "N comma-separated values (empty: zero)"},
  };
  const auto it = help.find(key);
  return it == help.end() ? std::string{} : it->second;
}

void add_common(Command& cmd) {
  CLI::App* app = cmd.app;
  app->add_option("--config", cmd.config_path, "key = value configuration file");
  app->add_option("--out", cmd.out_dir, "output directory")->capture_default_str();
  app->add_option("--workers", cmd.workers, "worker threads (0: all cores, 1: serial)");
  app->add_flag("--dump-config", cmd.dump, "print the resolved configuration and exit");
  app->add_flag("--svg", cmd.svg, "also write single-panel SVG plots");
  app->add_flag("--timestamp", cmd.timestamp, "record the creation time in output headers");
  app->add_flag("--seedless", cmd.seedless, "reserved (the model has no randomness)");
  for (const auto& key : chain_keys()) {
    app->add_option("--" + key, cmd.chain_flags[key], flag_help(key));
  }
  for (auto& p : cmd.params) {
    std::string help = p.help + " [" + (p.value.empty() ? "none" : p.value) + "]";
    if (p.value == "true" || p.value == "false") {
      // on/off parameters: bare flag means true, `--key=false` turns it off
      app->add_flag("--" + p.key + "{true}", cmd.param_flags[p.key], help);
    } else {
      app->add_option("--" + p.key, cmd.param_flags[p.key], help);
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Resolved {
  ChainConfig cfg;
  std::vector<Param> params;
  int workers = 0;

  const std::string& get(const std::string& key) const {
    for (const auto& p : params) {
      if (p.key == key) return p.value;
    }
    throw std::logic_error("unknown parameter " + key);
  }
};

bool set_param(std::vector<Param>& params, const std::string& key, const std::string& value) {
  for (auto& p : params) {
    if (p.key == key) {
      p.value = value;
      return true;
    }
  }
  return false;
}

Resolved resolve(const Command& cmd) {
  if (cmd.seedless) throw ConfigError("seedless", "reserved flag; the model has no randomness");
  Resolved r;
  r.params = cmd.params;
  if (!cmd.config_path.empty()) {
    for (const Setting& s : parse_settings(read_file(cmd.config_path))) {
      if (apply_setting(r.cfg, s)) continue;
      if (set_param(r.params, s.key, s.value)) continue;
      if (s.key == "workers") {
        r.workers = parse_int(s.key, s.value);
        continue;
      }
      throw ConfigError(s.key, "unknown key for `" + cmd.name + "` (line " + std::to_string(s.line) + ")");
    }
  }
  for (const auto& [key, value] : cmd.chain_flags) {
    if (value) apply_setting(r.cfg, Setting{key, *value, 0});
  }
  for (const auto& [key, value] : cmd.param_flags) {
    if (value) set_param(r.params, key, *value);
  }
  if (cmd.workers) r.workers = *cmd.workers;
  if (r.workers < 0) throw ConfigError("workers", "must be >= 0");
  for (const auto& warning : validate(r.cfg)) std::cerr << "warning: " << warning << '\n';
  return r;
}

RunManifest manifest_for(const Command& cmd, const ChainConfig& cfg, const Resolved& r) {
  RunManifest m;
  m.config = cfg;
  m.subcommand = cmd.name;
  for (const auto& p : r.params) m.parameters.emplace_back(p.key, p.value);
  if (cmd.timestamp) m.timestamp = utc_timestamp();
  return m;
}

std::string dump_text(const Command& cmd, const Resolved& r) {
  const RunManifest m = manifest_for(cmd, r.cfg, r);
  std::string text = "# supra " + m.tool_version + " " + cmd.name + "\n";
  text += "# content-hash = " + hex64(m.content_hash()) + "\n";
  text += dump_config(r.cfg);
  text += "\n[run]\n";
  for (const auto& p : r.params) text += p.key + " = " + p.value + "\n";
  return text;
}

fs::path prepare_out(const Command& cmd) {
  fs::path dir(cmd.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + cmd.out_dir + "': " + ec.message());
  return dir;
}

void note_written(const fs::path& path, const RunManifest& m) {
  std::cout << "wrote " << path.string() << " (content-hash " << hex64(m.content_hash()) << ")\n";
}

// Series handling: "key=v1,v2" -> list of (label-suffix, config).
std::vector<std::pair<std::string, ChainConfig>> expand_series(const ChainConfig& cfg,
                                                               const std::string& text) {
  if (text.empty()) return {{"", cfg}};
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("series", "expected key=v1,v2,...");
  const std::string key = normalize_key(text.substr(0, eq));
  const std::string values = text.substr(eq + 1);
  std::vector<std::pair<std::string, ChainConfig>> out;
  std::size_t start = 0;
  while (start <= values.size()) {
    const auto comma = std::min(values.find(',', start), values.size());
    std::string value = values.substr(start, comma - start);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t") + 1);
    ChainConfig variant = cfg;
    if (!apply_setting(variant, Setting{key, value, 0})) {
      throw ConfigError("series", "'" + key + "' is not a chain parameter");
    }
    validate(variant);
    out.emplace_back("_" + key + "_" + value, variant);
    start = comma + 1;
  }
  return out;
}

int cmd_simulate(const Command& cmd) {
  Resolved r = resolve(cmd);
  const std::vector<int> probes = parse_int_list("probes", r.get("probes"));
  const std::string compare_text = normalize_key(r.get("compare"));
  std::optional<Scheme> compare;
  if (compare_text != "none") {
    try {
      compare = parse_scheme(compare_text);
    } catch (const std::invalid_argument& err) {
      throw ConfigError("compare", err.what());
    }
  }
  for (int p : probes) {
    if (p < 1 || p > r.cfg.n_sites) throw ConfigError("probes", "site " + std::to_string(p) + " outside 1..n");
  }
  if (cmd.dump) {
    std::cout << dump_text(cmd, r);
    return kOk;
  }

  RunOptions options;
  options.probes = probes;
  const RunResult result = run(r.cfg, options);
  std::optional<RunResult> other;
  if (compare) {
    ChainConfig alt = r.cfg;
    alt.scheme = *compare;
    other = run(alt, options);
  }

  const fs::path dir = prepare_out(cmd);
  const RunManifest m = manifest_for(cmd, r.cfg, r);
  const Trajectory& traj = result.trajectory;

  std::vector<std::string> cols{"t"};
  for (int p : probes) cols.push_back("u_" + std::to_string(p));
  if (other) cols.push_back("deviation_" + std::string(to_string(*compare)));
  CsvTable trajectory(cols);
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    std::vector<double> row{traj.times[j]};
    double deviation = 0.0;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      row.push_back(traj.values[p][j]);
      if (other) deviation = std::max(deviation, std::abs(traj.values[p][j] - other->trajectory.values[p][j]));
    }
    if (other) row.push_back(deviation);
    trajectory.add_row(row);
  }
  trajectory.write_file((dir / "trajectory.csv").string(), m);
  note_written(dir / "trajectory.csv", m);

  CsvTable energy({"t", "E_total", "E_physical", "flux_in", "E_injected", "identity_residual"});
  for (const EnergyReport& e : result.energy) {
    energy.add_row({e.time, e.total, e.physical, e.flux_in, e.injected_cumulative, e.identity_residual});
  }
  energy.write_file((dir / "energy.csv").string(), m);
  note_written(dir / "energy.csv", m);

  if (cmd.svg) {
    std::vector<PlotSeries> series;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      series.push_back({"u_" + std::to_string(probes[p]), traj.times, traj.values[p]});
    }
    write_svg_file((dir / "trajectory.svg").string(), "probe displacement", "t", "u", series);
    PlotSeries total{"E_total", {}, {}}, physical{"E_physical", {}, {}};
    for (const EnergyReport& e : result.energy) {
      total.x.push_back(e.time);
      total.y.push_back(e.total);
      physical.x.push_back(e.time);
      physical.y.push_back(e.physical);
    }
    write_svg_file((dir / "energy.svg").string(), "energy", "t", "E", {total, physical});
  }
  std::cout << "steps " << result.summary.steps << ", E_physical(T) = "
            << format_fixed17(result.summary.energy_physical) << ", max Newton iterations "
            << result.summary.max_newton_iterations << '\n';
  return kOk;
}

int cmd_sweep(const Command& cmd) {
  Resolved r = resolve(cmd);
  const std::vector<double> amplitudes = parse_double_list("amplitudes", r.get("amplitudes"));
  const auto variants = expand_series(r.cfg, r.get("series"));
  if (cmd.dump) {
    std::cout << dump_text(cmd, r);
    return kOk;
  }
  const fs::path dir = prepare_out(cmd);
  ExperimentOptions options;
  options.workers = r.workers;
  std::vector<PlotSeries> plots;
  for (const auto& [suffix, cfg] : variants) {
    const SweepResult sweep = amplitude_sweep(cfg, amplitudes, options);
    CsvTable table({"A", "Omega", "E_physical", "E_total", "E_injected", "flag"});
    PlotSeries plot{suffix.empty() ? "E_physical" : suffix.substr(1), {}, {}};
    for (const CellRecord& c : sweep.cells) {
      table.add_row({c.amplitude, c.frequency, c.energy_physical, c.energy_total, c.energy_injected,
                     c.failed ? 1.0 : 0.0});
      plot.x.push_back(c.amplitude);
      plot.y.push_back(c.energy_physical);
      if (c.failed) std::cerr << "cell A=" << format_shortest(c.amplitude) << " failed: " << c.failure << '\n';
    }
    plots.push_back(std::move(plot));
    const RunManifest m = manifest_for(cmd, cfg, r);
    const fs::path path = dir / ("sweep" + suffix + ".csv");
    table.write_file(path.string(), m);
    note_written(path, m);
    std::cout << "  " << sweep.cells.size() << " runs in " << sweep.wall_seconds << " s\n";
  }
  if (cmd.svg) {
    write_svg_file((dir / "sweep.svg").string(), "energy in the physical chain", "A", "E_physical(T)", plots);
  }
  return kOk;
}

std::optional<double> optional_amplitude(const Resolved& r, const std::string& key) {
  const std::string v = normalize_key(r.get(key));
  if (v == "auto" || v.empty()) return std::nullopt;
  return parse_double(key, v);
}

int cmd_bifurcate(const Command& cmd) {
  Resolved r = resolve(cmd);
  const std::vector<double> frequencies = parse_double_list("frequencies", r.get("frequencies"));
  ThresholdSearch search;
  search.a_lo = optional_amplitude(r, "a-lo");
  search.a_hi = optional_amplitude(r, "a-hi");
  search.tolerance = parse_double("tol", r.get("tol"));
  search.ratio = parse_double("ratio", r.get("ratio"));
  search.baseline_fraction = parse_double("baseline-fraction", r.get("baseline-fraction"));
  if (!(search.tolerance > 0.0)) throw ConfigError("tol", "must be positive");
  if (!(search.ratio > 1.0)) throw ConfigError("ratio", "must exceed 1");
  if (!(search.baseline_fraction > 0.0 && search.baseline_fraction <= 1.0)) {
    throw ConfigError("baseline-fraction", "must lie in (0, 1]");
  }
  ExperimentOptions options;
  options.workers = r.workers;
  options.extend_near_edge = parse_bool("near-edge-extension", r.get("near-edge-extension"));
  const auto variants = expand_series(r.cfg, r.get("series"));
  if (cmd.dump) {
    std::cout << dump_text(cmd, r);
    return kOk;
  }
  const fs::path dir = prepare_out(cmd);
  std::vector<PlotSeries> plots;
  for (const auto& [suffix, cfg] : variants) {
    const BifurcationDiagram diagram = bifurcation_diagram(cfg, frequencies, search, options);
    CsvTable table({"Omega", "A_thr", "A_lo", "A_hi", "A_s_reference", "flag"});
    PlotSeries thr{suffix.empty() ? "A_thr" : suffix.substr(1), {}, {}};
    PlotSeries ref{"A_s", {}, {}};
    for (std::size_t i = 0; i < diagram.points.size(); ++i) {
      const ThresholdRecord& p = diagram.points[i];
      table.add_row({p.frequency, p.threshold, p.lo, p.hi, diagram.continuum_reference[i],
                     p.flagged ? 1.0 : 0.0});
      thr.x.push_back(p.frequency);
      thr.y.push_back(p.threshold);
      ref.x.push_back(p.frequency);
      ref.y.push_back(diagram.continuum_reference[i]);
      if (p.flagged) std::cerr << "Omega=" << format_shortest(p.frequency) << " flagged: " << p.note << '\n';
    }
    plots.push_back(std::move(thr));
    if (plots.size() == 1) plots.push_back(std::move(ref));
    const RunManifest m = manifest_for(cmd, cfg, r);
    const fs::path path = dir / ("bifurcation" + suffix + ".csv");
    table.write_file(path.string(), m);
    note_written(path, m);
    std::cout << "  " << diagram.points.size() << " frequencies in " << diagram.wall_seconds << " s\n";
  }
  if (cmd.svg) {
    write_svg_file((dir / "bifurcation.svg").string(), "supratransmission threshold", "Omega", "A", plots);
  }
  return kOk;
}

int cmd_surface(const Command& cmd) {
  Resolved r = resolve(cmd);
  const std::vector<double> frequencies = parse_double_list("frequencies", r.get("frequencies"));
  const std::vector<double> amplitudes = parse_double_list("amplitudes", r.get("amplitudes"));
  ExperimentOptions options;
  options.workers = r.workers;
  options.extend_near_edge = parse_bool("near-edge-extension", r.get("near-edge-extension"));
  if (cmd.dump) {
    std::cout << dump_text(cmd, r);
    return kOk;
  }
  const fs::path dir = prepare_out(cmd);
  const SweepResult surface = energy_surface(r.cfg, frequencies, amplitudes, options);
  CsvTable table({"Omega", "A", "E_physical", "E_total", "E_injected", "flag"});
  std::vector<PlotSeries> ridge(1, PlotSeries{"max E_physical", {}, {}});
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    double best = -1.0;
    for (std::size_t j = 0; j < amplitudes.size(); ++j) {
      const CellRecord& c = surface.cells[i * amplitudes.size() + j];
      table.add_row({c.frequency, c.amplitude, c.energy_physical, c.energy_total, c.energy_injected,
                     c.failed ? 1.0 : 0.0});
      if (std::isfinite(c.energy_physical)) best = std::max(best, c.energy_physical);
    }
    ridge[0].x.push_back(frequencies[i]);
    ridge[0].y.push_back(best);
  }
  const RunManifest m = manifest_for(cmd, r.cfg, r);
  table.write_file((dir / "surface.csv").string(), m);
  note_written(dir / "surface.csv", m);
  std::cout << "  " << surface.cells.size() << " runs in " << surface.wall_seconds << " s\n";
  if (cmd.svg) {
    write_svg_file((dir / "surface.svg").string(), "largest physical energy per frequency", "Omega",
                   "E_physical(T)", ridge);
  }
  return kOk;
}

int cmd_validate(const Command& cmd) {
  Resolved r = resolve(cmd);
  ValidationOptions options;
  options.quick = parse_bool("quick", r.get("quick"));
  options.workers = r.workers;
  if (cmd.dump) {
    std::cout << dump_text(cmd, r);
    return kOk;
  }
  const ValidationReport report = run_validation(r.cfg, options);
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.seconds << " s): " << c.detail << '\n';
  }
  const bool ok = report.all_passed();
  std::cout << (ok ? "all checks passed" : "some checks FAILED") << '\n';
  return ok ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven oscillator chains: simulation, supratransmission thresholds, diagrams"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::vector<Command> commands;
  const std::vector<std::pair<std::string, std::string>> names = {
      {"simulate", "integrate one configuration, write trajectory.csv and energy.csv"},
      {"sweep", "final energies over an amplitude grid at fixed frequency"},
      {"bifurcate", "supratransmission threshold per frequency by bisection"},
      {"surface", "final energies over a (frequency, amplitude) grid"},
      {"validate", "run the self-check battery"},
  };
  commands.reserve(names.size());
  for (const auto& [name, help] : names) {
    Command& cmd = commands.emplace_back();
    cmd.name = name;
    cmd.params = params_for(name);
    cmd.app = app.add_subcommand(name, help);
    add_common(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    for (const Command& cmd : commands) {
      if (!cmd.app->parsed()) continue;
      if (cmd.name == "simulate") return cmd_simulate(cmd);
      if (cmd.name == "sweep") return cmd_sweep(cmd);
      if (cmd.name == "bifurcate") return cmd_bifurcate(cmd);
      if (cmd.name == "surface") return cmd_surface(cmd);
      if (cmd.name == "validate") return cmd_validate(cmd);
    }
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kConfigError;
  } catch (const BlowUp& err) {
    std::cerr << "simulation blew up: " << err.what() << '\n';
    return kBlowUp;
  } catch (const StepFailure& err) {
    std::cerr << "simulation failed: " << err.what() << '\n';
    return kBlowUp;
  } catch (const std::invalid_argument& err) {
    std::cerr << "invalid input: " << err.what() << '\n';
    return kConfigError;
  } catch (const std::domain_error& err) {
    std::cerr << "invalid input: " << err.what() << '\n';
    return kConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kIoError;
  }
  return kOk;
}
