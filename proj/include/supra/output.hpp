#pragma once

// Provenance-stamped CSV and bare-bones SVG line plots.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "supra/model.hpp"

namespace supra {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct RunManifest {
  ChainConfig config;
  std::string subcommand;
  /// Subcommand parameters in a fixed order (probes, grids, search knobs...).
  std::vector<std::pair<std::string, std::string>> parameters;
  std::string tool_version{kToolVersion};
  /// Wall-clock creation time; only written when requested, so that default
  /// output stays byte-identical between runs.
  std::optional<std::string> timestamp;

  /// Canonical text of everything that determines the data rows.
  std::string canonical_inputs() const;
  /// 64-bit FNV-1a of canonical_inputs().
  std::uint64_t content_hash() const;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Current UTC time in ISO 8601.
std::string utc_timestamp();

/// Manifest as `# `-prefixed comment lines.
void write_manifest_header(std::ostream& out, const RunManifest& manifest);

/// Collects rows and writes them with the manifest header, one row per line,
/// numbers at 17 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return cells_.size(); }

  void add_row(const std::vector<double>& values);

  void write(std::ostream& out, const RunManifest& manifest) const;
  /// Throws std::runtime_error when the file cannot be written.
  void write_file(const std::string& path, const RunManifest& manifest) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> cells_;
};

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Single-panel line plot. Non-finite points break the line.
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<PlotSeries>& series);
void write_svg_file(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<PlotSeries>& series);

}  // namespace supra
