#include "supra/output.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "supra/config_io.hpp"

namespace supra {

std::string RunManifest::canonical_inputs() const {
  std::string text = "tool-version = " + tool_version + "\n";
  text += "subcommand = " + subcommand + "\n";
  text += dump_config(config);
  text += "\n[parameters]\n";
  for (const auto& [key, value] : parameters) text += key + " = " + value + "\n";
  return text;
}

std::uint64_t RunManifest::content_hash() const { return fnv1a64(canonical_inputs()); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
    value >>= 4;
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest_header(std::ostream& out, const RunManifest& manifest) {
  out << "# supra " << manifest.tool_version << ' ' << manifest.subcommand << '\n';
  out << "# content-hash = " << hex64(manifest.content_hash()) << '\n';
  if (manifest.timestamp) out << "# created = " << *manifest.timestamp << '\n';
  std::istringstream inputs(manifest.canonical_inputs());
  std::string line;
  while (std::getline(inputs, line)) {
    if (line.empty()) continue;
    out << "# " << line << '\n';
  }
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("CsvTable: no columns");
}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size()) {
    throw std::invalid_argument("CsvTable: row has " + std::to_string(values.size()) +
                                " values, expected " + std::to_string(columns_.size()));
  }
  cells_.push_back(values);
}

void CsvTable::write(std::ostream& out, const RunManifest& manifest) const {
  write_manifest_header(out, manifest);
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& row : cells_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_fixed17(row[i]);
    out << '\n';
  }
}

void CsvTable::write_file(const std::string& path, const RunManifest& manifest) const {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(file, manifest);
  file.flush();
  if (!file) throw std::runtime_error("error writing '" + path + "'");
}

namespace {

std::string xml_escape(const std::string& text) {
  std::string out;
  for (const char ch : text) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<PlotSeries>& series) {
  constexpr double kWidth = 640, kHeight = 420;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!(x_hi >= x_lo)) x_lo = 0, x_hi = 1;
  if (!(y_hi >= y_lo)) y_lo = 0, y_hi = 1;
  if (x_hi == x_lo) x_lo -= 0.5, x_hi += 0.5;
  if (y_hi == y_lo) y_lo -= 0.5, y_hi += 0.5;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
      << xml_escape(x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kTop + ph / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x_lo + (x_hi - x_lo) * t / 4.0;
    const double yv = y_lo + (y_hi - y_lo) * t / 4.0;
    svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
        << format_shortest(std::round(xv * 1e4) / 1e4) << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
        << format_shortest(std::round(yv * 1e4) / 1e4) << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    std::string path;
    bool pen_down = false;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        pen_down = false;
        continue;
      }
      path += (pen_down ? " L" : " M") + num(px(s.x[i])) + " " + num(py(s.y[i]));
      pen_down = true;
    }
    svg << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"/>\n";
    if (!s.label.empty()) {
      const double ly = kTop + 14 + 16 * static_cast<double>(k);
      svg << "<text x=\"" << kLeft + pw - 8 << "\" y=\"" << ly << "\" text-anchor=\"end\" fill=\""
          << colour << "\">" << xml_escape(s.label) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_svg_file(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<PlotSeries>& series) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  file << render_svg(title, x_label, y_label, series);
  if (!file) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace supra
