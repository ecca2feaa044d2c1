#include "supra/config_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace supra {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_shortest(values[i]);
  }
  return out;
}

using Applier = std::function<void(ChainConfig&, const std::string&, std::string_view)>;

const std::map<std::string, Applier>& appliers() {
  static const std::map<std::string, Applier> table = {
      {"n", [](ChainConfig& c, const std::string& k, std::string_view v) { c.n_sites = parse_int(k, v); }},
      {"n0", [](ChainConfig& c, const std::string& k, std::string_view v) { c.n_physical = parse_int(k, v); }},
      {"coupling", [](ChainConfig& c, const std::string& k, std::string_view v) { c.coupling = parse_double(k, v); }},
      {"beta", [](ChainConfig& c, const std::string& k, std::string_view v) { c.beta = parse_double(k, v); }},
      {"gamma", [](ChainConfig& c, const std::string& k, std::string_view v) { c.gamma = parse_double(k, v); }},
      {"mass-squared", [](ChainConfig& c, const std::string& k, std::string_view v) { c.mass_squared = parse_double(k, v); }},
      {"kappa", [](ChainConfig& c, const std::string& k, std::string_view v) { c.kappa = parse_double(k, v); }},
      {"sigma", [](ChainConfig& c, const std::string& k, std::string_view v) { c.sigma = parse_double(k, v); }},
      {"dt", [](ChainConfig& c, const std::string& k, std::string_view v) { c.dt = parse_double(k, v); }},
      {"t-final", [](ChainConfig& c, const std::string& k, std::string_view v) { c.t_final = parse_double(k, v); }},
      {"amplitude", [](ChainConfig& c, const std::string& k, std::string_view v) { c.drive.amplitude = parse_double(k, v); }},
      {"frequency", [](ChainConfig& c, const std::string& k, std::string_view v) { c.drive.frequency = parse_double(k, v); }},
      {"ramp-time", [](ChainConfig& c, const std::string& k, std::string_view v) { c.drive.ramp_time = parse_double(k, v); }},
      {"potential", [](ChainConfig& c, const std::string& k, std::string_view v) {
         try {
           c.potential = parse_potential(v);
         } catch (const std::invalid_argument& err) {
           throw ConfigError(k, err.what());
         }
       }},
      {"scheme", [](ChainConfig& c, const std::string& k, std::string_view v) {
         try {
           c.scheme = parse_scheme(v);
         } catch (const std::invalid_argument& err) {
           throw ConfigError(k, err.what());
         }
       }},
      {"absorber", [](ChainConfig& c, const std::string& k, std::string_view v) {
         try {
           c.absorber = parse_absorber_form(v);
         } catch (const std::invalid_argument& err) {
           throw ConfigError(k, err.what());
         }
       }},
      {"second-order-start", [](ChainConfig& c, const std::string& k, std::string_view v) { c.second_order_start = parse_bool(k, v); }},
      {"initial-displacement", [](ChainConfig& c, const std::string& k, std::string_view v) {
         c.initial_displacement = trim(v).empty() ? std::vector<double>{} : parse_double_list(k, v);
       }},
      {"initial-velocity", [](ChainConfig& c, const std::string& k, std::string_view v) {
         c.initial_velocity = trim(v).empty() ? std::vector<double>{} : parse_double_list(k, v);
       }},
  };
  return table;
}

}  // namespace

std::string normalize_key(std::string_view key) {
  std::string out(trim(key));
  for (char& ch : out) {
    if (ch == '_') ch = '-';
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

std::vector<Setting> parse_settings(std::string_view text) {
  std::vector<Setting> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no), "unterminated section header");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected `key = value`");
    }
    Setting s;
    s.key = normalize_key(line.substr(0, eq));
    s.value = std::string(trim(line.substr(eq + 1)));
    s.line = line_no;
    if (s.key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
    out.push_back(std::move(s));
    if (end == text.size()) break;
  }
  return out;
}

bool apply_setting(ChainConfig& cfg, const Setting& setting) {
  const auto& table = appliers();
  const auto it = table.find(normalize_key(setting.key));
  if (it == table.end()) return false;
  it->second(cfg, it->first, setting.value);
  return true;
}

const std::vector<std::string>& chain_keys() {
  static const std::vector<std::string> keys = {
      "n",     "n0",      "coupling",  "beta",      "gamma",     "mass-squared",
      "kappa", "sigma",   "absorber",  "potential", "amplitude", "frequency",
      "ramp-time", "dt",  "t-final",   "scheme",    "second-order-start",
      "initial-displacement", "initial-velocity"};
  return keys;
}

std::string dump_config(const ChainConfig& cfg) {
  std::ostringstream out;
  out << "[chain]\n";
  out << "n = " << cfg.n_sites << '\n';
  out << "n0 = " << cfg.n_physical << '\n';
  out << "coupling = " << format_shortest(cfg.coupling) << '\n';
  out << "beta = " << format_shortest(cfg.beta) << '\n';
  out << "gamma = " << format_shortest(cfg.gamma) << '\n';
  out << "mass-squared = " << format_shortest(cfg.mass_squared) << '\n';
  out << "kappa = " << format_shortest(cfg.kappa) << '\n';
  out << "sigma = " << format_shortest(cfg.sigma) << '\n';
  out << "absorber = " << to_string(cfg.absorber) << '\n';
  out << "potential = " << to_string(cfg.potential) << '\n';
  out << "\n[drive]\n";
  out << "amplitude = " << format_shortest(cfg.drive.amplitude) << '\n';
  out << "frequency = " << format_shortest(cfg.drive.frequency) << '\n';
  out << "ramp-time = " << format_shortest(cfg.drive.ramp_time) << '\n';
  out << "\n[numerics]\n";
  out << "dt = " << format_shortest(cfg.dt) << '\n';
  out << "t-final = " << format_shortest(cfg.t_final) << '\n';
  out << "scheme = " << to_string(cfg.scheme) << '\n';
  out << "second-order-start = " << (cfg.second_order_start ? "true" : "false") << '\n';
  out << "\n[initial]\n";
  out << "initial-displacement = " << join_doubles(cfg.initial_displacement) << '\n';
  out << "initial-velocity = " << join_doubles(cfg.initial_velocity) << '\n';
  return out.str();
}

double parse_double(std::string_view field, std::string_view text) {
  const auto s = trim(text);
  double value = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc{} || ptr != last) {
    throw ConfigError(std::string(field), "expected a number, got '" + std::string(s) + "'");
  }
  if (!std::isfinite(value)) throw ConfigError(std::string(field), "must be finite");
  return value;
}

int parse_int(std::string_view field, std::string_view text) {
  const auto s = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(std::string(field), "expected an integer, got '" + std::string(s) + "'");
  }
  return value;
}

bool parse_bool(std::string_view field, std::string_view text) {
  const std::string s = normalize_key(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(std::string(field), "expected true or false, got '" + std::string(trim(text)) + "'");
}

std::vector<double> parse_double_list(std::string_view field, std::string_view text) {
  const auto s = trim(text);
  if (s.empty()) throw ConfigError(std::string(field), "empty list");
  std::vector<double> out;
  if (s.find(':') != std::string_view::npos) {
    std::array<double, 3> parts{};
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      const auto colon = s.find(':', start);
      if ((i < 2) == (colon == std::string_view::npos)) {
        throw ConfigError(std::string(field), "range must be start:stop:step");
      }
      parts[i] = parse_double(field, s.substr(start, colon == std::string_view::npos ? s.npos : colon - start));
      start = colon + 1;
    }
    const auto [lo, hi, step] = parts;
    if (!(step > 0.0) || hi < lo) throw ConfigError(std::string(field), "range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 0.5));
    if (count > 1000000) throw ConfigError(std::string(field), "range has too many points");
    for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(parse_double(field, s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view field, std::string_view text) {
  const auto s = trim(text);
  if (s.empty()) throw ConfigError(std::string(field), "empty list");
  std::vector<int> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(parse_int(field, s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_shortest(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string format_fixed17(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

}  // namespace supra
