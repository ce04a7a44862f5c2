#pragma once

// Flat `key = value` configuration files. Unspecified keys keep the defaults of
// ScenarioConfig; unknown keys and malformed values are rejected with the key
// and line number.

#include "isstealth/errors.hpp"
#include "isstealth/scenario.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace isstealth {

/// How the downlink floor η is given: as an absolute SNR or relative to the
/// SNR without the surface, η = (P|h1|²/σ²)·10^(Δ/10).
struct SnrRequirement {
  enum class Kind { kFloorDb, kEnhancementDb };
  Kind kind = Kind::kEnhancementDb;
  double value_db = 0.0;
};

/// SNR with the surface absent, (P/σ²)|h1|².
inline double baseline_snr(const ScenarioConfig& config) {
  const double a1 = path_loss((config.pos_user - config.pos_dfbs).norm());
  return config.tx_power / config.noise_power * a1 * a1;
}

inline void apply_snr_requirement(ScenarioConfig& config, const SnrRequirement& req) {
  if (req.kind == SnrRequirement::Kind::kFloorDb)
    config.snr_floor = db_to_linear(req.value_db);
  else
    config.snr_floor = baseline_snr(config) * db_to_linear(req.value_db);
}

struct RunConfig {
  ScenarioConfig scenario;
  SnrRequirement snr;
  double grid_step_deg = 0.01;
  int trials = 100;
  std::uint64_t seed = 1;

  /// Scenario with η resolved from `snr`.
  ScenarioConfig resolved() const {
    ScenarioConfig c = scenario;
    apply_snr_requirement(c, snr);
    return c;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view text, const std::string& key, int line) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ParseError(key, line, "expected a real number, got '" + std::string(text) + "'");
  return v;
}

inline long long parse_integer(std::string_view text, const std::string& key, int line) {
  text = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(key, line, "expected an integer, got '" + std::string(text) + "'");
  return v;
}

inline Vec3 parse_triple(std::string_view text, const std::string& key, int line) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') text = text.substr(1, text.size() - 2);
  Vec3 out;
  int count = 0;
  while (true) {
    const auto comma = text.find(',');
    if (count == 3) throw ParseError(key, line, "expected exactly three comma-separated values");
    out(count++) = parse_real(text.substr(0, comma), key, line);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (count != 3) throw ParseError(key, line, "expected exactly three comma-separated values");
  return out;
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  bool have_floor = false, have_enhancement = false;

  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = detail::trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError("", line, "expected 'key = value'");
    const std::string key(detail::trim(text.substr(0, eq)));
    const std::string_view value = detail::trim(text.substr(eq + 1));
    if (key.empty()) throw ParseError("", line, "missing key");
    if (value.empty()) throw ParseError(key, line, "missing value");
    if (!seen.insert(key).second) throw ParseError(key, line, "duplicate key");

    auto real = [&] { return detail::parse_real(value, key, line); };
    auto positive = [&] {
      const double v = real();
      if (!(v > 0.0)) throw ParseError(key, line, "must be positive");
      return v;
    };
    auto integer_at_least = [&](long long lo, const char* constraint) {
      const long long v = detail::parse_integer(value, key, line);
      if (v < lo || v > 1'000'000'000) throw ParseError(key, line, std::string("out of range: ") + constraint);
      return static_cast<int>(v);
    };

    ScenarioConfig& s = cfg.scenario;
    if (key == "pos_dfbs") s.pos_dfbs = detail::parse_triple(value, key, line);
    else if (key == "pos_user") s.pos_user = detail::parse_triple(value, key, line);
    else if (key == "pos_is") s.pos_is = detail::parse_triple(value, key, line);
    else if (key == "m_antennas") s.num_ra = integer_at_least(2, "M >= 2");
    else if (key == "ny") s.ny = integer_at_least(1, "ny >= 1");
    else if (key == "nz") s.nz = integer_at_least(1, "nz >= 1");
    else if (key == "wavelength_m") s.wavelength = positive();
    else if (key == "spacing_ra_m") s.spacing_ra = positive();
    else if (key == "spacing_is_m") s.spacing_is = positive();
    else if (key == "tx_power_dbm") s.tx_power = dbm_to_watts(real());
    else if (key == "noise_power_dbm") s.noise_power = dbm_to_watts(real());
    else if (key == "snr_floor_db") {
      cfg.snr = {SnrRequirement::Kind::kFloorDb, real()};
      have_floor = true;
    } else if (key == "snr_enhancement_db") {
      cfg.snr = {SnrRequirement::Kind::kEnhancementDb, real()};
      have_enhancement = true;
    } else if (key == "block_length") s.block_length = integer_at_least(1, "L >= 1");
    else if (key == "rcs_coeff_re") s.rcs_coeff.real(real());
    else if (key == "rcs_coeff_im") s.rcs_coeff.imag(real());
    else if (key == "grid_step_deg") cfg.grid_step_deg = positive();
    else if (key == "trials") cfg.trials = integer_at_least(1, "trials >= 1");
    else if (key == "seed") {
      const long long v = detail::parse_integer(value, key, line);
      if (v < 0) throw ParseError(key, line, "out of range: seed >= 0");
      cfg.seed = static_cast<std::uint64_t>(v);
    } else {
      throw ParseError(key, line, "unknown key");
    }
    if (have_floor && have_enhancement)
      throw ParseError(key, line, "snr_floor_db and snr_enhancement_db are mutually exclusive");
  }

  try {
    cfg.scenario.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError("", 0, e.what());
  }
  return cfg;
}

inline RunConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace isstealth
