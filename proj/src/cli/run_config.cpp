#include "cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "ducddc/errors.hpp"
#include "ducddc/filters.hpp"

namespace ducddc::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: " + key + " expects true/false, got '" + v + "'");
}

}  // namespace

const char* to_string(ChainKind kind) { return kind == ChainKind::duc ? "duc" : "ddc"; }

FtwChoice RunConfig::carrier() const {
  const double hz = carrier_khz * 1000.0;
  const double fs = static_cast<double>(kFastHz);
  if (hz < kMinCarrierHz || hz > kMaxCarrierHz) {
    throw ConfigError("config: carrier_khz must be within 200..500 (got " +
                      std::to_string(carrier_khz) + ")");
  }
  const double step_khz = fs / kLutSize / 1000.0;
  const double words = carrier_khz / step_khz;
  if (std::abs(words - std::round(words)) > 1e-9 && !allow_offgrid) {
    throw ConfigError("config: carrier_khz must be a multiple of 5 (DDS resolution); "
                      "set allow_offgrid=true to use the nearest realizable carrier");
  }
  return ftw_for_frequency(hz, fs);
}

DucConfig RunConfig::duc_config() const {
  DucConfig cfg = DucConfig::make(carrier().ftw);
  if (!coeff_hp.empty()) cfg.output_highpass = load_coefficient_file(coeff_hp, FilterKind::highpass);
  if (!coeff_if_hp.empty())
    cfg.if_highpass = load_coefficient_file(coeff_if_hp, FilterKind::highpass);
  if (!coeff_comp.empty())
    cfg.compensator = load_coefficient_file(coeff_comp, FilterKind::compensation);
  if (cic_shift) cfg.cic_shift = *cic_shift;
  cfg.rounding = rounding;
  return cfg;
}

DdcConfig RunConfig::ddc_config() const {
  DdcConfig cfg = DdcConfig::make(carrier().ftw, band_select);
  if (!coeff_hp.empty()) {
    cfg.band_select = load_coefficient_file(
        coeff_hp, band_select == BandSelect::highpass ? FilterKind::highpass : FilterKind::lowpass);
  }
  if (!coeff_comp.empty())
    cfg.compensator = load_coefficient_file(coeff_comp, FilterKind::compensation);
  if (cic_shift) cfg.cic_shift = *cic_shift;
  cfg.rounding = rounding;
  return cfg;
}

RunConfig parse_run_config(std::istream& is) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (key == "chain") {
      if (v == "duc") cfg.chain = ChainKind::duc;
      else if (v == "ddc") cfg.chain = ChainKind::ddc;
      else throw ConfigError("config: chain must be duc or ddc, got '" + v + "'");
    } else if (key == "carrier_khz") {
      cfg.carrier_khz = parse_number<double>(key, v);
    } else if (key == "allow_offgrid") {
      cfg.allow_offgrid = parse_bool(key, v);
    } else if (key == "master_cycles") {
      cfg.master_cycles = parse_number<std::uint64_t>(key, v);
    } else if (key == "coeff_hp") {
      cfg.coeff_hp = v;
    } else if (key == "coeff_comp") {
      cfg.coeff_comp = v;
    } else if (key == "coeff_if_hp") {
      cfg.coeff_if_hp = v;
    } else if (key == "cic_shift") {
      cfg.cic_shift = parse_number<int>(key, v);
      if (*cfg.cic_shift < 0 || *cfg.cic_shift > 38) {
        throw ConfigError("config: cic_shift must be within 0..38");
      }
    } else if (key == "band_select") {
      if (v == "highpass") cfg.band_select = BandSelect::highpass;
      else if (v == "lowpass") cfg.band_select = BandSelect::lowpass;
      else throw ConfigError("config: band_select must be highpass or lowpass");
    } else if (key == "rounding") {
      if (v == "truncate") cfg.rounding = Rounding::truncate;
      else if (v == "half_away") cfg.rounding = Rounding::half_away;
      else throw ConfigError("config: rounding must be truncate or half_away");
    } else if (key == "input") {
      cfg.input = v;
    } else if (key == "out") {
      cfg.out = v;
    } else if (key == "trace") {
      cfg.trace = v;
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_run_config(in);
}

}  // namespace ducddc::cli
