#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "ducddc/dds.hpp"
#include "ducddc/fixedpoint.hpp"
#include "ducddc/pipeline.hpp"

namespace ducddc::cli {

enum class ChainKind { duc, ddc };

const char* to_string(ChainKind kind);

/// key=value run description. Blank lines and '#' comments are ignored.
///
///   chain=duc|ddc            carrier_khz=200       allow_offgrid=false
///   master_cycles=<n>        coeff_hp=<file>       coeff_comp=<file>
///   coeff_if_hp=<file>       cic_shift=<bits>      mixer_shift=<bits>
///   band_select=highpass|lowpass                   rounding=truncate|half_away
///   input=<file>  out=<file>  trace=<file>
struct RunConfig {
  ChainKind chain = ChainKind::duc;
  double carrier_khz = 200.0;
  bool allow_offgrid = false;
  std::optional<std::uint64_t> master_cycles;
  std::string coeff_hp;
  std::string coeff_comp;
  std::string coeff_if_hp;
  std::optional<int> cic_shift;
  BandSelect band_select = BandSelect::highpass;
  Rounding rounding = Rounding::truncate;
  std::string input;
  std::string out;
  std::string trace;

  /// Carrier tuning word. Off-grid carriers (not a multiple of 5 kHz) are a
  /// ConfigError unless allow_offgrid, which picks the nearest word.
  FtwChoice carrier() const;

  DucConfig duc_config() const;
  DdcConfig ddc_config() const;
};

RunConfig parse_run_config(std::istream& is);
RunConfig load_run_config(const std::string& path);

}  // namespace ducddc::cli
