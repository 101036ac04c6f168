#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "ducddc/fixedpoint.hpp"

namespace ducddc {

inline constexpr int kLutSize = 256;
inline constexpr int kLutAmplitude = 127;

/// Phase step of the 8-bit accumulator; output frequency = ftw * f_ref / 256.
///
/// With f_ref = 1280 kHz one step is 5 kHz, so every carrier on the
/// 200..500 kHz grid (ftw 40..100) is hit exactly.
struct FrequencyTuningWord {
  std::uint8_t value = 0;

  double frequency(double f_ref) const { return value * f_ref / kLutSize; }
  friend constexpr bool operator==(FrequencyTuningWord, FrequencyTuningWord) = default;
};

struct FtwChoice {
  FrequencyTuningWord ftw;
  double realized_hz = 0.0;
};

/// Nearest tuning word for `f_out`. Throws ConfigError unless
/// 0 <= f_out < f_ref / 2.
FtwChoice ftw_for_frequency(double f_out, double f_ref);

/// 256-entry two's-complement sine table, round(127 sin(2 pi k / 256)).
class SineLut {
 public:
  QSample operator[](std::size_t k) const { return QSample(table_[k], kDdsWidth); }
  const std::array<std::int8_t, kLutSize>& raw() const { return table_; }

 private:
  friend SineLut build_sine_lut();
  std::array<std::int8_t, kLutSize> table_{};
};

SineLut build_sine_lut();

/// Process-wide table, built once.
const SineLut& sine_lut();

struct NcoState {
  std::uint8_t phase = 0;
  FrequencyTuningWord ftw;
};

/// Emits lut[phase], then advances the phase by ftw (mod 256).
QSample nco_step(NcoState& state, const SineLut& lut);

/// Phase accumulator plus table. A retune is registered and applied on the
/// next reference tick.
class Nco {
 public:
  explicit Nco(FrequencyTuningWord ftw, const SineLut& lut = sine_lut())
      : lut_(&lut), initial_(ftw) {
    state_.ftw = ftw;
  }

  QSample step();
  void set_ftw(FrequencyTuningWord ftw) { pending_ = ftw; }
  void reset();

  const NcoState& state() const { return state_; }

 private:
  const SineLut* lut_;
  FrequencyTuningWord initial_;
  NcoState state_;
  std::optional<FrequencyTuningWord> pending_;
};

}  // namespace ducddc
