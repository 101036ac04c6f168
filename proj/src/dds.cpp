#include "ducddc/dds.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ducddc {

FtwChoice ftw_for_frequency(double f_out, double f_ref) {
  if (!(f_ref > 0.0)) throw ConfigError("reference frequency must be positive");
  if (!(f_out >= 0.0) || f_out >= f_ref / 2.0) {
    std::ostringstream msg;
    msg << "requested " << f_out << " Hz violates Nyquist for a " << f_ref
        << " Hz reference (need 0 <= f < " << f_ref / 2.0 << ")";
    throw ConfigError(msg.str());
  }
  const long word = std::lround(f_out * kLutSize / f_ref);
  FtwChoice choice;
  choice.ftw.value = static_cast<std::uint8_t>(word);
  choice.realized_hz = choice.ftw.frequency(f_ref);
  return choice;
}

SineLut build_sine_lut() {
  SineLut lut;
  constexpr int half = kLutSize / 2;
  for (int k = 0; k < half; ++k) {
    const double s = kLutAmplitude * std::sin(2.0 * std::numbers::pi * k / kLutSize);
    // std::lround rounds half away from zero.
    lut.table_[k] = static_cast<std::int8_t>(std::lround(s));
  }
  // Odd half-wave symmetry, exact by construction.
  for (int k = 0; k < half; ++k) {
    lut.table_[k + half] = static_cast<std::int8_t>(-lut.table_[k]);
  }
  return lut;
}

const SineLut& sine_lut() {
  static const SineLut lut = build_sine_lut();
  return lut;
}

QSample nco_step(NcoState& state, const SineLut& lut) {
  const QSample out = lut[state.phase];
  state.phase = static_cast<std::uint8_t>(state.phase + state.ftw.value);
  return out;
}

QSample Nco::step() {
  if (pending_) {
    state_.ftw = *pending_;
    pending_.reset();
  }
  return nco_step(state_, *lut_);
}

void Nco::reset() {
  state_ = NcoState{};
  state_.ftw = initial_;
  pending_.reset();
}

}  // namespace ducddc
