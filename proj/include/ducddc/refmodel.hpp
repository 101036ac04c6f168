#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ducddc/cic.hpp"
#include "ducddc/errors.hpp"
#include "ducddc/spectrum.hpp"

namespace ducddc {

/// Real-valued sample stream at `rate` Hz.
template <typename Scalar>
struct BasicFloatStream {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector samples;
  double rate = 0.0;

  Eigen::Index size() const { return samples.size(); }
  bool finite() const { return samples.allFinite(); }
};

using FloatStream = BasicFloatStream<double>;

namespace ref {

/// Causal convolution with zero history; output has the input's length.
template <typename Derived, typename TapsDerived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> fir_filter(
    const Eigen::MatrixBase<TapsDerived>& taps, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const Eigen::Index kmax = std::min<Eigen::Index>(taps.size() - 1, n);
    Scalar acc(0);
    for (Eigen::Index k = 0; k <= kmax; ++k) acc += static_cast<Scalar>(taps(k)) * x(n - k);
    y(n) = acc;
  }
  return y;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> zero_stuff(
    const Eigen::MatrixBase<Derived>& x, int factor) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(x.size() * factor);
  for (Eigen::Index n = 0; n < x.size(); ++n) y(n * factor) = x(n);
  return y;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> downsample(
    const Eigen::MatrixBase<Derived>& x, int factor) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y(x.size() / factor);
  for (Eigen::Index n = 0; n < y.size(); ++n) y(n) = x(n * factor);
  return y;
}

/// x[n] * amplitude * sin(2 pi f n / rate).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> mix_sine(
    const Eigen::MatrixBase<Derived>& x, double f, double rate, double amplitude = 1.0) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    y(n) = x(n) * static_cast<Scalar>(amplitude * std::sin(2.0 * std::numbers::pi * f * n / rate));
  }
  return y;
}

/// Boxcar^N CIC taps normalized to unity DC gain.
Eigen::VectorXd cic_taps(int stages, int rate);

/// Compensation cum rate-by-2 filter of the golden model: 63 taps at
/// 128 kHz, passband 0..26 kHz following the inverse droop of a 5-stage x10
/// CIC, stopband 38..64 kHz. Unity DC gain.
const Eigen::VectorXd& rate2_compensator();

inline constexpr int kRefCicStages = 5;
inline constexpr int kRefCicRate = 10;

}  // namespace ref

struct RefDucStages {
  FloatStream input;
  FloatStream after_rate2;   // 128 kHz
  FloatStream after_cic;     // 1280 kHz
  FloatStream output;        // after the carrier mixer
};

struct RefDdcStages {
  FloatStream input;
  FloatStream after_cic;     // 128 kHz
  FloatStream output;        // 64 kHz
};

/// Software-model up-converter: compensation cum interpolate-by-2, x10 CIC,
/// unit-amplitude sine carrier. Throws ConfigError for carriers outside
/// 200..500 kHz or an input not at 64 kHz.
RefDucStages ref_duc_stages(const FloatStream& input, double carrier_hz);
FloatStream ref_duc(const FloatStream& input, double carrier_hz);

/// Same chain with the 20 kHz IF mixer and IF highpass in front and the
/// output highpass after the carrier mixer, for spectral comparison with the
/// fixed-point up-converter. Taps are real-valued (e.g. FirSpec::real_taps).
FloatStream ref_duc_if(const FloatStream& input, double carrier_hz,
                       const Eigen::VectorXd& if_highpass,
                       const Eigen::VectorXd& output_highpass);

/// Software-model down-converter without the mixer: x10 CIC decimation then
/// compensation cum decimate-by-2. Input at 1280 kHz.
RefDdcStages ref_ddc_stages(const FloatStream& input);
FloatStream ref_ddc(const FloatStream& input);

struct ToneDelta {
  double frequency = 0.0;
  double level_a_db = 0.0;  // amplitude, dB re 1
  double level_b_db = 0.0;
  double delta_db = 0.0;    // b - a
};

struct SpectrumComparison {
  std::vector<ToneDelta> tones;
  double max_abs_delta_db = 0.0;
  double mean_delta_db = 0.0;
};

enum class RateCheck { must_match, by_frequency };

/// Compares windowed amplitude spectra of `a` and `b` over [lo, hi] Hz.
/// Bins where `a` is more than `floor_db` below its in-band peak are
/// skipped. With RateCheck::must_match differing rates throw ContractError;
/// with by_frequency each of a's bins is matched to b's nearest bin.
SpectrumComparison compare_spectra(const FloatStream& a, const FloatStream& b, double lo,
                                   double hi, Window window = Window::hann,
                                   double floor_db = 80.0,
                                   RateCheck rates = RateCheck::must_match);

/// Integer stream viewed as real samples, divided by `gain`.
FloatStream to_float_stream(std::span<const std::int64_t> x, double rate, double gain = 1.0);

}  // namespace ducddc
