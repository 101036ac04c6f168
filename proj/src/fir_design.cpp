#include "ducddc/fir_design.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace ducddc {
namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

void check_band_edge(double cutoff, double fs) {
  if (!(fs > 0.0) || !(cutoff > 0.0) || !(cutoff < fs / 2.0)) {
    throw ConfigError("cutoff must satisfy 0 < cutoff < rate/2 (cutoff=" +
                      std::to_string(cutoff) + " Hz, rate=" + std::to_string(fs) +
                      " Hz)");
  }
}

// Worst |H| in dB over [lo, hi] on a dense grid.
double worst_db(const Eigen::VectorXd& taps, double lo, double hi, double fs) {
  double worst = 0.0;
  constexpr int kGrid = 512;
  for (int i = 0; i <= kGrid; ++i) {
    const double f = lo + (hi - lo) * i / kGrid;
    worst = std::max(worst, fir_magnitude(taps, f, fs));
  }
  return -20.0 * std::log10(std::max(worst, 1e-300));
}

}  // namespace

Eigen::VectorXd hamming(Eigen::Index n) {
  Eigen::VectorXd w(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    w(k) = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / static_cast<double>(n - 1));
  }
  return w;
}

FirSpec quantize(const Eigen::VectorXd& taps, FilterKind kind, int coeff_width) {
  FirSpec spec;
  spec.kind = kind;
  spec.coeff_width = coeff_width;
  const double peak = taps.cwiseAbs().maxCoeff();
  int frac = coeff_width - 1;
  const double limit = static_cast<double>(QSample::max_value(coeff_width));
  while (frac > 0 && std::round(peak * std::ldexp(1.0, frac)) > limit) --frac;
  spec.frac = frac;
  for (int k = 0; k < kTaps; ++k) {
    spec.taps[k] = static_cast<std::int32_t>(std::lround(taps(k) * std::ldexp(1.0, frac)));
  }
  spec.validate();
  return spec;
}

FirDesign design_highpass(double cutoff, double fs) {
  check_band_edge(cutoff, fs);
  const double fc = cutoff / fs;
  const double center = (kTaps - 1) / 2.0;
  const Eigen::VectorXd w = hamming(kTaps);
  Eigen::VectorXd h(kTaps);
  for (int n = 0; n < kTaps; ++n) {
    const double m = n - center;
    h(n) = w(n) * (sinc(m) - 2.0 * fc * sinc(2.0 * fc * m));
  }
  FirDesign d;
  d.prototype = h;
  d.spec = quantize(h, FilterKind::highpass);
  d.stopband_db = worst_db(d.spec.real_taps(), 0.0, 0.5 * cutoff, fs);
  return d;
}

FirDesign design_lowpass(double cutoff, double fs) {
  check_band_edge(cutoff, fs);
  const double fc = cutoff / fs;
  const double center = (kTaps - 1) / 2.0;
  const Eigen::VectorXd w = hamming(kTaps);
  Eigen::VectorXd h(kTaps);
  for (int n = 0; n < kTaps; ++n) {
    h(n) = w(n) * 2.0 * fc * sinc(2.0 * fc * (n - center));
  }
  h /= h.sum();
  FirDesign d;
  d.prototype = h;
  d.spec = quantize(h, FilterKind::lowpass);
  d.stopband_db = worst_db(d.spec.real_taps(), std::min(2.0 * cutoff, 0.5 * fs), 0.5 * fs, fs);
  return d;
}

double cic_normalized(const CicSpec& cic, double f, double low_rate) {
  const double high_rate = low_rate * cic.rate;
  return cic_magnitude(cic, f, high_rate) / static_cast<double>(cic.dc_gain());
}

FirDesign design_cic_compensator(const CicSpec& cic, double fs, Band band,
                                 double cic_low_rate) {
  cic.validate();
  if (!(band.lo >= 0.0) || !(band.hi > band.lo) || !(band.hi < fs / 2.0)) {
    throw ConfigError("compensator band must satisfy 0 <= lo < hi < rate/2");
  }
  constexpr int kHalf = kTaps / 2;
  constexpr int kGrid = 2000;
  constexpr double kOutOfBandWeight = 0.05;
  constexpr double kRidge = 1e-6;
  const double center = (kTaps - 1) / 2.0;
  const double f_top = 0.45 * fs;

  // Rows: grid points, then ridge rows keeping the taps small where the band
  // alone leaves the system ill-conditioned.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(kGrid + 1 + kHalf, kHalf);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(kGrid + 1 + kHalf);
  for (int i = 0; i <= kGrid; ++i) {
    const double f = f_top * i / kGrid;
    const bool in_band = f >= band.lo && f <= band.hi;
    const double weight = in_band ? 1.0 : kOutOfBandWeight;
    const double target = 1.0 / cic_normalized(cic, std::clamp(f, band.lo, band.hi), cic_low_rate);
    for (int k = 0; k < kHalf; ++k) {
      a(i, k) = weight * 2.0 * std::cos(2.0 * std::numbers::pi * f / fs * (k - center));
    }
    b(i) = weight * target;
  }
  for (int k = 0; k < kHalf; ++k) a(kGrid + 1 + k, k) = std::sqrt(kRidge);

  const Eigen::VectorXd half = a.colPivHouseholderQr().solve(b);
  Eigen::VectorXd h(kTaps);
  for (int k = 0; k < kHalf; ++k) {
    h(k) = half(k);
    h(kTaps - 1 - k) = half(k);
  }
  FirDesign d;
  d.prototype = h;
  d.spec = quantize(h, FilterKind::compensation);
  return d;
}

}  // namespace ducddc
