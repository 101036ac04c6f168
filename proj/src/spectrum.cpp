#include "ducddc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <unsupported/Eigen/FFT>

#include "ducddc/errors.hpp"

namespace ducddc {

Window window_from_string(const std::string& name) {
  if (name == "rectangular" || name == "rect") return Window::rectangular;
  if (name == "hann") return Window::hann;
  throw ConfigError("unknown window '" + name + "' (expected rectangular or hann)");
}

Eigen::VectorXd magnitude_spectrum(std::span<const double> x, std::size_t n,
                                   Window window) {
  if (n == 0 || x.empty()) throw ConfigError("spectrum of an empty stream");
  if (n > x.size()) throw ConfigError("spectrum length exceeds stream length");

  std::vector<double> buf(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  if (window == Window::hann) {
    for (std::size_t k = 0; k < n; ++k) {
      buf[k] *= 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * k / static_cast<double>(n));
    }
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, buf);
  Eigen::VectorXd mag(static_cast<Eigen::Index>(n / 2 + 1));
  for (Eigen::Index k = 0; k < mag.size(); ++k) mag(k) = std::abs(spec[k]);
  return mag;
}

Eigen::Index peak_bin(const Eigen::VectorXd& mag, Eigen::Index skip_below) {
  Eigen::Index best = skip_below;
  for (Eigen::Index k = skip_below; k < mag.size(); ++k) {
    if (mag(k) > mag(best)) best = k;
  }
  return best;
}

Eigen::VectorXd normalized_db(const Eigen::VectorXd& mag, double floor_db) {
  const double peak = mag.maxCoeff();
  Eigen::VectorXd db(mag.size());
  for (Eigen::Index k = 0; k < mag.size(); ++k) {
    const double r = peak > 0.0 ? mag(k) / peak : 0.0;
    db(k) = r > 0.0 ? std::max(20.0 * std::log10(r), floor_db) : floor_db;
  }
  return db;
}

std::vector<Eigen::Index> dominant_bins(const Eigen::VectorXd& mag, double below_db,
                                        std::size_t max_count) {
  const Eigen::VectorXd db = normalized_db(mag);
  std::vector<Eigen::Index> peaks;
  for (Eigen::Index k = 0; k < mag.size(); ++k) {
    const bool left = k == 0 || mag(k) >= mag(k - 1);
    const bool right = k + 1 == mag.size() || mag(k) > mag(k + 1);
    if (left && right && db(k) >= -below_db) peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](Eigen::Index a, Eigen::Index b) { return mag(a) > mag(b); });
  if (peaks.size() > max_count) peaks.resize(max_count);
  return peaks;
}

std::vector<double> to_real(std::span<const std::int64_t> x) {
  return {x.begin(), x.end()};
}

}  // namespace ducddc
