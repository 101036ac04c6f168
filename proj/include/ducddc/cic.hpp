#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ducddc/fixedpoint.hpp"

namespace ducddc {

/// Structural parameters of a Hogenauer CIC rate changer.
struct CicSpec {
  int stages = 5;
  int rate = 20;
  int diff_delay = 1;
  int input_width = kAdcWidth;

  /// input_width + stages * ceil(log2(rate * diff_delay)); 39 for the defaults.
  int internal_width() const;
  /// (R M)^N as an exact integer.
  std::int64_t dc_gain() const;
  void validate() const;
};

/// |sin(pi f R M / f_high) / sin(pi f / f_high)|^N, with the (RM)^N limit at 0.
/// `f_high` is the integrator-side rate.
double cic_magnitude(const CicSpec& spec, double f, double f_high);

/// Coefficients of ((1 - z^-RM) / (1 - z^-1))^N, i.e. an RM-long boxcar
/// convolved with itself N times. Length N (RM - 1) + 1.
std::vector<std::int64_t> cic_impulse_response(const CicSpec& spec);

/// Decimating CIC with one register per stage.
///
/// `integrate()` runs on every high-rate tick and `comb()` on every low-rate
/// tick; each stage latches its predecessor's pre-edge register, so the
/// integrator section contributes `stages` high-rate ticks of latency and the
/// comb section `stages` low-rate ticks. All arithmetic wraps at the internal
/// width, which is exact because the output is bounded by the DC gain.
class CicDecimator {
 public:
  explicit CicDecimator(CicSpec spec = {});

  void integrate(QSample x);
  /// Latches the current last-integrator value into the comb chain and
  /// returns the last comb register.
  QSample comb();
  /// Stand-alone driver: one call per high-rate sample, every R-th call
  /// returns an output.
  std::optional<QSample> step(QSample x);

  QSample integrator_output() const { return integ_.back(); }
  QSample output() const { return combs_.back(); }
  const CicSpec& spec() const { return spec_; }
  void reset();

 private:
  CicSpec spec_;
  int width_;
  std::vector<QSample> integ_;
  std::vector<QSample> combs_;
  std::vector<std::vector<QSample>> delays_;
  int phase_ = 0;
};

/// Interpolating CIC: combs at the low rate, zero-stuffing, integrators at
/// the high rate.
///
/// `comb(x)` latches a low-rate sample through the comb chain and arms the
/// zero-stuffer; the next `integrate()` consumes it and the following R-1
/// consume zeros.
class CicInterpolator {
 public:
  explicit CicInterpolator(CicSpec spec = {});

  void comb(QSample x);
  QSample integrate();
  /// Stand-alone driver: one call per high-rate tick, `x` present on the
  /// ticks that coincide with the low rate.
  QSample step(std::optional<QSample> x);

  QSample comb_output() const { return combs_.back(); }
  QSample output() const { return integ_.back(); }
  bool pending() const { return pending_; }
  const CicSpec& spec() const { return spec_; }
  void reset();

 private:
  CicSpec spec_;
  int width_;
  std::vector<QSample> combs_;
  std::vector<std::vector<QSample>> delays_;
  std::vector<QSample> integ_;
  bool pending_ = false;
};

}  // namespace ducddc
