#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ducddc/clocking.hpp"
#include "ducddc/fixedpoint.hpp"

namespace ducddc {

inline constexpr int kTaps = 24;
inline constexpr int kCoeffWidth = 16;
inline constexpr int kCoeffFrac = 15;

enum class FilterKind { highpass, lowpass, compensation };

const char* to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& name);

/// 24 fixed-point taps. A tap's real value is taps[k] / 2^frac.
struct FirSpec {
  std::array<std::int32_t, kTaps> taps{};
  int coeff_width = kCoeffWidth;
  int frac = kCoeffFrac;
  FilterKind kind = FilterKind::highpass;

  /// Throws ContractError if a tap does not fit `coeff_width` or `frac` is
  /// outside [0, coeff_width + 16).
  void validate() const;

  Eigen::VectorXd real_taps() const;

  /// Accumulator wide enough that 24 products never overflow.
  int accumulator_width(int data_width = kAdcWidth) const;
};

/// |H(f)| for taps sampled at `fs`.
template <typename Derived>
double fir_magnitude(const Eigen::MatrixBase<Derived>& taps, double f, double fs);

double fir_magnitude(const FirSpec& spec, double f, double fs);

/// y[n] = sum_k c_k x[n-k] at full precision, then rescaled by `frac` into
/// `data_width` bits. History before x[0] is zero.
std::vector<std::int64_t> fir_behavioral(std::span<const std::int64_t> x,
                                         const FirSpec& spec,
                                         int data_width = kAdcWidth,
                                         Rounding mode = Rounding::truncate);

/// Which slow clock feeds a MAC filter's shift register.
enum class MacDomain { clk1280k, clk64k };

/// Time-multiplexed 24-tap FIR: one multiplier stepped by the 64 MHz master
/// clock, framed by the ctrl/fd handshake of its domain.
///
/// On `ctrl` the newest input is shifted in, the register is snapshotted and
/// the accumulator cleared. The next 24 master cycles each accumulate one
/// product; on `fd` the rescaled accumulator moves to `y` and is returned.
class MacFir {
 public:
  MacFir(FirSpec spec, MacDomain domain, int data_width = kAdcWidth,
         Rounding mode = Rounding::truncate);

  /// Drive once per master cycle. `input` may only be supplied on the
  /// domain's ctrl edge. Throws ContractError on a ctrl that arrives before
  /// the previous fd (schedule overrun).
  std::optional<QSample> step(const TickEvents& ev,
                              std::optional<QSample> input = std::nullopt);

  void reset();

  QSample y() const { return y_; }
  bool busy() const { return armed_; }
  /// Master cycles between the last ctrl and its fd.
  int last_ctrl_to_fd() const { return last_spacing_; }
  /// Set if the last transfer to `y` saturated.
  bool last_saturated() const { return last_saturated_; }
  const FirSpec& spec() const { return spec_; }
  MacDomain domain() const { return domain_; }

 private:
  FirSpec spec_;
  MacDomain domain_;
  int data_width_;
  int acc_width_;
  Rounding mode_;
  std::array<QSample, kTaps> shift_{};
  std::array<QSample, kTaps> snapshot_{};
  QSample acc_;
  QSample y_;
  int step_index_ = 0;
  int cycles_since_ctrl_ = 0;
  int last_spacing_ = 0;
  bool armed_ = false;
  bool last_saturated_ = false;
};

/// Coefficient file: `# width=<w> frac=<f>` then exactly 24 signed integers,
/// one per line.
void write_coefficients(std::ostream& os, const FirSpec& spec);
FirSpec read_coefficients(std::istream& is, FilterKind kind);
FirSpec load_coefficient_file(const std::string& path, FilterKind kind);
void save_coefficient_file(const std::string& path, const FirSpec& spec);

template <typename Derived>
double fir_magnitude(const Eigen::MatrixBase<Derived>& taps, double f, double fs) {
  const double w = 2.0 * std::numbers::pi * f / fs;
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index k = 0; k < taps.size(); ++k) {
    re += taps(k) * std::cos(w * static_cast<double>(k));
    im -= taps(k) * std::sin(w * static_cast<double>(k));
  }
  return std::hypot(re, im);
}

}  // namespace ducddc
