#pragma once

#include <cstdint>
#include <ostream>

#include "ducddc/errors.hpp"

namespace ducddc {

inline constexpr int kMinWidth = 2;
inline constexpr int kMaxWidth = 64;

/// Datapath word widths used throughout the converters.
inline constexpr int kAdcWidth = 14;
inline constexpr int kDdsWidth = 8;

/// Two's-complement word: a signed value together with its bit width.
///
/// The value is always inside [-2^(w-1), 2^(w-1) - 1]. Width only changes
/// through explicit operations (`mul_full`, `rescale`, `sign_extend`).
class QSample {
 public:
  constexpr QSample() = default;

  /// Throws ContractError if `width` is outside [2, 64] or `value` does not fit.
  QSample(std::int64_t value, int width);

  /// Reduces `value` modulo 2^width and reinterprets it as two's complement.
  static QSample wrapped(__int128 value, int width);

  constexpr std::int64_t value() const { return value_; }
  constexpr int width() const { return width_; }

  static constexpr std::int64_t min_value(int width) {
    return width == 64 ? INT64_MIN : -(std::int64_t{1} << (width - 1));
  }
  static constexpr std::int64_t max_value(int width) {
    return width == 64 ? INT64_MAX : (std::int64_t{1} << (width - 1)) - 1;
  }
  static constexpr bool fits(__int128 value, int width) {
    return value >= min_value(width) && value <= max_value(width);
  }

  friend constexpr bool operator==(const QSample&, const QSample&) = default;

 private:
  std::int64_t value_ = 0;
  int width_ = kAdcWidth;
};

std::ostream& operator<<(std::ostream& os, const QSample& q);

enum class Rounding { truncate, half_away };

/// (a + b) mod 2^w. Both operands must share a width.
QSample wrapping_add(QSample a, QSample b);
/// (a - b) mod 2^w. Both operands must share a width.
QSample wrapping_sub(QSample a, QSample b);

/// Exact product at width a.width + b.width (which must not exceed 64).
QSample mul_full(QSample a, QSample b);

/// Same value at a wider word. Throws if `width` is narrower than `a`.
QSample sign_extend(QSample a, int width);

/// Arithmetic right shift by `shift` with the given rounding, then saturate
/// into `out_width`. If `saturated` is non-null it is set when clamping
/// happened.
QSample rescale(QSample a, int shift, int out_width,
                Rounding mode = Rounding::truncate, bool* saturated = nullptr);

}  // namespace ducddc
