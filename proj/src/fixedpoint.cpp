#include "ducddc/fixedpoint.hpp"

#include <string>

namespace ducddc {
namespace {

void check_width(int width) {
  if (width < kMinWidth || width > kMaxWidth) {
    throw ContractError("QSample width " + std::to_string(width) +
                        " outside [2, 64]");
  }
}

void check_same_width(const QSample& a, const QSample& b, const char* op) {
  if (a.width() != b.width()) {
    throw ContractError(std::string(op) + ": width mismatch (" +
                        std::to_string(a.width()) + " vs " +
                        std::to_string(b.width()) + ")");
  }
}

// Floor division by 2^shift for shift in [0, 127).
__int128 shift_floor(__int128 v, int shift) { return v >> shift; }

__int128 shift_half_away(__int128 v, int shift) {
  if (shift == 0) return v;
  const __int128 half = static_cast<__int128>(1) << (shift - 1);
  if (v >= 0) return (v + half) >> shift;
  return -((-v + half) >> shift);
}

}  // namespace

QSample::QSample(std::int64_t value, int width) : value_(value), width_(width) {
  check_width(width);
  if (!fits(value, width)) {
    throw ContractError("value " + std::to_string(value) +
                        " does not fit in " + std::to_string(width) + " bits");
  }
}

QSample QSample::wrapped(__int128 value, int width) {
  check_width(width);
  const auto bits = static_cast<unsigned __int128>(value);
  const unsigned __int128 mask =
      (static_cast<unsigned __int128>(1) << width) - 1;
  unsigned __int128 low = bits & mask;
  __int128 signed_low = static_cast<__int128>(low);
  if (low >> (width - 1)) {
    signed_low -= static_cast<__int128>(1) << width;
  }
  return QSample(static_cast<std::int64_t>(signed_low), width);
}

std::ostream& operator<<(std::ostream& os, const QSample& q) {
  return os << q.value() << "w" << q.width();
}

QSample wrapping_add(QSample a, QSample b) {
  check_same_width(a, b, "wrapping_add");
  return QSample::wrapped(static_cast<__int128>(a.value()) + b.value(),
                          a.width());
}

QSample wrapping_sub(QSample a, QSample b) {
  check_same_width(a, b, "wrapping_sub");
  return QSample::wrapped(static_cast<__int128>(a.value()) - b.value(),
                          a.width());
}

QSample mul_full(QSample a, QSample b) {
  const int width = a.width() + b.width();
  if (width > kMaxWidth) {
    throw ContractError("mul_full: product width " + std::to_string(width) +
                        " exceeds 64");
  }
  return QSample(static_cast<std::int64_t>(static_cast<__int128>(a.value()) *
                                           b.value()),
                 width);
}

QSample sign_extend(QSample a, int width) {
  if (width < a.width()) {
    throw ContractError("sign_extend: target narrower than source");
  }
  return QSample(a.value(), width);
}

QSample rescale(QSample a, int shift, int out_width, Rounding mode,
                bool* saturated) {
  if (shift < 0) throw ContractError("rescale: negative shift");
  check_width(out_width);
  const __int128 v = a.value();
  const int s = shift > 100 ? 100 : shift;
  __int128 r = mode == Rounding::truncate ? shift_floor(v, s)
                                          : shift_half_away(v, s);
  bool clamped = false;
  if (r > QSample::max_value(out_width)) {
    r = QSample::max_value(out_width);
    clamped = true;
  } else if (r < QSample::min_value(out_width)) {
    r = QSample::min_value(out_width);
    clamped = true;
  }
  if (saturated) *saturated = clamped;
  return QSample(static_cast<std::int64_t>(r), out_width);
}

}  // namespace ducddc
