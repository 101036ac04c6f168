#pragma once

#include <cstdint>

namespace ducddc {

inline constexpr std::uint64_t kMasterHz = 64'000'000;
inline constexpr std::uint64_t kSlowDivider = 1000;  // 64 kHz
inline constexpr std::uint64_t kFastDivider = 50;    // 1280 kHz
inline constexpr std::uint64_t kSlowHz = kMasterHz / kSlowDivider;
inline constexpr std::uint64_t kFastHz = kMasterHz / kFastDivider;
inline constexpr std::uint64_t kRateFactor = kSlowDivider / kFastDivider;
/// Master cycles the clock generator needs before the datapath is released.
inline constexpr std::uint64_t kEnableCycle = 500;
/// Master cycles from `ctrl` to `fd`: 24 MAC steps plus the transfer.
inline constexpr std::uint64_t kMacCycles = 25;

enum class ClockId { master, clk1280k, clk64k };

/// Master cycles per tick of `id`.
constexpr std::uint64_t period(ClockId id) {
  switch (id) {
    case ClockId::clk1280k: return kFastDivider;
    case ClockId::clk64k: return kSlowDivider;
    case ClockId::master: break;
  }
  return 1;
}

const char* to_string(ClockId id);

/// Everything that happened on one master-clock edge.
///
/// `ctrl`/`fd` frame the MAC schedule of the 1280 kHz domain; `ctrl64k`/
/// `fd64k` frame the 64 kHz domain. `fd*` always lands kMacCycles after the
/// matching `ctrl*`.
struct TickEvents {
  bool tick64k = false;
  bool tick1280k = false;
  bool ctrl = false;
  bool fd = false;
  bool ctrl64k = false;
  bool fd64k = false;
  bool enable_rising = false;
  bool reset = false;
};

/// Divider state of the clock generator.
///
/// `advance()` moves the master counter by one edge. The edge at which a
/// divider phase wraps to zero is a tick of that clock. After an advance,
/// `master_cycle()` is the edge time used for all trace timestamps.
class ClockState {
 public:
  TickEvents advance();

  /// Synchronous reset: applied by the next `advance()`, which returns the
  /// generator to its power-on state and emits no ticks.
  void request_reset() { reset_pending_ = true; }

  std::uint64_t master_cycle() const { return master_cycle_; }
  std::uint32_t div1000_phase() const { return div1000_phase_; }
  std::uint32_t div50_phase() const { return div50_phase_; }
  bool enable() const { return enable_; }
  bool reset_pending() const { return reset_pending_; }

 private:
  std::uint64_t master_cycle_ = 0;
  std::uint32_t div1000_phase_ = 0;
  std::uint32_t div50_phase_ = 0;
  bool enable_ = false;
  bool reset_pending_ = false;
};

/// Ticks of `which` fired by the advances issued from master cycles
/// start .. end-1 (equivalently, at edge times in (start, end]).
std::uint64_t ticks_between(std::uint64_t start, std::uint64_t end,
                            ClockId which);

}  // namespace ducddc
