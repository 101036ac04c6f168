#include "ducddc/clocking.hpp"

#include "ducddc/errors.hpp"

namespace ducddc {

const char* to_string(ClockId id) {
  switch (id) {
    case ClockId::master: return "64MHz";
    case ClockId::clk1280k: return "1280kHz";
    case ClockId::clk64k: return "64kHz";
  }
  return "?";
}

TickEvents ClockState::advance() {
  TickEvents ev;
  if (reset_pending_) {
    *this = ClockState{};
    ev.reset = true;
    return ev;
  }

  ++master_cycle_;
  div50_phase_ = div50_phase_ + 1 == kFastDivider ? 0 : div50_phase_ + 1;
  div1000_phase_ = div1000_phase_ + 1 == kSlowDivider ? 0 : div1000_phase_ + 1;

  ev.tick1280k = div50_phase_ == 0;
  ev.tick64k = div1000_phase_ == 0;
  ev.ctrl = ev.tick1280k;
  ev.fd = div50_phase_ == kMacCycles;
  ev.ctrl64k = ev.tick64k;
  ev.fd64k = div1000_phase_ == kMacCycles;

  if (!enable_ && master_cycle_ == kEnableCycle) {
    enable_ = true;
    ev.enable_rising = true;
  }
  return ev;
}

std::uint64_t ticks_between(std::uint64_t start, std::uint64_t end,
                            ClockId which) {
  if (start > end) throw ContractError("ticks_between: start > end");
  const std::uint64_t p = period(which);
  // Edges at multiples of p inside (start, end].
  return end / p - start / p;
}

}  // namespace ducddc
