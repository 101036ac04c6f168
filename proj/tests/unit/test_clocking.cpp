#include <doctest.h>

#include "ducddc/clocking.hpp"
#include "ducddc/errors.hpp"
#include "support/gen.hpp"

using namespace ducddc;

TEST_CASE("divider tick counts over one million master cycles") {
  ClockState c;
  std::uint64_t slow = 0, fast = 0, fast_since_slow = 0, enables = 0;
  bool ratio_ok = true;
  for (int i = 0; i < 1'000'000; ++i) {
    const TickEvents ev = c.advance();
    fast += ev.tick1280k;
    if (ev.tick1280k) ++fast_since_slow;
    if (ev.tick64k) {
      ++slow;
      ratio_ok = ratio_ok && fast_since_slow == 20;
      fast_since_slow = 0;
    }
    enables += ev.enable_rising;
  }
  CHECK(slow == 1000);
  CHECK(fast == 20000);
  CHECK(ratio_ok);
  CHECK(enables == 1);
  CHECK(c.master_cycle() == 1'000'000);
}

TEST_CASE("edge placement") {
  ClockState c;
  std::uint64_t last_ctrl = 0;
  for (int i = 0; i < 5000; ++i) {
    const TickEvents ev = c.advance();
    const std::uint64_t t = c.master_cycle();
    CHECK(ev.tick1280k == (t % 50 == 0));
    CHECK(ev.tick64k == (t % 1000 == 0));
    CHECK(ev.ctrl == ev.tick1280k);
    CHECK(ev.ctrl64k == ev.tick64k);
    if (ev.ctrl) last_ctrl = t;
    if (ev.fd) CHECK(t - last_ctrl == kMacCycles);
    if (ev.fd64k) CHECK(t % 1000 == 25);
    CHECK(ev.enable_rising == (t == kEnableCycle));
    CHECK(c.enable() == (t >= kEnableCycle));
  }
}

TEST_CASE("synchronous reset returns to power-on state") {
  ClockState c;
  for (int i = 0; i < 1234; ++i) c.advance();
  c.request_reset();
  CHECK(c.reset_pending());
  const TickEvents ev = c.advance();
  CHECK(ev.reset);
  CHECK_FALSE(ev.tick1280k);
  CHECK_FALSE(ev.tick64k);
  CHECK(c.master_cycle() == 0);
  CHECK_FALSE(c.enable());
  CHECK(c.div50_phase() == 0);

  ClockState fresh;
  for (int i = 0; i < 3000; ++i) {
    const TickEvents a = c.advance();
    const TickEvents b = fresh.advance();
    CHECK(a.tick1280k == b.tick1280k);
    CHECK(a.tick64k == b.tick64k);
    CHECK(a.fd == b.fd);
    CHECK(a.enable_rising == b.enable_rising);
  }
}

TEST_CASE("ticks_between counts edges in (start, end]") {
  CHECK(ticks_between(0, 50, ClockId::clk1280k) == 1);
  CHECK(ticks_between(0, 1000, ClockId::clk64k) == 1);
  CHECK(ticks_between(0, 5950, ClockId::clk64k) == 5);
  CHECK(ticks_between(7, 7, ClockId::master) == 0);
  CHECK_THROWS_AS(ticks_between(10, 5, ClockId::master), ContractError);

  testsupport::Gen g(21);
  for (int i = 0; i < 300; ++i) {
    const auto a = static_cast<std::uint64_t>(g.int_in(0, 5000));
    const auto b = a + static_cast<std::uint64_t>(g.int_in(0, 5000));
    for (ClockId id : {ClockId::master, ClockId::clk1280k, ClockId::clk64k}) {
      std::uint64_t brute = 0;
      for (std::uint64_t t = a + 1; t <= b; ++t) brute += t % period(id) == 0;
      CHECK(ticks_between(a, b, id) == brute);
    }
  }
}
