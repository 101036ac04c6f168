#include <doctest.h>

#include <sstream>

#include "ducddc/clocking.hpp"
#include "ducddc/filters.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace ducddc;

namespace {

FirSpec random_spec(testsupport::Gen& g) {
  FirSpec s;
  s.kind = FilterKind::compensation;
  for (auto& t : s.taps) t = static_cast<std::int32_t>(g.fitting(16));
  return s;
}

std::vector<std::int64_t> taps_of(const FirSpec& s) { return {s.taps.begin(), s.taps.end()}; }

// Drives a MAC from the master clock, one input per ctrl edge.
std::vector<std::int64_t> run_mac(const FirSpec& spec, MacDomain domain,
                                  const std::vector<std::int64_t>& x, std::vector<int>& spacing) {
  MacFir mac(spec, domain);
  ClockState clock;
  std::vector<std::int64_t> y;
  std::size_t next = 0;
  while (y.size() < x.size()) {
    const TickEvents ev = clock.advance();
    const bool ctrl = domain == MacDomain::clk1280k ? ev.ctrl : ev.ctrl64k;
    std::optional<QSample> in;
    if (ctrl && next < x.size()) in = QSample(x[next++], kAdcWidth);
    if (auto out = mac.step(ev, in)) {
      y.push_back(out->value());
      spacing.push_back(mac.last_ctrl_to_fd());
    }
  }
  return y;
}

}  // namespace

TEST_CASE("FirSpec validation and accumulator sizing") {
  FirSpec s;
  CHECK_NOTHROW(s.validate());
  CHECK(s.accumulator_width() == 35);
  s.taps[3] = 40000;
  CHECK_THROWS_AS(s.validate(), ContractError);
  s.taps[3] = 0;
  s.frac = 32;
  CHECK_THROWS_AS(s.validate(), ContractError);
  CHECK(filter_kind_from_string("highpass") == FilterKind::highpass);
  CHECK(std::string(to_string(FilterKind::compensation)) == "compensation");
  CHECK_THROWS_AS(filter_kind_from_string("bandstop"), ConfigError);
}

TEST_CASE("behavioral convolution matches an arbitrary-precision oracle") {
  testsupport::Gen g(31);
  for (int trial = 0; trial < 20; ++trial) {
    CAPTURE(trial);
    const FirSpec spec = random_spec(g);
    const auto x = g.samples(300, 14);
    CHECK(fir_behavioral(x, spec) == oracle::fir(x, taps_of(spec), spec.frac, 14));
  }
}

TEST_CASE("MAC equals convolution bit-exactly in both clock domains") {
  testsupport::Gen g(32);
  for (MacDomain d : {MacDomain::clk1280k, MacDomain::clk64k}) {
    const FirSpec spec = random_spec(g);
    const auto x = g.samples(d == MacDomain::clk1280k ? 1000 : 200, 14);
    std::vector<int> spacing;
    const auto y = run_mac(spec, d, x, spacing);
    CHECK(y == fir_behavioral(x, spec));
    CHECK(std::all_of(spacing.begin(), spacing.end(), [](int s) { return s == 25; }));
  }
}

TEST_CASE("MAC is linear before rescaling") {
  // frac = 0 with small inputs keeps every output exact, so superposition holds.
  testsupport::Gen g(33);
  FirSpec spec;
  spec.frac = 0;
  spec.kind = FilterKind::lowpass;
  for (auto& t : spec.taps) t = static_cast<std::int32_t>(g.int_in(-8, 8));
  std::vector<std::int64_t> a(200), b(200), ab(200);
  for (std::size_t n = 0; n < a.size(); ++n) {
    a[n] = g.int_in(-20, 20);
    b[n] = g.int_in(-20, 20);
    ab[n] = a[n] + b[n];
  }
  std::vector<int> sp;
  const auto ya = run_mac(spec, MacDomain::clk1280k, a, sp);
  const auto yb = run_mac(spec, MacDomain::clk1280k, b, sp);
  const auto yab = run_mac(spec, MacDomain::clk1280k, ab, sp);
  for (std::size_t n = 0; n < a.size(); ++n) CHECK(yab[n] == ya[n] + yb[n]);
}

TEST_CASE("MAC schedule contract") {
  MacFir mac(FirSpec{}, MacDomain::clk1280k);
  TickEvents ctrl;
  ctrl.ctrl = true;
  mac.step(ctrl, QSample(1, 14));
  CHECK(mac.busy());
  CHECK_THROWS_AS(mac.step(ctrl, QSample(1, 14)), ContractError);

  MacFir early(FirSpec{}, MacDomain::clk1280k);
  early.step(ctrl, QSample(1, 14));
  TickEvents fd;
  fd.fd = true;
  CHECK_THROWS_AS(early.step(fd), ContractError);

  MacFir off(FirSpec{}, MacDomain::clk1280k);
  CHECK_THROWS_AS(off.step(TickEvents{}, QSample(1, 14)), ContractError);
  CHECK_THROWS_AS(off.step(ctrl, QSample(1, 15)), ContractError);
}

TEST_CASE("coefficient file round trip") {
  testsupport::Gen g(34);
  for (int i = 0; i < 50; ++i) {
    FirSpec s = random_spec(g);
    s.frac = static_cast<int>(g.int_in(0, 15));
    std::stringstream io;
    write_coefficients(io, s);
    const FirSpec back = read_coefficients(io, s.kind);
    CHECK(back.taps == s.taps);
    CHECK(back.frac == s.frac);
    CHECK(back.coeff_width == s.coeff_width);
  }
}

TEST_CASE("coefficient file errors") {
  std::stringstream short_file("# width=16 frac=15\n1\n2\n");
  CHECK_THROWS_AS(read_coefficients(short_file, FilterKind::highpass), ConfigError);
  std::stringstream bad_header("width 16\n");
  CHECK_THROWS_AS(read_coefficients(bad_header, FilterKind::highpass), ConfigError);
  std::stringstream too_wide("# width=16 frac=15\n");
  for (int k = 0; k < 24; ++k) too_wide << (k == 0 ? 70000 : 0) << "\n";
  CHECK_THROWS_AS(read_coefficients(too_wide, FilterKind::highpass), ConfigError);
  CHECK_THROWS_AS(load_coefficient_file("/nonexistent/c.txt", FilterKind::highpass), ConfigError);
}
