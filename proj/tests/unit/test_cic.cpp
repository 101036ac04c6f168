#include <doctest.h>

#include "ducddc/cic.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace ducddc;

namespace {

std::int64_t h(std::int64_t j) {
  if (j < 0 || j > 95) return 0;
  return oracle::boxcar_power(5, 20, j);
}

}  // namespace

TEST_CASE("spec arithmetic") {
  const CicSpec s;
  CHECK(s.internal_width() == 39);
  CHECK(s.dc_gain() == 3'200'000);
  CicSpec bad;
  bad.stages = 0;
  CHECK_THROWS_AS(bad.validate(), ContractError);
  CHECK(cic_magnitude(s, 0.0, 1'280'000.0) == doctest::Approx(3'200'000.0));
  CHECK(cic_magnitude(s, 64'000.0, 1'280'000.0) < 1e-6);
}

TEST_CASE("impulse response equals the binomial boxcar oracle") {
  const auto lib = cic_impulse_response(CicSpec{});
  REQUIRE(lib.size() == 96);
  std::int64_t sum = 0;
  for (std::size_t j = 0; j < lib.size(); ++j) {
    CHECK(lib[j] == h(static_cast<std::int64_t>(j)));
    sum += lib[j];
  }
  CHECK(sum == 3'200'000);
}

TEST_CASE("decimator output is the decimated boxcar convolution") {
  testsupport::Gen g(41);
  const auto x = g.samples(2000, 14);
  CicDecimator cic;
  std::vector<std::int64_t> y;
  for (auto v : x) {
    if (auto out = cic.step(QSample(v, 14))) y.push_back(out->value());
  }
  REQUIRE(y.size() == 100);
  for (std::size_t m = 0; m < y.size(); ++m) {
    CAPTURE(m);
    std::int64_t want = 0;
    for (std::size_t p = 0; p < x.size(); ++p) {
      want += x[p] * h(20 * (static_cast<std::int64_t>(m) - 4) + 15 - static_cast<std::int64_t>(p));
    }
    CHECK(y[m] == want);
  }
}

TEST_CASE("interpolator output is the zero-stuffed boxcar convolution") {
  testsupport::Gen g(42);
  const auto x = g.samples(60, 14);
  CicInterpolator cic;
  std::vector<std::int64_t> y;
  for (std::size_t n = 0; n < 20 * x.size(); ++n) {
    std::optional<QSample> in;
    if (n % 20 == 0) in = QSample(x[n / 20], 14);
    y.push_back(cic.step(in).value());
  }
  for (std::size_t n = 0; n < y.size(); ++n) {
    CAPTURE(n);
    std::int64_t want = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      want += x[k] * h(static_cast<std::int64_t>(n) - 85 - 20 * static_cast<std::int64_t>(k));
    }
    CHECK(y[n] == want);
  }
}

TEST_CASE("DC gains on full-scale steps") {
  for (std::int64_t a : {1, 8191, -8192}) {
    CicDecimator dec;
    std::int64_t last = 0;
    for (int n = 0; n < 400; ++n) {
      if (auto out = dec.step(QSample(a, 14))) last = out->value();
    }
    CHECK(last == a * 3'200'000);

    CicInterpolator interp;
    for (int n = 0; n < 400; ++n) {
      last = interp.step(n % 20 == 0 ? std::optional<QSample>(QSample(a, 14)) : std::nullopt).value();
    }
    CHECK(last == a * 160'000);
  }
}

TEST_CASE("reset clears all state") {
  testsupport::Gen g(43);
  CicDecimator dec;
  for (int n = 0; n < 137; ++n) dec.step(QSample(g.fitting(14), 14));
  dec.reset();
  CicDecimator fresh;
  for (int n = 0; n < 400; ++n) {
    const QSample x(g.fitting(14), 14);
    CHECK(dec.step(x) == fresh.step(x));
  }
}
