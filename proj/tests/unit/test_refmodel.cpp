#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ducddc/filters.hpp"
#include "ducddc/refmodel.hpp"

using namespace ducddc;

namespace {

FloatStream sine(std::size_t n, double f, double fs, double amp = 1.0) {
  FloatStream s;
  s.rate = fs;
  s.samples.resize(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) s.samples(static_cast<Eigen::Index>(k)) = amp * std::sin(2.0 * std::numbers::pi * f * k / fs);
  return s;
}

double peak_hz(const FloatStream& s, std::size_t skip = 0) {
  const std::size_t n = static_cast<std::size_t>(s.size()) - skip;
  const Eigen::VectorXd mag = magnitude_spectrum(std::span<const double>(s.samples.data() + skip, n), n,
                                                 Window::hann);
  return static_cast<double>(peak_bin(mag, 1)) * s.rate / static_cast<double>(n);
}

double cic10_norm(double f) {
  const double x = std::numbers::pi * f / 1'280'000.0;
  return std::pow(std::abs(std::sin(10.0 * x) / (10.0 * std::sin(x))), 5);
}

}  // namespace

TEST_CASE("stream helpers") {
  Eigen::VectorXd x(3);
  x << 1.0, 2.0, 3.0;
  const Eigen::VectorXd z = ref::zero_stuff(x, 2);
  CHECK(z.size() == 6);
  CHECK(z(2) == 2.0);
  CHECK(z(3) == 0.0);
  CHECK(ref::downsample(z, 2) == x);

  Eigen::VectorXd taps(2);
  taps << 1.0, -1.0;
  const Eigen::VectorXd d = ref::fir_filter(taps, x);
  CHECK(d(0) == 1.0);
  CHECK(d(1) == 1.0);
  CHECK(d(2) == 1.0);

  // Single precision instantiation.
  Eigen::VectorXf xf(4);
  xf << 1.f, 0.f, 0.f, 0.f;
  const Eigen::VectorXf yf = ref::fir_filter(taps.cast<float>(), xf);
  CHECK(yf(1) == -1.f);
  BasicFloatStream<float> fs{yf, 10.0};
  CHECK(fs.finite());
}

TEST_CASE("normalized CIC taps") {
  const Eigen::VectorXd h = ref::cic_taps(5, 10);
  CHECK(h.size() == 46);
  CHECK(h.sum() == doctest::Approx(1.0));
}

TEST_CASE("rate-by-two compensator") {
  const Eigen::VectorXd& h = ref::rate2_compensator();
  REQUIRE(h.size() == 63);
  for (int k = 0; k < 63; ++k) CHECK(h(k) == doctest::Approx(h(62 - k)));
  CHECK(h.sum() == doctest::Approx(1.0));
  double lo = 1e9, hi = -1e9;
  for (double f = 300.0; f <= 24'000.0; f += 100.0) {
    const double g = 20.0 * std::log10(fir_magnitude(h, f, 128'000.0) * cic10_norm(f));
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  CHECK(hi - lo < 0.5);
  CHECK(20.0 * std::log10(fir_magnitude(h, 50'000.0, 128'000.0)) < -40.0);
}

TEST_CASE("golden up-converter") {
  const RefDucStages s = ref_duc_stages(sine(1600, 4000.0, 64'000.0), 200'000.0);
  CHECK(s.after_rate2.rate == 128'000.0);
  CHECK(s.after_rate2.size() == 3200);
  CHECK(peak_hz(s.after_rate2, 200) == doctest::Approx(4000.0).epsilon(0.01));
  CHECK(s.output.size() == 32000);
  const double f = peak_hz(s.output, 2000);
  CHECK((std::abs(f - 196'000.0) < 160.0 || std::abs(f - 204'000.0) < 160.0));
}

TEST_CASE("DC input becomes a carrier of unit gain") {
  FloatStream dc;
  dc.rate = 64'000.0;
  dc.samples = Eigen::VectorXd::Constant(200, 0.25);
  const FloatStream y = ref_duc(dc, 300'000.0);
  const double peak = y.samples.tail(2000).cwiseAbs().maxCoeff();
  // Each polyphase branch of the rate-2 filter sums to 1/2 only up to its
  // 64 kHz image rejection, so DC passes with a residual ripple.
  CHECK(std::abs(peak - 0.25) < 1e-6 * 0.25);
}

TEST_CASE("golden down-converter") {
  FloatStream x;
  x.rate = 1'280'000.0;
  x.samples.resize(20 * 1024);
  for (Eigen::Index n = 0; n < x.size(); ++n) x.samples(n) = std::cos(2.0 * std::numbers::pi * 4000.0 * n / 1'280'000.0);
  const RefDdcStages s = ref_ddc_stages(x);
  CHECK(s.after_cic.rate == 128'000.0);
  CHECK(s.output.rate == 64'000.0);
  CHECK(s.output.size() == 1024);
  CHECK(std::abs(peak_hz(s.output, 0) - 4000.0) <= 62.5);
}

TEST_CASE("golden chain input checks") {
  CHECK_THROWS_AS(ref_duc(sine(10, 1000.0, 64'000.0), 150'000.0), ConfigError);
  CHECK_THROWS_AS(ref_duc(sine(10, 1000.0, 48'000.0), 200'000.0), ConfigError);
  CHECK_THROWS_AS(ref_ddc(sine(10, 1000.0, 64'000.0)), ConfigError);
  FloatStream bad = sine(10, 1000.0, 64'000.0);
  bad.samples(3) = std::nan("");
  CHECK_THROWS_AS(ref_duc(bad, 200'000.0), ConfigError);
}

TEST_CASE("spectral comparison") {
  const FloatStream a = sine(4096, 1000.0, 64'000.0);
  FloatStream b = a;
  b.samples *= 2.0;
  const SpectrumComparison c = compare_spectra(a, b, 500.0, 1500.0);
  REQUIRE_FALSE(c.tones.empty());
  for (const auto& t : c.tones) CHECK(t.delta_db == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-9));
  CHECK(c.mean_delta_db == doctest::Approx(6.0206).epsilon(1e-4));

  FloatStream other = sine(2048, 1000.0, 32'000.0);
  CHECK_THROWS_AS(compare_spectra(a, other, 500.0, 1500.0), ContractError);
  const SpectrumComparison f =
      compare_spectra(a, other, 900.0, 1100.0, Window::hann, 20.0, RateCheck::by_frequency);
  REQUIRE_FALSE(f.tones.empty());
  CHECK(f.max_abs_delta_db < 0.5);
}

TEST_CASE("integer streams convert with a gain") {
  const std::vector<std::int64_t> q{100, -50};
  const FloatStream s = to_float_stream(q, 64'000.0, 100.0);
  CHECK(s.samples(0) == 1.0);
  CHECK(s.samples(1) == -0.5);
}
