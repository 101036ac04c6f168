#include "ducddc/refmodel.hpp"

#include <Eigen/QR>
#include <algorithm>

#include "ducddc/fir_design.hpp"

namespace ducddc {
namespace ref {

Eigen::VectorXd cic_taps(int stages, int rate) {
  CicSpec spec;
  spec.stages = stages;
  spec.rate = rate;
  const auto h = cic_impulse_response(spec);
  Eigen::VectorXd taps(static_cast<Eigen::Index>(h.size()));
  for (std::size_t k = 0; k < h.size(); ++k) taps(static_cast<Eigen::Index>(k)) = static_cast<double>(h[k]);
  return taps / static_cast<double>(spec.dc_gain());
}

const Eigen::VectorXd& rate2_compensator() {
  static const Eigen::VectorXd taps = [] {
    constexpr int kLen = 63;
    constexpr int kCenter = kLen / 2;
    constexpr double fs = 128'000.0;
    constexpr double pass = 26'000.0;
    constexpr double stop = 38'000.0;
    constexpr int kGrid = 1600;
    CicSpec cic;
    cic.stages = kRefCicStages;
    cic.rate = kRefCicRate;

    Eigen::MatrixXd a(kGrid + 1, kCenter + 1);
    Eigen::VectorXd b(kGrid + 1);
    int row = 0;
    for (int i = 0; i <= kGrid; ++i) {
      const double f = 0.5 * fs * i / kGrid;
      double weight = 0.0;
      double target = 0.0;
      if (f <= pass) {
        weight = 1.0;
        target = 1.0 / cic_normalized(cic, f, fs);
      } else if (f >= stop) {
        weight = 10.0;
      } else {
        continue;
      }
      const double w = 2.0 * std::numbers::pi * f / fs;
      a(row, 0) = weight;
      for (int k = 1; k <= kCenter; ++k) a(row, k) = weight * 2.0 * std::cos(w * k);
      b(row) = weight * target;
      ++row;
    }
    const Eigen::VectorXd half =
        a.topRows(row).colPivHouseholderQr().solve(b.head(row));
    Eigen::VectorXd h(kLen);
    h(kCenter) = half(0);
    for (int k = 1; k <= kCenter; ++k) {
      h(kCenter - k) = half(k);
      h(kCenter + k) = half(k);
    }
    return Eigen::VectorXd(h / h.sum());
  }();
  return taps;
}

}  // namespace ref

namespace {

void check_carrier(double carrier_hz) {
  if (carrier_hz < 200'000.0 || carrier_hz > 500'000.0) {
    throw ConfigError("carrier must be within 200..500 kHz");
  }
}

void check_rate(const FloatStream& s, double rate, const char* what) {
  if (std::abs(s.rate - rate) > 1e-6) {
    throw ConfigError(std::string(what) + " expects a " + std::to_string(rate) + " Hz stream");
  }
  if (!s.finite()) throw ConfigError(std::string(what) + ": non-finite samples");
}

constexpr double kSlow = 64'000.0;
constexpr double kMid = 128'000.0;
constexpr double kFast = 1'280'000.0;

FloatStream interpolate_to_fast(const Eigen::VectorXd& x64) {
  const Eigen::VectorXd mid = 2.0 * ref::fir_filter(ref::rate2_compensator(), ref::zero_stuff(x64, 2));
  const Eigen::VectorXd fast =
      static_cast<double>(ref::kRefCicRate) *
      ref::fir_filter(ref::cic_taps(ref::kRefCicStages, ref::kRefCicRate),
                      ref::zero_stuff(mid, ref::kRefCicRate));
  return {fast, kFast};
}

}  // namespace

RefDucStages ref_duc_stages(const FloatStream& input, double carrier_hz) {
  check_carrier(carrier_hz);
  check_rate(input, kSlow, "ref_duc");
  RefDucStages s;
  s.input = input;
  s.after_rate2 = {2.0 * ref::fir_filter(ref::rate2_compensator(), ref::zero_stuff(input.samples, 2)),
                   kMid};
  s.after_cic = {static_cast<double>(ref::kRefCicRate) *
                     ref::fir_filter(ref::cic_taps(ref::kRefCicStages, ref::kRefCicRate),
                                     ref::zero_stuff(s.after_rate2.samples, ref::kRefCicRate)),
                 kFast};
  s.output = {ref::mix_sine(s.after_cic.samples, carrier_hz, kFast), kFast};
  return s;
}

FloatStream ref_duc(const FloatStream& input, double carrier_hz) {
  return ref_duc_stages(input, carrier_hz).output;
}

FloatStream ref_duc_if(const FloatStream& input, double carrier_hz,
                       const Eigen::VectorXd& if_highpass,
                       const Eigen::VectorXd& output_highpass) {
  check_carrier(carrier_hz);
  check_rate(input, kSlow, "ref_duc_if");
  const Eigen::VectorXd if_band =
      ref::fir_filter(if_highpass, ref::mix_sine(input.samples, 20'000.0, kSlow));
  FloatStream fast = interpolate_to_fast(if_band);
  fast.samples = ref::fir_filter(output_highpass, ref::mix_sine(fast.samples, carrier_hz, kFast));
  return fast;
}

RefDdcStages ref_ddc_stages(const FloatStream& input) {
  check_rate(input, kFast, "ref_ddc");
  RefDdcStages s;
  s.input = input;
  s.after_cic = {ref::downsample(ref::fir_filter(ref::cic_taps(ref::kRefCicStages, ref::kRefCicRate),
                                                 input.samples),
                                 ref::kRefCicRate),
                 kMid};
  s.output = {ref::downsample(ref::fir_filter(ref::rate2_compensator(), s.after_cic.samples), 2),
              kSlow};
  return s;
}

FloatStream ref_ddc(const FloatStream& input) { return ref_ddc_stages(input).output; }

SpectrumComparison compare_spectra(const FloatStream& a, const FloatStream& b, double lo,
                                   double hi, Window window, double floor_db, RateCheck rates) {
  if (rates == RateCheck::must_match && std::abs(a.rate - b.rate) > 1e-9 * a.rate) {
    throw ContractError("compare_spectra: rate mismatch (" + std::to_string(a.rate) + " vs " +
                        std::to_string(b.rate) + " Hz) without a resampling declaration");
  }
  if (a.size() == 0 || b.size() == 0) throw ConfigError("compare_spectra: empty stream");

  const auto amplitude = [window](const FloatStream& s) {
    const std::size_t n = static_cast<std::size_t>(s.size());
    const std::span<const double> view(s.samples.data(), n);
    Eigen::VectorXd mag = magnitude_spectrum(view, n, window);
    const double coherent = window == Window::hann ? 0.5 * n : static_cast<double>(n);
    return Eigen::VectorXd(2.0 * mag / coherent);
  };
  const Eigen::VectorXd amp_a = amplitude(a);
  const Eigen::VectorXd amp_b = amplitude(b);
  const double bin_a = a.rate / static_cast<double>(a.size());
  const double bin_b = b.rate / static_cast<double>(b.size());

  Eigen::Index k_lo = static_cast<Eigen::Index>(std::ceil(lo / bin_a));
  Eigen::Index k_hi = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(hi / bin_a)),
                                             amp_a.size() - 1);
  double peak = 0.0;
  for (Eigen::Index k = k_lo; k <= k_hi; ++k) peak = std::max(peak, amp_a(k));

  SpectrumComparison cmp;
  double sum = 0.0;
  for (Eigen::Index k = k_lo; k <= k_hi; ++k) {
    if (peak <= 0.0 || amp_a(k) < peak * std::pow(10.0, -floor_db / 20.0)) continue;
    const double f = k * bin_a;
    const Eigen::Index kb = std::clamp<Eigen::Index>(std::lround(f / bin_b), 0, amp_b.size() - 1);
    ToneDelta t;
    t.frequency = f;
    t.level_a_db = 20.0 * std::log10(amp_a(k));
    t.level_b_db = amp_b(kb) > 0.0 ? 20.0 * std::log10(amp_b(kb)) : -400.0;
    t.delta_db = t.level_b_db - t.level_a_db;
    cmp.max_abs_delta_db = std::max(cmp.max_abs_delta_db, std::abs(t.delta_db));
    sum += t.delta_db;
    cmp.tones.push_back(t);
  }
  if (!cmp.tones.empty()) cmp.mean_delta_db = sum / static_cast<double>(cmp.tones.size());
  return cmp;
}

FloatStream to_float_stream(std::span<const std::int64_t> x, double rate, double gain) {
  FloatStream s;
  s.rate = rate;
  s.samples.resize(static_cast<Eigen::Index>(x.size()));
  for (std::size_t n = 0; n < x.size(); ++n) s.samples(static_cast<Eigen::Index>(n)) = x[n] / gain;
  return s;
}

}  // namespace ducddc
