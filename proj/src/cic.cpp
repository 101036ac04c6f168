#include "ducddc/cic.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ducddc {
namespace {

int ceil_log2(std::int64_t v) {
  int bits = 0;
  while ((std::int64_t{1} << bits) < v) ++bits;
  return bits;
}

// Comb stage with differential delay M: y = u - u[-M]; the delay line holds
// the last M inputs, oldest first.
QSample comb_stage(QSample u, std::vector<QSample>& delay) {
  const QSample y = wrapping_sub(u, delay.front());
  delay.erase(delay.begin());
  delay.push_back(u);
  return y;
}

}  // namespace

int CicSpec::internal_width() const {
  return input_width + stages * ceil_log2(static_cast<std::int64_t>(rate) * diff_delay);
}

std::int64_t CicSpec::dc_gain() const {
  std::int64_t g = 1;
  for (int i = 0; i < stages; ++i) g *= static_cast<std::int64_t>(rate) * diff_delay;
  return g;
}

void CicSpec::validate() const {
  if (stages <= 0 || rate <= 0 || diff_delay <= 0) {
    throw ContractError("CicSpec: stages, rate and diff_delay must be positive");
  }
  if (input_width < kMinWidth || internal_width() > kMaxWidth) {
    throw ContractError("CicSpec: internal width " + std::to_string(internal_width()) +
                        " outside the 64-bit datapath");
  }
}

double cic_magnitude(const CicSpec& spec, double f, double f_high) {
  const double rm = static_cast<double>(spec.rate) * spec.diff_delay;
  const double x = std::numbers::pi * f / f_high;
  const double den = std::sin(x);
  if (std::abs(den) < 1e-300) return std::pow(rm, spec.stages);
  return std::pow(std::abs(std::sin(x * rm) / den), spec.stages);
}

std::vector<std::int64_t> cic_impulse_response(const CicSpec& spec) {
  const int len = spec.rate * spec.diff_delay;
  std::vector<std::int64_t> h{1};
  for (int s = 0; s < spec.stages; ++s) {
    std::vector<std::int64_t> next(h.size() + len - 1, 0);
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (int j = 0; j < len; ++j) next[i + j] += h[i];
    }
    h = std::move(next);
  }
  return h;
}

CicDecimator::CicDecimator(CicSpec spec) : spec_(spec) {
  spec_.validate();
  width_ = spec_.internal_width();
  reset();
}

void CicDecimator::reset() {
  const QSample zero(0, width_);
  integ_.assign(spec_.stages, zero);
  combs_.assign(spec_.stages, zero);
  delays_.assign(spec_.stages, std::vector<QSample>(spec_.diff_delay, zero));
  phase_ = 0;
}

void CicDecimator::integrate(QSample x) {
  // Downstream first so every stage adds its predecessor's pre-edge value.
  for (int k = spec_.stages - 1; k > 0; --k) {
    integ_[k] = wrapping_add(integ_[k], integ_[k - 1]);
  }
  integ_[0] = wrapping_add(integ_[0], sign_extend(x, width_));
}

QSample CicDecimator::comb() {
  for (int k = spec_.stages - 1; k > 0; --k) {
    combs_[k] = comb_stage(combs_[k - 1], delays_[k]);
  }
  combs_[0] = comb_stage(integ_.back(), delays_[0]);
  return combs_.back();
}

std::optional<QSample> CicDecimator::step(QSample x) {
  integrate(x);
  if (++phase_ < spec_.rate) return std::nullopt;
  phase_ = 0;
  return comb();
}

CicInterpolator::CicInterpolator(CicSpec spec) : spec_(spec) {
  spec_.validate();
  width_ = spec_.internal_width();
  reset();
}

void CicInterpolator::reset() {
  const QSample zero(0, width_);
  combs_.assign(spec_.stages, zero);
  delays_.assign(spec_.stages, std::vector<QSample>(spec_.diff_delay, zero));
  integ_.assign(spec_.stages, zero);
  pending_ = false;
}

void CicInterpolator::comb(QSample x) {
  for (int k = spec_.stages - 1; k > 0; --k) {
    combs_[k] = comb_stage(combs_[k - 1], delays_[k]);
  }
  combs_[0] = comb_stage(sign_extend(x, width_), delays_[0]);
  pending_ = true;
}

QSample CicInterpolator::integrate() {
  const QSample in = pending_ ? combs_.back() : QSample(0, width_);
  pending_ = false;
  for (int k = spec_.stages - 1; k > 0; --k) {
    integ_[k] = wrapping_add(integ_[k], integ_[k - 1]);
  }
  integ_[0] = wrapping_add(integ_[0], in);
  return integ_.back();
}

QSample CicInterpolator::step(std::optional<QSample> x) {
  const QSample out = integrate();
  if (x) comb(*x);
  return out;
}

}  // namespace ducddc
