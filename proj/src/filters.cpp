#include "ducddc/filters.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ducddc {

const char* to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::highpass: return "highpass";
    case FilterKind::lowpass: return "lowpass";
    case FilterKind::compensation: return "compensation";
  }
  return "?";
}

FilterKind filter_kind_from_string(const std::string& name) {
  if (name == "highpass") return FilterKind::highpass;
  if (name == "lowpass") return FilterKind::lowpass;
  if (name == "compensation" || name == "compensator") return FilterKind::compensation;
  throw ConfigError("unknown filter kind '" + name +
                    "' (expected highpass, lowpass or compensator)");
}

void FirSpec::validate() const {
  if (coeff_width < kMinWidth || coeff_width > 32) {
    throw ContractError("FirSpec: coefficient width must be in [2, 32]");
  }
  if (frac < 0 || frac >= coeff_width + 16) {
    throw ContractError("FirSpec: fraction position out of range");
  }
  for (int k = 0; k < kTaps; ++k) {
    if (!QSample::fits(taps[k], coeff_width)) {
      throw ContractError("FirSpec: tap " + std::to_string(k) + " = " +
                          std::to_string(taps[k]) + " does not fit " +
                          std::to_string(coeff_width) + " bits");
    }
  }
}

Eigen::VectorXd FirSpec::real_taps() const {
  Eigen::VectorXd v(kTaps);
  const double scale = std::ldexp(1.0, -frac);
  for (int k = 0; k < kTaps; ++k) v(k) = taps[k] * scale;
  return v;
}

int FirSpec::accumulator_width(int data_width) const {
  // ceil(log2 24) = 5 guard bits.
  return data_width + coeff_width + 5;
}

double fir_magnitude(const FirSpec& spec, double f, double fs) {
  return fir_magnitude(spec.real_taps(), f, fs);
}

std::vector<std::int64_t> fir_behavioral(std::span<const std::int64_t> x,
                                         const FirSpec& spec, int data_width,
                                         Rounding mode) {
  spec.validate();
  std::vector<std::int64_t> y(x.size());
  const int acc_width = spec.accumulator_width(data_width);
  for (std::size_t n = 0; n < x.size(); ++n) {
    std::int64_t acc = 0;
    for (int k = 0; k < kTaps && static_cast<std::size_t>(k) <= n; ++k) {
      if (!QSample::fits(x[n - k], data_width)) {
        throw ContractError("fir_behavioral: sample does not fit the datapath width");
      }
      acc += static_cast<std::int64_t>(spec.taps[k]) * x[n - k];
    }
    y[n] = rescale(QSample(acc, acc_width), spec.frac, data_width, mode).value();
  }
  return y;
}

MacFir::MacFir(FirSpec spec, MacDomain domain, int data_width, Rounding mode)
    : spec_(spec),
      domain_(domain),
      data_width_(data_width),
      acc_width_(spec.accumulator_width(data_width)),
      mode_(mode) {
  spec_.validate();
  reset();
}

void MacFir::reset() {
  const QSample zero(0, data_width_);
  shift_.fill(zero);
  snapshot_.fill(zero);
  acc_ = QSample(0, acc_width_);
  y_ = zero;
  step_index_ = 0;
  cycles_since_ctrl_ = 0;
  last_spacing_ = 0;
  armed_ = false;
  last_saturated_ = false;
}

std::optional<QSample> MacFir::step(const TickEvents& ev, std::optional<QSample> input) {
  const bool ctrl = domain_ == MacDomain::clk1280k ? ev.ctrl : ev.ctrl64k;
  const bool fd = domain_ == MacDomain::clk1280k ? ev.fd : ev.fd64k;

  if (ctrl) {
    if (armed_) throw ContractError("MAC schedule overrun: ctrl before fd");
    if (input) {
      if (input->width() != data_width_) {
        throw ContractError("MacFir: input width does not match the datapath");
      }
      for (int k = kTaps - 1; k > 0; --k) shift_[k] = shift_[k - 1];
      shift_[0] = *input;
    }
    snapshot_ = shift_;
    acc_ = QSample(0, acc_width_);
    step_index_ = 0;
    cycles_since_ctrl_ = 0;
    armed_ = true;
    return std::nullopt;
  }
  if (input) throw ContractError("MacFir: input supplied off the ctrl edge");
  if (!armed_) return std::nullopt;

  ++cycles_since_ctrl_;
  if (fd) {
    if (step_index_ != kTaps) {
      throw ContractError("MAC schedule overrun: fd before all products accumulated");
    }
    y_ = rescale(acc_, spec_.frac, data_width_, mode_, &last_saturated_);
    last_spacing_ = cycles_since_ctrl_;
    armed_ = false;
    return y_;
  }
  if (step_index_ < kTaps) {
    const QSample coeff(spec_.taps[step_index_], spec_.coeff_width);
    const QSample product = mul_full(snapshot_[step_index_], coeff);
    acc_ = wrapping_add(acc_, sign_extend(product, acc_width_));
    ++step_index_;
  }
  return std::nullopt;
}

void write_coefficients(std::ostream& os, const FirSpec& spec) {
  os << "# width=" << spec.coeff_width << " frac=" << spec.frac << "\n";
  for (int k = 0; k < kTaps; ++k) os << spec.taps[k] << "\n";
}

FirSpec read_coefficients(std::istream& is, FilterKind kind) {
  FirSpec spec;
  spec.kind = kind;
  std::string header;
  if (!std::getline(is, header)) throw ConfigError("coefficient file is empty");
  int width = 0;
  int frac = 0;
  if (std::sscanf(header.c_str(), "# width=%d frac=%d", &width, &frac) != 2) {
    throw ConfigError("coefficient file header must be '# width=<w> frac=<f>', got '" +
                      header + "'");
  }
  spec.coeff_width = width;
  spec.frac = frac;
  std::string line;
  int count = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (count == kTaps) throw ConfigError("coefficient file has more than 24 taps");
    std::istringstream ls(line);
    long long v = 0;
    if (!(ls >> v)) throw ConfigError("bad coefficient line '" + line + "'");
    spec.taps[count++] = static_cast<std::int32_t>(v);
    if (spec.taps[count - 1] != v) throw ConfigError("coefficient out of range: " + line);
  }
  if (count != kTaps) {
    throw ConfigError("coefficient file has " + std::to_string(count) +
                      " taps, expected 24");
  }
  try {
    spec.validate();
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

FirSpec load_coefficient_file(const std::string& path, FilterKind kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coefficient file '" + path + "'");
  return read_coefficients(in, kind);
}

void save_coefficient_file(const std::string& path, const FirSpec& spec) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write coefficient file '" + path + "'");
  write_coefficients(out, spec);
}

}  // namespace ducddc
