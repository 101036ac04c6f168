#include "ducddc/pipeline.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "ducddc/fir_design.hpp"

namespace ducddc {
namespace {

enum DucStage { kDucInput, kDucIfMixer, kDucIfHighpass, kDucComp, kDucCombs, kDucIntegrators,
                kDucCarrierMixer, kDucOutputHighpass };
enum DdcStage { kDdcInput, kDdcMixer, kDdcBandSelect, kDdcComp, kDdcIntegrators, kDdcCombs };

StageTrace make_stage(std::string name, ClockId clock, int stride = 1, int repeat = 1) {
  StageTrace s;
  s.name = std::move(name);
  s.clock = clock;
  s.seq_stride = stride;
  s.seq_repeat = repeat;
  return s;
}

// Mixer: full 22-bit product, back to the 14-bit datapath.
QSample mix(QSample data, QSample lo, Rounding mode, std::uint64_t& saturations) {
  bool sat = false;
  const QSample y = rescale(mul_full(data, lo), kMixerShift, kAdcWidth, mode, &sat);
  if (sat) ++saturations;
  return y;
}

template <typename Stages>
void shift_tags(Stages& tags, const Tagged& in) {
  for (std::size_t k = tags.size() - 1; k > 0; --k) tags[k] = tags[k - 1];
  tags[0] = in;
}

constexpr double kMixerGain = static_cast<double>(kLutAmplitude) / (1 << kMixerShift);

}  // namespace

void validate_carrier(FrequencyTuningWord ftw) {
  const double hz = ftw.frequency(static_cast<double>(kFastHz));
  if (hz < kMinCarrierHz || hz > kMaxCarrierHz) {
    throw ConfigError("carrier tuning word " + std::to_string(ftw.value) + " gives " +
                      std::to_string(hz) + " Hz, outside 200000..500000 Hz (ftw 40..100)");
  }
}

DucConfig DucConfig::make(FrequencyTuningWord carrier) {
  validate_carrier(carrier);
  DucConfig cfg;
  cfg.carrier_ftw = carrier;
  cfg.if_ftw = ftw_for_frequency(kIfHz, static_cast<double>(kSlowHz)).ftw;
  cfg.if_highpass = design_highpass(kIfHighpassCutoff, static_cast<double>(kSlowHz)).spec;
  cfg.compensator = design_cic_compensator(cfg.cic, static_cast<double>(kSlowHz),
                                           Band{kIfHz + 300.0, kIfHz + 4000.0})
                        .spec;
  cfg.output_highpass =
      design_highpass(carrier.frequency(static_cast<double>(kFastHz)), static_cast<double>(kFastHz))
          .spec;
  return cfg;
}

DdcConfig DdcConfig::make(FrequencyTuningWord carrier, BandSelect band) {
  validate_carrier(carrier);
  DdcConfig cfg;
  cfg.carrier_ftw = carrier;
  const double fs = static_cast<double>(kFastHz);
  cfg.band_select = band == BandSelect::highpass
                        ? design_highpass(carrier.frequency(fs), fs).spec
                        : design_lowpass(kDdcLowpassCutoff, fs).spec;
  cfg.compensator = design_cic_compensator(cfg.cic, fs, Band{300.0, 4000.0}).spec;
  return cfg;
}

void StageTrace::record(std::uint64_t cycle, std::int64_t seq, std::int64_t value, bool keep) {
  if (!first_valid) first_valid = cycle;
  ++valid_count;
  if (keep) samples.push_back({cycle, seq, value});
  if (seq == run_seq_) {
    if (++run_len_ > seq_repeat) ++seq_errors;
    return;
  }
  if (run_seq_ >= 0) {
    if (run_len_ != seq_repeat) ++seq_errors;
    if (seq != run_seq_ + seq_stride) ++seq_errors;
  }
  run_seq_ = seq;
  run_len_ = 1;
}

const StageTrace& PipelineTrace::stage(std::string_view name) const {
  for (const auto& s : stages) {
    if (s.name == name) return s;
  }
  throw ContractError("no pipeline stage named '" + std::string(name) + "'");
}

InputFeed::InputFeed(std::span<const std::int64_t> samples, int width)
    : samples_(samples), width_(width) {
  for (std::int64_t v : samples_) {
    if (!QSample::fits(v, width_)) {
      throw ConfigError("input sample " + std::to_string(v) + " does not fit " +
                        std::to_string(width_) + " bits");
    }
  }
}

std::optional<QSample> InputFeed::next() {
  if (pos_ >= samples_.size()) return std::nullopt;
  return QSample(samples_[pos_++], width_);
}

// ---------------------------------------------------------------------------
// DUC

DucChain::DucChain(DucConfig cfg, bool record_samples)
    : cfg_(std::move(cfg)),
      record_(record_samples),
      if_nco_(cfg_.if_ftw),
      carrier_nco_(cfg_.carrier_ftw),
      if_hp_(cfg_.if_highpass, MacDomain::clk64k, kAdcWidth, cfg_.rounding),
      comp_(cfg_.compensator, MacDomain::clk64k, kAdcWidth, cfg_.rounding),
      out_hp_(cfg_.output_highpass, MacDomain::clk1280k, kAdcWidth, cfg_.rounding),
      cic_(cfg_.cic) {
  validate_carrier(cfg_.carrier_ftw);
  if (cfg_.cic.input_width != kAdcWidth) {
    throw ConfigError("CIC input width must match the 14-bit datapath");
  }
  reset_state();
}

void DucChain::reset_state() {
  if_nco_.reset();
  carrier_nco_.reset();
  if_hp_.reset();
  comp_.reset();
  out_hp_.reset();
  cic_.reset();
  input_reg_ = if_mixer_ = if_hp_in_ = if_hp_out_ = comp_in_ = comp_out_ = Tagged{};
  comb_tags_.assign(cfg_.cic.stages, Tagged{});
  int_tags_.assign(cfg_.cic.stages, Tagged{});
  stuff_tag_ = Tagged{};
  stuff_left_ = 0;
  carrier_mixer_ = out_hp_in_ = Tagged{};

  const int r = cfg_.cic.rate;
  trace_ = PipelineTrace{};
  trace_.stages = {
      make_stage("input_register", ClockId::clk64k),
      make_stage("if_mixer", ClockId::clk64k),
      make_stage("if_highpass", ClockId::clk64k),
      make_stage("compensator", ClockId::clk64k),
      make_stage("cic_combs", ClockId::clk64k),
      make_stage("cic_integrators", ClockId::clk1280k, 1, r),
      make_stage("carrier_mixer", ClockId::clk1280k, 1, r),
      make_stage("output_highpass", ClockId::clk1280k, 1, r),
  };
  trace_.cic_gain = static_cast<double>(cfg_.cic.dc_gain() / cfg_.cic.rate) /
                    std::ldexp(1.0, cfg_.cic_shift);
  trace_.nominal_gain = kMixerGain * kMixerGain * trace_.cic_gain;
}

std::optional<QSample> DucChain::advance(InputFeed& feed) {
  const bool enabled = clock_.enable();
  const TickEvents ev = clock_.advance();
  if (ev.reset) {
    reset_state();
    return std::nullopt;
  }
  if (!enabled) return std::nullopt;

  const std::uint64_t t = clock_.master_cycle();
  auto& st = trace_.stages;
  std::optional<QSample> out;

  // Stages are visited downstream first so each reads its predecessor's
  // pre-edge register.

  // Output highpass (1280 kHz MAC).
  {
    std::optional<QSample> in;
    if (ev.ctrl) {
      in = carrier_mixer_.value;
      out_hp_in_ = carrier_mixer_;
    }
    if (auto y = out_hp_.step(ev, in)) {
      if (out_hp_.last_saturated()) ++trace_.saturations;
      if (out_hp_in_.valid) {
        st[kDucOutputHighpass].record(t, out_hp_in_.seq, y->value(), record_);
        if (!trace_.first_output_cycle) trace_.first_output_cycle = t;
        ++trace_.produced;
        out = *y;
      }
    }
  }

  if (ev.tick1280k) {
    // Carrier mixer reads the rescaled last integrator.
    bool sat = false;
    const QSample cic_out =
        rescale(cic_.output(), cfg_.cic_shift, kAdcWidth, cfg_.rounding, &sat);
    if (sat) ++trace_.saturations;
    carrier_mixer_.value = mix(cic_out, carrier_nco_.step(), cfg_.rounding, trace_.saturations);
    carrier_mixer_.valid = int_tags_.back().valid;
    carrier_mixer_.seq = int_tags_.back().seq;
    if (carrier_mixer_.valid) {
      st[kDucCarrierMixer].record(t, carrier_mixer_.seq, carrier_mixer_.value.value(), record_);
    }

    // Integrators: consume a freshly combed sample, else a stuffed zero.
    Tagged in;
    if (cic_.pending()) {
      in = comb_tags_.back();
      stuff_tag_ = in;
      stuff_left_ = cfg_.cic.rate - 1;
    } else if (stuff_left_ > 0) {
      in = stuff_tag_;
      --stuff_left_;
    }
    cic_.integrate();
    shift_tags(int_tags_, in);
    if (int_tags_.back().valid) {
      st[kDucIntegrators].record(t, int_tags_.back().seq, cic_.output().value(), record_);
    }
  }

  if (ev.tick64k) {
    cic_.comb(comp_out_.value);
    shift_tags(comb_tags_, comp_out_);
    if (comb_tags_.back().valid) {
      st[kDucCombs].record(t, comb_tags_.back().seq, cic_.comb_output().value(), record_);
    }
  }

  // Compensator (64 kHz MAC).
  {
    std::optional<QSample> in;
    if (ev.ctrl64k) {
      in = if_hp_out_.value;
      comp_in_ = if_hp_out_;
    }
    if (auto y = comp_.step(ev, in)) {
      if (comp_.last_saturated()) ++trace_.saturations;
      comp_out_ = {*y, comp_in_.valid, comp_in_.seq};
      if (comp_out_.valid) st[kDucComp].record(t, comp_out_.seq, y->value(), record_);
    }
  }

  // IF highpass (64 kHz MAC).
  {
    std::optional<QSample> in;
    if (ev.ctrl64k) {
      in = if_mixer_.value;
      if_hp_in_ = if_mixer_;
    }
    if (auto y = if_hp_.step(ev, in)) {
      if (if_hp_.last_saturated()) ++trace_.saturations;
      if_hp_out_ = {*y, if_hp_in_.valid, if_hp_in_.seq};
      if (if_hp_out_.valid) st[kDucIfHighpass].record(t, if_hp_out_.seq, y->value(), record_);
    }
  }

  if (ev.tick64k) {
    if_mixer_ = {mix(input_reg_.value, if_nco_.step(), cfg_.rounding, trace_.saturations),
                 input_reg_.valid, input_reg_.seq};
    if (if_mixer_.valid) {
      st[kDucIfMixer].record(t, if_mixer_.seq, if_mixer_.value.value(), record_);
    }

    const std::size_t seq = feed.position();
    if (auto x = feed.next()) {
      input_reg_ = {*x, true, static_cast<std::int64_t>(seq)};
      ++trace_.consumed;
      st[kDucInput].record(t, input_reg_.seq, x->value(), record_);
    } else {
      input_reg_ = Tagged{};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DDC

DdcChain::DdcChain(DdcConfig cfg, bool record_samples)
    : cfg_(std::move(cfg)),
      record_(record_samples),
      carrier_nco_(cfg_.carrier_ftw),
      band_(cfg_.band_select, MacDomain::clk1280k, kAdcWidth, cfg_.rounding),
      comp_(cfg_.compensator, MacDomain::clk1280k, kAdcWidth, cfg_.rounding),
      cic_(cfg_.cic) {
  validate_carrier(cfg_.carrier_ftw);
  if (cfg_.cic.input_width != kAdcWidth) {
    throw ConfigError("CIC input width must match the 14-bit datapath");
  }
  reset_state();
}

void DdcChain::reset_state() {
  carrier_nco_.reset();
  band_.reset();
  comp_.reset();
  cic_.reset();
  input_reg_ = mixer_ = band_in_ = band_out_ = comp_in_ = comp_out_ = Tagged{};
  int_tags_.assign(cfg_.cic.stages, Tagged{});
  comb_tags_.assign(cfg_.cic.stages, Tagged{});

  trace_ = PipelineTrace{};
  trace_.stages = {
      make_stage("input_register", ClockId::clk1280k),
      make_stage("mixer", ClockId::clk1280k),
      make_stage("band_select", ClockId::clk1280k),
      make_stage("compensator", ClockId::clk1280k),
      make_stage("cic_integrators", ClockId::clk1280k),
      make_stage("cic_combs", ClockId::clk64k, cfg_.cic.rate),
  };
  trace_.cic_gain =
      static_cast<double>(cfg_.cic.dc_gain()) / std::ldexp(1.0, cfg_.cic_shift);
  trace_.nominal_gain = kMixerGain * trace_.cic_gain;
}

std::optional<QSample> DdcChain::advance(InputFeed& feed) {
  const bool enabled = clock_.enable();
  const TickEvents ev = clock_.advance();
  if (ev.reset) {
    reset_state();
    return std::nullopt;
  }
  if (!enabled) return std::nullopt;

  const std::uint64_t t = clock_.master_cycle();
  auto& st = trace_.stages;
  std::optional<QSample> out;

  if (ev.tick64k) {
    cic_.comb();
    shift_tags(comb_tags_, int_tags_.back());
    if (comb_tags_.back().valid) {
      bool sat = false;
      const QSample y = rescale(cic_.output(), cfg_.cic_shift, kAdcWidth, cfg_.rounding, &sat);
      if (sat) ++trace_.saturations;
      st[kDdcCombs].record(t, comb_tags_.back().seq, y.value(), record_);
      if (!trace_.first_output_cycle) trace_.first_output_cycle = t;
      ++trace_.produced;
      out = y;
    }
  }

  if (ev.tick1280k) {
    cic_.integrate(comp_out_.value);
    shift_tags(int_tags_, comp_out_);
    if (int_tags_.back().valid) {
      st[kDdcIntegrators].record(t, int_tags_.back().seq, cic_.integrator_output().value(),
                                 record_);
    }
  }

  {
    std::optional<QSample> in;
    if (ev.ctrl) {
      in = band_out_.value;
      comp_in_ = band_out_;
    }
    if (auto y = comp_.step(ev, in)) {
      if (comp_.last_saturated()) ++trace_.saturations;
      comp_out_ = {*y, comp_in_.valid, comp_in_.seq};
      if (comp_out_.valid) st[kDdcComp].record(t, comp_out_.seq, y->value(), record_);
    }
  }

  {
    std::optional<QSample> in;
    if (ev.ctrl) {
      in = mixer_.value;
      band_in_ = mixer_;
    }
    if (auto y = band_.step(ev, in)) {
      if (band_.last_saturated()) ++trace_.saturations;
      band_out_ = {*y, band_in_.valid, band_in_.seq};
      if (band_out_.valid) st[kDdcBandSelect].record(t, band_out_.seq, y->value(), record_);
    }
  }

  if (ev.tick1280k) {
    mixer_ = {mix(input_reg_.value, carrier_nco_.step(), cfg_.rounding, trace_.saturations),
              input_reg_.valid, input_reg_.seq};
    if (mixer_.valid) st[kDdcMixer].record(t, mixer_.seq, mixer_.value.value(), record_);

    const std::size_t seq = feed.position();
    if (auto x = feed.next()) {
      input_reg_ = {*x, true, static_cast<std::int64_t>(seq)};
      ++trace_.consumed;
      st[kDdcInput].record(t, input_reg_.seq, x->value(), record_);
    } else {
      input_reg_ = Tagged{};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

RunResult duc_run(std::span<const std::int64_t> input, const DucConfig& cfg,
                  std::uint64_t n_master_cycles, bool record_samples) {
  DucChain chain(cfg, record_samples);
  InputFeed feed(input);
  RunResult result;
  for (std::uint64_t c = 0; c < n_master_cycles; ++c) {
    if (auto y = chain.advance(feed)) result.output.push_back(y->value());
  }
  result.trace = chain.trace();
  return result;
}

RunResult ddc_run(std::span<const std::int64_t> input, const DdcConfig& cfg,
                  std::uint64_t n_master_cycles, bool record_samples) {
  DdcChain chain(cfg, record_samples);
  InputFeed feed(input);
  RunResult result;
  for (std::uint64_t c = 0; c < n_master_cycles; ++c) {
    if (auto y = chain.advance(feed)) result.output.push_back(y->value());
  }
  result.trace = chain.trace();
  return result;
}

std::uint64_t duc_cycles_for(std::size_t n_inputs) {
  // Enable, one slow period per input, then the budgeted fill plus slack.
  return kEnableCycle + (n_inputs + 11) * kSlowDivider;
}

std::uint64_t ddc_cycles_for(std::size_t n_inputs) {
  return kEnableCycle + n_inputs * kFastDivider + 7 * kSlowDivider;
}

std::vector<LatencyBudgetItem> ddc_latency_budget() {
  return {
      {"input_register", ClockId::clk1280k, 1},
      {"mixer", ClockId::clk1280k, 1},
      {"band_select", ClockId::clk1280k, 1},
      {"compensator", ClockId::clk1280k, 1},
      {"cic_integrators", ClockId::clk1280k, 5},
      {"cic_combs", ClockId::clk64k, 5},
  };
}

std::vector<LatencyBudgetItem> duc_latency_budget() {
  return {
      {"input_register", ClockId::clk64k, 1},
      {"if_mixer", ClockId::clk64k, 1},
      {"if_highpass", ClockId::clk64k, 1},
      {"compensator", ClockId::clk64k, 1},
      {"cic_combs", ClockId::clk64k, 5},
      {"cic_integrators", ClockId::clk1280k, 5},
      {"carrier_mixer", ClockId::clk1280k, 1},
      {"output_highpass", ClockId::clk1280k, 1},
  };
}

bool LatencyReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const LatencyItem& i) { return i.ok; }) &&
         budgeted_first_valid == expected_first_valid;
}

LatencyReport assert_latency(const PipelineTrace& trace,
                             std::span<const LatencyBudgetItem> expected) {
  LatencyReport report;
  report.enable_cycle = trace.enable_cycle;
  report.physical_first_output = trace.first_output_cycle;
  report.expected_first_valid = trace.enable_cycle;
  std::uint64_t budgeted = trace.enable_cycle;
  bool complete = true;
  std::optional<std::uint64_t> prev = trace.enable_cycle;

  for (const auto& want : expected) {
    report.expected_first_valid += static_cast<std::uint64_t>(want.ticks) * period(want.clock);
    LatencyItem item;
    item.stage = want.stage;
    item.clock = want.clock;
    item.expected_ticks = want.ticks;
    const StageTrace& st = trace.stage(want.stage);
    item.first_valid = st.first_valid;
    if (prev && st.first_valid && *st.first_valid >= *prev) {
      item.observed_ticks = ticks_between(*prev, *st.first_valid, want.clock);
      item.ok = *item.observed_ticks == static_cast<std::uint64_t>(want.ticks);
      budgeted += *item.observed_ticks * period(want.clock);
    } else {
      complete = false;
    }
    prev = st.first_valid;
    report.items.push_back(item);
  }
  if (complete) report.budgeted_first_valid = budgeted;
  return report;
}

std::ostream& operator<<(std::ostream& os, const LatencyReport& r) {
  os << std::left << std::setw(18) << "stage" << std::setw(9) << "clock" << std::setw(10)
     << "expected" << std::setw(10) << "observed" << std::setw(13) << "first_valid"
     << "status\n";
  for (const auto& i : r.items) {
    os << std::setw(18) << i.stage << std::setw(9) << to_string(i.clock) << std::setw(10)
       << i.expected_ticks << std::setw(10)
       << (i.observed_ticks ? std::to_string(*i.observed_ticks) : "-") << std::setw(13)
       << (i.first_valid ? std::to_string(*i.first_valid) : "-") << (i.ok ? "ok" : "MISMATCH")
       << "\n";
  }
  os << "enable at master cycle " << r.enable_cycle << "\n";
  os << "budgeted first valid output: "
     << (r.budgeted_first_valid ? std::to_string(*r.budgeted_first_valid) : "-")
     << " (expected " << r.expected_first_valid << ")\n";
  os << "physical first output edge: "
     << (r.physical_first_output ? std::to_string(*r.physical_first_output) : "-") << "\n";
  return os;
}

}  // namespace ducddc
