#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ducddc/cic.hpp"
#include "ducddc/clocking.hpp"
#include "ducddc/dds.hpp"
#include "ducddc/filters.hpp"
#include "ducddc/fixedpoint.hpp"

namespace ducddc {

inline constexpr int kMixerShift = 7;  // DDS full scale, 2^7
inline constexpr int kDucCicShift = 18;
inline constexpr int kDdcCicShift = 22;
inline constexpr double kIfHz = 20'000.0;
inline constexpr double kIfHighpassCutoff = 18'000.0;
inline constexpr double kDdcLowpassCutoff = 64'000.0;
inline constexpr double kMinCarrierHz = 200'000.0;
inline constexpr double kMaxCarrierHz = 500'000.0;

/// Throws ConfigError unless the word puts the carrier inside 200..500 kHz
/// at the 1280 kHz reference (ftw 40..100).
void validate_carrier(FrequencyTuningWord ftw);

struct DucConfig {
  FrequencyTuningWord carrier_ftw{40};
  FrequencyTuningWord if_ftw{80};  // 20 kHz at the 64 kHz reference
  FirSpec if_highpass;
  FirSpec compensator;
  FirSpec output_highpass;
  CicSpec cic;
  int cic_shift = kDucCicShift;
  Rounding rounding = Rounding::truncate;

  /// Designs every filter for the given carrier: IF highpass at 18 kHz,
  /// compensator over the IF band 20.3..24 kHz, output highpass at the
  /// carrier frequency.
  static DucConfig make(FrequencyTuningWord carrier);
};

enum class BandSelect { highpass, lowpass };

struct DdcConfig {
  FrequencyTuningWord carrier_ftw{40};
  FirSpec band_select;
  FirSpec compensator;
  CicSpec cic;
  int cic_shift = kDdcCicShift;
  Rounding rounding = Rounding::truncate;

  /// Band-select highpass cuts at the carrier frequency; lowpass at 64 kHz.
  /// Compensator is designed for 300..4000 Hz at 1280 kHz.
  static DdcConfig make(FrequencyTuningWord carrier, BandSelect band = BandSelect::highpass);
};

struct TraceSample {
  std::uint64_t cycle = 0;
  std::int64_t seq = 0;
  std::int64_t value = 0;
};

/// Samples leaving one pipeline stage.
///
/// Every valid sample carries the sequence number of the input sample that
/// produced it. Successive distinct sequence numbers must differ by
/// `seq_stride`, and (for stages past an interpolator) each must repeat
/// exactly `seq_repeat` times; violations count in `seq_errors`.
struct StageTrace {
  std::string name;
  ClockId clock = ClockId::clk1280k;
  int seq_stride = 1;
  int seq_repeat = 1;
  std::optional<std::uint64_t> first_valid;
  std::uint64_t valid_count = 0;
  std::uint64_t seq_errors = 0;
  std::vector<TraceSample> samples;

  void record(std::uint64_t cycle, std::int64_t seq, std::int64_t value, bool keep);

 private:
  std::int64_t run_seq_ = -1;
  int run_len_ = 0;
};

struct PipelineTrace {
  std::vector<StageTrace> stages;
  std::uint64_t enable_cycle = kEnableCycle;
  /// Edge at which the chain's first valid output left the last stage.
  std::optional<std::uint64_t> first_output_cycle;
  std::uint64_t consumed = 0;
  std::uint64_t produced = 0;
  std::uint64_t saturations = 0;
  /// Product of the fixed scale factors (mixers, CIC gain and shift) relative
  /// to a real-valued chain with unit-amplitude oscillators and unity-gain CIC.
  double nominal_gain = 1.0;
  /// Exact CIC gain after its output shift.
  double cic_gain = 1.0;

  const StageTrace& stage(std::string_view name) const;
};

/// Supplies input samples to a chain's input register in order.
class InputFeed {
 public:
  explicit InputFeed(std::span<const std::int64_t> samples, int width = kAdcWidth);
  /// Next sample, or nothing once the stream is exhausted.
  std::optional<QSample> next();
  std::size_t position() const { return pos_; }

 private:
  std::span<const std::int64_t> samples_;
  int width_;
  std::size_t pos_ = 0;
};

struct Tagged {
  QSample value{0, kAdcWidth};
  bool valid = false;
  std::int64_t seq = -1;
};

/// Cycle-accurate up-converter: input register, 20 kHz IF mixer, IF
/// highpass and compensator at 64 kHz, x20 CIC interpolator, carrier mixer
/// and output highpass at 1280 kHz. `advance()` is one 64 MHz edge.
class DucChain {
 public:
  explicit DucChain(DucConfig cfg, bool record_samples = true);

  std::optional<QSample> advance(InputFeed& feed);
  void request_reset() { clock_.request_reset(); }

  const PipelineTrace& trace() const { return trace_; }
  const ClockState& clock() const { return clock_; }
  const DucConfig& config() const { return cfg_; }

 private:
  void reset_state();

  DucConfig cfg_;
  bool record_;
  ClockState clock_;
  Nco if_nco_;
  Nco carrier_nco_;
  MacFir if_hp_;
  MacFir comp_;
  MacFir out_hp_;
  CicInterpolator cic_;
  Tagged input_reg_;
  Tagged if_mixer_;
  Tagged if_hp_in_, if_hp_out_;
  Tagged comp_in_, comp_out_;
  std::vector<Tagged> comb_tags_;
  std::vector<Tagged> int_tags_;
  Tagged stuff_tag_;
  int stuff_left_ = 0;
  Tagged carrier_mixer_;
  Tagged out_hp_in_;
  PipelineTrace trace_;
};

/// Cycle-accurate down-converter: input register, carrier mixer,
/// band-select filter and compensator at 1280 kHz, x20 CIC decimator whose
/// combs run at 64 kHz.
class DdcChain {
 public:
  explicit DdcChain(DdcConfig cfg, bool record_samples = true);

  std::optional<QSample> advance(InputFeed& feed);
  void request_reset() { clock_.request_reset(); }

  const PipelineTrace& trace() const { return trace_; }
  const ClockState& clock() const { return clock_; }
  const DdcConfig& config() const { return cfg_; }

 private:
  void reset_state();

  DdcConfig cfg_;
  bool record_;
  ClockState clock_;
  Nco carrier_nco_;
  MacFir band_;
  MacFir comp_;
  CicDecimator cic_;
  Tagged input_reg_;
  Tagged mixer_;
  Tagged band_in_, band_out_;
  Tagged comp_in_, comp_out_;
  std::vector<Tagged> int_tags_;
  std::vector<Tagged> comb_tags_;
  PipelineTrace trace_;
};

struct RunResult {
  std::vector<std::int64_t> output;
  PipelineTrace trace;
};

RunResult duc_run(std::span<const std::int64_t> input, const DucConfig& cfg,
                  std::uint64_t n_master_cycles, bool record_samples = true);
RunResult ddc_run(std::span<const std::int64_t> input, const DdcConfig& cfg,
                  std::uint64_t n_master_cycles, bool record_samples = true);

/// Master cycles needed to push `n_inputs` samples through and drain.
std::uint64_t duc_cycles_for(std::size_t n_inputs);
std::uint64_t ddc_cycles_for(std::size_t n_inputs);

struct LatencyBudgetItem {
  std::string stage;
  ClockId clock;
  int ticks;
};

/// Itemized budgets: every stage takes one tick of its clock except the CIC
/// sections, which take five.
std::vector<LatencyBudgetItem> ddc_latency_budget();
std::vector<LatencyBudgetItem> duc_latency_budget();

struct LatencyItem {
  std::string stage;
  ClockId clock = ClockId::clk1280k;
  int expected_ticks = 0;
  std::optional<std::uint64_t> observed_ticks;
  std::optional<std::uint64_t> first_valid;
  bool ok = false;
};

struct LatencyReport {
  std::vector<LatencyItem> items;
  std::uint64_t enable_cycle = kEnableCycle;
  /// enable + sum of budget ticks * period.
  std::uint64_t expected_first_valid = 0;
  /// enable + sum of observed ticks * period.
  std::optional<std::uint64_t> budgeted_first_valid;
  /// Edge at which the first valid output physically appeared.
  std::optional<std::uint64_t> physical_first_output;

  bool ok() const;
};

/// Measures each stage's delta as the number of its own clock's ticks between
/// the previous stage's first valid sample (the enable edge for the first
/// stage) and its own, and compares with `expected`.
LatencyReport assert_latency(const PipelineTrace& trace,
                             std::span<const LatencyBudgetItem> expected);

std::ostream& operator<<(std::ostream& os, const LatencyReport& report);

}  // namespace ducddc
