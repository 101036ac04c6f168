#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cli/run_config.hpp"
#include "ducddc/fir_design.hpp"
#include "ducddc/pipeline.hpp"
#include "ducddc/spectrum.hpp"
#include "ducddc/stream_io.hpp"

namespace ducddc::cli {

struct GenOptions {
  std::string shape = "sine";  // sine | impulse | step | dc | dsb | dds
  std::vector<double> freqs{4000.0};
  double rate = 64'000.0;
  double amplitude = 8000.0;
  std::size_t count = 1600;
  std::size_t start = 0;  // impulse/step position
  double carrier_khz = 200.0;  // dsb
  int ftw = 21;  // dds
};

/// Quantized 14-bit test vector (8-bit for `dds`, which is the raw NCO
/// output at `rate`). Multi-tone sines split the amplitude evenly.
StreamFile cmd_gen(const GenOptions& opt);

struct RunOutcome {
  StreamFile output;
  PipelineTrace trace;
  LatencyReport latency;
  ChainKind chain = ChainKind::duc;
  FtwChoice carrier;
  std::uint64_t master_cycles = 0;
};

RunOutcome cmd_run(const RunConfig& cfg, const StreamFile& input);

/// Per-stage first-valid cycles, sample counts, saturation counters and
/// latency check as JSON.
std::string trace_json(const RunOutcome& r);
void write_summary(std::ostream& os, const RunOutcome& r);

struct SpectrumRow {
  double frequency_hz;
  double magnitude_db;
};

/// DFT over the first `points` samples (0 = whole stream), in dB relative to
/// the peak bin.
std::vector<SpectrumRow> cmd_spectrum(const StreamFile& input, Window window,
                                      std::size_t points = 0);

struct DesignOptions {
  std::string kind = "highpass";  // highpass | lowpass | compensator
  double cutoff = 16'000.0;
  double rate = 64'000.0;
  double band_lo = 300.0;
  double band_hi = 4000.0;
  double cic_low_rate = 64'000.0;
  int cic_stages = 5;
  int cic_rate = 20;
};

FirDesign cmd_design(const DesignOptions& opt);

/// Impulse run through the chain; the report carries per-stage deltas.
LatencyReport cmd_latency_check(ChainKind chain, const RunConfig& cfg);

/// Whole command line; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ducddc::cli
