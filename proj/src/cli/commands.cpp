#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "ducddc/errors.hpp"

namespace ducddc::cli {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::int64_t> quantize_signal(const std::vector<double>& x) {
  std::vector<std::int64_t> q(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    q[n] = std::llround(x[n]);
    if (!QSample::fits(q[n], kAdcWidth)) {
      throw ConfigError("generated sample " + std::to_string(q[n]) + " overflows 14 bits");
    }
  }
  return q;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

std::string indexed_path(const std::string& path, std::size_t k, std::size_t n) {
  if (path.empty() || n == 1) return path;
  return path + "." + std::to_string(k);
}

}  // namespace

StreamFile cmd_gen(const GenOptions& opt) {
  if (!(opt.rate > 0.0)) throw ConfigError("gen: rate must be positive");
  const double full = static_cast<double>(QSample::max_value(kAdcWidth));
  if (std::abs(opt.amplitude) > full) {
    throw ConfigError("gen: amplitude " + std::to_string(opt.amplitude) +
                      " overflows the 14-bit range (max " + std::to_string(full) + ")");
  }
  std::vector<double> x(opt.count, 0.0);

  if (opt.shape == "sine" || opt.shape == "dsb") {
    if (opt.freqs.empty()) throw ConfigError("gen: sine needs at least one --freq");
    for (double f : opt.freqs) {
      if (!(f >= 0.0) || f >= opt.rate / 2.0) {
        throw ConfigError("gen: frequency " + std::to_string(f) + " Hz violates Nyquist (rate/2 = " +
                          std::to_string(opt.rate / 2.0) + " Hz)");
      }
    }
    const double a = opt.amplitude / static_cast<double>(opt.freqs.size());
    for (std::size_t n = 0; n < opt.count; ++n) {
      double v = 0.0;
      for (double f : opt.freqs) {
        v += a * (opt.shape == "sine" ? std::sin(kTwoPi * f * n / opt.rate)
                                      : std::cos(kTwoPi * f * n / opt.rate));
      }
      if (opt.shape == "dsb") {
        const double fc = opt.carrier_khz * 1000.0;
        if (fc >= opt.rate / 2.0) throw ConfigError("gen: carrier violates Nyquist");
        v *= std::sin(kTwoPi * fc * n / opt.rate);
      }
      x[n] = v;
    }
  } else if (opt.shape == "impulse") {
    if (opt.start >= opt.count) throw ConfigError("gen: impulse position beyond count");
    x[opt.start] = opt.amplitude;
  } else if (opt.shape == "step") {
    for (std::size_t n = opt.start; n < opt.count; ++n) x[n] = opt.amplitude;
  } else if (opt.shape == "dc") {
    std::fill(x.begin(), x.end(), opt.amplitude);
  } else if (opt.shape == "dds") {
    if (opt.ftw < 0 || opt.ftw > 255) throw ConfigError("gen: ftw must be within 0..255");
    if (opt.ftw >= kLutSize / 2) throw ConfigError("gen: ftw violates Nyquist (must be < 128)");
    Nco nco(FrequencyTuningWord{static_cast<std::uint8_t>(opt.ftw)});
    std::vector<std::int64_t> q(opt.count);
    for (auto& v : q) v = nco.step().value();
    return StreamFile::fixed(opt.rate, kDdsWidth, std::move(q));
  } else {
    throw ConfigError("gen: unknown shape '" + opt.shape +
                      "' (expected sine, impulse, step, dc, dsb or dds)");
  }
  return StreamFile::fixed(opt.rate, kAdcWidth, quantize_signal(x));
}

RunOutcome cmd_run(const RunConfig& cfg, const StreamFile& input) {
  if (input.is_real()) throw ConfigError("run: input must be a fixed-point stream");
  if (input.width > kAdcWidth) {
    throw ConfigError("run: input width " + std::to_string(input.width) + " exceeds 14 bits");
  }
  RunOutcome r;
  r.chain = cfg.chain;
  r.carrier = cfg.carrier();
  if (cfg.chain == ChainKind::duc) {
    if (input.rate != static_cast<double>(kSlowHz)) {
      throw ConfigError("run: duc input must be at 64000 Hz (got " + std::to_string(input.rate) + ")");
    }
    r.master_cycles = cfg.master_cycles.value_or(duc_cycles_for(input.samples.size()));
    RunResult res = duc_run(input.samples, cfg.duc_config(), r.master_cycles, false);
    r.output = StreamFile::fixed(static_cast<double>(kFastHz), kAdcWidth, std::move(res.output));
    r.trace = std::move(res.trace);
    const auto budget = duc_latency_budget();
    r.latency = assert_latency(r.trace, budget);
  } else {
    if (input.rate != static_cast<double>(kFastHz)) {
      throw ConfigError("run: ddc input must be at 1280000 Hz (got " + std::to_string(input.rate) + ")");
    }
    r.master_cycles = cfg.master_cycles.value_or(ddc_cycles_for(input.samples.size()));
    RunResult res = ddc_run(input.samples, cfg.ddc_config(), r.master_cycles, false);
    r.output = StreamFile::fixed(static_cast<double>(kSlowHz), kAdcWidth, std::move(res.output));
    r.trace = std::move(res.trace);
    const auto budget = ddc_latency_budget();
    r.latency = assert_latency(r.trace, budget);
  }
  return r;
}

std::string trace_json(const RunOutcome& r) {
  using nlohmann::json;
  const auto opt = [](const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(); };
  json j;
  j["chain"] = to_string(r.chain);
  j["carrier_hz"] = r.carrier.realized_hz;
  j["ftw"] = r.carrier.ftw.value;
  j["master_cycles"] = r.master_cycles;
  j["enable_cycle"] = r.trace.enable_cycle;
  j["consumed"] = r.trace.consumed;
  j["produced"] = r.trace.produced;
  j["saturations"] = r.trace.saturations;
  j["nominal_gain"] = r.trace.nominal_gain;
  j["cic_gain"] = r.trace.cic_gain;
  j["first_output_cycle"] = opt(r.trace.first_output_cycle);
  j["stages"] = json::array();
  for (const auto& s : r.trace.stages) {
    j["stages"].push_back({{"name", s.name},
                           {"clock", to_string(s.clock)},
                           {"first_valid", opt(s.first_valid)},
                           {"valid_count", s.valid_count},
                           {"seq_errors", s.seq_errors}});
  }
  j["latency"] = {{"budgeted_first_valid", opt(r.latency.budgeted_first_valid)},
                  {"expected_first_valid", r.latency.expected_first_valid},
                  {"ok", r.latency.ok()}};
  return j.dump(2) + "\n";
}

void write_summary(std::ostream& os, const RunOutcome& r) {
  os << "chain " << to_string(r.chain) << ": consumed " << r.trace.consumed << ", produced "
     << r.trace.produced << ", carrier " << std::fixed << std::setprecision(0)
     << r.carrier.realized_hz << " Hz (ftw " << int{r.carrier.ftw.value} << "), saturations "
     << r.trace.saturations << ", first valid "
     << (r.latency.budgeted_first_valid ? std::to_string(*r.latency.budgeted_first_valid) : "-")
     << "\n";
  os.unsetf(std::ios::floatfield);
}

std::vector<SpectrumRow> cmd_spectrum(const StreamFile& input, Window window,
                                      std::size_t points) {
  const std::vector<double> x = input.as_real();
  if (x.empty()) throw ConfigError("spectrum: empty stream");
  const std::size_t n = points == 0 ? x.size() : points;
  const Eigen::VectorXd db = normalized_db(magnitude_spectrum(x, n, window));
  std::vector<SpectrumRow> rows(static_cast<std::size_t>(db.size()));
  for (Eigen::Index k = 0; k < db.size(); ++k) {
    rows[static_cast<std::size_t>(k)] = {k * input.rate / static_cast<double>(n), db(k)};
  }
  return rows;
}

FirDesign cmd_design(const DesignOptions& opt) {
  if (opt.kind == "highpass") return design_highpass(opt.cutoff, opt.rate);
  if (opt.kind == "lowpass") return design_lowpass(opt.cutoff, opt.rate);
  if (opt.kind == "compensator") {
    CicSpec cic;
    cic.stages = opt.cic_stages;
    cic.rate = opt.cic_rate;
    cic.validate();
    return design_cic_compensator(cic, opt.rate, Band{opt.band_lo, opt.band_hi}, opt.cic_low_rate);
  }
  throw ConfigError("design: unknown kind '" + opt.kind +
                    "' (expected highpass, lowpass or compensator)");
}

LatencyReport cmd_latency_check(ChainKind chain, const RunConfig& cfg) {
  const std::vector<std::int64_t> impulse{QSample::max_value(kAdcWidth)};
  if (chain == ChainKind::duc) {
    const RunResult r = duc_run(impulse, cfg.duc_config(), duc_cycles_for(1), false);
    const auto budget = duc_latency_budget();
    return assert_latency(r.trace, budget);
  }
  const RunResult r = ddc_run(impulse, cfg.ddc_config(), ddc_cycles_for(1), false);
  const auto budget = ddc_latency_budget();
  return assert_latency(r.trace, budget);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cycle-accurate DUC/DDC datapath simulator"};
  app.require_subcommand(1);

  // Shared run-config flags.
  std::vector<std::string> config_paths;
  std::string coeff_hp, coeff_comp, out_path, trace_path, window_name = "hann", chain_name;
  std::optional<double> carrier_khz;
  std::optional<std::uint64_t> master_cycles;
  bool allow_offgrid = false;
  int jobs = 1;

  const auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--coeff-hp", coeff_hp, "Highpass/band-select coefficient file");
    sub->add_option("--coeff-comp", coeff_comp, "Compensator coefficient file");
    sub->add_option("--carrier-khz", carrier_khz, "Carrier in kHz (200..500, 5 kHz grid)");
    sub->add_flag("--allow-offgrid", allow_offgrid, "Accept carriers off the 5 kHz grid");
  };

  auto* gen = app.add_subcommand("gen", "Generate a quantized test signal");
  GenOptions gopt;
  std::vector<double> freqs;
  gen->add_option("shape", gopt.shape, "sine|impulse|step|dc|dsb|dds")->required();
  gen->add_option("--freq", freqs, "Tone frequency in Hz (repeatable)");
  gen->add_option("--rate", gopt.rate, "Sample rate in Hz");
  gen->add_option("--amplitude", gopt.amplitude, "Peak amplitude in LSBs");
  gen->add_option("--count", gopt.count, "Number of samples");
  gen->add_option("--start", gopt.start, "Impulse/step position");
  gen->add_option("--carrier-khz", gopt.carrier_khz, "Carrier for dsb");
  gen->add_option("--ftw", gopt.ftw, "Tuning word for dds");
  gen->add_option("--out", out_path, "Output stream file")->required();

  auto* run = app.add_subcommand("run", "Run a chain over an input stream");
  std::string input_path;
  run->add_option("--config", config_paths, "Run config file (repeatable)")->required();
  run->add_option("--input", input_path, "Input stream (overrides input=)");
  run->add_option("--master-cycles", master_cycles, "Master cycles to simulate");
  run->add_option("--out", out_path, "Output stream file");
  run->add_option("--trace", trace_path, "Trace JSON file");
  run->add_option("--jobs", jobs, "Parallel workers for multiple configs")
      ->check(CLI::PositiveNumber);
  add_run_flags(run);

  auto* spec = app.add_subcommand("spectrum", "DFT magnitude of a stream as CSV");
  std::size_t points = 0;
  spec->add_option("input", input_path, "Stream file")->required();
  spec->add_option("--window", window_name, "rectangular|hann");
  spec->add_option("--points", points, "DFT length (default: whole stream)");
  spec->add_option("--out", out_path, "CSV output (default stdout)");

  auto* design = app.add_subcommand("design", "Design a 24-tap filter");
  DesignOptions dopt;
  design->add_option("kind", dopt.kind, "highpass|lowpass|compensator")->required();
  design->add_option("--cutoff", dopt.cutoff, "Cutoff in Hz");
  design->add_option("--rate", dopt.rate, "Filter sample rate in Hz");
  design->add_option("--band-lo", dopt.band_lo, "Compensated band low edge in Hz");
  design->add_option("--band-hi", dopt.band_hi, "Compensated band high edge in Hz");
  design->add_option("--cic-stages", dopt.cic_stages, "CIC stages");
  design->add_option("--cic-rate", dopt.cic_rate, "CIC rate change");
  design->add_option("--cic-low-rate", dopt.cic_low_rate, "CIC low-side sample rate in Hz");
  design->add_option("--out", out_path, "Coefficient file")->required();

  auto* lat = app.add_subcommand("latency-check", "Check per-stage latency with an impulse");
  lat->add_option("--chain", chain_name, "duc|ddc (default: from --config, else both)");
  lat->add_option("--config", config_paths, "Run config file");
  add_run_flags(lat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const auto apply_flags = [&](RunConfig cfg) {
    if (!coeff_hp.empty()) cfg.coeff_hp = coeff_hp;
    if (!coeff_comp.empty()) cfg.coeff_comp = coeff_comp;
    if (carrier_khz) cfg.carrier_khz = *carrier_khz;
    if (allow_offgrid) cfg.allow_offgrid = true;
    if (master_cycles) cfg.master_cycles = master_cycles;
    return cfg;
  };

  try {
    if (*gen) {
      if (!freqs.empty()) gopt.freqs = freqs;
      const StreamFile s = cmd_gen(gopt);
      save_stream(out_path, s);
      out << "wrote " << s.count() << " samples to " << out_path << "\n";
      return 0;
    }

    if (*run) {
      std::vector<RunConfig> cfgs;
      for (const auto& p : config_paths) cfgs.push_back(apply_flags(load_run_config(p)));
      const std::size_t n = cfgs.size();
      for (std::size_t k = 0; k < n; ++k) {
        if (!input_path.empty()) cfgs[k].input = input_path;
        if (!out_path.empty()) cfgs[k].out = indexed_path(out_path, k, n);
        if (!trace_path.empty()) cfgs[k].trace = indexed_path(trace_path, k, n);
        if (cfgs[k].input.empty()) throw ConfigError("run: no input stream (use --input or input=)");
      }

      // One pipeline per worker; results are reported in config order.
      std::vector<std::string> reports(n), errors(n);
      std::vector<int> codes(n, 0);
      std::size_t next = 0;
      std::mutex m;
      const auto worker = [&] {
        for (;;) {
          std::size_t k;
          {
            std::lock_guard lock(m);
            if (next >= n) return;
            k = next++;
          }
          try {
            const RunOutcome r = cmd_run(cfgs[k], load_stream(cfgs[k].input));
            if (!cfgs[k].out.empty()) save_stream(cfgs[k].out, r.output);
            if (!cfgs[k].trace.empty()) write_text(cfgs[k].trace, trace_json(r));
            std::ostringstream os;
            write_summary(os, r);
            reports[k] = os.str();
          } catch (const std::exception& e) {
            errors[k] = e.what();
            codes[k] = 1;
          }
        }
      };
      const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
      std::vector<std::thread> pool;
      for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();

      int code = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (codes[k]) {
          err << "error: " << config_paths[k] << ": " << errors[k] << "\n";
          code = 2;
        } else {
          out << reports[k];
        }
      }
      return code;
    }

    if (*spec) {
      const auto rows = cmd_spectrum(load_stream(input_path), window_from_string(window_name), points);
      std::ostringstream csv;
      csv << "frequency_hz,magnitude_db\n" << std::setprecision(10);
      for (const auto& r : rows) csv << r.frequency_hz << "," << r.magnitude_db << "\n";
      if (out_path.empty()) out << csv.str();
      else write_text(out_path, csv.str());
      return 0;
    }

    if (*design) {
      const FirDesign d = cmd_design(dopt);
      save_coefficient_file(out_path, d.spec);
      out << "wrote " << to_string(d.spec.kind) << " coefficients (width " << d.spec.coeff_width
          << ", frac " << d.spec.frac << ") to " << out_path << "\n";
      return 0;
    }

    if (*lat) {
      RunConfig cfg = config_paths.empty() ? RunConfig{} : load_run_config(config_paths.front());
      cfg = apply_flags(cfg);
      std::vector<ChainKind> chains;
      if (chain_name == "duc") chains = {ChainKind::duc};
      else if (chain_name == "ddc") chains = {ChainKind::ddc};
      else if (chain_name.empty()) {
        chains = config_paths.empty() ? std::vector{ChainKind::ddc, ChainKind::duc}
                                      : std::vector{cfg.chain};
      } else {
        throw ConfigError("latency-check: --chain must be duc or ddc");
      }
      bool ok = true;
      for (ChainKind c : chains) {
        const LatencyReport rep = cmd_latency_check(c, cfg);
        out << "[" << to_string(c) << "]\n" << rep;
        ok = ok && rep.ok();
      }
      out << (ok ? "latency OK\n" : "latency MISMATCH\n");
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace ducddc::cli
