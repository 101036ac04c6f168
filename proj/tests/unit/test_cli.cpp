#include <doctest.h>

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "ducddc/errors.hpp"

using namespace ducddc;
using namespace ducddc::cli;

namespace {

int invoke(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "ducddc");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::size_t read_stream_count(const std::string& path) { return load_stream(path).count(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("gen: 4 kHz sine at 64 kHz has 16 samples per period") {
  GenOptions o;
  o.freqs = {4000.0};
  o.count = 1600;
  const StreamFile s = cmd_gen(o);
  REQUIRE(s.count() == 1600);
  CHECK(s.width == 14);
  for (std::size_t n = 16; n < s.samples.size(); ++n) CHECK(s.samples[n] == s.samples[n - 16]);
  CHECK(s.samples[4] == 8000);
}

TEST_CASE("gen: impulse, step and dc") {
  GenOptions o;
  o.shape = "impulse";
  o.amplitude = 8191;
  o.count = 8;
  const StreamFile imp = cmd_gen(o);
  CHECK(imp.samples == std::vector<std::int64_t>{8191, 0, 0, 0, 0, 0, 0, 0});
  o.shape = "step";
  o.start = 3;
  o.amplitude = 5;
  CHECK(cmd_gen(o).samples == std::vector<std::int64_t>{0, 0, 0, 5, 5, 5, 5, 5});
  o.shape = "dc";
  o.amplitude = 1000;
  CHECK(cmd_gen(o).samples == std::vector<std::int64_t>(8, 1000));
}

TEST_CASE("gen: validation") {
  GenOptions o;
  o.freqs = {32'000.0};
  CHECK_THROWS_WITH_AS(cmd_gen(o), doctest::Contains("Nyquist"), ConfigError);
  o.freqs = {1000.0};
  o.amplitude = 9000;
  CHECK_THROWS_WITH_AS(cmd_gen(o), doctest::Contains("overflows"), ConfigError);
  o.amplitude = 100;
  o.shape = "triangle";
  CHECK_THROWS_AS(cmd_gen(o), ConfigError);
}

TEST_CASE("spectrum: DDS word 21 peaks at bin 21, 105 kHz") {
  GenOptions o;
  o.shape = "dds";
  o.ftw = 21;
  o.rate = 1'280'000.0;
  o.count = 256;
  const auto rows = cmd_spectrum(cmd_gen(o), Window::rectangular, 256);
  REQUIRE(rows.size() == 129);
  const auto peak = std::max_element(rows.begin(), rows.end(),
                                     [](const auto& a, const auto& b) { return a.magnitude_db < b.magnitude_db; });
  CHECK(peak - rows.begin() == 21);
  CHECK(peak->frequency_hz == 105'000.0);
  CHECK(peak->magnitude_db == 0.0);
}

TEST_CASE("spectrum: two-tone input shows both tones") {
  GenOptions o;
  o.freqs = {4000.0, 10'000.0};
  o.count = 1024;
  const auto rows = cmd_spectrum(cmd_gen(o), Window::rectangular);
  std::vector<double> peaks;
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    if (rows[k].magnitude_db > -20.0 && rows[k].magnitude_db >= rows[k - 1].magnitude_db &&
        rows[k].magnitude_db > rows[k + 1].magnitude_db) {
      peaks.push_back(rows[k].frequency_hz);
    }
  }
  CHECK(peaks == std::vector<double>{4000.0, 10'000.0});
  CHECK_THROWS_AS(cmd_spectrum(StreamFile::fixed(64000.0, 14, {}), Window::hann), ConfigError);
}

TEST_CASE("run config parsing") {
  std::istringstream in(
      "# comment\nchain=ddc\ncarrier_khz=250\nband_select=lowpass\ncic_shift=20\nmaster_cycles=99\n");
  const RunConfig c = parse_run_config(in);
  CHECK(c.chain == ChainKind::ddc);
  CHECK(c.carrier_khz == 250.0);
  CHECK(c.band_select == BandSelect::lowpass);
  CHECK(c.cic_shift == 20);
  CHECK(c.master_cycles == 99u);
  CHECK(c.carrier().ftw.value == 50);
  CHECK(c.ddc_config().cic_shift == 20);

  std::istringstream unknown("colour=blue\n");
  CHECK_THROWS_WITH_AS(parse_run_config(unknown), doctest::Contains("unknown key"), ConfigError);
  std::istringstream chain("chain=abc\n");
  CHECK_THROWS_AS(parse_run_config(chain), ConfigError);
}

TEST_CASE("carrier grid") {
  RunConfig c;
  c.carrier_khz = 203.0;
  CHECK_THROWS_WITH_AS(c.carrier(), doctest::Contains("multiple of 5"), ConfigError);
  c.allow_offgrid = true;
  CHECK(c.carrier().realized_hz == 205'000.0);
  c.carrier_khz = 505.0;
  CHECK_THROWS_AS(c.carrier(), ConfigError);
}

TEST_CASE("run: rate contract, carrier report and trace") {
  RunConfig ddc;
  ddc.chain = ChainKind::ddc;
  GenOptions o;
  o.rate = 1'280'000.0;
  o.freqs = {204'000.0};
  o.count = 20 * 37;
  const RunOutcome d = cmd_run(ddc, cmd_gen(o));
  CHECK(d.output.count() == 37);
  CHECK(d.output.rate == 64'000.0);
  CHECK(d.latency.budgeted_first_valid == 5950u);

  RunConfig duc;
  o.rate = 64'000.0;
  o.freqs = {4000.0};
  o.count = 50;
  const RunOutcome u = cmd_run(duc, cmd_gen(o));
  CHECK(u.output.count() == 1000);
  CHECK(u.carrier.realized_hz == 200'000.0);
  CHECK(u.carrier.ftw.value == 40);
  std::ostringstream summary;
  write_summary(summary, u);
  CHECK(summary.str().find("200000 Hz (ftw 40)") != std::string::npos);

  const auto j = nlohmann::json::parse(trace_json(d));
  CHECK(j["chain"] == "ddc");
  CHECK(j["latency"]["budgeted_first_valid"] == 5950);
  CHECK(j["stages"].size() == 6);
  CHECK(j["stages"][5]["first_valid"] == 5000);

  CHECK_THROWS_AS(cmd_run(duc, cmd_gen(GenOptions{.rate = 1'280'000.0})), ConfigError);
}

TEST_CASE("design command") {
  DesignOptions o;
  o.kind = "highpass";
  o.cutoff = 16'000.0;
  const FirDesign hp = cmd_design(o);
  for (int k = 0; k < 24; ++k) CHECK(hp.spec.taps[k] == hp.spec.taps[23 - k]);
  o.cutoff = 40'000.0;
  CHECK_THROWS_WITH_AS(cmd_design(o), doctest::Contains("rate/2"), ConfigError);
  o.kind = "notch";
  CHECK_THROWS_AS(cmd_design(o), ConfigError);
}

TEST_CASE("latency check command") {
  CHECK(cmd_latency_check(ChainKind::ddc, RunConfig{}).budgeted_first_valid == 5950u);
  CHECK(cmd_latency_check(ChainKind::duc, RunConfig{}).budgeted_first_valid == 9850u);
}

TEST_CASE("command line end to end") {
  std::string text;
  CHECK(invoke({"gen", "sine", "--freq", "4000", "--count", "64", "--out", "cli_in.txt"}) == 0);
  write_file("cli_duc.cfg", "chain=duc\ncarrier_khz=300\ninput=cli_in.txt\n");
  write_file("cli_ddc.cfg", "chain=ddc\ncarrier_khz=200\ninput=cli_in.txt\n");
  CHECK(invoke({"run", "--config", "cli_duc.cfg", "--out", "cli_out.txt", "--trace", "cli_trace.json"},
               &text) == 0);
  CHECK(text.find("produced 1280") != std::string::npos);
  CHECK(read_stream_count("cli_out.txt") == 1280);
  CHECK(nlohmann::json::parse(read_file("cli_trace.json"))["ftw"] == 60);

  // Wrong input rate for the ddc config is an error with a nonzero exit.
  CHECK(invoke({"run", "--config", "cli_duc.cfg", "--config", "cli_duc.cfg", "--jobs", "2",
                "--out", "cli_par.txt"}) == 0);
  CHECK(read_file("cli_par.txt.0") == read_file("cli_par.txt.1"));
  CHECK(invoke({"run", "--config", "cli_ddc.cfg"}, &text) != 0);
  CHECK(text.find("1280000") != std::string::npos);

  CHECK(invoke({"spectrum", "cli_out.txt", "--window", "hann", "--out", "cli_spec.csv"}) == 0);
  CHECK(read_file("cli_spec.csv").rfind("frequency_hz,magnitude_db\n", 0) == 0);
  CHECK(invoke({"spectrum", "cli_out.txt", "--window", "kaiser"}) != 0);

  CHECK(invoke({"design", "compensator", "--rate", "1280000", "--out", "cli_comp.txt"}) == 0);
  CHECK(invoke({"design", "highpass", "--cutoff", "32000", "--rate", "64000", "--out", "x.txt"},
               &text) != 0);
  CHECK(text.find("rate/2") != std::string::npos);
  write_file("cli_ddc2.cfg", "chain=ddc\ncarrier_khz=200\ncoeff_comp=cli_comp.txt\n");
  CHECK(invoke({"latency-check", "--config", "cli_ddc2.cfg"}, &text) == 0);
  CHECK(text.find("latency OK") != std::string::npos);
  CHECK(invoke({"latency-check", "--chain", "duc", "--carrier-khz", "203"}) != 0);
  CHECK(invoke({"bogus"}) != 0);
}
