#include "ducddc/stream_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ducddc/errors.hpp"
#include "ducddc/fixedpoint.hpp"

namespace ducddc {
namespace {

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& token, const std::string& what) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  auto res = std::from_chars(token.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError("bad " + what + " '" + token + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& token, const std::string& what) {
  std::int64_t v = 0;
  const char* end = token.data() + token.size();
  auto res = std::from_chars(token.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError("bad " + what + " '" + token + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<double> StreamFile::as_real() const {
  if (is_real()) return reals;
  return {samples.begin(), samples.end()};
}

StreamFile StreamFile::fixed(double rate, int width, std::vector<std::int64_t> samples) {
  StreamFile s;
  s.rate = rate;
  s.width = width;
  s.samples = std::move(samples);
  return s;
}

StreamFile StreamFile::real(double rate, std::vector<double> values) {
  StreamFile s;
  s.rate = rate;
  s.reals = std::move(values);
  return s;
}

void write_stream(std::ostream& os, const StreamFile& s) {
  os << "# rate=" << format_real(s.rate);
  if (!s.is_real()) os << " width=" << s.width;
  os << " count=" << s.count() << "\n";
  if (s.is_real()) {
    for (double v : s.reals) os << format_real(v) << "\n";
  } else {
    for (std::int64_t v : s.samples) os << v << "\n";
  }
}

StreamFile read_stream(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("#", 0) != 0) {
    throw ConfigError("stream file must start with '# rate=<Hz> [width=<bits>] count=<n>'");
  }
  StreamFile s;
  bool have_rate = false;
  bool have_count = false;
  std::size_t count = 0;
  std::istringstream hs(header.substr(1));
  std::string field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ConfigError("bad header field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (key == "rate") {
      s.rate = parse_real(val, "rate");
      have_rate = true;
    } else if (key == "width") {
      s.width = static_cast<int>(parse_int(val, "width"));
      if (s.width < kMinWidth || s.width > kMaxWidth) {
        throw ConfigError("stream width must be in [2, 64]");
      }
    } else if (key == "count") {
      const auto c = parse_int(val, "count");
      if (c < 0) throw ConfigError("negative count");
      count = static_cast<std::size_t>(c);
      have_count = true;
    } else {
      throw ConfigError("unknown header field '" + key + "'");
    }
  }
  if (!have_rate || !have_count) throw ConfigError("stream header needs rate= and count=");
  if (!(s.rate > 0.0)) throw ConfigError("stream rate must be positive");

  std::string line;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (s.is_real()) {
      s.reals.push_back(parse_real(line, "sample on line " + std::to_string(lineno)));
    } else {
      const auto v = parse_int(line, "sample on line " + std::to_string(lineno));
      if (!QSample::fits(v, s.width)) {
        throw ConfigError("sample " + std::to_string(v) + " on line " + std::to_string(lineno) +
                          " does not fit " + std::to_string(s.width) + " bits");
      }
      s.samples.push_back(v);
    }
  }
  if (s.count() != count) {
    throw ConfigError("header count=" + std::to_string(count) + " but body has " +
                      std::to_string(s.count()) + " samples");
  }
  return s;
}

StreamFile load_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open stream file '" + path + "'");
  return read_stream(in);
}

void save_stream(const std::string& path, const StreamFile& s) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write stream file '" + path + "'");
  write_stream(out, s);
}

}  // namespace ducddc
