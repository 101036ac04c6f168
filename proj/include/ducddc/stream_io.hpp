#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ducddc {

/// Sample stream on disk.
///
/// Header `# rate=<Hz> width=<bits> count=<n>` followed by one signed
/// decimal integer per line; real-valued streams omit `width=` and carry one
/// decimal real per line.
struct StreamFile {
  double rate = 0.0;
  int width = 0;  // 0 for real-valued streams
  std::vector<std::int64_t> samples;
  std::vector<double> reals;

  bool is_real() const { return width == 0; }
  std::size_t count() const { return is_real() ? reals.size() : samples.size(); }
  std::vector<double> as_real() const;

  static StreamFile fixed(double rate, int width, std::vector<std::int64_t> samples);
  static StreamFile real(double rate, std::vector<double> values);

  friend bool operator==(const StreamFile&, const StreamFile&) = default;
};

void write_stream(std::ostream& os, const StreamFile& s);
/// Throws ConfigError on a malformed header, a count mismatch or a value
/// that does not fit the declared width.
StreamFile read_stream(std::istream& is);

StreamFile load_stream(const std::string& path);
void save_stream(const std::string& path, const StreamFile& s);

}  // namespace ducddc
