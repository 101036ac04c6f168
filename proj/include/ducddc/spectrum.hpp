#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ducddc {

enum class Window { rectangular, hann };

Window window_from_string(const std::string& name);

/// One-sided DFT magnitude of the first `n` samples (n/2 + 1 bins), after
/// windowing. Bin k sits at k * rate / n.
Eigen::VectorXd magnitude_spectrum(std::span<const double> x, std::size_t n,
                                   Window window = Window::rectangular);

/// Index of the largest bin, ignoring bins below `skip_below` (e.g. to step
/// over DC).
Eigen::Index peak_bin(const Eigen::VectorXd& mag, Eigen::Index skip_below = 0);

/// 20 log10(mag / max(mag)), floored at `floor_db`.
Eigen::VectorXd normalized_db(const Eigen::VectorXd& mag, double floor_db = -400.0);

/// Bins of `mag` within `below_db` of the peak that are local maxima, sorted
/// by descending magnitude.
std::vector<Eigen::Index> dominant_bins(const Eigen::VectorXd& mag, double below_db,
                                        std::size_t max_count = 8);

/// Converts integer samples for spectral analysis.
std::vector<double> to_real(std::span<const std::int64_t> x);

}  // namespace ducddc
