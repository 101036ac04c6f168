#pragma once

#include <Eigen/Core>

#include "ducddc/cic.hpp"
#include "ducddc/filters.hpp"

namespace ducddc {

struct Band {
  double lo = 300.0;
  double hi = 4000.0;
};

/// A quantized design together with the real-valued prototype it came from.
struct FirDesign {
  FirSpec spec;
  Eigen::VectorXd prototype;
  /// Worst-case attenuation (positive dB) over the stopband used for
  /// reporting; 0 for the compensator.
  double stopband_db = 0.0;
};

/// Symmetric Hamming window of length n.
Eigen::VectorXd hamming(Eigen::Index n);

/// Round `taps` to `coeff_width`-bit words. The fraction position is
/// kCoeffFrac unless a tap's magnitude needs more integer bits.
FirSpec quantize(const Eigen::VectorXd& taps, FilterKind kind,
                 int coeff_width = kCoeffWidth);

/// 24-tap linear-phase highpass by windowed-sinc (Hamming).
///
/// With an even tap count there is no center tap to invert, so the lowpass
/// prototype is subtracted from a half-sample-delay allpass instead:
/// h[n] = w[n] (sinc(n - 11.5) - 2 fc sinc(2 fc (n - 11.5))).
/// Throws ConfigError unless 0 < cutoff < fs / 2.
FirDesign design_highpass(double cutoff, double fs);

/// 24-tap Hamming-windowed sinc lowpass with unity DC gain.
FirDesign design_lowpass(double cutoff, double fs);

/// 24-tap symmetric FIR approximating 1 / |CIC| (normalized to unity at DC)
/// over `band`, running at `fs`. The CIC response is evaluated with its
/// low-rate side at `cic_low_rate`, so `fs` may be either side of the CIC.
/// Weighted least squares; outside the band the target is held at the band
/// edge values with a small weight.
FirDesign design_cic_compensator(const CicSpec& cic, double fs, Band band = {},
                                 double cic_low_rate = 64'000.0);

/// |CIC(f)| / (RM)^N for a CIC whose low-rate side runs at `low_rate`.
double cic_normalized(const CicSpec& cic, double f, double low_rate);

}  // namespace ducddc
