#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dcfault/transient.hpp"

namespace dcfault {

struct PeakPoint {
    double t = 0.0;          ///< s
    double magnitude = 0.0;  ///< A, strictly positive

    friend bool operator==(const PeakPoint&, const PeakPoint&) = default;
};

/// Envelope samples of the rectified trace, strictly increasing in time.
struct PeakSeries {
    std::vector<PeakPoint> points;
    double source_fs = 0.0;
};

/// Least-squares line through (t_n, ln i_n): ln i = intercept - alpha t.
struct AttenuationFit {
    double alpha = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

struct SpectralEstimate {
    double omega_d = 0.0;         ///< rad/s
    double bin_resolution = 0.0;  ///< rad/s
    double peak_amplitude = 0.0;  ///< A, amplitude of the equivalent sinusoid
};

/// Adds zero-mean Gaussian noise whose variance is the mean-square of the
/// trace divided by 10^(snr_db/10). An empty `snr_db` returns the input
/// unchanged. The same seed always yields the same output.
[[nodiscard]] DischargeTrace add_noise(const DischargeTrace& trace, std::optional<double> snr_db,
                                       std::uint64_t seed);

/// Alternative noise model: standard deviation is `fraction` of the peak |i|.
[[nodiscard]] DischargeTrace add_noise_peak_fraction(const DischargeTrace& trace, double fraction,
                                                     std::uint64_t seed);

struct PeakOptions {
    double window = 2e-3;
    double min_magnitude_fraction = 0.02;
    /// Parabolic sub-sample refinement of each oscillation peak.
    bool refine = true;
};

/// One envelope point per window: the largest local maximum of |i| inside it.
/// A trace that never changes sign is treated as its own envelope, so each
/// window contributes its plain maximum. Windows whose point falls below
/// `min_magnitude_fraction` of the global maximum are dropped.
/// Throws InsufficientPeaks when fewer than four points survive.
[[nodiscard]] PeakSeries extract_envelope_peaks(const DischargeTrace& trace, const PeakOptions& options = {});

/// Ordinary least squares on ln(magnitude) versus t.
[[nodiscard]] AttenuationFit fit_attenuation(const PeakSeries& peaks);

enum class Taper { Rectangular, Hann };

struct SpectralOptions {
    Taper taper = Taper::Rectangular;
    /// Zero-pad to at least this many points (always a power of two >= length).
    std::size_t min_fft_size = 0;
};

/// Peak of the DFT magnitude (mean removed, DC bin excluded), refined by a
/// parabola through the three bins around the maximum.
/// Throws NoOscillation when the peak is below three times the median bin.
[[nodiscard]] SpectralEstimate dominant_frequency(const DischargeTrace& trace, const SpectralOptions& options = {});

/// Dominant frequency of the trace after undoing the fitted exponential decay.
/// Only the span where the fitted envelope stays above `min_magnitude_fraction`
/// of the peak |i| is used, Hann-tapered and zero-padded to >= 2^16 points.
/// The magnitude spectrum of a damped oscillation peaks below its damped
/// frequency, by about alpha^2/(2 omega_d); removing the decay first removes that bias.
[[nodiscard]] SpectralEstimate damping_compensated_frequency(const DischargeTrace& trace, const AttenuationFit& fit,
                                                             double min_magnitude_fraction = 0.02);

}  // namespace dcfault
