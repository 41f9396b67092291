#include "dcfault/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

#include "dcfault/error.hpp"

namespace dcfault {

namespace {

double mean_square(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

DischargeTrace with_gaussian(const DischargeTrace& trace, double sigma, std::uint64_t seed) {
    DischargeTrace out = trace;
    if (sigma <= 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (double& s : out.samples) s += gauss(rng);
    return out;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// The FFTW planner is not re-entrant; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<double> magnitude_spectrum(const std::vector<double>& x, std::size_t n_fft) {
    const std::size_t n_bins = n_fft / 2 + 1;
    double* in = fftw_alloc_real(n_fft);
    fftw_complex* out = fftw_alloc_complex(n_bins);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_fft), in, out, FFTW_ESTIMATE);
    }
    std::fill(in, in + n_fft, 0.0);
    std::copy(x.begin(), x.end(), in);
    fftw_execute(plan);
    std::vector<double> mag(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return mag;
}

}  // namespace

DischargeTrace add_noise(const DischargeTrace& trace, std::optional<double> snr_db, std::uint64_t seed) {
    validate(trace);
    if (!snr_db) return trace;
    if (!std::isfinite(*snr_db)) throw_invalid("snr_db", "finite");
    const double noise_power = mean_square(trace.samples) / std::pow(10.0, *snr_db / 10.0);
    return with_gaussian(trace, std::sqrt(noise_power), seed);
}

DischargeTrace add_noise_peak_fraction(const DischargeTrace& trace, double fraction, std::uint64_t seed) {
    validate(trace);
    if (!std::isfinite(fraction) || fraction < 0.0) throw_invalid("noise fraction", ">= 0");
    double peak = 0.0;
    for (double s : trace.samples) peak = std::max(peak, std::abs(s));
    return with_gaussian(trace, fraction * peak, seed);
}

PeakSeries extract_envelope_peaks(const DischargeTrace& trace, const PeakOptions& options) {
    validate(trace);
    if (!std::isfinite(options.window) || options.window * trace.fs < 2.0 - 1e-9) {
        throw_invalid("window", ">= 2/fs");
    }
    if (!std::isfinite(options.min_magnitude_fraction) || options.min_magnitude_fraction < 0.0 ||
        options.min_magnitude_fraction >= 1.0) {
        throw_invalid("min_peak_frac", "in [0, 1)");
    }

    const auto& x = trace.samples;
    const std::size_t n = x.size();
    const auto width = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(options.window * trace.fs)));

    double global = 0.0;
    bool oscillating = false;
    for (std::size_t j = 0; j < n; ++j) {
        global = std::max(global, std::abs(x[j]));
        if (j + 1 < n && x[j] * x[j + 1] < 0.0) oscillating = true;
    }

    auto is_candidate = [&](std::size_t j) {
        if (!oscillating) return true;
        if (j == 0 || j + 1 >= n) return false;
        const double a = std::abs(x[j]);
        return a >= std::abs(x[j - 1]) && a >= std::abs(x[j + 1]);
    };

    PeakSeries series{{}, trace.fs};
    const double floor = options.min_magnitude_fraction * global;
    for (std::size_t start = 0; start < n; start += width) {
        const std::size_t stop = std::min(n, start + width);
        std::size_t best = n;
        for (std::size_t j = start; j < stop; ++j) {
            if (is_candidate(j) && (best == n || std::abs(x[j]) > std::abs(x[best]))) best = j;
        }
        if (best == n) continue;
        double magnitude = std::abs(x[best]);
        if (magnitude <= 0.0 || magnitude < floor) continue;
        double t = trace.time(best);
        if (oscillating && options.refine) {
            const double a0 = std::abs(x[best - 1]);
            const double a1 = magnitude;
            const double a2 = std::abs(x[best + 1]);
            const double curvature = a0 - 2.0 * a1 + a2;
            if (curvature < 0.0) {
                const double p = 0.5 * (a0 - a2) / curvature;
                magnitude = a1 - 0.25 * (a0 - a2) * p;
                t += p / trace.fs;
            }
        }
        if (!series.points.empty() && t <= series.points.back().t) {
            // Plateau straddling a window edge: keep the larger of the two.
            if (magnitude > series.points.back().magnitude) series.points.back() = {series.points.back().t, magnitude};
            continue;
        }
        series.points.push_back({t, magnitude});
    }

    if (series.points.size() < 4) {
        throw Error(ErrorKind::InsufficientPeaks,
                    std::to_string(series.points.size()) + " envelope point(s) above threshold, need 4");
    }
    return series;
}

AttenuationFit fit_attenuation(const PeakSeries& peaks) {
    const auto& pts = peaks.points;
    if (pts.size() < 4) {
        throw Error(ErrorKind::InsufficientPeaks, std::to_string(pts.size()) + " point(s), need 4");
    }
    const double count = static_cast<double>(pts.size());
    double t_mean = 0.0;
    double y_mean = 0.0;
    for (const auto& p : pts) {
        if (!(p.magnitude > 0.0) || !std::isfinite(p.magnitude) || !std::isfinite(p.t)) {
            throw_invalid("peak magnitude", "finite and > 0");
        }
        t_mean += p.t;
        y_mean += std::log(p.magnitude);
    }
    t_mean /= count;
    y_mean /= count;

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& p : pts) {
        const double dt = p.t - t_mean;
        const double dy = std::log(p.magnitude) - y_mean;
        sxx += dt * dt;
        sxy += dt * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !std::isfinite(sxx)) {
        throw Error(ErrorKind::DegenerateFit, "peak times have zero variance");
    }
    const double slope = sxy / sxx;
    const double intercept = y_mean - slope * t_mean;

    double ss_res = 0.0;
    for (const auto& p : pts) {
        const double r = std::log(p.magnitude) - (intercept + slope * p.t);
        ss_res += r * r;
    }
    const double r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return AttenuationFit{-slope, intercept, r2};
}

SpectralEstimate dominant_frequency(const DischargeTrace& trace, const SpectralOptions& options) {
    validate(trace);
    const std::size_t n = trace.size();
    if (n < 64) throw_invalid("trace length", ">= 64 samples for spectral analysis");

    double mean = 0.0;
    double scale = 0.0;
    for (double s : trace.samples) {
        mean += s;
        scale = std::max(scale, std::abs(s));
    }
    mean /= static_cast<double>(n);

    std::vector<double> x(n);
    double residual = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = trace.samples[j] - mean;
        residual = std::max(residual, std::abs(x[j]));
    }
    if (residual <= 1e-12 * scale || residual == 0.0) {
        throw Error(ErrorKind::NoOscillation, "trace is constant");
    }

    double taper_sum = static_cast<double>(n);
    if (options.taper == Taper::Hann) {
        taper_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            // Symmetric Hann with the zero endpoints dropped.
            const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j + 1) /
                                                  static_cast<double>(n + 1));
            x[j] *= w;
            taper_sum += w;
        }
    }

    const std::size_t n_fft = next_pow2(std::max(n, options.min_fft_size));
    const auto mag = magnitude_spectrum(x, n_fft);
    const std::size_t last = mag.size() - 1;

    std::size_t k = 1;
    for (std::size_t b = 2; b <= last; ++b) {
        if (mag[b] > mag[k]) k = b;
    }
    std::vector<double> rest(mag.begin() + 1, mag.end());
    const auto mid = rest.begin() + static_cast<std::ptrdiff_t>(rest.size() / 2);
    std::nth_element(rest.begin(), mid, rest.end());
    const double median = *mid;
    if (!(mag[k] > 0.0) || mag[k] < 3.0 * median) {
        throw Error(ErrorKind::NoOscillation, "spectral peak below 3x median bin magnitude");
    }

    double offset = 0.0;
    double peak = mag[k];
    if (k > 1 && k < last) {
        const double a = mag[k - 1];
        const double b = mag[k];
        const double c = mag[k + 1];
        const double curvature = a - 2.0 * b + c;
        if (curvature < 0.0) {
            offset = 0.5 * (a - c) / curvature;
            peak = b - 0.25 * (a - c) * offset;
        }
    }

    const double resolution = 2.0 * std::numbers::pi * trace.fs / static_cast<double>(n_fft);
    const double omega = (static_cast<double>(k) + offset) * resolution;
    if (!(omega > 0.0) || omega >= std::numbers::pi * trace.fs) {
        throw Error(ErrorKind::NoOscillation, "spectral peak outside (0, fs/2)");
    }
    return SpectralEstimate{omega, resolution, 2.0 * peak / taper_sum};
}

SpectralEstimate damping_compensated_frequency(const DischargeTrace& trace, const AttenuationFit& fit,
                                               double min_magnitude_fraction) {
    validate(trace);
    if (!(min_magnitude_fraction > 0.0) || min_magnitude_fraction >= 1.0) {
        throw_invalid("min_peak_frac", "in (0, 1) for damping compensation");
    }
    const std::size_t n = trace.size();
    double global = 0.0;
    for (double s : trace.samples) global = std::max(global, std::abs(s));

    double t_end = trace.time(n - 1);
    if (fit.alpha > 0.0 && global > 0.0) {
        t_end = std::min(t_end, (fit.intercept - std::log(min_magnitude_fraction * global)) / fit.alpha);
    }
    std::size_t used = 0;
    while (used < n && trace.time(used) <= t_end) ++used;
    used = std::min(n, std::max<std::size_t>(used, 64));

    DischargeTrace flat{std::vector<double>(used), trace.fs, trace.t0};
    const double rate = std::max(fit.alpha, 0.0);
    for (std::size_t j = 0; j < used; ++j) {
        const double t = std::min(trace.time(j), t_end) - trace.t0;
        flat.samples[j] = trace.samples[j] * std::exp(rate * t);
    }
    return dominant_frequency(flat, SpectralOptions{Taper::Hann, std::size_t{1} << 16});
}

}  // namespace dcfault
