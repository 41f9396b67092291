#pragma once

// Independent reference computations shared by the test binaries. None of
// these call into the library's numerical code.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "dcfault/error.hpp"

namespace oracle {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// d1 e^{-at} cos(wt) + d2 e^{-at} sin(wt) evaluated directly.
inline double damped(double alpha, double omega, double d1, double d2, double t) {
    return std::exp(-alpha * t) * (d1 * std::cos(omega * t) + d2 * std::sin(omega * t));
}

inline std::vector<double> damped_samples(double alpha, double omega, double d1, double d2, double fs,
                                          std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = damped(alpha, omega, d1, d2, static_cast<double>(k) / fs);
    return out;
}

/// O(N^2) DFT magnitude at bin k of the zero-padded, mean-removed record.
inline double dft_magnitude(const std::vector<double>& x, std::size_t padded, std::size_t k) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    std::complex<double> acc{};
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double ph = -kTwoPi * static_cast<double>(k) * static_cast<double>(n) / static_cast<double>(padded);
        acc += (x[n] - mean) * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return std::abs(acc);
}

/// Frequency (Hz) of the largest naive-DFT bin, refined by a three-point parabola.
inline double dft_peak_hz(const std::vector<double>& x, double fs, std::size_t padded) {
    std::vector<double> mag(padded / 2 + 1);
    for (std::size_t k = 1; k < mag.size(); ++k) mag[k] = dft_magnitude(x, padded, k);
    std::size_t best = 1;
    for (std::size_t k = 2; k < mag.size(); ++k)
        if (mag[k] > mag[best]) best = k;
    double shift = 0.0;
    if (best > 1 && best + 1 < mag.size()) {
        const double a = mag[best - 1], b = mag[best], c = mag[best + 1];
        const double den = a - 2.0 * b + c;
        if (den != 0.0) shift = 0.5 * (a - c) / den;
    }
    return (static_cast<double>(best) + shift) * fs / static_cast<double>(padded);
}

struct Line {
    double slope;
    double intercept;
    double r_squared;
};

/// Least squares via the uncentred 2x2 normal equations.
inline Line normal_equations(const std::vector<double>& x, const std::vector<double>& y) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        n += 1;
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double fit = intercept + slope * x[i];
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    return {slope, intercept, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

inline double rms(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

inline double relative(double got, double want) { return std::abs(got - want) / std::abs(want); }

/// Seeded uniform draws for hand-rolled property generators.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    std::uint64_t seed() { return rng_(); }

private:
    std::mt19937_64 rng_;
};

}  // namespace oracle

/// Runs `fn` and returns the kind it threw, failing loudly when nothing is thrown.
template <class Fn>
dcfault::ErrorKind thrown_kind(Fn&& fn) {
    try {
        fn();
    } catch (const dcfault::Error& e) {
        return e.kind();
    }
    throw std::logic_error("expected dcfault::Error");
}
