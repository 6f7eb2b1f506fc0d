#include "oulab/noise.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "oulab/error.hpp"

namespace oulab {

void NoiseParams::validate() const
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("noise sigma must be >= 0");
    if (!(a0 > 0.0) || !std::isfinite(a0)) throw DomainError("noise a0 must be > 0");
    if (series_terms == 0) throw DomainError("series_terms must be >= 1");
}

// ---------------------------------------------------------------------------
// Random sources

namespace {

constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) { return mix64(x + golden_gamma); }

RandomSource RandomSource::pseudo(std::uint64_t seed) { return {Mode::pseudo, splitmix64(seed)}; }

RandomSource RandomSource::quasi(std::uint64_t stream_index)
{
    if (stream_index < 1) throw DomainError("quasi stream index must be >= 1");
    return {Mode::quasi, stream_index};
}

double RandomSource::next_uniform()
{
    if (mode_ != Mode::pseudo) throw DomainError("uniform draws need a pseudo-random source");
    ++counter_;
    const std::uint64_t z = mix64(key_ + counter_ * golden_gamma);
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

double RandomSource::next_gaussian()
{
    if (mode_ == Mode::quasi) return quasi_gaussian(key_, ++counter_);
    return gaussian_inverse_cdf(next_uniform());
}

void RandomSource::fill_gaussian(std::span<double> out)
{
    for (double& v : out) v = next_gaussian();
}

RandomSource RandomSource::substream(std::uint64_t id) const
{
    if (mode_ == Mode::quasi) return {Mode::quasi, key_ + id};
    return {Mode::pseudo, mix64(key_ ^ splitmix64(id ^ 0x632BE59BD9B4E019ULL))};
}

// ---------------------------------------------------------------------------
// Normal distribution

double gaussian_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double gaussian_inverse_cdf(double p)
{
    if (!(p > 0.0 && p < 1.0)) throw DomainError("inverse normal CDF needs p in (0, 1)");

    // Acklam's rational approximation (relative error 1.15e-9) ...
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // ... polished by one Halley step on Phi(x) - p.
    const double e = gaussian_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

// ---------------------------------------------------------------------------
// Quasi-random sequence

std::uint64_t nth_prime(std::uint64_t i)
{
    if (i < 1) throw DomainError("prime index must be >= 1");
    static std::mutex mu;
    static std::vector<std::uint64_t> primes;

    std::lock_guard lock(mu);
    if (primes.size() < i) {
        // p_i < i (ln i + ln ln i) for i >= 6.
        const double fi = static_cast<double>(std::max<std::uint64_t>(i, 6));
        const auto bound = static_cast<std::size_t>(fi * (std::log(fi) + std::log(std::log(fi)))) + 16;
        std::vector<bool> composite(bound + 1, false);
        primes.clear();
        for (std::size_t n = 2; n <= bound; ++n) {
            if (composite[n]) continue;
            primes.push_back(n);
            for (std::size_t m = n * n; m <= bound; m += n) composite[m] = true;
        }
    }
    return primes[i - 1];
}

double quasi_gaussian(std::uint64_t i, std::uint64_t j)
{
    if (i < 1 || j < 1) throw DomainError("quasi_gaussian needs i, j >= 1");
    const long double root = std::sqrt(static_cast<long double>(nth_prime(i)));
    const long double v = static_cast<long double>(j) * root;
    double frac = static_cast<double>(v - std::floor(v));
    if (frac <= 0.0 || frac >= 1.0) {
        const double fixed = frac <= 0.0 ? std::numeric_limits<double>::epsilon()
                                         : 1.0 - std::numeric_limits<double>::epsilon();
        std::clog << "oulab: quasi_gaussian(" << i << ", " << j << ") fractional part " << frac
                  << " moved to " << fixed << '\n';
        frac = fixed;
    }
    return gaussian_inverse_cdf(frac);
}

// ---------------------------------------------------------------------------
// Wiener path and OU noise

double wiener_path_value(std::span<const double> x, double t)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw DomainError("Karhunen-Loeve path is defined only for t in [0, 1], got " +
                          std::to_string(t));
    if (x.empty()) throw DomainError("wiener path needs at least x_0");
    double s = 0.0;
    for (std::size_t n = 1; n < x.size(); ++n) {
        const double w = std::numbers::pi * static_cast<double>(n);
        s += x[n] * std::sin(w * t) / w;
    }
    return x[0] * t + std::numbers::sqrt2 * s;
}

double noise_variance(const NoiseParams& p, double t)
{
    if (!(t >= 0.0)) throw DomainError("variance time must be >= 0");
    const double scale = p.sigma * p.sigma / (2.0 * p.a0);
    if (p.kernel == Kernel::mean_reverting) return scale * -std::expm1(-2.0 * p.a0 * t);
    return scale * std::expm1(2.0 * p.a0 * t);
}

double noise_covariance(const NoiseParams& p, double s, double t)
{
    if (!(s >= 0.0) || !(t >= 0.0)) throw DomainError("covariance times must be >= 0");
    if (s > t) std::swap(s, t);
    const double scale = p.sigma * p.sigma / (2.0 * p.a0);
    const double built = -std::expm1(-2.0 * p.a0 * s);
    if (p.kernel == Kernel::mean_reverting) return scale * std::exp(-p.a0 * (t - s)) * built;
    return scale * std::exp(p.a0 * (s + t)) * built;
}

double ou_integral_exact(const NoiseParams& p, double t0, RandomSource& rng)
{
    if (!(t0 > 0.0)) throw DomainError("observation time must be > 0");
    return std::sqrt(noise_variance(p, t0)) * rng.next_gaussian();
}

double series_time_limit(const NoiseParams& p) { return std::numbers::ln2 / (2.0 * p.a0); }

double ou_integral_series(const NoiseParams& p, double t0, std::span<const double> x,
                          SeriesVariant variant)
{
    if (p.kernel != Kernel::mean_reverting)
        throw DomainError("series sampler is only defined for the mean-reverting kernel");
    if (!(t0 > 0.0)) throw DomainError("observation time must be > 0");
    const double u = std::expm1(2.0 * p.a0 * t0);
    if (!(u >= 0.0 && u <= 1.0))
        throw DomainError("series sampler needs u = exp(2 a0 t0) - 1 in [0, 1], got u = " +
                          std::to_string(u) + "; use the exact sampler");
    const double pref = variant == SeriesVariant::variance_matched
                            ? p.sigma / std::sqrt(2.0 * p.a0)
                            : p.sigma / (2.0 * p.a0);
    return pref * std::exp(-p.a0 * t0) * wiener_path_value(x, u);
}

std::vector<double> ou_path(const NoiseParams& p, std::span<const double> times,
                            RandomSource& rng)
{
    std::vector<double> out(times.size());
    double prev = 0.0, x = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (!(t >= prev)) throw DomainError("path times must be sorted and non-negative");
        const double dt = t - prev;
        const double phi = std::exp((p.kernel == Kernel::mean_reverting ? -p.a0 : p.a0) * dt);
        x = phi * x + std::sqrt(noise_variance(p, dt)) * rng.next_gaussian();
        out[i] = x;
        prev = t;
    }
    return out;
}

}  // namespace oulab
