#pragma once

// Gaussian drivers and the scalar Ornstein-Uhlenbeck noise that enters the
// channel through the constant mode.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace oulab {

/// Which stochastic-convolution kernel exp(-+A_0 (t - tau)) is used.
enum class Kernel { mean_reverting, growth };

struct NoiseParams {
    double sigma = 0.0;
    double a0 = 1.0;
    Kernel kernel = Kernel::mean_reverting;
    std::size_t series_terms = 999;  ///< KL truncation N, coefficients x_0..x_N

    /// Throws DomainError when sigma < 0, a0 <= 0 or series_terms == 0.
    void validate() const;
};

/// Reproducible standard-normal source.
///
/// Pseudo mode is counter based: draw j of stream `key` is SplitMix64 output
/// number j for the state `key`, mapped through the inverse normal CDF. A
/// source is therefore a pure function of (key, counter), and substreams are
/// new keys derived from (key, id) without touching the parent counter.
///
/// Quasi mode yields Phi^{-1}({j sqrt(p_i)}) for j = 1, 2, ..., p_i the i-th prime.
class RandomSource {
public:
    enum class Mode { pseudo, quasi };

    static RandomSource pseudo(std::uint64_t seed);
    static RandomSource quasi(std::uint64_t stream_index);

    Mode mode() const { return mode_; }
    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

    double next_gaussian();
    /// Uniform on the open interval (0, 1). Pseudo mode only.
    double next_uniform();
    void fill_gaussian(std::span<double> out);

    /// Independent child stream. Pseudo: mixed key. Quasi: stream index key + id.
    RandomSource substream(std::uint64_t id) const;

private:
    RandomSource(Mode m, std::uint64_t key) : mode_(m), key_(key) {}

    Mode mode_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Inverse of the standard normal CDF. Throws DomainError outside (0, 1).
double gaussian_inverse_cdf(double p);
/// Standard normal CDF.
double gaussian_cdf(double z);

/// i-th prime, 1-based (p_1 = 2). Thread safe.
std::uint64_t nth_prime(std::uint64_t i);

/// Phi^{-1}({j sqrt(p_i)}); i, j >= 1.
double quasi_gaussian(std::uint64_t i, std::uint64_t j);

/// x_0 t + sqrt(2) sum_{n=1}^{N} x_n sin(pi n t) / (pi n), t in [0, 1].
double wiener_path_value(std::span<const double> x, double t);

/// Var of the noise at time t for the configured kernel.
double noise_variance(const NoiseParams& p, double t);
/// Cov of the noise at times s and t (order irrelevant).
double noise_covariance(const NoiseParams& p, double s, double t);

/// One exact draw of the noise at t0; consumes one Gaussian.
double ou_integral_exact(const NoiseParams& p, double t0, RandomSource& rng);

enum class SeriesVariant { variance_matched, paper_faithful };

/// Time-changed KL series for the mean-reverting kernel,
/// pref * exp(-a0 t0) * W(u), u = exp(2 a0 t0) - 1, pref = sigma / sqrt(2 a0)
/// (variance_matched) or sigma / (2 a0) (paper_faithful). Requires u <= 1.
double ou_integral_series(const NoiseParams& p, double t0, std::span<const double> x,
                          SeriesVariant variant = SeriesVariant::variance_matched);

/// Largest t0 for which the series form is defined, ln(2) / (2 a0).
double series_time_limit(const NoiseParams& p);

/// One noise trajectory at sorted, non-negative `times` using exact Markov
/// transitions X(t) = phi X(s) + sqrt(v(t - s)) xi.
std::vector<double> ou_path(const NoiseParams& p, std::span<const double> times,
                            RandomSource& rng);

}  // namespace oulab
