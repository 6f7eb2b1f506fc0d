#pragma once

// The transmission channel: a useful signal theta evolves under exp(tA) and
// picks up scalar OU noise on the constant mode, so an observation at t0 is
//
//     Z = exp(t0 A) theta + eta * 1,   eta ~ N(0, v(t0)).

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "oulab/fourier.hpp"
#include "oulab/noise.hpp"
#include "oulab/spectral.hpp"

namespace oulab {

enum class ObservationForm { fourier, grid };
enum class NoiseSampler { exact, series };

struct ScenarioConfig {
    FourierSignal theta{std::numbers::pi, 20};
    OperatorSpec op{std::vector<double>{1.0, 0.0, 0.0}};
    NoiseParams noise;
    NoiseSampler sampler = NoiseSampler::exact;
    SeriesVariant series_variant = SeriesVariant::variance_matched;
    double t0 = 1.0;
    std::size_t n = 1;
    std::size_t K = 20;
    std::size_t G = 200;
    std::uint64_t seed = 0;
    bool quasi = false;
    std::uint64_t quasi_base = 1;  ///< stream index of the first sample in quasi mode
    ObservationForm form = ObservationForm::grid;
    double inverse_cap = default_inverse_cap;
    double value_cap = default_value_cap;

    /// Throws DomainError on violated invariants; also requires theta to have K modes.
    void validate() const;
    /// Root random source (pseudo from seed, or quasi at quasi_base).
    RandomSource root_source() const;
};

struct SampleSet {
    ScenarioConfig config;
    ObservationForm form = ObservationForm::grid;
    std::vector<GridSignal> grid;        ///< used when form == grid
    std::vector<FourierSignal> fourier;  ///< used when form == fourier
    std::vector<double> eta;             ///< per-sample noise draws

    std::size_t size() const { return eta.size(); }
};

struct Observation {
    FourierSignal fourier;  ///< always filled
    GridSignal grid;        ///< filled when the configured form is grid
    double eta = 0.0;
};

/// Noise draw at t0 with the configured sampler.
double draw_noise(const ScenarioConfig& cfg, RandomSource& rng);

/// One transformed signal. Noise enters c0 as +2 eta.
Observation sample_transformed(const ScenarioConfig& cfg, RandomSource& rng);

/// n i.i.d. transformed signals; sample i uses rng.substream(i). The parallel
/// and serial paths are bit-identical.
SampleSet sample_batch(const ScenarioConfig& cfg, const RandomSource& rng,
                       Exec exec = Exec::parallel);
SampleSet sample_batch(const ScenarioConfig& cfg, Exec exec = Exec::parallel);

/// exp(t0 A) theta; the noise is centred.
FourierSignal analytic_mean(const ScenarioConfig& cfg);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Sample mean and unbiased variance of {Z_i(x)}. Grid samples are evaluated
/// at x by band-limited interpolation with the configured K.
Moments empirical_moments(const SampleSet& set, double x);

enum class FrameNoise {
    none,
    path,  ///< one OU trajectory across all frames
    iid    ///< an independent draw per frame
};

struct Frame {
    double t = 0.0;
    GridSignal values;
};

std::vector<Frame> evolve_frames(const ScenarioConfig& cfg, const std::vector<double>& times,
                                 FrameNoise noise, const RandomSource& rng);

}  // namespace oulab
