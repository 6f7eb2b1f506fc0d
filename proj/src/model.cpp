#include "oulab/model.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <string>

#include "oulab/error.hpp"

namespace oulab {

void ScenarioConfig::validate() const
{
    if (!(t0 > 0.0) || !std::isfinite(t0)) throw DomainError("t0 must be > 0");
    if (n < 1) throw DomainError("sample size n must be >= 1");
    if (K < 1) throw DomainError("mode count K must be >= 1");
    if (G < 2 * K + 1)
        throw DomainError("grid size G = " + std::to_string(G) + " must be >= 2K+1 = " +
                          std::to_string(2 * K + 1));
    if (theta.mode_count() != K)
        throw DomainError("theta has " + std::to_string(theta.mode_count()) +
                          " modes but K = " + std::to_string(K));
    theta.check_finite();
    noise.validate();
    if (noise.a0 != op.a0()) throw DomainError("noise a0 must equal the operator's A_0");
    if (quasi && quasi_base < 1) throw DomainError("quasi stream base must be >= 1");
    if (!(inverse_cap > 1.0)) throw DomainError("inverse cap must be > 1");
}

RandomSource ScenarioConfig::root_source() const
{
    return quasi ? RandomSource::quasi(quasi_base) : RandomSource::pseudo(seed);
}

double draw_noise(const ScenarioConfig& cfg, RandomSource& rng)
{
    if (cfg.sampler == NoiseSampler::exact) return ou_integral_exact(cfg.noise, cfg.t0, rng);
    std::vector<double> x(cfg.noise.series_terms + 1);
    rng.fill_gaussian(x);
    return ou_integral_series(cfg.noise, cfg.t0, x, cfg.series_variant);
}

Observation sample_transformed(const ScenarioConfig& cfg, RandomSource& rng)
{
    cfg.validate();
    Observation obs;
    obs.eta = draw_noise(cfg, rng);
    obs.fourier = propagate(cfg.theta, cfg.op, cfg.t0, cfg.value_cap);
    // Stored c0 is twice the constant term.
    obs.fourier.set_c0(obs.fourier.c0() + 2.0 * obs.eta);
    if (cfg.form == ObservationForm::grid)
        obs.grid = evaluate_grid(obs.fourier, cfg.G, Exec::serial);
    return obs;
}

SampleSet sample_batch(const ScenarioConfig& cfg, const RandomSource& rng, Exec exec)
{
    cfg.validate();
    const FourierSignal base = propagate(cfg.theta, cfg.op, cfg.t0, cfg.value_cap);

    SampleSet set;
    set.config = cfg;
    set.form = cfg.form;
    set.eta.resize(cfg.n);

    GridSignal base_grid;
    if (cfg.form == ObservationForm::grid) {
        base_grid = evaluate_grid(base, cfg.G, exec);
        set.grid.assign(cfg.n, GridSignal{base_grid.half_period, {}});
    } else {
        set.fourier.assign(cfg.n, base);
    }

    std::exception_ptr failure;
    const auto n = static_cast<std::ptrdiff_t>(cfg.n);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            RandomSource sub = rng.substream(static_cast<std::uint64_t>(i));
            const double eta = draw_noise(cfg, sub);
            set.eta[i] = eta;
            if (cfg.form == ObservationForm::grid) {
                auto& vals = set.grid[i].values;
                vals = base_grid.values;
                for (double& v : vals) v += eta;
            } else {
                set.fourier[i].set_c0(base.c0() + 2.0 * eta);
            }
        } catch (...) {
#pragma omp critical(oulab_sample_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return set;
}

SampleSet sample_batch(const ScenarioConfig& cfg, Exec exec)
{
    return sample_batch(cfg, cfg.root_source(), exec);
}

FourierSignal analytic_mean(const ScenarioConfig& cfg)
{
    return propagate(cfg.theta, cfg.op, cfg.t0, cfg.value_cap);
}

Moments empirical_moments(const SampleSet& set, double x)
{
    const std::size_t n = set.size();
    if (n < 2) throw DomainError("empirical moments need at least two samples");

    std::vector<double> z(n);
    if (set.form == ObservationForm::fourier) {
        for (std::size_t i = 0; i < n; ++i) z[i] = evaluate(set.fourier[i], x);
    } else {
        // Band-limited interpolation: w_g(x) = (1 + 2 sum_k cos(k pi (x - x_g) / l)) / G.
        const std::size_t G = set.grid.front().size();
        const double l = set.grid.front().half_period;
        const std::size_t K = std::min(set.config.K, (G - 1) / 2);
        std::vector<double> w(G);
        for (std::size_t g = 0; g < G; ++g) {
            const double a = std::numbers::pi * (x - set.grid.front().node(g)) / l;
            double s = 1.0;
            for (std::size_t k = 1; k <= K; ++k) s += 2.0 * std::cos(static_cast<double>(k) * a);
            w[g] = s / static_cast<double>(G);
        }
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (std::size_t g = 0; g < G; ++g) v += w[g] * set.grid[i].values[g];
            z[i] = v;
        }
    }

    Moments m;
    for (double v : z) m.mean += v;
    m.mean /= static_cast<double>(n);
    for (double v : z) m.variance += (v - m.mean) * (v - m.mean);
    m.variance /= static_cast<double>(n - 1);
    return m;
}

std::vector<Frame> evolve_frames(const ScenarioConfig& cfg, const std::vector<double>& times,
                                 FrameNoise noise, const RandomSource& rng)
{
    double prev = 0.0;
    for (double t : times) {
        if (!(t >= prev) || !std::isfinite(t))
            throw DomainError("frame times must be sorted, finite and non-negative");
        prev = t;
    }

    std::vector<double> eta(times.size(), 0.0);
    if (noise == FrameNoise::path) {
        RandomSource path_rng = rng;
        eta = ou_path(cfg.noise, times, path_rng);
    } else if (noise == FrameNoise::iid) {
        for (std::size_t f = 0; f < times.size(); ++f) {
            RandomSource sub = rng.substream(f);
            eta[f] = std::sqrt(noise_variance(cfg.noise, times[f])) * sub.next_gaussian();
        }
    }

    std::vector<Frame> frames;
    frames.reserve(times.size());
    for (std::size_t f = 0; f < times.size(); ++f) {
        FourierSignal s = propagate(cfg.theta, cfg.op, times[f], cfg.value_cap);
        s.set_c0(s.c0() + 2.0 * eta[f]);
        frames.push_back({times[f], evaluate_grid(s, cfg.G)});
    }
    return frames;
}

}  // namespace oulab
