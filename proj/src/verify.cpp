#include "oulab/verify.hpp"

#include <algorithm>
#include <cmath>

#include "oulab/error.hpp"

namespace oulab {

std::pair<double, double> variance_with_se(const std::vector<double>& x)
{
    return covariance_with_se(x, x);
}

std::pair<double, double> covariance_with_se(const std::vector<double>& x,
                                             const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw DomainError("covariance needs two equal samples of size >= 2");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sp = 0.0;
    for (std::size_t i = 0; i < n; ++i) sp += (x[i] - mx) * (y[i] - my);
    const double cov = sp / static_cast<double>(n - 1);
    const double mp = sp / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = (x[i] - mx) * (y[i] - my) - mp;
        ss += e * e;
    }
    const double se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    return {cov, se};
}

std::vector<std::pair<double, double>> default_covariance_pairs(double t0)
{
    const double q = 0.25 * t0;
    return {{q, 2 * q}, {q, t0}, {2 * q, 3 * q}, {2 * q, t0}, {3 * q, t0}};
}

namespace {

MomentCheck judge(std::string name, double s, double t, double analytic, double empirical,
                  double se)
{
    // The absolute floor covers the noiseless case where every term is zero.
    const bool pass = std::fabs(empirical - analytic) <= 3.0 * se + 1e-12 * (1.0 + std::fabs(analytic));
    return {std::move(name), s, t, analytic, empirical, se, pass};
}

}  // namespace

std::vector<MomentCheck> verify_moments(const ScenarioConfig& cfg, std::size_t draws,
                                        const std::vector<std::pair<double, double>>& pairs,
                                        Exec exec)
{
    if (draws < 2) throw DomainError("verification needs at least two draws");
    cfg.noise.validate();
    if (!(cfg.t0 > 0.0)) throw DomainError("t0 must be > 0");

    std::vector<double> times{cfg.t0};
    for (const auto& [s, t] : pairs) {
        if (!(s > 0.0) || !(t > 0.0)) throw DomainError("covariance times must be > 0");
        times.push_back(s);
        times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const std::size_t T = times.size();
    auto index_of = [&](double v) {
        return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), v) - times.begin());
    };

    const RandomSource root = cfg.root_source();
    const bool series_ok = cfg.noise.kernel == Kernel::mean_reverting &&
                           std::expm1(2.0 * cfg.noise.a0 * cfg.t0) <= 1.0;

    std::vector<double> exact(draws), series(series_ok ? draws : 0);
    std::vector<std::vector<double>> path(T, std::vector<double>(draws));
    const auto N = static_cast<std::ptrdiff_t>(draws);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (std::ptrdiff_t i = 0; i < N; ++i) {
        const RandomSource base = root.substream(static_cast<std::uint64_t>(i));
        RandomSource a = base.substream(0);
        exact[i] = ou_integral_exact(cfg.noise, cfg.t0, a);
        RandomSource b = base.substream(1);
        const std::vector<double> p = ou_path(cfg.noise, times, b);
        for (std::size_t j = 0; j < T; ++j) path[j][i] = p[j];
        if (series_ok) {
            RandomSource c = base.substream(2);
            std::vector<double> x(cfg.noise.series_terms + 1);
            c.fill_gaussian(x);
            series[i] = ou_integral_series(cfg.noise, cfg.t0, x, SeriesVariant::variance_matched);
        }
    }

    std::vector<MomentCheck> out;
    const double v = noise_variance(cfg.noise, cfg.t0);
    {
        const auto [emp, se] = variance_with_se(exact);
        out.push_back(judge("variance", cfg.t0, cfg.t0, v, emp, se));
    }
    for (const auto& [s, t] : pairs) {
        const auto [emp, se] = covariance_with_se(path[index_of(s)], path[index_of(t)]);
        out.push_back(judge("covariance", s, t, noise_covariance(cfg.noise, s, t), emp, se));
    }
    if (series_ok) {
        const auto [emp, se] = variance_with_se(series);
        out.push_back(judge("series_variance", cfg.t0, cfg.t0, v, emp, se));
    }
    return out;
}

}  // namespace oulab
