#include "oulab/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "oulab/error.hpp"

namespace oulab {

FourierSignal sample_mean(const SampleSet& samples, std::size_t K, Exec exec)
{
    const std::size_t n = samples.size();
    if (n == 0) throw DomainError("estimation needs at least one sample");

    if (samples.form == ObservationForm::grid) {
        const std::size_t G = samples.grid.front().size();
        std::vector<const double*> rows(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (samples.grid[i].size() != G) throw DomainError("samples differ in grid size");
            rows[i] = samples.grid[i].values.data();
        }
        GridSignal mean{samples.grid.front().half_period, std::vector<double>(G)};
        if (exec == Exec::parallel)
            kernels::omp::column_mean(rows, mean.values);
        else
            kernels::serial::column_mean(rows, mean.values);
        return extract_coefficients(mean, K, exec);
    }

    FourierSignal acc(samples.fourier.front().half_period(), K);
    for (const auto& z : samples.fourier) acc += z.resized(K);
    return (1.0 / static_cast<double>(n)) * acc.resized(K);
}

Estimate estimate_tn_detailed(const SampleSet& samples, const OperatorSpec& op, double t0,
                              std::size_t K, const InverseOptions& opts, Exec exec)
{
    if (!(t0 > 0.0)) throw DomainError("t0 must be > 0");
    const FourierSignal mean = sample_mean(samples, K, exec);
    InverseResult inv = inverse_propagate_detailed(mean, op, t0, opts);
    return {std::move(inv.signal), samples.size(), inv.amplification_max, std::move(inv.dropped)};
}

FourierSignal estimate_tn(const SampleSet& samples, const OperatorSpec& op, double t0,
                          std::size_t K, const InverseOptions& opts, Exec exec)
{
    return estimate_tn_detailed(samples, op, t0, K, opts, exec).signal;
}

EstimateReport error_report(const FourierSignal& estimate, const FourierSignal& theta,
                            std::size_t probes)
{
    if (estimate.half_period() != theta.half_period())
        throw DomainError("estimate and theta have different half periods");
    if (estimate.mode_count() != theta.mode_count())
        throw DomainError("estimate has " + std::to_string(estimate.mode_count()) +
                          " modes, theta has " + std::to_string(theta.mode_count()));
    EstimateReport r;
    r.estimate = estimate;
    r.sup_error = sup_distance(estimate, theta, probes, Exec::serial);
    r.c0_error = std::fabs(estimate.c0() - theta.c0());
    for (std::size_t k = 1; k <= theta.mode_count(); ++k)
        r.max_mode_error = std::max(r.max_mode_error, std::hypot(estimate.c(k) - theta.c(k),
                                                                 estimate.d(k) - theta.d(k)));
    return r;
}

EstimateReport error_report(const Estimate& estimate, const FourierSignal& theta,
                            std::size_t probes)
{
    EstimateReport r = error_report(estimate.signal, theta, probes);
    r.n_used = estimate.n_used;
    r.amplification_max = estimate.amplification_max;
    return r;
}

namespace {

// |c0|/2 + sum_k |(c_k, d_k)| bounds the sup norm from above.
double sup_upper_bound(const FourierSignal& s)
{
    double b = 0.5 * std::fabs(s.c0());
    for (std::size_t k = 1; k <= s.mode_count(); ++k) b += std::hypot(s.c(k), s.d(k));
    return b;
}

}  // namespace

InfiniteSampleResult infinite_sample_estimate(const ObservationStream& stream,
                                              const OperatorSpec& op, double t0, std::size_t K,
                                              const CauchyOptions& opts)
{
    if (!(opts.epsilon >= 0.0)) throw DomainError("epsilon must be >= 0");
    if (opts.window < 2) throw DomainError("Cauchy window must be >= 2");
    if (opts.n_max < 1) throw DomainError("n_max must be >= 1");

    InfiniteSampleResult res;
    FourierSignal sum;
    FourierSignal previous;
    std::size_t streak = 0;  // consecutive estimates agreeing with their predecessor

    for (std::size_t n = 1; n <= opts.n_max; ++n) {
        FourierSignal z = stream().resized(K);
        if (n == 1)
            sum = std::move(z);
        else
            sum += z;
        FourierSignal current =
            inverse_propagate((1.0 / static_cast<double>(n)) * sum, op, t0, opts.inverse);

        if (n > 1) {
            const FourierSignal gap = current - previous;
            bool close = sup_upper_bound(gap) < opts.epsilon;
            if (!close) close = sup_distance(current, previous, opts.probes, Exec::serial) < opts.epsilon;
            streak = close ? streak + 1 : 0;
        }
        previous = std::move(current);
        res.n_used = n;
        if (streak + 1 >= opts.window) {
            res.converged = true;
            break;
        }
    }
    res.estimate = std::move(previous);
    return res;
}

ObservationStream scenario_stream(const ScenarioConfig& cfg, const RandomSource& root)
{
    cfg.validate();
    const FourierSignal base = analytic_mean(cfg);
    return [cfg, root, base, i = std::uint64_t{0}]() mutable {
        RandomSource sub = root.substream(i++);
        FourierSignal z = base;
        z.set_c0(base.c0() + 2.0 * draw_noise(cfg, sub));
        return z;
    };
}

RandomSource trial_source(const RandomSource& root, std::size_t n, std::size_t trial)
{
    return root.substream(n).substream(trial);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw DomainError("slope needs two or more points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw DomainError("slope needs distinct abscissae");
    return sxy / sxx;
}

ConsistencyTable consistency_experiment(const ScenarioConfig& cfg,
                                        const std::vector<std::size_t>& n_grid,
                                        std::size_t trials, Exec exec)
{
    if (n_grid.empty()) throw DomainError("n grid is empty");
    if (trials < 1) throw DomainError("trials must be >= 1");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) throw DomainError("sample sizes must be >= 1");
        if (i > 0 && n_grid[i] <= n_grid[i - 1])
            throw DomainError("n grid must be strictly ascending");
    }
    cfg.validate();

    const RandomSource root = cfg.root_source();
    ConsistencyTable table;
    table.trials.resize(n_grid.size() * trials);

    std::exception_ptr failure;
    const auto jobs = static_cast<std::ptrdiff_t>(table.trials.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (std::ptrdiff_t job = 0; job < jobs; ++job) {
        try {
            const std::size_t n = n_grid[static_cast<std::size_t>(job) / trials];
            const std::size_t trial = static_cast<std::size_t>(job) % trials;
            ScenarioConfig c = cfg;
            c.n = n;
            const SampleSet set = sample_batch(c, trial_source(root, n, trial), Exec::serial);
            const Estimate est = estimate_tn_detailed(set, c.op, c.t0, c.K,
                                                      estimation_inverse_options(c.inverse_cap),
                                                      Exec::serial);
            const EstimateReport rep = error_report(est, c.theta);
            table.trials[job] = {n, trial, rep.sup_error, rep.c0_error, rep.max_mode_error};
        } catch (...) {
#pragma omp critical(oulab_consistency_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> ns, means;
    bool positive = true;
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
        ConsistencySummary s{n_grid[g], 0.0, 0.0};
        for (std::size_t t = 0; t < trials; ++t) s.mean_error += table.trials[g * trials + t].sup_error;
        s.mean_error /= static_cast<double>(trials);
        if (trials > 1) {
            double ss = 0.0;
            for (std::size_t t = 0; t < trials; ++t) {
                const double e = table.trials[g * trials + t].sup_error - s.mean_error;
                ss += e * e;
            }
            s.sd_error = std::sqrt(ss / static_cast<double>(trials - 1));
        }
        table.summary.push_back(s);
        ns.push_back(static_cast<double>(s.n));
        means.push_back(s.mean_error);
        positive = positive && s.mean_error > 1e-12;
    }
    if (n_grid.size() >= 2 && positive) table.slope = log_log_slope(ns, means);
    return table;
}

}  // namespace oulab
