// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <omp.h>

#include "oracles.hpp"
#include "oulab/cli.hpp"
#include "oulab/config.hpp"
#include "oulab/estimation.hpp"
#include "oulab/verify.hpp"

using namespace oulab;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

// Frozen oracles (30-digit mpmath evaluations of the closed forms).
constexpr double ex42_variance = 4690.71603317693991753;        // 150^2/4 (1 - e^{-4 pi/7})
constexpr double half_normal_mean_1e4 = 0.222709025348350988;    // e^{-2pi/7} sqrt(2 v / (pi 1e4))

// Largest k >= 1 mode error seen by any estimation run in this suite.
double worst_mode_error = 0.0;
std::size_t estimation_runs = 0;

void note_mode_error(double e)
{
    worst_mode_error = std::max(worst_mode_error, e);
    ++estimation_runs;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

int failures = 0;

void criterion(int id, const std::string& name, double time_limit, const std::function<Outcome()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit > 0 && secs > time_limit) {
        o.pass = false;
        o.detail += fmt("; over the %.0f s budget", time_limit);
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

ScenarioConfig ex42_scenario(std::uint64_t seed)
{
    auto c = load_config("ex42").scenario;
    c.seed = seed;
    return c;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// 1. Variance and covariance of the exact sampler.
Outcome moment_fidelity()
{
    auto cfg = ex42_scenario(2024);
    const auto checks = verify_moments(cfg, 100000, default_covariance_pairs(cfg.t0));
    bool ok = checks.size() == 6;
    std::string worst;
    double worst_z = 0;
    for (const auto& c : checks) {
        if (c.check == "series_variance") continue;
        if (c.check == "variance" && std::fabs(c.analytic - ex42_variance) > 1e-9 * ex42_variance) ok = false;
        const double z = std::fabs(c.empirical - c.analytic) / c.std_error;
        ok = ok && z <= 3.0;
        if (z >= worst_z) {
            worst_z = z;
            worst = c.check;
        }
    }
    return {ok, std::to_string(checks.size()) + " checks, worst |z| = " + fmt("%.2f", worst_z) + " (" + worst + ")"};
}

// 2. Spectral propagation against transport along characteristics.
Outcome propagator()
{
    const OperatorSpec op({2.0, -1.0, 0.0});
    std::mt19937_64 gen(2);
    std::vector<FourierSignal> thetas{oracle::ex42_theta()};
    for (int i = 0; i < 10; ++i) thetas.push_back(oracle::random_signal(gen, 1 + gen() % 20, pi, 1.0));
    double worst = 0;
    for (const auto& theta : thetas)
        for (double t : {0.1, pi / 7, 1.0}) {
            const auto p = propagate(theta, op, t);
            for (int i = 0; i < 4096; ++i) {
                const double x = -pi + 2 * pi * i / 4096.0;
                worst = std::max(worst, std::fabs(evaluate(p, x) - std::exp(2 * t) * oracle::series_value(theta, x - t)));
            }
        }
    return {worst < 1e-9, fmt("sup error %.3g over %g signals x 3 times x 4096 points", worst, thetas.size())};
}

// 3. Inversion and grid quadrature round trips.
Outcome round_trips()
{
    const OperatorSpec op({2.0, -1.0, 0.0});
    std::mt19937_64 gen(3);
    double inv = 0, quad = 0;
    for (int i = 0; i < 100; ++i) {
        const auto s = oracle::random_signal(gen, 20);
        inv = std::max(inv, oracle::coeff_distance(inverse_propagate(propagate(s, op, pi / 7), op, pi / 7), s));
        for (std::size_t G : {41u, 200u})
            quad = std::max(quad, oracle::coeff_distance(extract_coefficients(evaluate_grid(s, G), 20), s));
    }
    return {inv < 1e-10 && quad < 1e-10, fmt("inverse %.3g, quadrature %.3g over 100 signals", inv, quad)};
}

// 4. Noise-free estimation is exact.
Outcome exactness()
{
    std::vector<ScenarioConfig> cases;
    auto base = ex42_scenario(4);
    base.noise.sigma = 0.0;
    cases.push_back(base);
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // Random scenarios with inverse gain at most 1e6: grid values carry eps
    // relative rounding, which the inversion multiplies by the gain, so
    // 1e-9 exactness is only meaningful for moderately conditioned draws.
    std::size_t redrawn = 0;
    while (cases.size() < 21) {
        ScenarioConfig c;
        c.K = 5 + gen() % 16;
        c.G = 2 * c.K + 1 + gen() % 100;
        c.theta = oracle::random_signal(gen, c.K, 0.5 + 3 * u(gen), 5.0);
        const double a0 = 0.2 + 2 * u(gen);
        c.op = OperatorSpec({a0, 4 * u(gen) - 2, 0.01 * u(gen)});
        c.noise.a0 = a0;
        c.noise.sigma = 0.0;
        c.t0 = 0.05 + u(gen);
        c.n = 1 + gen() % 8;
        c.form = cases.size() % 2 ? ObservationForm::grid : ObservationForm::fourier;
        c.seed = gen();
        if (stability_report(c.op, c.K, c.theta.half_period(), c.t0, c.inverse_cap).max_inverse_gain > 1e6) {
            ++redrawn;
            continue;
        }
        cases.push_back(c);
    }
    double worst = 0;
    for (const auto& c : cases) {
        c.validate();
        const auto rep = error_report(estimate_tn_detailed(sample_batch(c), c.op, c.t0, c.K), c.theta);
        worst = std::max(worst, rep.sup_error);
        note_mode_error(rep.max_mode_error);
    }
    return {worst < 1e-9, fmt("worst sup error %.3g over %g scenarios (%g draws with inverse gain > 1e6 redrawn)", worst,
                              cases.size(), redrawn)};
}

// 5. 1/sqrt(n) rate and the half-normal level at n = 1e4.
Outcome consistency()
{
    const auto cfg = ex42_scenario(5);
    const auto t = consistency_experiment(cfg, {100, 1000, 10000}, 50);
    for (const auto& r : t.trials) note_mode_error(r.max_mode_error);
    const auto& last = t.summary.back();
    const double se = last.sd_error / std::sqrt(50.0);
    const bool slope_ok = t.slope && *t.slope >= -0.6 && *t.slope <= -0.4;
    const bool level_ok = std::fabs(last.mean_error - half_normal_mean_1e4) <= 3 * se;
    return {slope_ok && level_ok,
            fmt("slope %.4f, mean error at n=1e4 %.4f vs %.4f (3 SE = %.4f)", t.slope.value_or(NAN),
                last.mean_error, half_normal_mean_1e4, 3 * se)};
}

// 6. Everything the estimator got wrong sits in c0.
Outcome localization()
{
    return {estimation_runs > 0 && worst_mode_error < 1e-9,
            fmt("max k>=1 mode error %.3g over %g estimation runs", worst_mode_error, estimation_runs)};
}

// 7. Error scales with sigma; independent seeds for the two levels.
Outcome sigma_linearity()
{
    double mean[2];
    const double sigmas[2] = {150.0, 1500.0};
    for (int j = 0; j < 2; ++j) {
        auto cfg = ex42_scenario(700 + j);
        cfg.noise.sigma = sigmas[j];
        const auto t = consistency_experiment(cfg, {10}, 200);
        for (const auto& r : t.trials) note_mode_error(r.max_mode_error);
        mean[j] = t.summary[0].mean_error;
    }
    const double ratio = mean[1] / mean[0];
    return {std::fabs(ratio - 10.0) <= 1.5,
            fmt("mean sup error %.4g (sigma 150) and %.4g (sigma 1500), ratio %.3f", mean[0], mean[1], ratio)};
}

// 8. Series sampler against the exact variance, and the paper_faithful variant scaling.
Outcome series_agreement()
{
    struct Case {
        double a0, t0;
    };
    std::string detail;
    bool ok = true;
    for (Case k : {Case{0.5, 0.4}, Case{2.0, 0.15}}) {
        ScenarioConfig cfg;
        cfg.noise.sigma = 1.0;
        cfg.noise.a0 = k.a0;
        cfg.t0 = k.t0;
        cfg.sampler = NoiseSampler::series;
        const RandomSource root = RandomSource::pseudo(800);
        constexpr std::size_t n = 100000;
        std::vector<double> matched(n), faithful(n);
        cfg.series_variant = SeriesVariant::variance_matched;
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < n; ++i) {
            RandomSource r = root.substream(i);
            matched[i] = draw_noise(cfg, r);
        }
        const auto [v, se] = variance_with_se(matched);
        const double analytic = noise_variance(cfg.noise, k.t0);
        const double z = std::fabs(v - analytic) / se;

        cfg.series_variant = SeriesVariant::paper_faithful;
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < n; ++i) {
            RandomSource r = root.substream(i);
            faithful[i] = draw_noise(cfg, r);
        }
        const double sd_ratio = std::sqrt(variance_with_se(faithful).first / analytic);
        const double expected = 1.0 / std::sqrt(2 * k.a0);
        const bool case_ok = z <= 3.0 && std::fabs(sd_ratio / expected - 1.0) <= 0.01;
        ok = ok && case_ok;
        if (!detail.empty()) detail += "; ";
        detail += fmt("A0=%g t0=%g: |z|=%.2f, ", k.a0, k.t0, z);
        detail += fmt("sd ratio %.4f vs %.4f", sd_ratio, expected);
    }
    return {ok, detail};
}

// 9. Manifest replay and serial/parallel equality.
Outcome reproducibility()
{
    const fs::path root = fs::temp_directory_path() / "oulab_acceptance";
    fs::remove_all(root);
    const std::vector<std::vector<std::string>> runs{
        {"spectrum", "--config", "ex42"},
        {"evolve", "--config", "ex41", "--noise", "path"},
        {"sample", "--config", "ex42"},
        {"estimate", "--config", "ex43"},
        {"estimate", "--config", "ex42", "--infinite", "--epsilon", "0.5"},
        {"verify", "--config", "ex42", "--samples", "20000"},
        {"convergence", "--config", "ex42", "--n-grid", "10,100", "--trials", "5"},
    };
    std::size_t compared = 0;
    std::ostringstream sink;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const fs::path a = root / ("run" + std::to_string(i)), b = root / ("replay" + std::to_string(i));
        auto args = runs[i];
        args.insert(args.end(), {"--seed", std::to_string(900 + i), "--out", a.string()});
        if (cli::run(args, sink, sink) != 0) return {false, "run failed: " + runs[i][0]};
        const auto manifest = a / (runs[i][0] + ".manifest.json");
        if (cli::run({runs[i][0], "--config", manifest.string(), "--out", b.string()}, sink, sink) != 0)
            return {false, "replay failed: " + runs[i][0]};
        const auto m = nlohmann::json::parse(slurp(manifest));
        for (const auto& out : m["outputs"]) {
            const std::string name = out.get<std::string>();
            if (slurp(a / name) != slurp(b / name) || slurp(a / name).empty())
                return {false, "replay differs: " + runs[i][0] + "/" + name};
            ++compared;
        }
    }
    fs::remove_all(root);

    // The same binary as a subprocess gives the same bytes as the in-process run.
    const fs::path c = root / "binary", d = root / "inproc";
    const std::string cmd = std::string(OULAB_CLI_PATH) + " sample --config ex42 --seed 77 --out " + c.string() +
                            " > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "binary run failed"};
    cli::run({"sample", "--config", "ex42", "--seed", "77", "--out", d.string()}, sink, sink);
    if (slurp(c / "samples.csv") != slurp(d / "samples.csv")) return {false, "binary and in-process differ"};
    fs::remove_all(root);

    omp_set_num_threads(4);
    std::size_t sets = 0;
    for (auto form : {ObservationForm::grid, ObservationForm::fourier}) {
        auto cfg = ex42_scenario(99);
        cfg.n = 1000;
        cfg.form = form;
        const auto p = sample_batch(cfg, Exec::parallel), s = sample_batch(cfg, Exec::serial);
        if (p.eta != s.eta) return {false, "parallel and serial eta differ"};
        for (std::size_t i = 0; i < p.size(); ++i) {
            const bool same = form == ObservationForm::grid
                                  ? p.grid[i].values == s.grid[i].values
                                  : p.fourier[i].c0() == s.fourier[i].c0() &&
                                        p.fourier[i].cos_coefficients() == s.fourier[i].cos_coefficients() &&
                                        p.fourier[i].sin_coefficients() == s.fourier[i].sin_coefficients();
            if (!same) return {false, "parallel and serial samples differ"};
        }
        ++sets;
    }
    return {true, std::to_string(compared) + " replayed CSVs identical over " + std::to_string(runs.size()) +
                      " commands; binary matches in-process; " + std::to_string(sets) +
                      " sample sets identical serial vs 4 threads"};
}

}  // namespace

int main()
{
    std::printf("oulab acceptance suite (%s, %d OpenMP threads)\n", cli::version().c_str(), omp_get_max_threads());
    criterion(1, "moment fidelity", 10.0, moment_fidelity);
    criterion(2, "propagator vs characteristics", 1.0, propagator);
    criterion(3, "round trips", 1.0, round_trips);
    criterion(4, "noise-free exactness", 1.0, exactness);
    criterion(5, "consistency rate", 120.0, consistency);
    criterion(7, "sigma linearity", 30.0, sigma_linearity);
    criterion(8, "series vs exact sampler", 0.0, series_agreement);
    criterion(6, "error localization", 0.0, localization);
    criterion(9, "reproducibility", 0.0, reproducibility);
    std::printf("%s: %d of 9 criteria failed\n", failures ? "FAILED" : "PASSED", failures);
    return failures ? 1 : 0;
}
