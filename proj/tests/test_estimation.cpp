#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "oulab/error.hpp"
#include "oulab/estimation.hpp"

using namespace oulab;
using std::numbers::pi;

namespace {

ScenarioConfig ex42(double sigma = 150.0, std::size_t n = 4)
{
    ScenarioConfig cfg;
    cfg.theta = oracle::ex42_theta();
    cfg.op = OperatorSpec({2.0, -1.0, 0.0});
    cfg.noise.sigma = sigma;
    cfg.noise.a0 = 2.0;
    cfg.t0 = pi / 7;
    cfg.n = n;
    cfg.seed = 7;
    return cfg;
}

SampleSet fourier_set(const ScenarioConfig& cfg, std::vector<FourierSignal> obs)
{
    SampleSet s;
    s.config = cfg;
    s.form = ObservationForm::fourier;
    s.eta.assign(obs.size(), 0.0);
    s.fourier = std::move(obs);
    return s;
}

}  // namespace

TEST_CASE("noise-free observations are inverted exactly")
{
    for (auto form : {ObservationForm::grid, ObservationForm::fourier}) {
        auto cfg = ex42(0.0, 5);
        cfg.form = form;
        const auto set = sample_batch(cfg);
        const auto rep = error_report(estimate_tn_detailed(set, cfg.op, cfg.t0, cfg.K), cfg.theta);
        CHECK(rep.sup_error < 1e-10);
        CHECK(rep.n_used == 5);
    }
}

TEST_CASE("a single observation errs only by 2 e^{-A0 t0} eta in c0")
{
    auto cfg = ex42(150.0, 1);
    cfg.form = ObservationForm::fourier;
    const auto set = sample_batch(cfg);
    const auto rep = error_report(estimate_tn(set, cfg.op, cfg.t0, cfg.K), cfg.theta);
    const double expected = 2 * std::exp(-2 * pi / 7) * std::fabs(set.eta[0]);
    CHECK(rep.c0_error == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rep.max_mode_error < 1e-10);
    // The constant term contributes c0 / 2 to the function.
    CHECK(rep.sup_error == doctest::Approx(expected / 2).epsilon(1e-6));
}

TEST_CASE("error_report")
{
    const auto theta = oracle::ex42_theta();
    const auto rep = error_report(theta, theta);
    CHECK(rep.sup_error == 0.0);
    CHECK(rep.c0_error == 0.0);
    CHECK(rep.max_mode_error == 0.0);

    auto off = theta;
    off.set_mode(3, 0.3, -0.4);
    CHECK(error_report(off, theta).max_mode_error == doctest::Approx(0.5));

    CHECK_THROWS_AS(error_report(FourierSignal(2.0, 20), theta), DomainError);
    CHECK_THROWS_AS(error_report(FourierSignal(pi, 10), theta), DomainError);
}

TEST_CASE("estimate is permutation invariant and linear in the samples")
{
    std::mt19937_64 gen(17);
    auto cfg = ex42();
    std::vector<FourierSignal> obs;
    for (int i = 0; i < 6; ++i) obs.push_back(oracle::random_signal(gen, 20));
    const auto base = estimate_tn(fourier_set(cfg, obs), cfg.op, cfg.t0, 20);

    auto shuffled = obs;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    CHECK(oracle::coeff_distance(estimate_tn(fourier_set(cfg, shuffled), cfg.op, cfg.t0, 20), base) < 1e-12);

    auto scaled = obs;
    for (auto& s : scaled) s *= 3.0;
    CHECK(oracle::coeff_distance(estimate_tn(fourier_set(cfg, scaled), cfg.op, cfg.t0, 20), 3.0 * base) < 1e-11);

    // Averaging then inverting equals inverting then averaging.
    FourierSignal acc(pi, 20);
    for (const auto& s : obs) acc += inverse_propagate(s, cfg.op, cfg.t0);
    acc *= 1.0 / obs.size();
    CHECK(oracle::coeff_distance(acc, base) < 1e-11);
}

TEST_CASE("noise error is localized in c0")
{
    auto cfg = ex42(150.0, 50);
    const auto set = sample_batch(cfg);
    const auto rep = error_report(estimate_tn_detailed(set, cfg.op, cfg.t0, cfg.K), cfg.theta);
    double m = 0;
    for (double e : set.eta) m += e;
    m /= set.size();
    CHECK(rep.c0_error == doctest::Approx(2 * std::exp(-2 * pi / 7) * std::fabs(m)).epsilon(1e-8));
    CHECK(rep.max_mode_error < 1e-9);
}

TEST_CASE("ill-conditioned modes are dropped under the estimation default")
{
    // Heat-type operator: forward gain e^{2 - k^2}, so the inverse gain e^{k^2 - 2}
    // exceeds 1e12 from k = 6 on. Observations carry every mode.
    const OperatorSpec op({2.0, 0.0, 1.0});
    FourierSignal z(pi, 20);
    for (std::size_t k = 1; k <= 20; ++k) z.set_mode(k, 1.0, 0.5);
    auto cfg = ex42(0.0, 2);
    const auto set = fourier_set(cfg, {z, z});
    const auto est = estimate_tn_detailed(set, op, 1.0, 20);
    CHECK(est.dropped_modes.size() == 15);
    CHECK(est.dropped_modes.front() == 6);
    CHECK(est.amplification_max == doctest::Approx(std::exp(23.0)));
    CHECK(est.signal.c(6) == 0.0);
    CHECK(est.signal.c(1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(est.signal.c(5) == doctest::Approx(std::exp(23.0)).epsilon(1e-14));
    CHECK_THROWS_AS(estimate_tn(set, op, 1.0, 20, {1e12, CapPolicy::reject}), NumericError);
}

TEST_CASE("infinite-sample estimate")
{
    SUBCASE("noise-free stream converges once the window fills")
    {
        auto cfg = ex42(0.0);
        CauchyOptions o;
        o.window = 3;
        const auto r = infinite_sample_estimate(scenario_stream(cfg, cfg.root_source()), cfg.op, cfg.t0, 20, o);
        CHECK(r.converged);
        CHECK(r.n_used == 3);
        CHECK(error_report(r.estimate, cfg.theta).sup_error < 1e-10);
    }
    SUBCASE("epsilon zero never converges")
    {
        auto cfg = ex42(1.0);
        CauchyOptions o;
        o.epsilon = 0.0;
        o.n_max = 50;
        const auto r = infinite_sample_estimate(scenario_stream(cfg, cfg.root_source()), cfg.op, cfg.t0, 20, o);
        CHECK_FALSE(r.converged);
        CHECK(r.n_used == 50);
    }
    SUBCASE("noisy stream converges near theta")
    {
        auto cfg = ex42(1.0);
        CauchyOptions o;
        o.epsilon = 1e-3;
        o.window = 5;
        o.n_max = 100000;
        const auto r = infinite_sample_estimate(scenario_stream(cfg, cfg.root_source()), cfg.op, cfg.t0, 20, o);
        CHECK(r.converged);
        CHECK(error_report(r.estimate, cfg.theta).sup_error < 0.2);
    }
}

TEST_CASE("consistency experiment")
{
    SUBCASE("noise-free errors vanish and the slope is undefined")
    {
        const auto t = consistency_experiment(ex42(0.0), {10, 100}, 3);
        CHECK(t.trials.size() == 6);
        for (const auto& r : t.trials) CHECK(r.sup_error < 1e-10);
        CHECK_FALSE(t.slope.has_value());
    }
    SUBCASE("unsorted or empty grid is rejected")
    {
        CHECK_THROWS_AS(consistency_experiment(ex42(), {100, 10}, 3), DomainError);
        CHECK_THROWS_AS(consistency_experiment(ex42(), {10, 10}, 3), DomainError);
        CHECK_THROWS_AS(consistency_experiment(ex42(), {}, 3), DomainError);
        CHECK_THROWS_AS(consistency_experiment(ex42(), {10}, 0), DomainError);
    }
    SUBCASE("one trial has zero spread")
    {
        const auto t = consistency_experiment(ex42(), {10, 100}, 1);
        for (const auto& s : t.summary) CHECK(s.sd_error == 0.0);
    }
    SUBCASE("parallel equals serial and the records are ordered")
    {
        const auto a = consistency_experiment(ex42(), {10, 40, 160}, 8, Exec::parallel);
        const auto b = consistency_experiment(ex42(), {10, 40, 160}, 8, Exec::serial);
        REQUIRE(a.trials.size() == b.trials.size());
        for (std::size_t i = 0; i < a.trials.size(); ++i) {
            CHECK(a.trials[i].n == b.trials[i].n);
            CHECK(a.trials[i].trial == b.trials[i].trial);
            CHECK(a.trials[i].sup_error == b.trials[i].sup_error);
        }
        CHECK(a.trials[0].n == 10);
        CHECK(a.trials.back().n == 160);
        CHECK(*a.slope == *b.slope);
    }
    SUBCASE("error scales linearly with sigma on a fixed seed")
    {
        const auto a = consistency_experiment(ex42(150.0), {10, 100}, 5);
        const auto b = consistency_experiment(ex42(300.0), {10, 100}, 5);
        for (std::size_t i = 0; i < a.trials.size(); ++i)
            CHECK(b.trials[i].c0_error == doctest::Approx(2 * a.trials[i].c0_error).epsilon(1e-9));
    }
}

TEST_CASE("log_log_slope")
{
    CHECK(log_log_slope({1, 10, 100}, {1, 0.1, 0.01}) == doctest::Approx(-1.0));
    CHECK(log_log_slope({4, 16}, {1, 0.5}) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(log_log_slope({1}, {1}), DomainError);
}
