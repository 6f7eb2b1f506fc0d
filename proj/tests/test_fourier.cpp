#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "oulab/error.hpp"
#include "oulab/fourier.hpp"

using namespace oulab;
using std::numbers::pi;

TEST_CASE("evaluate: constant and example signals")
{
    FourierSignal constant(pi, 1.0, {}, {});
    CHECK(evaluate(constant, 0.37) == doctest::Approx(0.5).epsilon(1e-15));

    CHECK(evaluate(oracle::ex42_theta(), 0.0) == doctest::Approx(5.5).epsilon(1e-15));

    FourierSignal s(pi, 3);
    s.set_mode(3, 2.0, 0.0);
    CHECK(std::fabs(evaluate(s, pi / 3) - (-2.0)) < 1e-14);
}

TEST_CASE("evaluate_grid: hand-computed grids")
{
    FourierSignal two(pi, 2.0, {}, {});
    const GridSignal g = evaluate_grid(two, 4);
    REQUIRE(g.size() == 4);
    for (double v : g.values) CHECK(v == 1.0);

    FourierSignal cosx(pi, 1);
    cosx.set_mode(1, 1.0, 0.0);
    const GridSignal h = evaluate_grid(cosx, 4);
    const double expected[] = {-1.0, 0.0, 1.0, 0.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::fabs(h.values[i] - expected[i]) < 1e-15);
    CHECK(h.node(0) == -pi);
    CHECK(h.node(2) == 0.0);

    const auto theta = oracle::ex42_theta();
    const GridSignal e = evaluate_grid(theta, 200);
    for (std::size_t i = 0; i < e.size(); ++i)
        CHECK(std::fabs(e.values[i] - evaluate(theta, e.node(i))) < 1e-12);

    CHECK_THROWS_AS(evaluate_grid(theta, 0), DomainError);
}

TEST_CASE("extract_coefficients: exact recovery")
{
    SUBCASE("constant grid")
    {
        GridSignal g{pi, std::vector<double>(9, 3.0)};
        const auto s = extract_coefficients(g, 2);
        CHECK(s.c0() == doctest::Approx(6.0).epsilon(1e-15));
        for (std::size_t k = 1; k <= 2; ++k) {
            CHECK(std::fabs(s.c(k)) < 1e-15);
            CHECK(std::fabs(s.d(k)) < 1e-15);
        }
    }
    SUBCASE("example signal on 200 points")
    {
        const auto s = extract_coefficients(evaluate_grid(oracle::ex42_theta(), 200), 20);
        CHECK(std::fabs(s.c0() - 1.0) < 1e-10);
        CHECK(std::fabs(s.c(1) - 5.0) < 1e-10);
        CHECK(std::fabs(s.d(5) - 5.0) < 1e-10);
        for (std::size_t k = 1; k <= 20; ++k) {
            if (k != 1) CHECK(std::fabs(s.c(k)) < 1e-10);
            if (k != 5) CHECK(std::fabs(s.d(k)) < 1e-10);
        }
    }
    SUBCASE("cos 3x on the minimal 7-point grid matches brute-force inner products")
    {
        GridSignal g{pi, std::vector<double>(7)};
        for (std::size_t i = 0; i < 7; ++i) g.values[i] = std::cos(3.0 * g.node(i));
        const auto s = extract_coefficients(g, 3);
        for (std::size_t k = 1; k <= 3; ++k) {
            double ck = 0, dk = 0;
            oracle::inner_products(g.values, pi, k, ck, dk);
            CHECK(std::fabs(s.c(k) - ck) < 1e-13);
            CHECK(std::fabs(s.d(k) - dk) < 1e-13);
        }
        CHECK(std::fabs(s.c(3) - 1.0) < 1e-12);
        CHECK(std::fabs(s.c0()) < 1e-12);
        CHECK(std::fabs(s.c(1)) < 1e-12);
        CHECK(std::fabs(s.d(2)) < 1e-12);
    }
}

TEST_CASE("extract_coefficients rejects aliasing grids")
{
    GridSignal g{pi, std::vector<double>(40, 1.0)};
    CHECK_THROWS_AS(extract_coefficients(g, 20), DomainError);
    g.values.resize(41, 1.0);
    CHECK_NOTHROW(extract_coefficients(g, 20));
}

TEST_CASE("round trip through the grid for random signals and half periods")
{
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t K = 1 + gen() % 25;
        const double l = trial % 2 ? pi : 0.5 + (gen() % 100) / 10.0;
        const auto s = oracle::random_signal(gen, K, l);
        for (std::size_t G : {2 * K + 1, 2 * K + 2, std::size_t{200}}) {
            const auto back = extract_coefficients(evaluate_grid(s, G), K);
            CHECK(oracle::coeff_distance(back, s) < 1e-10);
        }
    }
}

TEST_CASE("evaluate agrees with the long-double oracle, is periodic and linear")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> ux(-10 * pi, 10 * pi);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = oracle::random_signal(gen, 20);
        const auto r = oracle::random_signal(gen, 20);
        const double alpha = 1.7, beta = -0.3;
        const auto combo = alpha * s + beta * r;
        for (int i = 0; i < 20; ++i) {
            const double x = ux(gen);
            CHECK(std::fabs(evaluate(s, x) - oracle::series_value(s, x)) < 1e-11);
            CHECK(std::fabs(evaluate(s, x) - evaluate(s, x + 2 * pi)) < 1e-12);
            CHECK(std::fabs(evaluate(combo, x) - (alpha * evaluate(s, x) + beta * evaluate(r, x))) < 1e-12);
        }
    }
}

TEST_CASE("sup_distance")
{
    const auto theta = oracle::ex42_theta();
    CHECK(sup_distance(theta, theta) == 0.0);

    FourierSignal two(pi, 2.0, {}, {}), zero(pi, 0);
    CHECK(sup_distance(two, zero) == doctest::Approx(1.0).epsilon(1e-15));

    FourierSignal a(pi, 1), b(pi, 1);
    a.set_mode(1, 1.0, 0.0);
    b.set_mode(1, 0.0, 1.0);
    const double d = sup_distance(a, b);
    CHECK(d <= std::numbers::sqrt2 + 1e-15);
    CHECK(d > std::numbers::sqrt2 - 1e-5);

    FourierSignal other_period(2.0, 1);
    CHECK_THROWS_AS(sup_distance(a, other_period), DomainError);

    GridSignal g1{pi, {1, 2, 3}}, g2{pi, {1, 2.5, 2}}, g3{pi, {1, 2}};
    CHECK(sup_distance(g1, g2) == 1.0);
    CHECK_THROWS_AS(sup_distance(g1, g3), DomainError);
}

TEST_CASE("sup_distance is a metric on random triples")
{
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = oracle::random_signal(gen, 8);
        const auto b = oracle::random_signal(gen, 8);
        const auto c = oracle::random_signal(gen, 8);
        const double ab = sup_distance(a, b), ba = sup_distance(b, a);
        CHECK(ab >= 0.0);
        CHECK(ab == ba);
        CHECK(sup_distance(a, c) <= ab + sup_distance(b, c) + 1e-12);
    }
}

TEST_CASE("FourierSignal invariants")
{
    CHECK_THROWS_AS(FourierSignal(0.0, 3), DomainError);
    CHECK_THROWS_AS(FourierSignal(-1.0, 3), DomainError);
    CHECK_THROWS_AS(FourierSignal(pi, NAN, {}, {}), DomainError);
    CHECK_THROWS_AS(FourierSignal(pi, 0.0, {1.0}, {}), DomainError);
    CHECK_THROWS_AS(FourierSignal(pi, 0.0, {INFINITY}, {0.0}), DomainError);

    FourierSignal s(pi, 2);
    s.set_mode(2, 1.0, -1.0);
    const auto bigger = s.resized(4);
    CHECK(bigger.mode_count() == 4);
    CHECK(bigger.c(2) == 1.0);
    CHECK(bigger.c(4) == 0.0);
    CHECK(s.resized(1).mode_count() == 1);
}
