#include "oulab/kernels.hpp"

#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oulab::kernels {

double grid_angle(int k, std::size_t g, std::size_t G)
{
    // k*(2g - G) reduced exactly modulo 2G into [-G, G) before scaling by pi/G.
    const auto period = static_cast<long long>(2 * G);
    long long r = (static_cast<long long>(k) * (2 * static_cast<long long>(g) -
                                                static_cast<long long>(G))) % period;
    if (r < -static_cast<long long>(G)) r += period;
    if (r >= static_cast<long long>(G)) r -= period;
    return std::numbers::pi * static_cast<double>(r) / static_cast<double>(G);
}

namespace {

inline double synth_point(double c0, std::span<const double> c, std::span<const double> d,
                          std::size_t g, std::size_t G)
{
    double v = 0.5 * c0;
    for (std::size_t k = 1; k <= c.size(); ++k) {
        const double a = grid_angle(static_cast<int>(k), g, G);
        v += c[k - 1] * std::cos(a) + d[k - 1] * std::sin(a);
    }
    return v;
}

inline void project_mode(std::span<const double> values, std::size_t k, double& ck, double& dk)
{
    const std::size_t G = values.size();
    double sc = 0.0, sd = 0.0;
    for (std::size_t g = 0; g < G; ++g) {
        const double a = grid_angle(static_cast<int>(k), g, G);
        sc += values[g] * std::cos(a);
        sd += values[g] * std::sin(a);
    }
    const double w = 2.0 / static_cast<double>(G);
    ck = w * sc;
    dk = w * sd;
}

inline double project_constant(std::span<const double> values)
{
    double s = 0.0;
    for (double v : values) s += v;
    return 2.0 / static_cast<double>(values.size()) * s;
}

inline double column_mean_at(std::span<const double* const> rows, std::size_t j)
{
    double s = 0.0;
    for (const double* row : rows) s += row[j];
    return s / static_cast<double>(rows.size());
}

}  // namespace

namespace serial {

void synthesize(double c0, std::span<const double> c, std::span<const double> d,
                std::span<double> out)
{
    const std::size_t G = out.size();
    for (std::size_t g = 0; g < G; ++g) out[g] = synth_point(c0, c, d, g, G);
}

void project(std::span<const double> values, double& c0, std::span<double> c,
             std::span<double> d)
{
    c0 = project_constant(values);
    for (std::size_t k = 1; k <= c.size(); ++k) project_mode(values, k, c[k - 1], d[k - 1]);
}

void column_mean(std::span<const double* const> rows, std::span<double> out)
{
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = column_mean_at(rows, j);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace serial

namespace omp {

void synthesize(double c0, std::span<const double> c, std::span<const double> d,
                std::span<double> out)
{
    const auto G = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t g = 0; g < G; ++g)
        out[g] = synth_point(c0, c, d, static_cast<std::size_t>(g), out.size());
}

void project(std::span<const double> values, double& c0, std::span<double> c,
             std::span<double> d)
{
    c0 = project_constant(values);
    const auto K = static_cast<std::ptrdiff_t>(c.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 1; k <= K; ++k)
        project_mode(values, static_cast<std::size_t>(k), c[k - 1], d[k - 1]);
}

void column_mean(std::span<const double* const> rows, std::span<double> out)
{
    const auto W = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < W; ++j) out[j] = column_mean_at(rows, static_cast<std::size_t>(j));
}

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for reduction(max : m) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace omp

bool openmp_enabled()
{
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

}  // namespace oulab::kernels
