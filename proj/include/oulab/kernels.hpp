#pragma once

// Low-level data-parallel loops behind the Fourier and sampling modules.
//
// Every kernel exists twice: `serial` is the plain reference loop and `omp`
// distributes the outer loop with OpenMP. Both evaluate the same expressions
// in the same per-element order, so their outputs are bit-identical; the
// test suite relies on that.

#include <cstddef>
#include <span>

namespace oulab {

enum class Exec { serial, parallel };

namespace kernels {

// Angle k*pi*x_g/l of mode k at grid node g on a G-point periodic grid.
// Independent of the half-period because x_g/l = -1 + 2g/G.
double grid_angle(int k, std::size_t g, std::size_t G);

namespace serial {

// out[g] = c0/2 + sum_k c[k-1] cos(k a_g) + d[k-1] sin(k a_g)
void synthesize(double c0, std::span<const double> c, std::span<const double> d,
                std::span<double> out);

// c0 = 2/G sum values, c[k-1] = 2/G sum values cos(k a_g), d[k-1] likewise with sin.
void project(std::span<const double> values, double& c0, std::span<double> c,
             std::span<double> d);

// out[j] = mean over r of rows[r][j]; rows summed in index order.
void column_mean(std::span<const double* const> rows, std::span<double> out);

// max_j |a[j] - b[j]|
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace serial

namespace omp {

void synthesize(double c0, std::span<const double> c, std::span<const double> d,
                std::span<double> out);
void project(std::span<const double> values, double& c0, std::span<double> c,
             std::span<double> d);
void column_mean(std::span<const double* const> rows, std::span<double> out);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace omp

// Whether the build has OpenMP enabled; the omp kernels fall back to serial loops otherwise.
bool openmp_enabled();

}  // namespace kernels
}  // namespace oulab
