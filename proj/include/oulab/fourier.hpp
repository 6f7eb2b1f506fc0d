#pragma once

// Truncated Fourier series on the periodic interval [-l, l).

#include <cstddef>
#include <vector>

#include "oulab/kernels.hpp"

namespace oulab {

/// c0/2 + sum_{k=1}^{K} c_k cos(k pi x / l) + d_k sin(k pi x / l).
///
/// `c0` is stored as the series coefficient, so the constant term of the
/// function is c0/2. `c[k-1]`, `d[k-1]` hold mode k.
class FourierSignal {
public:
    FourierSignal() = default;
    /// Zero signal with `modes` modes. Throws DomainError if `half_period` is not positive.
    FourierSignal(double half_period, std::size_t modes);
    FourierSignal(double half_period, double c0, std::vector<double> c, std::vector<double> d);

    double half_period() const { return l_; }
    std::size_t mode_count() const { return c_.size(); }

    double c0() const { return c0_; }
    void set_c0(double v) { c0_ = v; }

    /// Mode k, 1-based.
    double c(std::size_t k) const { return c_.at(k - 1); }
    double d(std::size_t k) const { return d_.at(k - 1); }
    void set_mode(std::size_t k, double ck, double dk);

    const std::vector<double>& cos_coefficients() const { return c_; }
    const std::vector<double>& sin_coefficients() const { return d_; }

    /// Copy truncated or zero-padded to `modes` modes.
    FourierSignal resized(std::size_t modes) const;

    /// Throws DomainError on non-finite coefficients.
    void check_finite() const;

    FourierSignal& operator+=(const FourierSignal& other);
    FourierSignal& operator-=(const FourierSignal& other);
    FourierSignal& operator*=(double s);

private:
    double l_ = 1.0;
    double c0_ = 0.0;
    std::vector<double> c_;
    std::vector<double> d_;
};

/// Coefficient-wise combination; operands are zero-padded to the larger mode count.
FourierSignal operator+(FourierSignal a, const FourierSignal& b);
FourierSignal operator-(FourierSignal a, const FourierSignal& b);
FourierSignal operator*(double s, FourierSignal a);

/// Values on the left-endpoint grid x_g = -l + 2 l g / G, g = 0..G-1.
struct GridSignal {
    double half_period = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double node(std::size_t g) const;
};

double evaluate(const FourierSignal& signal, double x);

GridSignal evaluate_grid(const FourierSignal& signal, std::size_t G, Exec exec = Exec::parallel);

/// Periodic rectangle-rule projection onto modes 0..K. Exact for trigonometric
/// polynomials of degree <= K when G >= 2K+1; smaller grids throw DomainError.
FourierSignal extract_coefficients(const GridSignal& grid, std::size_t K,
                                   Exec exec = Exec::parallel);

inline constexpr std::size_t default_probe_count = 4096;

/// Max of |a - b| over a uniform probe grid. A lower bound of the true sup norm.
double sup_distance(const FourierSignal& a, const FourierSignal& b,
                    std::size_t probes = default_probe_count, Exec exec = Exec::parallel);
/// Max of |a - b| over the grid nodes.
double sup_distance(const GridSignal& a, const GridSignal& b, Exec exec = Exec::parallel);

}  // namespace oulab
