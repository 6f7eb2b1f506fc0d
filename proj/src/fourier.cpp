#include "oulab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "oulab/error.hpp"

namespace oulab {

FourierSignal::FourierSignal(double half_period, std::size_t modes)
    : l_(half_period), c_(modes, 0.0), d_(modes, 0.0)
{
    if (!(half_period > 0.0) || !std::isfinite(half_period))
        throw DomainError("half period must be positive and finite");
}

FourierSignal::FourierSignal(double half_period, double c0, std::vector<double> c,
                             std::vector<double> d)
    : l_(half_period), c0_(c0), c_(std::move(c)), d_(std::move(d))
{
    if (!(half_period > 0.0) || !std::isfinite(half_period))
        throw DomainError("half period must be positive and finite");
    if (c_.size() != d_.size())
        throw DomainError("cosine and sine coefficient lists differ in length");
    check_finite();
}

void FourierSignal::set_mode(std::size_t k, double ck, double dk)
{
    c_.at(k - 1) = ck;
    d_.at(k - 1) = dk;
}

FourierSignal FourierSignal::resized(std::size_t modes) const
{
    FourierSignal out = *this;
    out.c_.resize(modes, 0.0);
    out.d_.resize(modes, 0.0);
    return out;
}

void FourierSignal::check_finite() const
{
    if (!std::isfinite(c0_)) throw DomainError("non-finite constant coefficient");
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (!std::isfinite(c_[k]) || !std::isfinite(d_[k]))
            throw DomainError("non-finite coefficient at mode " + std::to_string(k + 1));
}

namespace {

void require_same_period(double a, double b)
{
    if (a != b) throw DomainError("signals have different half periods");
}

}  // namespace

FourierSignal& FourierSignal::operator+=(const FourierSignal& o)
{
    require_same_period(l_, o.l_);
    if (o.mode_count() > mode_count()) *this = resized(o.mode_count());
    c0_ += o.c0_;
    for (std::size_t k = 0; k < o.c_.size(); ++k) {
        c_[k] += o.c_[k];
        d_[k] += o.d_[k];
    }
    return *this;
}

FourierSignal& FourierSignal::operator-=(const FourierSignal& o)
{
    require_same_period(l_, o.l_);
    if (o.mode_count() > mode_count()) *this = resized(o.mode_count());
    c0_ -= o.c0_;
    for (std::size_t k = 0; k < o.c_.size(); ++k) {
        c_[k] -= o.c_[k];
        d_[k] -= o.d_[k];
    }
    return *this;
}

FourierSignal& FourierSignal::operator*=(double s)
{
    c0_ *= s;
    for (auto& v : c_) v *= s;
    for (auto& v : d_) v *= s;
    return *this;
}

FourierSignal operator+(FourierSignal a, const FourierSignal& b) { return a += b; }
FourierSignal operator-(FourierSignal a, const FourierSignal& b) { return a -= b; }
FourierSignal operator*(double s, FourierSignal a) { return a *= s; }

double GridSignal::node(std::size_t g) const
{
    return -half_period + 2.0 * half_period * static_cast<double>(g) /
                              static_cast<double>(values.size());
}

double evaluate(const FourierSignal& s, double x)
{
    const double l = s.half_period();
    // Reduce into [-l, l) so large |x| does not inflate the trig arguments.
    const double xr = x - 2.0 * l * std::floor((x + l) / (2.0 * l));
    const double scale = std::numbers::pi * xr / l;
    double v = 0.5 * s.c0();
    const auto& c = s.cos_coefficients();
    const auto& d = s.sin_coefficients();
    for (std::size_t k = 1; k <= c.size(); ++k) {
        const double a = static_cast<double>(k) * scale;
        v += c[k - 1] * std::cos(a) + d[k - 1] * std::sin(a);
    }
    return v;
}

GridSignal evaluate_grid(const FourierSignal& s, std::size_t G, Exec exec)
{
    if (G < 1) throw DomainError("grid size must be at least 1");
    GridSignal out{s.half_period(), std::vector<double>(G)};
    if (exec == Exec::parallel)
        kernels::omp::synthesize(s.c0(), s.cos_coefficients(), s.sin_coefficients(), out.values);
    else
        kernels::serial::synthesize(s.c0(), s.cos_coefficients(), s.sin_coefficients(),
                                    out.values);
    return out;
}

FourierSignal extract_coefficients(const GridSignal& grid, std::size_t K, Exec exec)
{
    const std::size_t G = grid.size();
    if (G < 2 * K + 1)
        throw DomainError("aliasing: grid of " + std::to_string(G) + " points cannot resolve " +
                          std::to_string(K) + " modes (need at least " +
                          std::to_string(2 * K + 1) + ")");
    std::vector<double> c(K), d(K);
    double c0 = 0.0;
    if (exec == Exec::parallel)
        kernels::omp::project(grid.values, c0, c, d);
    else
        kernels::serial::project(grid.values, c0, c, d);
    return FourierSignal(grid.half_period, c0, std::move(c), std::move(d));
}

double sup_distance(const FourierSignal& a, const FourierSignal& b, std::size_t probes,
                    Exec exec)
{
    require_same_period(a.half_period(), b.half_period());
    if (probes < 1) throw DomainError("probe count must be at least 1");
    const FourierSignal diff = a - b;
    const GridSignal g = evaluate_grid(diff, probes, exec);
    double m = 0.0;
    for (double v : g.values) m = std::max(m, std::fabs(v));
    return m;
}

double sup_distance(const GridSignal& a, const GridSignal& b, Exec exec)
{
    require_same_period(a.half_period, b.half_period);
    if (a.size() != b.size()) throw DomainError("grid sizes differ");
    return exec == Exec::parallel ? kernels::omp::max_abs_diff(a.values, b.values)
                                  : kernels::serial::max_abs_diff(a.values, b.values);
}

}  // namespace oulab
