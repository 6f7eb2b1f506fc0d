#include "oulab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "oulab/error.hpp"

namespace oulab {

OperatorSpec::OperatorSpec(std::vector<double> coefficients) : a_(std::move(coefficients))
{
    if (a_.empty()) throw DomainError("operator needs at least A_0");
    if (!(a_.front() > 0.0)) throw DomainError("operator requires A_0 > 0");
    for (double v : a_)
        if (!std::isfinite(v)) throw DomainError("non-finite operator coefficient");
    if (a_.size() < 3) a_.resize(3, 0.0);
    if (a_.size() % 2 == 0) a_.push_back(0.0);
}

ModeSpectrum mode_spectrum(const OperatorSpec& op, std::size_t K, double half_period)
{
    if (!(half_period > 0.0)) throw DomainError("half period must be positive");
    const auto& a = op.coefficients();
    ModeSpectrum s;
    s.sigma0 = op.a0();
    s.sigma.resize(K);
    s.omega.resize(K);
    for (std::size_t k = 1; k <= K; ++k) {
        const double q = static_cast<double>(k) * std::numbers::pi / half_period;
        double sigma = 0.0, omega = 0.0;
        double qn = 1.0;  // q^j
        for (std::size_t j = 0; j < a.size(); ++j) {
            // (-1)^(j/2) alternates every second power: +,+,-,-,+,+,...
            const double sign = ((j / 2) % 2 == 0) ? 1.0 : -1.0;
            if (j % 2 == 0)
                sigma += sign * a[j] * qn;
            else
                omega += sign * a[j] * qn;
            qn *= q;
        }
        s.sigma[k - 1] = sigma;
        s.omega[k - 1] = omega;
        if (!std::isfinite(sigma) || !std::isfinite(omega))
            throw NumericError("non-finite spectrum at mode " + std::to_string(k),
                               static_cast<int>(k));
    }
    return s;
}

namespace {

void require_time(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
}

// (c, d) -> scale * rotation(angle) (c, d) in the coefficient convention of propagate.
inline void scale_rotate(double& c, double& d, double scale, double angle)
{
    const double cs = std::cos(angle), sn = std::sin(angle);
    const double nc = scale * (c * cs + d * sn);
    const double nd = scale * (d * cs - c * sn);
    c = nc;
    d = nd;
}

}  // namespace

FourierSignal propagate(const FourierSignal& signal, const OperatorSpec& op, double t,
                        double value_cap)
{
    require_time(t);
    const std::size_t K = signal.mode_count();
    const ModeSpectrum sp = mode_spectrum(op, K, signal.half_period());
    const double log_cap = std::log(value_cap);

    auto guard = [&](double rate, double magnitude, std::size_t k) {
        if (magnitude == 0.0) return;
        if (rate * t + std::log(magnitude) > log_cap)
            throw NumericError("propagation overflow: mode " + std::to_string(k) +
                                   " grows past " + std::to_string(value_cap) + " (rate " +
                                   std::to_string(rate) + ", t " + std::to_string(t) + ")",
                               static_cast<int>(k));
    };

    FourierSignal out = signal;
    guard(sp.sigma0, std::fabs(signal.c0()), 0);
    out.set_c0(std::exp(sp.sigma0 * t) * signal.c0());
    for (std::size_t k = 1; k <= K; ++k) {
        double c = signal.c(k), d = signal.d(k);
        guard(sp.sigma[k - 1], std::max(std::fabs(c), std::fabs(d)), k);
        scale_rotate(c, d, std::exp(sp.sigma[k - 1] * t), sp.omega[k - 1] * t);
        out.set_mode(k, c, d);
    }
    return out;
}

InverseResult inverse_propagate_detailed(const FourierSignal& signal, const OperatorSpec& op,
                                         double t, const InverseOptions& opts)
{
    require_time(t);
    const std::size_t K = signal.mode_count();
    const ModeSpectrum sp = mode_spectrum(op, K, signal.half_period());
    const double log_cap = std::log(opts.cap);

    InverseResult res{signal, 1.0, {}};
    res.amplification_max = 0.0;

    // Returns false when the mode has to be dropped.
    auto admit = [&](double rate, bool nonzero, std::size_t k) {
        if (nonzero && -rate * t > log_cap) {
            if (opts.policy == CapPolicy::reject)
                throw NumericError("inverse propagation ill-conditioned: mode " +
                                       std::to_string(k) + " would be amplified by exp(" +
                                       std::to_string(-rate * t) + "), above the cap " +
                                       std::to_string(opts.cap),
                                   static_cast<int>(k));
            res.dropped.push_back(k);
            return false;
        }
        res.amplification_max = std::max(res.amplification_max, std::exp(-rate * t));
        return true;
    };

    if (admit(sp.sigma0, signal.c0() != 0.0, 0))
        res.signal.set_c0(std::exp(-sp.sigma0 * t) * signal.c0());
    else
        res.signal.set_c0(0.0);

    for (std::size_t k = 1; k <= K; ++k) {
        double c = signal.c(k), d = signal.d(k);
        if (!admit(sp.sigma[k - 1], c != 0.0 || d != 0.0, k)) {
            res.signal.set_mode(k, 0.0, 0.0);
            continue;
        }
        scale_rotate(c, d, std::exp(-sp.sigma[k - 1] * t), -sp.omega[k - 1] * t);
        res.signal.set_mode(k, c, d);
    }
    return res;
}

FourierSignal inverse_propagate(const FourierSignal& signal, const OperatorSpec& op, double t,
                                const InverseOptions& opts)
{
    return inverse_propagate_detailed(signal, op, t, opts).signal;
}

FourierSignal apply_operator(const FourierSignal& signal, const OperatorSpec& op)
{
    const std::size_t K = signal.mode_count();
    const ModeSpectrum sp = mode_spectrum(op, K, signal.half_period());
    FourierSignal out = signal;
    out.set_c0(sp.sigma0 * signal.c0());
    for (std::size_t k = 1; k <= K; ++k) {
        const double s = sp.sigma[k - 1], w = sp.omega[k - 1];
        const double c = signal.c(k), d = signal.d(k);
        out.set_mode(k, s * c + w * d, s * d - w * c);
    }
    return out;
}

StabilityReport stability_report(const OperatorSpec& op, std::size_t K, double half_period,
                                 double t, double inverse_cap)
{
    require_time(t);
    const ModeSpectrum sp = mode_spectrum(op, K, half_period);
    const auto& a = op.coefficients();
    const std::size_t m = op.half_order();

    StabilityReport r;
    r.leading_sign = ((m % 2 == 0) ? 1.0 : -1.0) * a[2 * m];

    double max_rate = sp.sigma0, min_rate = sp.sigma0;
    for (double s : sp.sigma) {
        max_rate = std::max(max_rate, s);
        min_rate = std::min(min_rate, s);
    }
    r.max_forward_gain = std::exp(max_rate * t);
    r.max_inverse_gain = std::exp(-min_rate * t);

    // Growth in k is decided by the highest nonzero even-order coefficient.
    for (std::size_t j = m; j >= 1; --j) {
        if (a[2 * j] != 0.0) {
            r.forward_unstable = ((j % 2 == 0) ? 1.0 : -1.0) * a[2 * j] > 0.0;
            break;
        }
    }
    r.inverse_ill_conditioned = min_rate * t < -std::log(inverse_cap);
    return r;
}

}  // namespace oulab
