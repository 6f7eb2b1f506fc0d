#pragma once

// The constant-coefficient operator A = sum_n A_n d^n/dx^n on the periodic
// trigonometric system and its solution semigroup exp(tA).
//
// On span{cos(qx), sin(qx)}, q = k pi / l, A acts in (c, d) coordinates as
//
//     [  sigma_k  omega_k ]
//     [ -omega_k  sigma_k ]
//
// with sigma_k = sum_n (-1)^n A_{2n} q^{2n} and omega_k = sum_n (-1)^n A_{2n+1} q^{2n+1},
// so exp(tA) scales mode k by exp(sigma_k t) and rotates it by the angle omega_k t.

#include <cstddef>
#include <vector>

#include "oulab/fourier.hpp"

namespace oulab {

class OperatorSpec {
public:
    /// Coefficients A_0..A_{2m}. A trailing zero is appended when the list has
    /// even length and the list is padded to length 3. Throws DomainError unless A_0 > 0.
    explicit OperatorSpec(std::vector<double> coefficients);

    const std::vector<double>& coefficients() const { return a_; }
    double a0() const { return a_.front(); }
    /// m, with the list holding A_0..A_{2m}.
    std::size_t half_order() const { return (a_.size() - 1) / 2; }

private:
    std::vector<double> a_;
};

struct ModeSpectrum {
    double sigma0 = 0.0;        ///< rate of the constant mode, equal to A_0
    std::vector<double> sigma;  ///< sigma[k-1]
    std::vector<double> omega;  ///< omega[k-1]

    std::size_t size() const { return sigma.size(); }
};

ModeSpectrum mode_spectrum(const OperatorSpec& op, std::size_t K, double half_period);

inline constexpr double default_value_cap = 1e300;
inline constexpr double default_inverse_cap = 1e12;

/// exp(tA) applied to `signal`. Throws NumericError naming the first mode whose
/// magnitude would exceed `value_cap`.
FourierSignal propagate(const FourierSignal& signal, const OperatorSpec& op, double t,
                        double value_cap = default_value_cap);

enum class CapPolicy {
    reject,  ///< throw NumericError on the first over-amplified mode
    zero     ///< drop over-amplified modes and report them
};

struct InverseOptions {
    double cap = default_inverse_cap;
    CapPolicy policy = CapPolicy::reject;
};

struct InverseResult {
    FourierSignal signal;
    double amplification_max = 1.0;      ///< largest exp(-sigma_k t) actually applied
    std::vector<std::size_t> dropped;    ///< modes zeroed under CapPolicy::zero (0 = constant)
};

/// exp(-tA) applied to `signal`, the exact inverse of propagate.
FourierSignal inverse_propagate(const FourierSignal& signal, const OperatorSpec& op, double t,
                                const InverseOptions& opts = {});
InverseResult inverse_propagate_detailed(const FourierSignal& signal, const OperatorSpec& op,
                                         double t, const InverseOptions& opts = {});

/// Term-wise application of A itself (no exponential).
FourierSignal apply_operator(const FourierSignal& signal, const OperatorSpec& op);

struct StabilityReport {
    double max_forward_gain = 0.0;   ///< max_k exp(sigma_k t), constant mode included
    double max_inverse_gain = 0.0;   ///< max_k exp(-sigma_k t), constant mode included
    double leading_sign = 0.0;       ///< (-1)^m A_{2m}
    bool forward_unstable = false;   ///< sigma_k grows without bound in k
    bool inverse_ill_conditioned = false;  ///< min_k sigma_k t < -ln(cap)
};

StabilityReport stability_report(const OperatorSpec& op, std::size_t K, double half_period,
                                 double t, double inverse_cap = default_inverse_cap);

}  // namespace oulab
