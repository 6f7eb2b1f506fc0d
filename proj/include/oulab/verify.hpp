#pragma once

// Monte Carlo checks of the noise moments against their closed forms.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "oulab/model.hpp"

namespace oulab {

struct MomentCheck {
    std::string check;   ///< "variance", "covariance" or "series_variance"
    double s = 0.0;
    double t = 0.0;
    double analytic = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    bool pass = false;   ///< |empirical - analytic| <= 3 std_error
};

/// Sample variance and its standard error, sqrt(Var[(X - mean)^2] / N).
std::pair<double, double> variance_with_se(const std::vector<double>& x);
/// Sample covariance and its standard error from the centred products.
std::pair<double, double> covariance_with_se(const std::vector<double>& x,
                                             const std::vector<double>& y);

/// Default (s, t) pairs at quarters of t0.
std::vector<std::pair<double, double>> default_covariance_pairs(double t0);

/// Variance at t0 from `draws` exact samples, covariance at each pair from
/// jointly sampled exact paths, and the series sampler's variance when its
/// domain u <= 1 admits t0. Draw i uses root.substream(i).
std::vector<MomentCheck> verify_moments(const ScenarioConfig& cfg, std::size_t draws,
                                        const std::vector<std::pair<double, double>>& pairs,
                                        Exec exec = Exec::parallel);

}  // namespace oulab
