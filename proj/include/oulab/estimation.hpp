#pragma once

// Recovery of the useful signal from n observations at t0:
//
//     T_n = exp(-t0 A) (Z_1 + ... + Z_n) / n
//
// The average is formed first and inverted once.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "oulab/fourier.hpp"
#include "oulab/model.hpp"
#include "oulab/spectral.hpp"

namespace oulab {

/// Estimation defaults to dropping modes whose inversion gain exceeds the cap.
inline InverseOptions estimation_inverse_options(double cap = default_inverse_cap)
{
    return {cap, CapPolicy::zero};
}

struct Estimate {
    FourierSignal signal;
    std::size_t n_used = 0;
    double amplification_max = 1.0;
    std::vector<std::size_t> dropped_modes;
};

/// Coefficient-wise mean of the observations (grid samples are projected onto K modes).
FourierSignal sample_mean(const SampleSet& samples, std::size_t K, Exec exec = Exec::parallel);

Estimate estimate_tn_detailed(const SampleSet& samples, const OperatorSpec& op, double t0,
                              std::size_t K, const InverseOptions& opts = estimation_inverse_options(),
                              Exec exec = Exec::parallel);

FourierSignal estimate_tn(const SampleSet& samples, const OperatorSpec& op, double t0,
                          std::size_t K, const InverseOptions& opts = estimation_inverse_options(),
                          Exec exec = Exec::parallel);

struct EstimateReport {
    FourierSignal estimate;
    double sup_error = 0.0;
    double c0_error = 0.0;
    double max_mode_error = 0.0;  ///< max_{k>=1} of the (c_k, d_k) error radius
    std::size_t n_used = 1;
    double amplification_max = 1.0;
};

/// Throws DomainError when half periods or mode counts differ.
EstimateReport error_report(const FourierSignal& estimate, const FourierSignal& theta,
                            std::size_t probes = default_probe_count);
EstimateReport error_report(const Estimate& estimate, const FourierSignal& theta,
                            std::size_t probes = default_probe_count);

struct CauchyOptions {
    double epsilon = 1e-3;
    std::size_t window = 2;  ///< number of consecutive estimates that must agree
    std::size_t n_max = 10000;
    std::size_t probes = default_probe_count;
    InverseOptions inverse = estimation_inverse_options();
};

struct InfiniteSampleResult {
    FourierSignal estimate;
    std::size_t n_used = 0;
    bool converged = false;
};

/// Yields the coefficients of the next observation.
using ObservationStream = std::function<FourierSignal()>;

/// Running T_n until `window` consecutive estimates are pairwise (consecutively)
/// closer than epsilon in sup distance, or n_max is reached.
InfiniteSampleResult infinite_sample_estimate(const ObservationStream& stream,
                                              const OperatorSpec& op, double t0, std::size_t K,
                                              const CauchyOptions& opts);

/// Observation stream over the scenario: observation i uses root.substream(i).
ObservationStream scenario_stream(const ScenarioConfig& cfg, const RandomSource& root);

struct TrialRecord {
    std::size_t n = 0;
    std::size_t trial = 0;
    double sup_error = 0.0;
    double c0_error = 0.0;
    double max_mode_error = 0.0;
};

struct ConsistencySummary {
    std::size_t n = 0;
    double mean_error = 0.0;
    double sd_error = 0.0;
};

struct ConsistencyTable {
    std::vector<TrialRecord> trials;       ///< ordered by (n, trial)
    std::vector<ConsistencySummary> summary;
    std::optional<double> slope;           ///< empty when undefined (fewer than two n, or zero errors)
};

/// Source of trial (n, trial): root.substream(n).substream(trial).
RandomSource trial_source(const RandomSource& root, std::size_t n, std::size_t trial);

/// Repeated estimation over a sorted grid of sample sizes.
ConsistencyTable consistency_experiment(const ScenarioConfig& cfg,
                                        const std::vector<std::size_t>& n_grid,
                                        std::size_t trials, Exec exec = Exec::parallel);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oulab
