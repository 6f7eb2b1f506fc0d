#pragma once

// Flat `key = value` scenario files.
//
//     # comment
//     [theta]
//     l = pi
//     c0 = 1
//     c.1 = 5
//     d.5 = 5
//     [operator]
//     A.0 = 2
//     A.1 = -1
//     [noise]
//     sigma = 150
//     [run]
//     t0 = pi/7
//
// Real values accept products and quotients of numbers and `pi` ("pi/7", "-2*pi").

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oulab/model.hpp"

namespace oulab {

struct RunParams {
    std::string times = "0:pi/7:64";  ///< frame times, "start:stop:count" or a comma list
    FrameNoise frame_noise = FrameNoise::none;
    std::size_t trials = 50;
    std::vector<std::size_t> n_grid{100, 1000, 10000};
    std::vector<double> sigma_sweep;  ///< empty means the scenario sigma alone
    double epsilon = 1e-2;
    std::size_t window = 5;
    std::size_t n_max = 100000;
};

struct RunConfig {
    ScenarioConfig scenario;
    RunParams run;
    bool seed_given = false;
};

/// Throws ConfigError carrying the offending line number.
RunConfig parse_config(std::string_view text);
/// Reads `path`; the names ex41, ex42 and ex43 resolve to the built-in presets when no such file exists.
RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(to_config_text(c)) reproduces c exactly.
std::string to_config_text(const RunConfig& c);

/// Built-in preset text, or nullopt for an unknown name.
std::optional<std::string> preset_text(std::string_view name);

double parse_real(std::string_view s);
std::vector<double> parse_real_list(std::string_view s);
std::vector<std::size_t> parse_count_list(std::string_view s);
std::uint64_t parse_u64(std::string_view s);

/// "start:stop:count" (count equally spaced points, both ends included) or "t1,t2,...".
std::vector<double> parse_times(std::string_view spec);

const char* to_string(Kernel k);
const char* to_string(FrameNoise f);
const char* to_string(ObservationForm f);
const char* to_string(NoiseSampler s);
const char* to_string(SeriesVariant v);

}  // namespace oulab
