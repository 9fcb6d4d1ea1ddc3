// Scenario configuration: a small sectioned key=value dialect with a
// required schema_version, strict unknown-key rejection, and line-addressed
// errors.

#pragma once

#include "catlift/decoherence.hpp"
#include "catlift/interferometer.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace catlift::io {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunSpec {
    std::uint64_t seed = 1;
    std::int64_t samples = 100000;
    std::string format = "csv";  // csv | json
    std::string out;             // empty = stdout

    double t_minus_min = 0.0;
    double t_minus_max = 4.0 * 3.14159265358979323846;
    int t_minus_points = 81;
    int trajectory_points = 201;

    std::vector<double> wigner_times{0.0};
    double wigner_min = -8.0;
    double wigner_max = 8.0;
    int wigner_points = 41;

    double gie_t_lo = 2.0 * 3.14159265358979323846;
    double gie_t_hi = 6.0 * 3.14159265358979323846;
    double gie_grid_step = 3.14159265358979323846 / 200.0;

    std::vector<double> sigma_eps_values{1e-6, 1e-5, 1e-4};
};

struct ScenarioConfig {
    int schema_version = 1;
    std::vector<std::pair<std::string, itf::TrapSetup>> setups;
    double t_minus = 0.0;
    double t0 = 3.14159265358979323846;
    double force_n = 0.0;
    dec::NoiseModel noise;
    RunSpec run;

    const itf::TrapSetup& single_setup() const;
};

// Parses the sectioned key=value text; throws ConfigError with a line number
// for syntax errors, unknown sections/keys, or invalid values.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

}  // namespace catlift::io
