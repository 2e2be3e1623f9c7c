#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wadmit {

/// Config parse or validation failure; names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kConfigVersion = 1;

struct ExperimentConfig {
    int version = kConfigVersion;

    // [topology]
    std::size_t links = 0;
    std::vector<double> channel;
    std::vector<std::pair<std::size_t, std::size_t>> conflicts;

    // [experiment]
    std::vector<std::size_t> active;
    std::optional<std::size_t> new_link;
    double x_bar = 0.3;
    double epsilon = 0.01;
    double u = 1.0;
    std::optional<double> u_n;
    double rho = 0.9;
    std::int64_t horizon = 1'000'000;
    std::int64_t warmup = 500'000;
    std::uint64_t seed = 1;
    std::int64_t window = 1000;
    std::optional<std::vector<double>> arrival_override;
    std::string output;

    // [verdicts]
    double slope_threshold = 1e-3;
    double split_tolerance = 0.1;
    double delta_admit = 0.03;
    double disturbance_tol = 0.02;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses the sectioned key = value format; throws ConfigError with line and field on bad input.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& cfg);

/// Range and cross-reference checks; throws ConfigError naming the field.
void validate(const ExperimentConfig& cfg);

} // namespace wadmit
