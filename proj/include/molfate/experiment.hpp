#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "molfate/network.hpp"

namespace molfate {

enum class Mode { Ssa, Tracked, Fluid, Single, Aggregate, Bounds, Functional, Validate };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

/// Path functional compared between Y^V and Y.
struct FunctionalSpec {
    enum class Kind { Transitions, Occupation };
    Kind kind = Kind::Transitions;
    /// Transitions: {from, to}; occupation: the status set.
    std::vector<std::string> statuses;
};

/// "transitions:FROM->TO" or "occupation:A,B,...".
FunctionalSpec parse_functional(const std::string& text);

struct ExperimentConfig {
    std::filesystem::path model_path;
    Mode mode = Mode::Fluid;
    double volume = 1000.0;
    /// Overrides the model's initial concentrations.
    std::optional<Concentration> z_star;
    double horizon = 10.0;
    std::size_t replications = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    /// Number of intervals of the output grid on [0, T].
    std::size_t grid = 100;
    double fluid_step = 0.0;
    /// Fixed initial status for tracked/single/functional runs; empty draws it
    /// from z* over `status_subset` (all statuses when empty).
    std::string initial_status;
    std::vector<std::string> status_subset;
    std::optional<FunctionalSpec> functional;
    double epsilon = 0.05;
    double gamma = 1.0;
    double nu1 = 0.0, nu2 = 0.0, nu3 = 0.0;
    /// "per-status" or "designated".
    std::string allocation = "per-status";
    std::filesystem::path out_dir = "molfate_out";
};

/// Throws InvalidArgument naming the first missing or inconsistent field.
void validate_config(const ExperimentConfig& config);

/// Runs one experiment, writes its CSV/JSON files under out_dir and returns
/// the summary. File contents depend only on (config, seed), never on the
/// thread count. Throws BoundUnavailable in bounds mode when the fluid
/// deviation bound's hypothesis fails.
nlohmann::json run(const ExperimentConfig& config);

}  // namespace molfate
