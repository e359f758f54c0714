#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "molfate/network.hpp"

namespace molfate {

/// Contents of a model file: the network, an optional tracking schema and the
/// fluid initial condition z* (zero for species not listed).
struct Model {
    std::string name;
    ReactionNetwork network;
    std::optional<StatusSchema> schema;
    Concentration initial;

    bool operator==(const Model&) const = default;
};

/// Parses the model-file grammar documented in README.md. Syntax errors and
/// references to unknown species, statuses or reactions throw ParseError with
/// the offending line; structural violations (self-loops, row sums...) throw
/// ModelError when `validate` is set.
Model parse_model(std::string_view text, bool validate = true);
Model load_model(const std::filesystem::path& path, bool validate = true);

/// Canonical text form. parse_model(serialize_model(m)) == m.
std::string serialize_model(const Model& model);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace molfate
