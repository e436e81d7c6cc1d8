#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "facets/lattice.hpp"
#include "facets/norm.hpp"
#include "facets/phase.hpp"
#include "facets/sampler.hpp"

namespace facets::cli {

/// Anything wrong with the configuration; maps to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Overrides {
    std::optional<std::string> out;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
};

struct ExperimentConfig {
    nlohmann::json raw;  // effective config, archived next to the outputs
    std::string norm_family;
    NormParams norm_params;
    int facet_count = kDefaultFacetCount;
    std::optional<ModelParams> model;
    int l_max = kDefaultMaxLayers;
    std::filesystem::path out = "facets_out";
    int workers = 1;
    std::uint64_t seed = 1;

    Norm norm() const;
};

/// Parses and validates; precedence is flag > environment > file.
ExperimentConfig load_config(const nlohmann::json& file, const Overrides& overrides);
ExperimentConfig load_config_file(const std::filesystem::path& path, const Overrides& overrides);

/// Evenly spaced {start, stop, count} or an explicit list.
std::vector<double> parse_sweep(const nlohmann::json& spec);

int cmd_phase(const ExperimentConfig& config);
int cmd_simulate(const ExperimentConfig& config);
int cmd_analyze(const ExperimentConfig& config);
int cmd_norm(const ExperimentConfig& config);

/// Full command line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace facets::cli
