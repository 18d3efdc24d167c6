#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rfnn/baseline.hpp"
#include "rfnn/trainer.hpp"

namespace rfnn {

/// Sectioned key = value text file. '#' and ';' start comments.
struct ParsedConfig {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;

    /// "section.key=value" or bare "key=value" resolved against the known
    /// sections (train, data, target, adam, compare, output).
    void apply_override(const std::string& assignment);
};

ParsedConfig parse_config_file(const std::string& path);
ParsedConfig parse_config_text(const std::string& text);

/// Fully resolved experiment: target, dataset sizes, training and optional
/// gradient-baseline settings, output location.
struct ExperimentConfig {
    std::string target_name;
    Eigen::Index n = 0;
    Eigen::Index n_test = 0;
    std::uint64_t data_seed = 0;

    TrainConfig train;
    std::optional<AdamConfig> adam;
    int adam_L = 0;  // depth for the gradient baseline (defaults to train.L_max)

    std::vector<std::string> compare_methods;

    std::string out_dir = "out";
    int trace_stride = 1;
    int histogram_bins = 200;

    void validate() const;
};

ExperimentConfig resolve_experiment(const ParsedConfig& parsed);

/// The resolved config as "section.key = value" lines (artifact headers).
std::vector<std::string> describe_experiment(const ExperimentConfig& cfg);

} // namespace rfnn
