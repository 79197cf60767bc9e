// config.hpp: declarative experiment configuration (JSON)

#pragma once

#include "ncmart/filtration.hpp"
#include "ncmart/martingale_ops.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ncm {

// Either a fixed descriptor or a random tensor filtration drawn per trial.
struct FiltrationSource {
    bool random_tensor = false;
    FiltrationDescriptor descriptor;
    int max_total_dim = 16;
    int max_depth = 4;
};

struct UmdSettings {
    std::vector<int> dims{1, 2, 4};
    double p = 2.0;
    int depth = 3;
    int budget = 5000;
    double schatten_q = 1.0;
    bool algebra_norm = false;
};

struct ExperimentConfig {
    std::string suite;
    std::optional<std::uint64_t> master_seed;
    std::size_t trial_count = 0;
    std::vector<FiltrationSource> filtrations;
    std::vector<MultiplierMode> multiplier_modes{MultiplierMode::signs};
    std::vector<double> p_values;
    std::vector<double> lambda_factors{0.2, 0.5, 0.8};  // λ = factor · ‖x_N‖_∞
    std::vector<double> alpha_grid;
    std::vector<double> beta_grid;
    std::vector<double> scales{1.0};
    std::size_t lemma1_trials = 200;
    std::size_t max_terms = 10;        // Khintchine tuple length bound
    int search_budget = 0;             // hill-climb evaluations for `estimate`
    int restarts = 4;
    DescentOptions descent;
    int dimension_cap = kDefaultDimensionCap;
    std::map<std::string, double> tolerances;  // verdict name → tolerance override
    UmdSettings umd;
};

// Throws ParseError for malformed text and DomainError for invalid values.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
// Canonical JSON echo (sorted keys), used inside reports.
std::string config_to_json(const ExperimentConfig& c);

// Checks counts, grids and dimension caps; throws DomainError.
void validate_config(const ExperimentConfig& c);

const std::vector<std::string>& known_suites();

} // namespace ncm
