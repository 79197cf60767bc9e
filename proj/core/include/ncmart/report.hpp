// report.hpp: instances, witnesses, trial records and report serialization

#pragma once

#include "ncmart/config.hpp"
#include "ncmart/inequality_lab.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ncm {

// Everything needed to re-evaluate one trial without the random generator.
struct Instance {
    FiltrationDescriptor filtration;
    std::optional<Element> terminal;      // martingale suites
    std::vector<Element> sequence;        // adapted-sequence and tuple suites
    MultiplierMode mode = MultiplierMode::signs;
    std::vector<int> signs;               // mode == signs
    std::vector<Element> multipliers;     // mode == operators
    std::vector<double> p_values;
    std::vector<double> lambdas;          // absolute levels
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<double> scales;
    bool self_adjoint = false;            // krickeberg
};

struct Witness {
    std::string suite;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t verdict_index = 0;  // position in evaluate_instance output
    std::string verdict;
    double ratio = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    Instance instance;
    // Settings that influence evaluation (descent budget, tolerances, UMD norm); used by replay.
    std::optional<ExperimentConfig> config;
};

std::string witness_to_json(const Witness& w);
Witness witness_from_json(const std::string& text);
void save_witness(const Witness& w, const std::string& path);
Witness load_witness(const std::string& path);

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::string filtration;
    std::vector<InequalityVerdict> verdicts;
};

struct Aggregate {
    std::string name;
    std::size_t count = 0;
    bool asserted = false;
    std::size_t passed = 0;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
};

struct ConstantEstimate {
    std::string name;
    double empirical_lower_bound = 0.0;
    std::size_t trials = 0;
    std::optional<Witness> best_witness;
    std::optional<double> reference;
    std::string reference_tag;
};

struct Report {
    ExperimentConfig config;
    std::string version;
    std::vector<TrialRecord> trials;
    std::vector<Aggregate> aggregates;
    std::vector<ConstantEstimate> estimates;
    std::map<std::string, double> values;   // suite-level scalars
    std::vector<std::string> notes;
    bool all_hold = true;
    std::optional<Witness> first_failure;
    double wall_time_seconds = 0.0;
};

std::string library_version();

std::string report_to_json(const Report& r, bool include_wall_time = true);
// suite,trial,verdict,p,lambda,lhs,rhs,ratio,holds
std::string report_to_csv(const Report& r);

} // namespace ncm
