// suites.hpp: seeded suite execution and witness replay

#pragma once

#include "ncmart/report.hpp"

namespace ncm {

// Builds (or reuses) the filtration for a descriptor; shared across threads.
FiltrationPtr cached_filtration(const FiltrationDescriptor& d, int dimension_cap = kDefaultDimensionCap);

// Draws the instance for one trial of a suite from the stream (master_seed, trial).
Instance generate_instance(const ExperimentConfig& c, std::size_t trial);

// Deterministic verdict list for an instance. Tolerance overrides come from `c`.
std::vector<InequalityVerdict> evaluate_instance(const std::string& suite, const Instance& inst,
                                                 const ExperimentConfig& c);

// Runs every trial (in parallel when jobs > 1), reduces in trial order and fills
// aggregates, estimates and the first failing witness. Throws DomainError on invalid configs.
Report run_suite(const ExperimentConfig& c, unsigned jobs = 1);

// Hill-climb on the terminal value of a martingale suite to push one verdict ratio up.
ConstantEstimate estimate_constant(const ExperimentConfig& c, const std::string& verdict_name, unsigned jobs = 1);

struct ReplayResult {
    double recorded = 0.0;
    double recomputed = 0.0;
    bool holds = true;
    bool matches = false;  // |recomputed - recorded| ≤ 1e-9 · max(1, |recorded|)
};

ReplayResult replay_witness(const Witness& w, const ExperimentConfig& c = {});

} // namespace ncm
