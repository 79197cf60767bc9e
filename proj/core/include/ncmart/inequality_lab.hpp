// inequality_lab.hpp: verdicts for the martingale inequalities and constant estimators

#pragma once

#include "ncmart/martingale_ops.hpp"
#include "ncmart/random.hpp"

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace ncm {

// holds ⇔ lhs ≤ rhs·(1 + tolerance) + tolerance. Verdicts with asserted == false are
// reported only; their rhs is a reference bound (or +∞ when there is none).
struct InequalityVerdict {
    std::string name;
    double lhs = 0.0;
    double rhs = std::numeric_limits<double>::infinity();
    double ratio = 0.0;
    double tolerance = 1e-8;
    bool asserted = false;
    bool holds = true;
    std::map<std::string, double> tags;
};

InequalityVerdict make_verdict(std::string name, double lhs, double rhs, double ratio, bool asserted,
                               double tolerance = 1e-8);

// ---------------------------------------------------------------- constants

// f(α, β) = 24/(α β²) + 2/(1 - α).
double split_constant_objective(double alpha, double beta);
// inf of f over the open unit square: (√24 + √2)² = 26 + 8√3.
double reference_split_constant();
// The closed form 14√3/3 + 28 found in the literature for the same infimum; it does not match.
double published_split_constant();

struct SplitConstant {
    double alpha = 0.0;      // minimizer of f(·, 1)
    double beta = 1.0;       // the infimum is approached as β → 1
    double value = 0.0;      // f(alpha, 1)
    double grid_alpha = 0.0;
    double grid_beta = 0.0;
    double grid_value = 0.0; // best value on the open grid
};

// Grid search with step `grid_step`, then golden-section refinement of α on the β → 1 edge.
SplitConstant optimize_split_constant(double grid_step = 1e-3);

// C·τ(1)^{(1-p)/p}·(1/(1-p))^{1/p}: integrating the weak-L¹ bound against t^{p-1}.
double subquasi_reference(double p, double unit_trace, double c);
// 2 + 2C.
double stein_weak_reference(double c);
// 6C + 4: weak type for the martingale part plus the sandwich bound for the predictable part,
// combined with the quasi-triangle inequality of ‖·‖_{1,∞}.
double sub_super_reference(double c);

// ---------------------------------------------------------------- checks

// ‖T‖_{1,∞} ≤ C ‖x_N‖₁; ratio ‖T‖_{1,∞}/‖x_N‖₁ (0 for x = 0).
InequalityVerdict check_weak_type(const Martingale& x, const MultiplierSequence& xi,
                                  double c = reference_split_constant());

// ratio ‖T‖_p/‖x_N‖_p; asserted (≤ 1) only at p = 2.
InequalityVerdict check_transform_p(const Martingale& x, const MultiplierSequence& xi, double p);

// 0 < p < 1: ratio ‖T‖_p/‖x_N‖₁ against subquasi_reference, report only.
InequalityVerdict check_subquasi_p(const Martingale& x, const MultiplierSequence& xi, double p);

struct SubSuperResult {
    SequenceClass sense = SequenceClass::none;
    InequalityVerdict transform;         // ‖ε-transform‖_{1,∞} / sup‖s_n‖₁, report only
    InequalityVerdict predictable_bound; // ‖z_N‖₁ ≤ 2 sup‖s_n‖₁, asserted
    InequalityVerdict sandwich;          // -|z_N| ⪯ Σ ε_k (z_k - z_{k-1}) ⪯ |z_N|, asserted
};

// Throws DomainError if s is neither a sub- nor a supermartingale.
SubSuperResult check_sub_super_transform(const AdaptedSequence& s, const MultiplierSequence& signs);

enum class SteinMode { weak, lp };

// weak: ‖(Σ|E_k a_k|²)^{1/2}‖_{1,∞} ≤ (2+2C) ‖(Σ|a_k|²)^{1/2}‖₁, asserted.
// lp:   ratio of column L^p norms; asserted (≤ 1) only at p = 2.
InequalityVerdict check_stein(const std::vector<Element>& a, const Filtration& filt, SteinMode mode,
                              double p = 2.0, double c = reference_split_constant());

struct KhintchineResult {
    double average = 0.0;       // (2^{-n} Σ_ε ‖Σ ε_k a_k‖_p²)^{1/2}
    double column = 0.0;
    double row = 0.0;
    double intersection = 0.0;  // max(column, row)
    double sum_upper = 0.0;     // descent value for the sum norm (p < 2 only)
    double square_sum = 0.0;    // Σ ‖a_k‖₂²
    InequalityVerdict verdict;  // p ≥ 2: intersection ≤ average; p < 2: average ≤ sum_upper
};

constexpr std::size_t kKhintchineMaxTerms = 14;

KhintchineResult khintchine_average(const std::vector<Element>& a, double p, const DescentOptions& opt = {});

struct BgResult {
    double norm_p = 0.0;
    HardyResult hardy;
    double alpha_ratio = 0.0;  // ‖x‖_{H^p} / ‖x‖_p
    double beta_ratio = 0.0;   // ‖x‖_p / ‖x‖_{H^p}
};

// p > 1. For p < 2 the Hardy norm is a descent upper bound, so beta_ratio is a lower
// estimate of the true ratio and alpha_ratio is an upper estimate.
BgResult check_bg(const Martingale& x, double p, const DescentOptions& opt = {});

struct LloglResult {
    double transform_l1 = 0.0;   // ‖Σ ε_k d_k‖₁
    double llogl = 0.0;          // τ(|x_N| log⁺|x_N|)
    double llogl_squared = 0.0;  // τ(|x_N| (log⁺|x_N|)²)
    double hardy1_upper = 0.0;
    double r1 = 0.0;             // transform_l1 / (1 + llogl)
    double r2 = 0.0;             // hardy1_upper / (1 + llogl_squared)
};

LloglResult check_llogl(const Martingale& x, const MultiplierSequence& xi, const DescentOptions& opt = {});

// ---------------------------------------------------------------- search

struct HillClimbOptions {
    int budget = 1000;          // objective evaluations, restarts included
    int restarts = 1;
    double initial_step = 0.3;  // relative to the typical entry size
    std::uint64_t seed = 1;
};

struct HillClimbResult {
    double best = 0.0;
    Element best_point;
    int evaluations = 0;
};

// Maximizes `objective` over elements of `spec`, starting each restart from `init(rng)` and
// perturbing one block entry at a time by a complex Gaussian with adaptive scale.
HillClimbResult hill_climb(const AlgebraSpec& spec, const std::function<double(const Element&)>& objective,
                           const std::function<Element(CounterRng&)>& init, const HillClimbOptions& opt);

enum class UmdNorm { bochner, algebra_lp };

struct UmdOptions {
    UmdNorm norm = UmdNorm::bochner;
    double schatten_q = 1.0;   // block norm for the Bochner variant
    int restarts = 0;          // 0: one restart per 1000 evaluations
    std::uint64_t seed = 0x4d595df4d0f33173ULL;
};

// ‖f‖ = (2^{-depth} Σ_b ‖f_b‖_{S^q}^p)^{1/p} over the dyadic blocks of a paley_walsh algebra,
// or the algebra L^p norm.
double umd_norm(const Element& f, double p, const UmdOptions& opt);

// max over sign vectors with ε_0 = +1 of ‖Σ ε_k d_k‖ / ‖x_N‖.
double umd_ratio(const Martingale& x, double p, const UmdOptions& opt, std::vector<int>* best_signs = nullptr);

struct UmdEstimate {
    int n = 1;
    double p = 2.0;
    int depth = 1;
    int budget = 0;
    double estimate = 1.0;
    std::vector<int> best_signs;
    Element best_terminal;
    FiltrationDescriptor filtration;
    int evaluations = 0;
};

UmdEstimate umd_lower_bound(int n, double p, int depth, int budget, const UmdOptions& opt = {},
                            int dimension_cap = kDefaultDimensionCap);

} // namespace ncm
