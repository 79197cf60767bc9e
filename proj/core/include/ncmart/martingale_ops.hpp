// martingale_ops.hpp: transforms, Cuculescu projections, Doob-type decomposition,
// square functions, column/row norms, Hardy norms and the Stein projection.
//
// Levels and differences are 0-based: d_0 = x_0 and the multiplier entry ξ_k
// (k ≥ 1) multiplies d_k, so it must lie in level k-1 and commute with level k.

#pragma once

#include "ncmart/filtration.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ncm {

enum class MultiplierMode { signs, operators };

const char* to_string(MultiplierMode m);

struct MultiplierCertificate {
    double norm_excess = 0.0;     // max_k (‖ξ_k‖_∞ - 1), clipped at 0
    double commutator = 0.0;      // max_k max_b ‖[ξ_k, b]‖₂ over basis b of level k
    double adaptedness = 0.0;     // max_k dist(ξ_k, level k-1) / max(1, ‖ξ_k‖₂)
    bool ok = false;
};

class MultiplierSequence {
public:
    // signs.size() == depth, signs[0] == +1, entries in {-1, +1}.
    static MultiplierSequence signs(FiltrationPtr filtration, const std::vector<int>& signs);
    // entries.size() == depth, entries[0] == 1. Not certified here: inspect certificate().
    static MultiplierSequence operators(FiltrationPtr filtration, std::vector<Element> entries);

    MultiplierMode mode() const { return mode_; }
    const FiltrationPtr& filtration() const { return filtration_; }
    std::size_t length() const { return entries_.size(); }
    const Element& entry(std::size_t k) const { return entries_.at(k); }
    const std::vector<Element>& entries() const { return entries_; }
    // Empty unless mode() == signs.
    const std::vector<int>& sign_values() const { return signs_; }

    const MultiplierCertificate& certificate() const { return certificate_; }
    bool certified() const { return certificate_.ok; }

private:
    MultiplierSequence(FiltrationPtr f, std::vector<Element> entries, MultiplierMode mode);

    FiltrationPtr filtration_;
    std::vector<Element> entries_;
    std::vector<int> signs_;
    MultiplierMode mode_ = MultiplierMode::signs;
    MultiplierCertificate certificate_;
};

// Σ_k ξ_k d_k with ξ_0 = 1. Throws ContractError for uncertified or mismatched multipliers.
Element transform(const Martingale& x, const MultiplierSequence& xi);
// ξ_0 s_0 + Σ_{k≥1} ξ_k (s_k - s_{k-1}).
Element transform_sequence(const AdaptedSequence& s, const MultiplierSequence& xi);

// ---------------------------------------------------------------- Cuculescu

struct CuculescuCertificate {
    double membership = 0.0;    // max_n dist(q_n, level n) / max(1, ‖q_n‖₂)
    double commutation = 0.0;   // max_n ‖[q_n, q_{n-1} x_n q_{n-1}]‖₂
    double lambda_excess = 0.0; // max_n λ_max(q_n x_n q_n - λ q_n)
    double monotonicity = 0.0;  // max_n -λ_min(q_{n-1} - q_n)
    double projection = 0.0;    // max_n ‖q_n² - q_n‖_∞
    double trace_excess = 0.0;  // τ(1 - q) - τ(x_0)/λ
    double scale = 1.0;         // max(1, max_n ‖x_n‖_∞), multiplies the tolerances
};

struct CuculescuResult {
    double lambda = 0.0;
    std::vector<Element> projections;  // q_0 ≥ q_1 ≥ ... (one per level)
    double tau_one_minus_q = 0.0;
    double trace_bound = 0.0;          // τ(x_0)/λ
    CuculescuCertificate certificate;

    const Element& q() const { return projections.back(); }
    // Every certificate entry within tol · scale (trace excess within tol).
    bool holds(double tol = 1e-8) const;
};

// q_n = q_{n-1} - χ_{(λ,∞)}(q_{n-1} x_n q_{n-1}), q_{-1} = 1.
CuculescuResult cuculescu(const Martingale& x, double lambda);

// ---------------------------------------------------------------- Doob

struct DoobDecomposition {
    std::vector<Element> y;  // martingale part
    std::vector<Element> z;  // predictable part, z_0 = 0
    SequenceClass sense = SequenceClass::none;

    double martingale_defect = 0.0;  // max_k ‖E_k(y_{k+1}) - y_k‖₂
    double recombination = 0.0;      // max_k ‖y_k + z_k - s_k‖₂
    double predictability = 0.0;     // max_{k≥1} dist(z_k, level k-1)
    // Largest violation of z's monotonicity in the direction of `sense`
    // (λ_max(z_k - z_{k-1}) for super, -λ_min for sub); 0 for martingales and `none`.
    double monotonicity = 0.0;
};

DoobDecomposition doob_decompose(const AdaptedSequence& s);

// ---------------------------------------------------------------- split and lemma

struct TruncationParts {
    Element qsq;        // q S q
    Element lower_left; // (1-q) S q
    Element right;      // S (1-q)
};

// Throws DomainError unless q is a projection to 1e-9.
TruncationParts truncation_split(const Element& s, const Element& q);

struct Lemma1Result {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

Lemma1Result lemma1_bound(const Martingale& x, const MultiplierSequence& xi, double lambda, double alpha,
                          double beta);
// Same, reusing an existing Cuculescu result for x at cuc.lambda.
Lemma1Result lemma1_bound(const Martingale& x, const MultiplierSequence& xi, const CuculescuResult& cuc,
                          double alpha, double beta);

// Quantities from the bounded-difference reduction for a positive martingale x at level λ.
struct TruncatedChain {
    CuculescuResult cuculescu;
    DoobDecomposition doob;          // of s_k = q_k x_k q_k
    double energy = 0.0;             // ‖y_N‖₂²
    double energy_bound = 0.0;       // 6 λ τ(x_0)
    double y_norm = 0.0;             // ‖y_N‖₂
    double z_norm = 0.0;             // ‖z_N‖₂
    double removal = 0.0;            // ‖ξ-transform of s‖₂²
    double removal_bound = 0.0;      // 4 ‖y_N‖₂²
};

TruncatedChain truncated_chain(const Martingale& x, const MultiplierSequence& xi, double lambda);

// ---------------------------------------------------------------- square functions and norms

struct SquareFunctions {
    Element column;  // (Σ_{k<n} |d_k|²)^{1/2}
    Element row;     // (Σ_{k<n} |d_k*|²)^{1/2}
};

// n counts differences, 1 ≤ n ≤ x.length().
SquareFunctions square_functions(const Martingale& x, std::size_t n);

enum class ColumnRow { column, row, intersection, sum };

const char* to_string(ColumnRow w);

// ‖(Σ a_k* a_k)^{1/2}‖_p and ‖(Σ a_k a_k*)^{1/2}‖_p.
double column_norm(const std::vector<Element>& a, double p);
double row_norm(const std::vector<Element>& a, double p);

struct DescentOptions {
    int iterations = 150;
    int random_moves = 60;
    std::uint64_t seed = 0x6a09e667f3bcc909ULL;
};

struct ColumnRowResult {
    double value = 0.0;
    bool upper_bound = false;        // true for the sum norm: the value is a feasible point
    std::vector<Element> column_part; // witness b with a = b + c (sum norm only)
    std::vector<Element> row_part;    // witness c
    int evaluations = 0;
};

// Feasible-direction map for the sum-norm descent: receives the coordinate index and a
// direction, returns its projection onto the admissible directions for that coordinate.
using DirectionProjector = std::function<Element(std::size_t, const Element&)>;

// inf over a = b + c of ‖b‖_C + ‖c‖_R, approximated from above. `project` restricts b
// (identity if empty); starting points (a,0), (0,a), (a/2,a/2) must be admissible.
ColumnRowResult sum_norm_descent(const std::vector<Element>& a, double p, const DirectionProjector& project,
                                 const DescentOptions& opt = {});

ColumnRowResult column_row_norm(const std::vector<Element>& a, double p, ColumnRow which,
                                const DescentOptions& opt = {});

struct HardyResult {
    double value = 0.0;
    double column = 0.0;   // ‖S_C‖_p
    double row = 0.0;      // ‖S_R‖_p
    bool upper_bound = false;
};

// p ≥ 2: max(‖S_C‖_p, ‖S_R‖_p). 1 ≤ p < 2: descent over splits into two martingales.
HardyResult hardy_norm(const Martingale& x, double p, const DescentOptions& opt = {});

// (E_k(a_k))_k. a.size() must not exceed the filtration depth.
std::vector<Element> stein_Q(const std::vector<Element>& a, const Filtration& filt);

} // namespace ncm
