// filtration.hpp: unital *-subalgebras, trace-preserving conditional expectations,
// filtrations, martingales and adapted sequences.
//
// A subalgebra is stored as an orthonormal basis in trace-inner-product coordinates
// (see Element::coordinates), so the conditional expectation onto it is the
// orthogonal projection  E(x) = B B* x.  Indices are 0-based throughout: level(0)
// is the coarsest algebra M_1 and level(depth() - 1) is the ambient algebra.

#pragma once

#include "ncmart/algebra.hpp"

#include <memory>
#include <string>
#include <vector>

namespace ncm {

class Subalgebra {
public:
    Subalgebra() = default;

    // Smallest unital *-subalgebra containing gens (empty → scalars).
    static Subalgebra from_generators(const AlgebraSpec& spec, const std::vector<Element>& gens);
    // Columns are orthonormalized; the span must already be a unital *-subalgebra.
    static Subalgebra from_coordinates(const AlgebraSpec& spec, const Matrix& columns);
    static Subalgebra full(const AlgebraSpec& spec);
    static Subalgebra scalars(const AlgebraSpec& spec);

    const AlgebraSpec& spec() const { return spec_; }
    int dimension() const { return full_ ? spec_.vector_dim() : static_cast<int>(basis_.cols()); }
    bool is_full() const { return full_; }

    Element basis_element(int i) const;
    std::vector<Element> basis() const;

    Element expectation(const Element& x) const;
    // ‖x - E(x)‖₂.
    double distance(const Element& x) const;
    bool contains(const Element& x, double rel_tol = 1e-8) const;
    // max over basis elements b of ‖[x, b]‖₂ (basis elements have unit L² norm).
    double max_commutator(const Element& x) const;

    // Closure, Gram and unit certificates; throws ConstructionError on failure.
    void certify() const;

private:
    AlgebraSpec spec_;
    Matrix basis_;  // vector_dim × dimension, unused when full_
    bool full_ = false;
};

Element conditional_expectation(const Subalgebra& sub, const Element& x);

// M_n ∩ M_{n+1}': elements of `inner` commuting with every element of `outer`.
Subalgebra relative_commutant(const Subalgebra& inner, const Subalgebra& outer);

enum class FiltrationKind { tensor, dyadic, paley_walsh, chain, constant };

struct FiltrationDescriptor {
    FiltrationKind kind = FiltrationKind::tensor;
    std::vector<int> dims;  // tensor local dimensions
    int depth = 1;          // dyadic / paley_walsh refinement depth, constant level count
    int matrix_dim = 1;     // paley_walsh block size
    bool normalize = false; // rescale weights so that τ(1) = 1

    static FiltrationDescriptor tensor(std::vector<int> dims, bool normalize = false);
    static FiltrationDescriptor dyadic(int depth, bool normalize = false);
    static FiltrationDescriptor paley_walsh(int depth, int matrix_dim, bool normalize = false);

    std::string label() const;
};

constexpr int kDefaultDimensionCap = 256;

class Filtration;
using FiltrationPtr = std::shared_ptr<const Filtration>;

class Filtration {
public:
    // Certifies Gram/closure of every level, nesting and that the top level is the ambient algebra.
    Filtration(AlgebraSpec spec, std::vector<Subalgebra> levels, FiltrationDescriptor descriptor);

    // tensor: ⊗_i M_{k_i}, level n = first n+1 factors ⊗ 1.
    // dyadic: ℓ^∞ of 2^depth points, level n = 2^n atoms (depth + 1 levels).
    // paley_walsh: 2^depth blocks of M_d, level n = 2^n atoms ⊗ M_d (depth + 1 levels).
    static FiltrationPtr build(const FiltrationDescriptor& d, int dimension_cap = kDefaultDimensionCap);
    // level n = *-algebra generated by generators[0..n]; the last level must be the ambient algebra.
    static FiltrationPtr chain(const AlgebraSpec& spec, const std::vector<std::vector<Element>>& generators);
    // `levels` copies of the ambient algebra.
    static FiltrationPtr constant(const AlgebraSpec& spec, int levels);

    const AlgebraSpec& spec() const { return spec_; }
    std::size_t depth() const { return levels_.size(); }
    const Subalgebra& level(std::size_t n) const { return levels_.at(n); }
    const FiltrationDescriptor& descriptor() const { return descriptor_; }

    Element expectation(std::size_t n, const Element& x) const { return levels_.at(n).expectation(x); }
    // Orthogonal projection onto the martingale-difference space at level n: E_n - E_{n-1} (E_{-1} = 0).
    Element difference_projection(std::size_t n, const Element& x) const;

    // M_n ∩ M_{n+1}' for n < depth() - 1; the center of the ambient algebra for the last level.
    const Subalgebra& relative_commutant(std::size_t n) const { return commutants_.at(n); }

private:
    AlgebraSpec spec_;
    std::vector<Subalgebra> levels_;
    std::vector<Subalgebra> commutants_;
    FiltrationDescriptor descriptor_;
};

// ---------------------------------------------------------------- sequences

class Martingale {
public:
    static Martingale from_terminal(FiltrationPtr filtration, const Element& terminal);
    // Verifies E_n(x_{n+1}) = x_n to tol · max(1, ‖x_N‖₂); throws ContractError otherwise.
    static Martingale from_levels(FiltrationPtr filtration, std::vector<Element> levels, double tol = 1e-9);

    const FiltrationPtr& filtration() const { return filtration_; }
    const AlgebraSpec& spec() const { return filtration_->spec(); }
    std::size_t length() const { return levels_.size(); }
    const Element& level(std::size_t n) const { return levels_.at(n); }
    const std::vector<Element>& levels() const { return levels_; }
    const Element& terminal() const { return levels_.back(); }
    // dx_0 = x_0, dx_n = x_n - x_{n-1}.
    const Element& difference(std::size_t n) const { return differences_.at(n); }
    const std::vector<Element>& differences() const { return differences_; }

    // max_n ‖E_n(x_{n+1}) - x_n‖₂.
    double martingale_defect() const;

private:
    Martingale(FiltrationPtr f, std::vector<Element> levels);

    FiltrationPtr filtration_;
    std::vector<Element> levels_;
    std::vector<Element> differences_;
};

class AdaptedSequence {
public:
    // Throws ContractError if some s_n is farther than 1e-8·max_m ‖s_m‖₂ from span(M_n).
    AdaptedSequence(FiltrationPtr filtration, std::vector<Element> entries);

    static AdaptedSequence from_martingale(const Martingale& x);

    const FiltrationPtr& filtration() const { return filtration_; }
    std::size_t length() const { return entries_.size(); }
    const Element& entry(std::size_t n) const { return entries_.at(n); }
    const std::vector<Element>& entries() const { return entries_; }

private:
    FiltrationPtr filtration_;
    std::vector<Element> entries_;
};

enum class SequenceClass { martingale, supermartingale, submartingale, none };

const char* to_string(SequenceClass c);

// supermartingale: s_n - E_n(s_{n+1}) ⪰ -tol; submartingale: ⪯ tol; both: martingale.
SequenceClass classify_sequence(const AdaptedSequence& s, double tol = 1e-8);

struct KrickebergDecomposition {
    Martingale positive_real;
    Martingale negative_real;
    Martingale positive_imag;
    Martingale negative_imag;

    // (x1 - x2) + i (x3 - x4) at level n.
    Element recombine(std::size_t n) const;
};

KrickebergDecomposition krickeberg_decompose(const Martingale& x);

} // namespace ncm
