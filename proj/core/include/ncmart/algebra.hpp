// algebra.hpp: block-diagonal complex matrix algebras with a weighted trace,
// spectral calculus and the scalar functionals built on generalized singular values.
//
// An algebra is a finite direct sum  M = ⊕_i M_{d_i}(C)  with trace
// τ(x) = Σ_i w_i tr(x_i). Every object in the library lives in such an algebra.

#pragma once

#include "ncmart/errors.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace ncm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

struct Block {
    int dim = 1;
    double weight = 1.0;

    friend bool operator==(const Block&, const Block&) = default;
};

class AlgebraSpec {
public:
    AlgebraSpec() = default;
    explicit AlgebraSpec(std::vector<Block> blocks);

    static AlgebraSpec full_matrix(int n, double weight = 1.0);
    // n one-dimensional blocks: the commutative algebra ℓ^∞_n.
    static AlgebraSpec diagonal(int n, double weight = 1.0);

    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t block_count() const { return blocks_.size(); }
    const Block& block(std::size_t i) const { return blocks_[i]; }

    // Σ d_i, the size of the underlying Hilbert space.
    int total_dim() const { return total_dim_; }
    // Σ d_i², the complex dimension of the algebra as a vector space.
    int vector_dim() const { return vector_dim_; }
    // τ(1) = Σ w_i d_i.
    double unit_trace() const { return unit_trace_; }

    friend bool operator==(const AlgebraSpec& a, const AlgebraSpec& b) { return a.blocks_ == b.blocks_; }

private:
    std::vector<Block> blocks_;
    int total_dim_ = 0;
    int vector_dim_ = 0;
    double unit_trace_ = 0.0;
};

void require_same_spec(const AlgebraSpec& a, const AlgebraSpec& b, const char* what);

// An element of an algebra. Values are immutable; every operation returns a new element.
class Element {
public:
    Element() = default;
    Element(AlgebraSpec spec, std::vector<Matrix> blocks);

    static Element zero(const AlgebraSpec& spec);
    static Element identity(const AlgebraSpec& spec);
    static Element scalar(const AlgebraSpec& spec, Complex c);
    // Real diagonal in the concatenated basis: values.size() == spec.total_dim().
    static Element diagonal(const AlgebraSpec& spec, const std::vector<double>& values);
    // Single-block algebra convenience.
    static Element from_matrix(const AlgebraSpec& spec, const Matrix& m);

    const AlgebraSpec& spec() const { return spec_; }
    const std::vector<Matrix>& blocks() const { return blocks_; }
    const Matrix& block(std::size_t i) const { return blocks_[i]; }

    Element adjoint() const;
    // (x + x*)/2 and (x - x*)/(2i).
    Element real_part() const;
    Element imag_part() const;

    friend Element operator+(const Element& x, const Element& y);
    friend Element operator-(const Element& x, const Element& y);
    friend Element operator*(const Element& x, const Element& y);
    friend Element operator*(Complex c, const Element& x);
    friend Element operator*(const Element& x, Complex c) { return c * x; }
    friend Element operator*(double c, const Element& x) { return Complex(c, 0.0) * x; }
    friend Element operator*(const Element& x, double c) { return Complex(c, 0.0) * x; }
    Element operator-() const { return Complex(-1.0, 0.0) * (*this); }

    // Trace-inner-product coordinates: block entries scaled by √w_i, column-major,
    // so that ⟨x, y⟩ = τ(x* y) becomes the Euclidean inner product.
    CVector coordinates() const;
    static Element from_coordinates(const AlgebraSpec& spec, const CVector& v);

    // max_i ‖x_i‖_F; cheap magnitude used for tolerances.
    double max_abs_entry() const;
    bool is_zero() const;

private:
    AlgebraSpec spec_;
    std::vector<Matrix> blocks_;
};

enum class ArithOp { add, sub, mul, scalar_mul, adjoint };

// Dispatching form of the *-algebra operations; `c` is used only by scalar_mul
// and `y` is ignored by the unary ops.
Element arith(const Element& x, const Element& y, ArithOp op, Complex c = {1.0, 0.0});

Complex trace(const Element& x);
// ⟨x, y⟩ = τ(x* y).
Complex inner(const Element& x, const Element& y);
// ‖x‖₂ = τ(x*x)^{1/2}.
double hs_norm(const Element& x);
// [x, y] = xy - yx.
Element commutator(const Element& x, const Element& y);

// ---------------------------------------------------------------- spectral

struct BlockEigen {
    RVector values;  // ascending
    Matrix vectors;  // columns orthonormal
};

struct EigenDecomposition {
    AlgebraSpec spec;
    std::vector<BlockEigen> blocks;

    double max_abs_eigenvalue() const;
    double min_eigenvalue() const;
    double max_eigenvalue() const;
    Element reconstruct() const;
};

constexpr double kSelfAdjointTol = 1e-10;

bool is_self_adjoint(const Element& a, double rel_tol = kSelfAdjointTol);

// Symmetrizes (a + a*)/2 and diagonalizes each block. Throws DomainError when
// ‖a - a*‖ exceeds kSelfAdjointTol · ‖a‖_∞.
EigenDecomposition hermitian_eig(const Element& a);

// Operator norm ‖x‖_∞ (largest singular value over blocks).
double operator_norm(const Element& x);

// Boundary tolerance for spectral sets: 1e-9 · max(1, ‖a‖_∞).
double boundary_tol(double operator_norm_of_a);

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_closed = false;
    bool hi_closed = false;

    static Interval open_above(double c) { return {c, std::numeric_limits<double>::infinity(), false, false}; }
    static Interval closed_above(double c) { return {c, std::numeric_limits<double>::infinity(), true, false}; }
    static Interval closed(double a, double b) { return {a, b, true, true}; }
    static Interval half_open(double a, double b) { return {a, b, true, false}; }
    static Interval real_line() { return {}; }

    // Membership with the boundary rule: open ends need λ beyond c by tol, closed ends
    // admit λ within tol of c.
    bool contains(double lambda, double tol) const;
};

using SpectralSet = std::vector<Interval>;

Element spectral_projection(const Element& a, const SpectralSet& set);
Element spectral_projection(const Element& a, const Interval& interval);
Element spectral_projection(const EigenDecomposition& eig, const SpectralSet& set, double tol);

enum class ScalarFn { abs_power, log_plus, sqrt, log_plus_squared };

struct FunctionTag {
    ScalarFn fn = ScalarFn::sqrt;
    double p = 1.0;  // exponent for abs_power

    static FunctionTag power(double p) { return {ScalarFn::abs_power, p}; }
    static FunctionTag log_plus() { return {ScalarFn::log_plus, 0.0}; }
    static FunctionTag square_root() { return {ScalarFn::sqrt, 0.0}; }
    static FunctionTag log_plus_squared() { return {ScalarFn::log_plus_squared, 0.0}; }
};

// Applies f to the spectrum of self-adjoint a. sqrt and non-integer powers clamp
// eigenvalues in [-tol_b, 0) to 0 and reject anything more negative.
Element functional_calculus(const Element& a, FunctionTag f);

// f applied to the spectrum of self-adjoint a (no positivity requirement).
Element spectral_map(const Element& a, const std::function<double(double)>& f);
Element spectral_map(const EigenDecomposition& eig, const std::function<double(double)>& f);

// |x| = (x*x)^{1/2}.
Element modulus(const Element& x);

struct JordanParts {
    Element positive;
    Element negative;
};

JordanParts jordan_decompose(const Element& a);

// Singular values of x grouped by block, each paired with its block weight.
struct WeightedValue {
    double value;
    double weight;
};
std::vector<WeightedValue> singular_values(const Element& x);

// ---------------------------------------------------------------- μ and λ

// Right-continuous nonincreasing step function on [0, τ(1)):
//   f(t) = values[i] for t in [breakpoints[i], breakpoints[i+1]),  0 for t >= breakpoints.back().
// Zero-valued steps are dropped, so the zero function has breakpoints = {0}, no values.
class StepFunction {
public:
    StepFunction() : breakpoints_{0.0} {}
    StepFunction(std::vector<double> breakpoints, std::vector<double> values);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t step_count() const { return values_.size(); }

    double operator()(double t) const;
    // ∫ f^p dt, exact over steps.
    double integral_power(double p) const;
    // sup_{t>0} t f(t), attained at the left limits of breakpoints.
    double sup_t_times_value() const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

StepFunction mu(const Element& x);

// λ_s(x) = τ(χ_{(s,∞)}(|x|)), with the open-endpoint boundary rule.
double distribution(const Element& x, double s);

enum class NormKind { lp, operator_norm, weak_l1, llogl_functional, llogl_integral };

double norm(const Element& x, NormKind which, double p = 1.0);

double lp_norm(const Element& x, double p);
double weak_l1_norm(const Element& x);
// τ(|x| log⁺|x|).
double llogl_functional(const Element& x);
// τ(|x| (log⁺|x|)²).
double llogl_squared_functional(const Element& x);
// ∫₀^{τ(1)} μ_t(x) log⁺(τ(1)/t) dt.
double llogl_integral(const Element& x);

// a₀ = a·χ_{[0,1)}(a), a_k = a·χ_{[2^{k-1},2^k)}(a), k = 1..K with K = ⌈log₂‖a‖_∞⌉ + 1.
std::vector<Element> dyadic_spectral_split(const Element& a);

} // namespace ncm
