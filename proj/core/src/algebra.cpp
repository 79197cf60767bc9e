// algebra.cpp: block algebras, spectral calculus and singular-value functionals

#include "ncmart/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace ncm {

// ---------------------------------------------------------------- AlgebraSpec

AlgebraSpec::AlgebraSpec(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw DomainError("AlgebraSpec: at least one block is required");
    for (const auto& b : blocks_) {
        if (b.dim < 1) throw DomainError("AlgebraSpec: block dimension must be >= 1");
        if (!(b.weight > 0.0) || !std::isfinite(b.weight))
            throw DomainError("AlgebraSpec: block weight must be a positive finite number");
        total_dim_ += b.dim;
        vector_dim_ += b.dim * b.dim;
        unit_trace_ += b.weight * b.dim;
    }
}

AlgebraSpec AlgebraSpec::full_matrix(int n, double weight) {
    return AlgebraSpec({Block{n, weight}});
}

AlgebraSpec AlgebraSpec::diagonal(int n, double weight) {
    if (n < 1) throw DomainError("AlgebraSpec::diagonal: n must be >= 1");
    return AlgebraSpec(std::vector<Block>(static_cast<std::size_t>(n), Block{1, weight}));
}

void require_same_spec(const AlgebraSpec& a, const AlgebraSpec& b, const char* what) {
    if (!(a == b)) throw CompositionError(std::string(what) + ": operands belong to different algebras");
}

// ---------------------------------------------------------------- Element

Element::Element(AlgebraSpec spec, std::vector<Matrix> blocks)
    : spec_(std::move(spec)), blocks_(std::move(blocks)) {
    if (blocks_.size() != spec_.block_count())
        throw CompositionError("Element: block count does not match the algebra");
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const int d = spec_.block(i).dim;
        if (blocks_[i].rows() != d || blocks_[i].cols() != d)
            throw CompositionError("Element: block " + std::to_string(i) + " has the wrong shape");
    }
}

Element Element::zero(const AlgebraSpec& spec) {
    std::vector<Matrix> blocks;
    blocks.reserve(spec.block_count());
    for (const auto& b : spec.blocks()) blocks.push_back(Matrix::Zero(b.dim, b.dim));
    return Element(spec, std::move(blocks));
}

Element Element::identity(const AlgebraSpec& spec) {
    return scalar(spec, Complex(1.0, 0.0));
}

Element Element::scalar(const AlgebraSpec& spec, Complex c) {
    std::vector<Matrix> blocks;
    blocks.reserve(spec.block_count());
    for (const auto& b : spec.blocks()) blocks.push_back(c * Matrix::Identity(b.dim, b.dim));
    return Element(spec, std::move(blocks));
}

Element Element::diagonal(const AlgebraSpec& spec, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != spec.total_dim())
        throw CompositionError("Element::diagonal: expected one value per basis vector");
    std::vector<Matrix> blocks;
    std::size_t offset = 0;
    for (const auto& b : spec.blocks()) {
        Matrix m = Matrix::Zero(b.dim, b.dim);
        for (int j = 0; j < b.dim; ++j) m(j, j) = values[offset++];
        blocks.push_back(std::move(m));
    }
    return Element(spec, std::move(blocks));
}

Element Element::from_matrix(const AlgebraSpec& spec, const Matrix& m) {
    if (spec.block_count() != 1) throw CompositionError("Element::from_matrix: algebra has more than one block");
    return Element(spec, {m});
}

Element Element::adjoint() const {
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_) out.push_back(b.adjoint());
    return Element(spec_, std::move(out));
}

Element Element::real_part() const {
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_) out.push_back(0.5 * (b + b.adjoint()));
    return Element(spec_, std::move(out));
}

Element Element::imag_part() const {
    const Complex half_inv_i(0.0, -0.5);
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_) out.push_back(half_inv_i * (b - b.adjoint()));
    return Element(spec_, std::move(out));
}

namespace {

template <typename F>
Element blockwise(const Element& x, const Element& y, const char* what, F&& f) {
    require_same_spec(x.spec(), y.spec(), what);
    std::vector<Matrix> out;
    out.reserve(x.blocks().size());
    for (std::size_t i = 0; i < x.blocks().size(); ++i) out.push_back(f(x.block(i), y.block(i)));
    return Element(x.spec(), std::move(out));
}

} // namespace

Element operator+(const Element& x, const Element& y) {
    return blockwise(x, y, "add", [](const Matrix& a, const Matrix& b) -> Matrix { return a + b; });
}

Element operator-(const Element& x, const Element& y) {
    return blockwise(x, y, "sub", [](const Matrix& a, const Matrix& b) -> Matrix { return a - b; });
}

Element operator*(const Element& x, const Element& y) {
    return blockwise(x, y, "mul", [](const Matrix& a, const Matrix& b) -> Matrix { return a * b; });
}

Element operator*(Complex c, const Element& x) {
    std::vector<Matrix> out;
    out.reserve(x.blocks().size());
    for (const auto& b : x.blocks()) out.push_back(c * b);
    return Element(x.spec(), std::move(out));
}

CVector Element::coordinates() const {
    CVector v(spec_.vector_dim());
    Eigen::Index pos = 0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const double s = std::sqrt(spec_.block(i).weight);
        const auto n = blocks_[i].size();
        v.segment(pos, n) = s * Eigen::Map<const CVector>(blocks_[i].data(), n);
        pos += n;
    }
    return v;
}

Element Element::from_coordinates(const AlgebraSpec& spec, const CVector& v) {
    if (v.size() != spec.vector_dim()) throw CompositionError("Element::from_coordinates: wrong length");
    std::vector<Matrix> blocks;
    blocks.reserve(spec.block_count());
    Eigen::Index pos = 0;
    for (const auto& b : spec.blocks()) {
        const double s = 1.0 / std::sqrt(b.weight);
        Matrix m(b.dim, b.dim);
        Eigen::Map<CVector>(m.data(), m.size()) = s * v.segment(pos, m.size());
        pos += m.size();
        blocks.push_back(std::move(m));
    }
    return Element(spec, std::move(blocks));
}

double Element::max_abs_entry() const {
    double m = 0.0;
    for (const auto& b : blocks_) m = std::max(m, b.norm());
    return m;
}

bool Element::is_zero() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const Matrix& b) { return b.isZero(0.0); });
}

Element arith(const Element& x, const Element& y, ArithOp op, Complex c) {
    switch (op) {
    case ArithOp::add: return x + y;
    case ArithOp::sub: return x - y;
    case ArithOp::mul: return x * y;
    case ArithOp::scalar_mul: return c * x;
    case ArithOp::adjoint: return x.adjoint();
    }
    throw DomainError("arith: unknown operation");
}

Complex trace(const Element& x) {
    Complex t(0.0, 0.0);
    for (std::size_t i = 0; i < x.blocks().size(); ++i) t += x.spec().block(i).weight * x.block(i).trace();
    return t;
}

Complex inner(const Element& x, const Element& y) {
    require_same_spec(x.spec(), y.spec(), "inner");
    Complex t(0.0, 0.0);
    for (std::size_t i = 0; i < x.blocks().size(); ++i) {
        // tr(a* b) = Σ conj(a_jk) b_jk
        t += x.spec().block(i).weight * x.block(i).cwiseProduct(y.block(i).conjugate()).sum();
    }
    return std::conj(t);
}

double hs_norm(const Element& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.blocks().size(); ++i) s += x.spec().block(i).weight * x.block(i).squaredNorm();
    return std::sqrt(s);
}

Element commutator(const Element& x, const Element& y) {
    return x * y - y * x;
}

// ---------------------------------------------------------------- spectral

double EigenDecomposition::max_abs_eigenvalue() const {
    double m = 0.0;
    for (const auto& b : blocks)
        if (b.values.size() > 0) m = std::max(m, b.values.cwiseAbs().maxCoeff());
    return m;
}

double EigenDecomposition::min_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : blocks)
        if (b.values.size() > 0) m = std::min(m, b.values.minCoeff());
    return m;
}

double EigenDecomposition::max_eigenvalue() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& b : blocks)
        if (b.values.size() > 0) m = std::max(m, b.values.maxCoeff());
    return m;
}

namespace {

template <typename F>
Element map_spectrum(const EigenDecomposition& eig, F&& f) {
    std::vector<Matrix> out;
    out.reserve(eig.blocks.size());
    for (const auto& b : eig.blocks) {
        RVector mapped = b.values.unaryExpr(f);
        Matrix m = b.vectors * mapped.cast<Complex>().asDiagonal() * b.vectors.adjoint();
        out.push_back(0.5 * (m + m.adjoint()));
    }
    return Element(eig.spec, std::move(out));
}

double block_operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

} // namespace

Element EigenDecomposition::reconstruct() const {
    return map_spectrum(*this, [](double v) { return v; });
}

double operator_norm(const Element& x) {
    double m = 0.0;
    for (const auto& b : x.blocks()) m = std::max(m, block_operator_norm(b));
    return m;
}

double boundary_tol(double operator_norm_of_a) {
    return 1e-9 * std::max(1.0, operator_norm_of_a);
}

bool is_self_adjoint(const Element& a, double rel_tol) {
    double asym = 0.0;
    for (const auto& b : a.blocks()) asym = std::max(asym, (b - b.adjoint()).norm());
    if (asym == 0.0) return true;
    return asym <= rel_tol * operator_norm(a);
}

EigenDecomposition hermitian_eig(const Element& a) {
    EigenDecomposition out;
    out.spec = a.spec();
    out.blocks.reserve(a.blocks().size());
    double asym = 0.0;
    for (const auto& b : a.blocks()) {
        asym = std::max(asym, (b - b.adjoint()).norm());
        const Matrix h = 0.5 * (b + b.adjoint());
        BlockEigen be;
        if (h.rows() == 1) {
            be.values = RVector::Constant(1, h(0, 0).real());
            be.vectors = Matrix::Identity(1, 1);
        } else {
            Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
            if (solver.info() != Eigen::Success) throw ConstructionError("hermitian_eig: eigensolver did not converge");
            be.values = solver.eigenvalues();
            be.vectors = solver.eigenvectors();
        }
        out.blocks.push_back(std::move(be));
    }
    // ‖a - a*‖_∞ ≤ ‖a - a*‖_F and ‖(a + a*)/2‖_∞ ≤ ‖a‖_∞, so passing the cheap test
    // below is sufficient; otherwise fall back to the exact operator norm.
    if (asym > kSelfAdjointTol * out.max_abs_eigenvalue() && !is_self_adjoint(a))
        throw DomainError("hermitian_eig: input is not self-adjoint");
    return out;
}

bool Interval::contains(double lambda, double tol) const {
    if (std::isfinite(lo)) {
        if (lo_closed ? !(lambda >= lo - tol) : !(lambda > lo + tol)) return false;
    }
    if (std::isfinite(hi)) {
        if (hi_closed ? !(lambda <= hi + tol) : !(lambda < hi - tol)) return false;
    }
    return true;
}

Element spectral_projection(const EigenDecomposition& eig, const SpectralSet& set, double tol) {
    return map_spectrum(eig, [&](double v) {
        for (const auto& iv : set)
            if (iv.contains(v, tol)) return 1.0;
        return 0.0;
    });
}

Element spectral_projection(const Element& a, const SpectralSet& set) {
    const auto eig = hermitian_eig(a);
    return spectral_projection(eig, set, boundary_tol(eig.max_abs_eigenvalue()));
}

Element spectral_projection(const Element& a, const Interval& interval) {
    return spectral_projection(a, SpectralSet{interval});
}

namespace {

double log_plus(double v) {
    return v > 1.0 ? std::log(v) : 0.0;
}

bool needs_positive(FunctionTag f) {
    if (f.fn == ScalarFn::sqrt) return true;
    if (f.fn == ScalarFn::abs_power) return f.p != std::floor(f.p);
    return false;
}

} // namespace

Element functional_calculus(const Element& a, FunctionTag f) {
    const auto eig = hermitian_eig(a);
    const double tol = boundary_tol(eig.max_abs_eigenvalue());
    if (needs_positive(f) && eig.blocks.size() > 0 && eig.min_eigenvalue() < -tol)
        throw DomainError("functional_calculus: fractional power of an operator with a negative eigenvalue");
    switch (f.fn) {
    case ScalarFn::abs_power: {
        if (!(f.p > 0.0)) throw DomainError("functional_calculus: exponent must be positive");
        const bool clamp = needs_positive(f);
        return map_spectrum(eig, [&](double v) { return std::pow(clamp ? std::max(v, 0.0) : std::abs(v), f.p); });
    }
    case ScalarFn::sqrt:
        return map_spectrum(eig, [](double v) { return std::sqrt(std::max(v, 0.0)); });
    case ScalarFn::log_plus:
        return map_spectrum(eig, [](double v) { return log_plus(v); });
    case ScalarFn::log_plus_squared:
        return map_spectrum(eig, [](double v) {
            const double l = log_plus(v);
            return l * l;
        });
    }
    throw DomainError("functional_calculus: unknown function tag");
}

Element spectral_map(const EigenDecomposition& eig, const std::function<double(double)>& f) {
    return map_spectrum(eig, f);
}

Element spectral_map(const Element& a, const std::function<double(double)>& f) {
    return map_spectrum(hermitian_eig(a), f);
}

Element modulus(const Element& x) {
    return functional_calculus(x.adjoint() * x, FunctionTag::square_root());
}

JordanParts jordan_decompose(const Element& a) {
    const auto eig = hermitian_eig(a);
    return {map_spectrum(eig, [](double v) { return std::max(v, 0.0); }),
            map_spectrum(eig, [](double v) { return std::max(-v, 0.0); })};
}

std::vector<WeightedValue> singular_values(const Element& x) {
    std::vector<WeightedValue> out;
    out.reserve(static_cast<std::size_t>(x.spec().total_dim()));
    for (std::size_t i = 0; i < x.blocks().size(); ++i) {
        const double w = x.spec().block(i).weight;
        const Matrix& m = x.block(i);
        if (m.rows() == 1) {
            out.push_back({std::abs(m(0, 0)), w});
            continue;
        }
        Eigen::JacobiSVD<Matrix> svd(m);
        const RVector& s = svd.singularValues();
        for (Eigen::Index k = 0; k < s.size(); ++k) out.push_back({s(k), w});
    }
    return out;
}

// ---------------------------------------------------------------- StepFunction

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.size() != values_.size() + 1)
        throw DomainError("StepFunction: need exactly one more breakpoint than values");
    if (breakpoints_.front() != 0.0) throw DomainError("StepFunction: first breakpoint must be 0");
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        if (!(breakpoints_[i] < breakpoints_[i + 1])) throw DomainError("StepFunction: breakpoints must increase");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] < 0.0) throw DomainError("StepFunction: values must be nonnegative");
        if (i > 0 && values_[i] > values_[i - 1]) throw DomainError("StepFunction: values must be nonincreasing");
    }
}

double StepFunction::operator()(double t) const {
    if (t < 0.0) throw DomainError("StepFunction: t must be >= 0");
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
    if (idx == 0 || idx > values_.size()) return 0.0;
    return values_[idx - 1];
}

double StepFunction::integral_power(double p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        s += std::pow(values_[i], p) * (breakpoints_[i + 1] - breakpoints_[i]);
    return s;
}

double StepFunction::sup_t_times_value() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s = std::max(s, values_[i] * breakpoints_[i + 1]);
    return s;
}

StepFunction mu(const Element& x) {
    auto sv = singular_values(x);
    std::stable_sort(sv.begin(), sv.end(), [](const WeightedValue& a, const WeightedValue& b) { return a.value > b.value; });
    std::vector<double> breaks{0.0};
    std::vector<double> values;
    double t = 0.0;
    for (const auto& [value, weight] : sv) {
        if (!(value > 0.0)) break;
        t += weight;
        if (!values.empty() && values.back() == value) {
            breaks.back() = t;
        } else {
            values.push_back(value);
            breaks.push_back(t);
        }
    }
    return StepFunction(std::move(breaks), std::move(values));
}

double distribution(const Element& x, double s) {
    if (!(s >= 0.0)) throw DomainError("distribution: s must be >= 0");
    const auto sv = singular_values(x);
    double top = 0.0;
    for (const auto& v : sv) top = std::max(top, v.value);
    const double tol = boundary_tol(top);
    double mass = 0.0;
    for (const auto& v : sv)
        if (v.value > s + tol) mass += v.weight;
    return mass;
}

double lp_norm(const Element& x, double p) {
    if (!(p > 0.0)) throw DomainError("lp_norm: p must be > 0");
    if (std::isinf(p)) return operator_norm(x);
    double s = 0.0;
    for (const auto& v : singular_values(x))
        if (v.value > 0.0) s += v.weight * std::pow(v.value, p);
    return std::pow(s, 1.0 / p);
}

double weak_l1_norm(const Element& x) {
    return mu(x).sup_t_times_value();
}

double llogl_functional(const Element& x) {
    double s = 0.0;
    for (const auto& v : singular_values(x)) s += v.weight * v.value * log_plus(v.value);
    return s;
}

double llogl_squared_functional(const Element& x) {
    double s = 0.0;
    for (const auto& v : singular_values(x)) {
        const double l = log_plus(v.value);
        s += v.weight * v.value * l * l;
    }
    return s;
}

double llogl_integral(const Element& x) {
    const double total = x.spec().unit_trace();
    const StepFunction f = mu(x);
    // ∫_a^b log(T/t) dt = (b - a) log T - [t log t - t]_a^b, with 0 log 0 = 0.
    auto antiderivative = [](double t) { return t > 0.0 ? t * std::log(t) - t : 0.0; };
    double s = 0.0;
    for (std::size_t i = 0; i < f.step_count(); ++i) {
        const double a = f.breakpoints()[i];
        const double b = std::min(f.breakpoints()[i + 1], total);
        if (b <= a) continue;
        s += f.values()[i] * ((b - a) * std::log(total) - (antiderivative(b) - antiderivative(a)));
    }
    return s;
}

double norm(const Element& x, NormKind which, double p) {
    switch (which) {
    case NormKind::lp: return lp_norm(x, p);
    case NormKind::operator_norm: return operator_norm(x);
    case NormKind::weak_l1: return weak_l1_norm(x);
    case NormKind::llogl_functional: return llogl_functional(x);
    case NormKind::llogl_integral: return llogl_integral(x);
    }
    throw DomainError("norm: unknown kind");
}

std::vector<Element> dyadic_spectral_split(const Element& a) {
    const auto eig = hermitian_eig(a);
    const double top = eig.max_abs_eigenvalue();
    const double tol = boundary_tol(top);
    if (eig.min_eigenvalue() < -tol) throw DomainError("dyadic_spectral_split: input is not positive semidefinite");
    const double largest = std::max(eig.max_eigenvalue(), 0.0);
    const int count = largest >= 1.0 ? static_cast<int>(std::floor(std::log2(largest))) + 1 : 0;

    std::vector<Element> pieces;
    pieces.reserve(static_cast<std::size_t>(count) + 1);
    const Interval below_one{-std::numeric_limits<double>::infinity(), 1.0, false, false};
    pieces.push_back(map_spectrum(eig, [&](double v) { return below_one.contains(v, tol) ? v : 0.0; }));
    for (int k = 1; k <= count; ++k) {
        const Interval band = Interval::half_open(std::ldexp(1.0, k - 1), std::ldexp(1.0, k));
        pieces.push_back(map_spectrum(eig, [&](double v) { return band.contains(v, tol) ? v : 0.0; }));
    }
    return pieces;
}

} // namespace ncm
