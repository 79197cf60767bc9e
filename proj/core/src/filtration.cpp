// filtration.cpp: subalgebras, conditional expectations, filtration builders, sequences

#include "ncmart/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace ncm {

namespace {

constexpr double kGramTol = 1e-10;
constexpr double kSpanTol = 1e-8;
constexpr double kDropTol = 1e-9;
constexpr int kClosureIterationCap = 64;
// Above this many basis pairs the closure certificate switches to random probes.
constexpr long kExhaustiveClosurePairs = 4096;

// Incrementally grown orthonormal column set.
class OrthoBasis {
public:
    explicit OrthoBasis(Eigen::Index rows) : cols_(rows, 0) {}

    // Adds the component of v orthogonal to the current span when it is not negligible.
    bool add(const CVector& v) {
        const double scale = v.norm();
        if (scale == 0.0) return false;
        CVector r = v;
        for (int pass = 0; pass < 2 && cols_.cols() > 0; ++pass) r -= cols_ * (cols_.adjoint() * r);
        const double rn = r.norm();
        if (rn <= kDropTol * scale) return false;
        cols_.conservativeResize(Eigen::NoChange, cols_.cols() + 1);
        cols_.col(cols_.cols() - 1) = r / rn;
        return true;
    }

    const Matrix& columns() const { return cols_; }
    Eigen::Index size() const { return cols_.cols(); }

private:
    Matrix cols_;
};

double relative_residual(const Matrix& basis, const CVector& v) {
    const double scale = std::max(1.0, v.norm());
    if (basis.cols() == 0) return v.norm() / scale;
    return (v - basis * (basis.adjoint() * v)).norm() / scale;
}

Element matrix_unit(const AlgebraSpec& spec, std::size_t block, int row, int col) {
    Element e = Element::zero(spec);
    std::vector<Matrix> blocks = e.blocks();
    blocks[block](row, col) = 1.0 / std::sqrt(spec.block(block).weight);
    return Element(spec, std::move(blocks));
}

} // namespace

// ---------------------------------------------------------------- Subalgebra

Subalgebra Subalgebra::full(const AlgebraSpec& spec) {
    Subalgebra s;
    s.spec_ = spec;
    s.full_ = true;
    return s;
}

Subalgebra Subalgebra::scalars(const AlgebraSpec& spec) {
    return from_generators(spec, {});
}

Subalgebra Subalgebra::from_coordinates(const AlgebraSpec& spec, const Matrix& columns) {
    if (columns.rows() != spec.vector_dim())
        throw CompositionError("Subalgebra::from_coordinates: wrong coordinate length");
    OrthoBasis ob(spec.vector_dim());
    for (Eigen::Index j = 0; j < columns.cols(); ++j) ob.add(columns.col(j));
    Subalgebra s;
    s.spec_ = spec;
    if (ob.size() == spec.vector_dim()) {
        s.full_ = true;
    } else {
        s.basis_ = ob.columns();
    }
    return s;
}

Subalgebra Subalgebra::from_generators(const AlgebraSpec& spec, const std::vector<Element>& gens) {
    OrthoBasis ob(spec.vector_dim());
    ob.add(Element::identity(spec).coordinates());
    for (const auto& g : gens) {
        require_same_spec(spec, g.spec(), "Subalgebra::from_generators");
        ob.add(g.coordinates());
        ob.add(g.adjoint().coordinates());
    }
    const Eigen::Index full_dim = spec.vector_dim();
    for (int iter = 0;; ++iter) {
        if (iter >= kClosureIterationCap)
            throw ConstructionError("Subalgebra::from_generators: closure did not stabilize");
        const Eigen::Index before = ob.size();
        std::vector<Element> current;
        current.reserve(static_cast<std::size_t>(before));
        for (Eigen::Index j = 0; j < before; ++j)
            current.push_back(Element::from_coordinates(spec, ob.columns().col(j)));
        for (const auto& a : current) {
            ob.add(a.adjoint().coordinates());
            for (const auto& b : current) ob.add((a * b).coordinates());
            if (ob.size() == full_dim) break;
        }
        if (ob.size() == before || ob.size() == full_dim) break;
    }
    Subalgebra s = from_coordinates(spec, ob.columns());
    s.certify();
    return s;
}

Element Subalgebra::basis_element(int i) const {
    if (!full_) return Element::from_coordinates(spec_, basis_.col(i));
    int offset = 0;
    for (std::size_t b = 0; b < spec_.block_count(); ++b) {
        const int d = spec_.block(b).dim;
        if (i < offset + d * d) {
            const int local = i - offset;
            return matrix_unit(spec_, b, local % d, local / d);
        }
        offset += d * d;
    }
    throw std::out_of_range("Subalgebra::basis_element: index out of range");
}

std::vector<Element> Subalgebra::basis() const {
    std::vector<Element> out;
    const int m = dimension();
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out.push_back(basis_element(i));
    return out;
}

Element Subalgebra::expectation(const Element& x) const {
    require_same_spec(spec_, x.spec(), "conditional_expectation");
    if (full_) return x;
    const CVector v = x.coordinates();
    return Element::from_coordinates(spec_, basis_ * (basis_.adjoint() * v));
}

double Subalgebra::distance(const Element& x) const {
    require_same_spec(spec_, x.spec(), "Subalgebra::distance");
    if (full_) return 0.0;
    const CVector v = x.coordinates();
    return (v - basis_ * (basis_.adjoint() * v)).norm();
}

bool Subalgebra::contains(const Element& x, double rel_tol) const {
    return distance(x) <= rel_tol * std::max(1.0, hs_norm(x));
}

double Subalgebra::max_commutator(const Element& x) const {
    double worst = 0.0;
    const int m = dimension();
    for (int i = 0; i < m; ++i) worst = std::max(worst, hs_norm(commutator(x, basis_element(i))));
    return worst;
}

void Subalgebra::certify() const {
    if (full_) return;
    const Eigen::Index m = basis_.cols();
    const Matrix gram = basis_.adjoint() * basis_;
    if ((gram - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > kGramTol)
        throw ConstructionError("Subalgebra: basis is not orthonormal");
    if (relative_residual(basis_, Element::identity(spec_).coordinates()) > kSpanTol)
        throw ConstructionError("Subalgebra: span does not contain the unit");

    const auto elems = basis();
    auto check = [&](const Element& e, const char* what) {
        if (relative_residual(basis_, e.coordinates()) > kSpanTol)
            throw ConstructionError(std::string("Subalgebra: span is not closed under ") + what);
    };
    for (const auto& b : elems) check(b.adjoint(), "adjoints");
    if (static_cast<long>(m) * m <= kExhaustiveClosurePairs) {
        for (const auto& a : elems)
            for (const auto& b : elems) check(a * b, "products");
    } else {
        // Random elements u, v of the span: uv lies in the span for all u, v iff it does
        // for generic ones.
        std::mt19937_64 gen(0x5eedULL + static_cast<unsigned long long>(m));
        std::normal_distribution<double> normal;
        auto random_member = [&] {
            CVector c(m);
            for (Eigen::Index k = 0; k < m; ++k) c(k) = Complex(normal(gen), normal(gen));
            return Element::from_coordinates(spec_, basis_ * c / c.norm());
        };
        for (int probe = 0; probe < 16; ++probe) check(random_member() * random_member(), "products");
    }
}

Element conditional_expectation(const Subalgebra& sub, const Element& x) {
    return sub.expectation(x);
}

Subalgebra relative_commutant(const Subalgebra& inner, const Subalgebra& outer) {
    require_same_spec(inner.spec(), outer.spec(), "relative_commutant");
    const AlgebraSpec& spec = inner.spec();
    const int m = inner.dimension();
    const auto inner_basis = inner.basis();
    // Commuting with a generating *-closed set of `outer` suffices. For the ambient algebra a
    // diagonal with distinct entries plus the per-block cyclic shift and its adjoint generate.
    std::vector<Element> gens;
    if (outer.is_full()) {
        std::vector<Matrix> diag;
        std::vector<Matrix> shift;
        int offset = 0;
        for (const auto& b : spec.blocks()) {
            Matrix d = Matrix::Zero(b.dim, b.dim);
            Matrix s = Matrix::Zero(b.dim, b.dim);
            for (int r = 0; r < b.dim; ++r) {
                d(r, r) = static_cast<double>(offset + r + 1);
                s((r + 1) % b.dim, r) = 1.0;
            }
            offset += b.dim;
            diag.push_back(std::move(d));
            shift.push_back(std::move(s));
        }
        const Element s(spec, std::move(shift));
        gens = {Element(spec, std::move(diag)), s, s.adjoint()};
    } else {
        gens = outer.basis();
    }
    // Σ_i c_i [b_i, g] = 0 for every g; accumulate the Gram matrix of the linear map c ↦ ([Σ c_i b_i, g_j])_j.
    Matrix gram = Matrix::Zero(m, m);
    Matrix cols(spec.vector_dim(), m);
    for (const auto& g : gens) {
        for (int i = 0; i < m; ++i) cols.col(i) = commutator(inner_basis[static_cast<std::size_t>(i)], g).coordinates();
        gram.noalias() += cols.adjoint() * cols;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    const RVector& ev = solver.eigenvalues();
    const double cut = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    Matrix kernel(spec.vector_dim(), 0);
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        if (ev(k) > cut) continue;
        CVector combo = CVector::Zero(spec.vector_dim());
        for (int i = 0; i < m; ++i) combo += solver.eigenvectors()(i, k) * inner_basis[static_cast<std::size_t>(i)].coordinates();
        kernel.conservativeResize(Eigen::NoChange, kernel.cols() + 1);
        kernel.col(kernel.cols() - 1) = combo;
    }
    Subalgebra out = Subalgebra::from_coordinates(spec, kernel);
    out.certify();
    return out;
}

// ---------------------------------------------------------------- descriptors

FiltrationDescriptor FiltrationDescriptor::tensor(std::vector<int> dims, bool normalize) {
    FiltrationDescriptor d;
    d.kind = FiltrationKind::tensor;
    d.dims = std::move(dims);
    d.depth = static_cast<int>(d.dims.size());
    d.normalize = normalize;
    return d;
}

FiltrationDescriptor FiltrationDescriptor::dyadic(int depth, bool normalize) {
    FiltrationDescriptor d;
    d.kind = FiltrationKind::dyadic;
    d.depth = depth;
    d.normalize = normalize;
    return d;
}

FiltrationDescriptor FiltrationDescriptor::paley_walsh(int depth, int matrix_dim, bool normalize) {
    FiltrationDescriptor d;
    d.kind = FiltrationKind::paley_walsh;
    d.depth = depth;
    d.matrix_dim = matrix_dim;
    d.normalize = normalize;
    return d;
}

std::string FiltrationDescriptor::label() const {
    std::ostringstream os;
    switch (kind) {
    case FiltrationKind::tensor:
        os << "tensor[";
        for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
        os << "]";
        break;
    case FiltrationKind::dyadic: os << "dyadic(" << depth << ")"; break;
    case FiltrationKind::paley_walsh: os << "paley_walsh(" << depth << "," << matrix_dim << ")"; break;
    case FiltrationKind::chain: os << "chain(" << depth << ")"; break;
    case FiltrationKind::constant: os << "constant(" << depth << ")"; break;
    }
    if (normalize) os << "/normalized";
    return os.str();
}

// ---------------------------------------------------------------- Filtration

Filtration::Filtration(AlgebraSpec spec, std::vector<Subalgebra> levels, FiltrationDescriptor descriptor)
    : spec_(std::move(spec)), levels_(std::move(levels)), descriptor_(std::move(descriptor)) {
    if (levels_.empty()) throw ConstructionError("Filtration: at least one level is required");
    for (const auto& l : levels_) {
        require_same_spec(spec_, l.spec(), "Filtration");
        l.certify();
    }
    if (!levels_.back().is_full()) throw ConstructionError("Filtration: top level must be the ambient algebra");
    for (std::size_t n = 0; n + 1 < levels_.size(); ++n) {
        const auto& lower = levels_[n];
        const auto& upper = levels_[n + 1];
        if (upper.is_full()) continue;
        for (int i = 0; i < lower.dimension(); ++i) {
            if (!upper.contains(lower.basis_element(i), kSpanTol))
                throw ConstructionError("Filtration: levels are not nested");
        }
    }
    commutants_.reserve(levels_.size());
    for (std::size_t n = 0; n < levels_.size(); ++n) {
        const auto& outer = n + 1 < levels_.size() ? levels_[n + 1] : levels_[n];
        commutants_.push_back(ncm::relative_commutant(levels_[n], outer));
    }
}

Element Filtration::difference_projection(std::size_t n, const Element& x) const {
    Element e = expectation(n, x);
    if (n == 0) return e;
    return e - expectation(n - 1, x);
}

namespace {

std::vector<Block> weighted_blocks(int count, int dim, bool normalize) {
    const double total = static_cast<double>(count) * dim;
    return std::vector<Block>(static_cast<std::size_t>(count), Block{dim, normalize ? 1.0 / total : 1.0});
}

void check_cap(long total_dim, int cap) {
    if (total_dim > cap)
        throw SizeError("build_filtration: total dimension " + std::to_string(total_dim) + " exceeds cap " +
                        std::to_string(cap));
}

FiltrationPtr build_tensor(const FiltrationDescriptor& d, int cap) {
    if (d.dims.empty()) throw DomainError("build_filtration: tensor needs at least one factor");
    long total = 1;
    for (int k : d.dims) {
        if (k < 1) throw DomainError("build_filtration: tensor factor dimension must be >= 1");
        total *= k;
        check_cap(total, cap);
    }
    const int K = static_cast<int>(total);
    const AlgebraSpec spec(weighted_blocks(1, K, d.normalize));
    std::vector<Subalgebra> levels;
    int left = 1;
    for (std::size_t i = 0; i < d.dims.size(); ++i) {
        left *= d.dims[i];
        if (i + 1 == d.dims.size()) {
            levels.push_back(Subalgebra::full(spec));
            break;
        }
        const int right = K / left;
        // basis kron(E_ab, I_right) / sqrt(τ(...)), column-major coordinates
        Matrix cols = Matrix::Zero(spec.vector_dim(), static_cast<Eigen::Index>(left) * left);
        const double v = 1.0 / std::sqrt(static_cast<double>(right));
        for (int b = 0; b < left; ++b) {
            for (int a = 0; a < left; ++a) {
                const Eigen::Index col = static_cast<Eigen::Index>(b) * left + a;
                for (int r = 0; r < right; ++r) {
                    const Eigen::Index row_idx = static_cast<Eigen::Index>(a) * right + r;
                    const Eigen::Index col_idx = static_cast<Eigen::Index>(b) * right + r;
                    cols(col_idx * K + row_idx, col) = v;
                }
            }
        }
        levels.push_back(Subalgebra::from_coordinates(spec, cols));
    }
    return std::make_shared<const Filtration>(spec, std::move(levels), d);
}

// 2^depth blocks of size `dim`; level i spans (indicator of a dyadic atom) ⊗ M_dim.
FiltrationPtr build_dyadic_blocks(const FiltrationDescriptor& d, int dim, int cap) {
    if (d.depth < 1) throw DomainError("build_filtration: depth must be >= 1");
    if (dim < 1) throw DomainError("build_filtration: matrix dimension must be >= 1");
    if (d.depth > 20) throw SizeError("build_filtration: depth too large");
    const long count = 1L << d.depth;
    check_cap(count * dim, cap);
    const AlgebraSpec spec(weighted_blocks(static_cast<int>(count), dim, d.normalize));
    const int block_size = dim * dim;
    std::vector<Subalgebra> levels;
    for (int i = 0; i <= d.depth; ++i) {
        if (i == d.depth) {
            levels.push_back(Subalgebra::full(spec));
            break;
        }
        const long atoms = 1L << i;
        const long per_atom = count / atoms;
        const double v = 1.0 / std::sqrt(static_cast<double>(per_atom));
        Matrix cols = Matrix::Zero(spec.vector_dim(), atoms * block_size);
        for (long a = 0; a < atoms; ++a) {
            for (int u = 0; u < block_size; ++u) {
                const Eigen::Index col = a * block_size + u;
                for (long b = a * per_atom; b < (a + 1) * per_atom; ++b) cols(b * block_size + u, col) = v;
            }
        }
        levels.push_back(Subalgebra::from_coordinates(spec, cols));
    }
    return std::make_shared<const Filtration>(spec, std::move(levels), d);
}

} // namespace

FiltrationPtr Filtration::build(const FiltrationDescriptor& d, int dimension_cap) {
    switch (d.kind) {
    case FiltrationKind::tensor: return build_tensor(d, dimension_cap);
    case FiltrationKind::dyadic: return build_dyadic_blocks(d, 1, dimension_cap);
    case FiltrationKind::paley_walsh: return build_dyadic_blocks(d, d.matrix_dim, dimension_cap);
    case FiltrationKind::chain:
        throw DomainError("build_filtration: chain filtrations are built from generators (Filtration::chain)");
    case FiltrationKind::constant:
        throw DomainError("build_filtration: constant filtrations need an algebra (Filtration::constant)");
    }
    throw DomainError("build_filtration: unknown kind");
}

FiltrationPtr Filtration::chain(const AlgebraSpec& spec, const std::vector<std::vector<Element>>& generators) {
    if (generators.empty()) throw DomainError("Filtration::chain: at least one generator list is required");
    std::vector<Subalgebra> levels;
    std::vector<Element> accumulated;
    for (const auto& gens : generators) {
        accumulated.insert(accumulated.end(), gens.begin(), gens.end());
        levels.push_back(Subalgebra::from_generators(spec, accumulated));
    }
    FiltrationDescriptor d;
    d.kind = FiltrationKind::chain;
    d.depth = static_cast<int>(generators.size());
    return std::make_shared<const Filtration>(spec, std::move(levels), d);
}

FiltrationPtr Filtration::constant(const AlgebraSpec& spec, int levels) {
    if (levels < 1) throw DomainError("Filtration::constant: levels must be >= 1");
    FiltrationDescriptor d;
    d.kind = FiltrationKind::constant;
    d.depth = levels;
    return std::make_shared<const Filtration>(
        spec, std::vector<Subalgebra>(static_cast<std::size_t>(levels), Subalgebra::full(spec)), d);
}

// ---------------------------------------------------------------- Martingale

Martingale::Martingale(FiltrationPtr f, std::vector<Element> levels)
    : filtration_(std::move(f)), levels_(std::move(levels)) {
    differences_.reserve(levels_.size());
    for (std::size_t n = 0; n < levels_.size(); ++n)
        differences_.push_back(n == 0 ? levels_[0] : levels_[n] - levels_[n - 1]);
}

Martingale Martingale::from_terminal(FiltrationPtr filtration, const Element& terminal) {
    require_same_spec(filtration->spec(), terminal.spec(), "martingale_from_terminal");
    std::vector<Element> levels;
    levels.reserve(filtration->depth());
    for (std::size_t n = 0; n < filtration->depth(); ++n) levels.push_back(filtration->expectation(n, terminal));
    return Martingale(std::move(filtration), std::move(levels));
}

Martingale Martingale::from_levels(FiltrationPtr filtration, std::vector<Element> levels, double tol) {
    if (levels.size() != filtration->depth())
        throw ContractError("Martingale::from_levels: need one element per filtration level");
    for (const auto& l : levels) require_same_spec(filtration->spec(), l.spec(), "Martingale::from_levels");
    Martingale m(std::move(filtration), std::move(levels));
    const double scale = std::max(1.0, hs_norm(m.terminal()));
    if (m.martingale_defect() > tol * scale) throw ContractError("Martingale::from_levels: E_n(x_{n+1}) != x_n");
    return m;
}

double Martingale::martingale_defect() const {
    double worst = 0.0;
    for (std::size_t n = 0; n + 1 < levels_.size(); ++n)
        worst = std::max(worst, hs_norm(filtration_->expectation(n, levels_[n + 1]) - levels_[n]));
    // levels must themselves be adapted: x_n = E_n(x_n)
    for (std::size_t n = 0; n < levels_.size(); ++n) worst = std::max(worst, filtration_->level(n).distance(levels_[n]));
    return worst;
}

// ---------------------------------------------------------------- AdaptedSequence

AdaptedSequence::AdaptedSequence(FiltrationPtr filtration, std::vector<Element> entries)
    : filtration_(std::move(filtration)), entries_(std::move(entries)) {
    if (entries_.size() > filtration_->depth())
        throw ContractError("AdaptedSequence: more entries than filtration levels");
    double scale = 0.0;
    for (const auto& e : entries_) {
        require_same_spec(filtration_->spec(), e.spec(), "AdaptedSequence");
        scale = std::max(scale, hs_norm(e));
    }
    for (std::size_t n = 0; n < entries_.size(); ++n) {
        const double dist = filtration_->level(n).distance(entries_[n]);
        if (dist > 1e-8 * scale)
            throw ContractError("AdaptedSequence: entry " + std::to_string(n) + " is not in its level");
    }
}

AdaptedSequence AdaptedSequence::from_martingale(const Martingale& x) {
    return AdaptedSequence(x.filtration(), x.levels());
}

const char* to_string(SequenceClass c) {
    switch (c) {
    case SequenceClass::martingale: return "martingale";
    case SequenceClass::supermartingale: return "supermartingale";
    case SequenceClass::submartingale: return "submartingale";
    case SequenceClass::none: return "none";
    }
    return "none";
}

SequenceClass classify_sequence(const AdaptedSequence& s, double tol) {
    double scale = 1.0;
    for (const auto& e : s.entries()) {
        if (!is_self_adjoint(e)) throw DomainError("classify_sequence: entries must be self-adjoint");
        scale = std::max(scale, operator_norm(e));
    }
    const double t = tol * scale;
    bool super = true;
    bool sub = true;
    for (std::size_t n = 0; n + 1 < s.length(); ++n) {
        const auto eig = hermitian_eig(s.entry(n) - s.filtration()->expectation(n, s.entry(n + 1)));
        if (eig.min_eigenvalue() < -t) super = false;
        if (eig.max_eigenvalue() > t) sub = false;
    }
    if (super && sub) return SequenceClass::martingale;
    if (super) return SequenceClass::supermartingale;
    if (sub) return SequenceClass::submartingale;
    return SequenceClass::none;
}

Element KrickebergDecomposition::recombine(std::size_t n) const {
    return (positive_real.level(n) - negative_real.level(n)) +
           Complex(0.0, 1.0) * (positive_imag.level(n) - negative_imag.level(n));
}

KrickebergDecomposition krickeberg_decompose(const Martingale& x) {
    const auto re = jordan_decompose(x.terminal().real_part());
    const auto im = jordan_decompose(x.terminal().imag_part());
    const auto& f = x.filtration();
    return {Martingale::from_terminal(f, re.positive), Martingale::from_terminal(f, re.negative),
            Martingale::from_terminal(f, im.positive), Martingale::from_terminal(f, im.negative)};
}

} // namespace ncm
