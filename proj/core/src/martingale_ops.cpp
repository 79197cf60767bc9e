// martingale_ops.cpp: transforms, Cuculescu projections, Doob decomposition, square functions

#include "ncmart/martingale_ops.hpp"

#include <algorithm>
#include <cmath>

namespace ncm {

namespace {

constexpr double kCertTol = 1e-8;

void require_same_filtration(const FiltrationPtr& a, const FiltrationPtr& b, const char* what) {
    if (a.get() != b.get()) throw CompositionError(std::string(what) + ": objects use different filtrations");
}

// Self-adjoint element with positive square root of the spectrum, clamping roundoff negatives.
Element psd_sqrt(const Element& g) {
    return spectral_map(g, [](double v) { return std::sqrt(std::max(v, 0.0)); });
}

double projection_defect(const Element& q) {
    return std::max(operator_norm(q * q - q), operator_norm(q - q.adjoint()));
}

} // namespace

const char* to_string(MultiplierMode m) {
    return m == MultiplierMode::signs ? "signs" : "operators";
}

const char* to_string(ColumnRow w) {
    switch (w) {
    case ColumnRow::column: return "column";
    case ColumnRow::row: return "row";
    case ColumnRow::intersection: return "intersection";
    case ColumnRow::sum: return "sum";
    }
    return "column";
}

// ---------------------------------------------------------------- multipliers

MultiplierSequence::MultiplierSequence(FiltrationPtr f, std::vector<Element> entries, MultiplierMode mode)
    : filtration_(std::move(f)), entries_(std::move(entries)), mode_(mode) {
    if (entries_.size() != filtration_->depth())
        throw DomainError("MultiplierSequence: need one entry per filtration level");
    for (const auto& e : entries_) require_same_spec(filtration_->spec(), e.spec(), "MultiplierSequence");
    if (hs_norm(entries_[0] - Element::identity(filtration_->spec())) > 1e-12 * std::max(1.0, hs_norm(entries_[0])))
        throw DomainError("MultiplierSequence: the first entry must be the unit");

    MultiplierCertificate c;
    for (std::size_t k = 1; k < entries_.size(); ++k) {
        const Element& xi = entries_[k];
        c.norm_excess = std::max(c.norm_excess, operator_norm(xi) - 1.0);
        if (mode_ == MultiplierMode::operators) {
            c.commutator = std::max(c.commutator, filtration_->level(k).max_commutator(xi));
            c.adaptedness =
                std::max(c.adaptedness, filtration_->level(k - 1).distance(xi) / std::max(1.0, hs_norm(xi)));
        }
    }
    c.ok = c.norm_excess <= 1e-10 && c.commutator <= kCertTol && c.adaptedness <= kCertTol;
    certificate_ = c;
}

MultiplierSequence MultiplierSequence::signs(FiltrationPtr filtration, const std::vector<int>& signs) {
    if (signs.size() != filtration->depth()) throw DomainError("MultiplierSequence::signs: wrong length");
    if (signs[0] != 1) throw DomainError("MultiplierSequence::signs: the first sign must be +1");
    std::vector<Element> entries;
    entries.reserve(signs.size());
    const AlgebraSpec& spec = filtration->spec();
    for (int s : signs) {
        if (s != 1 && s != -1) throw DomainError("MultiplierSequence::signs: entries must be +1 or -1");
        entries.push_back(Element::scalar(spec, Complex(s, 0.0)));
    }
    MultiplierSequence m(std::move(filtration), std::move(entries), MultiplierMode::signs);
    m.signs_ = signs;
    return m;
}

MultiplierSequence MultiplierSequence::operators(FiltrationPtr filtration, std::vector<Element> entries) {
    return MultiplierSequence(std::move(filtration), std::move(entries), MultiplierMode::operators);
}

Element transform(const Martingale& x, const MultiplierSequence& xi) {
    require_same_filtration(x.filtration(), xi.filtration(), "transform");
    if (!xi.certified()) throw ContractError("transform: multiplier sequence is not certified");
    Element t = x.difference(0);
    for (std::size_t k = 1; k < x.length(); ++k) {
        if (xi.mode() == MultiplierMode::signs)
            t = xi.sign_values()[k] > 0 ? t + x.difference(k) : t - x.difference(k);
        else
            t = t + xi.entry(k) * x.difference(k);
    }
    return t;
}

Element transform_sequence(const AdaptedSequence& s, const MultiplierSequence& xi) {
    require_same_filtration(s.filtration(), xi.filtration(), "transform_sequence");
    if (!xi.certified()) throw ContractError("transform_sequence: multiplier sequence is not certified");
    if (s.length() == 0) return Element::zero(s.filtration()->spec());
    Element t = xi.entry(0) * s.entry(0);
    for (std::size_t k = 1; k < s.length(); ++k) t = t + xi.entry(k) * (s.entry(k) - s.entry(k - 1));
    return t;
}

// ---------------------------------------------------------------- Cuculescu

bool CuculescuResult::holds(double tol) const {
    const auto& c = certificate;
    const double t = tol * c.scale;
    return c.membership <= tol && c.commutation <= t && c.lambda_excess <= t && c.monotonicity <= tol &&
           c.projection <= 1e-9 && c.trace_excess <= tol;
}

CuculescuResult cuculescu(const Martingale& x, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("cuculescu: lambda must be positive");
    const auto& filt = *x.filtration();
    const AlgebraSpec& spec = x.spec();

    CuculescuCertificate cert;
    for (const auto& level : x.levels()) {
        const auto eig = hermitian_eig(level);
        const double nrm = eig.max_abs_eigenvalue();
        if (eig.min_eigenvalue() < -1e-9 * std::max(1.0, nrm))
            throw DomainError("cuculescu: martingale is not positive");
        cert.scale = std::max(cert.scale, nrm);
    }

    CuculescuResult r;
    r.lambda = lambda;
    Element prev = Element::identity(spec);
    for (std::size_t n = 0; n < x.length(); ++n) {
        const Element a = prev * x.level(n) * prev;
        const auto eig = hermitian_eig(a);
        const Element above = spectral_projection(eig, {Interval::open_above(lambda)}, boundary_tol(eig.max_abs_eigenvalue()));
        Element q = (prev - above).real_part();

        cert.membership = std::max(cert.membership, filt.level(n).distance(q) / std::max(1.0, hs_norm(q)));
        cert.commutation = std::max(cert.commutation, hs_norm(commutator(q, a)));
        const Element qxq = q * x.level(n) * q;
        cert.lambda_excess = std::max(cert.lambda_excess, hermitian_eig((qxq - lambda * q).real_part()).max_eigenvalue());
        cert.monotonicity = std::max(cert.monotonicity, -hermitian_eig(prev - q).min_eigenvalue());
        cert.projection = std::max(cert.projection, projection_defect(q));

        r.projections.push_back(q);
        prev = std::move(q);
    }
    r.tau_one_minus_q = (spec.unit_trace() - trace(r.q())).real();
    r.trace_bound = trace(x.level(0)).real() / lambda;
    cert.trace_excess = r.tau_one_minus_q - r.trace_bound;
    cert.lambda_excess = std::max(cert.lambda_excess, 0.0);
    cert.monotonicity = std::max(cert.monotonicity, 0.0);
    r.certificate = cert;
    return r;
}

// ---------------------------------------------------------------- Doob

DoobDecomposition doob_decompose(const AdaptedSequence& s) {
    const auto& filt = *s.filtration();
    const AlgebraSpec& spec = filt.spec();
    for (const auto& e : s.entries())
        if (!is_self_adjoint(e)) throw DomainError("doob_decompose: entries must be self-adjoint");

    DoobDecomposition d;
    d.sense = classify_sequence(s);
    if (s.length() == 0) return d;

    Element z = Element::zero(spec);
    for (std::size_t k = 0; k < s.length(); ++k) {
        if (k > 0) z = z + (filt.expectation(k - 1, s.entry(k)) - s.entry(k - 1));
        d.z.push_back(z);
        d.y.push_back(s.entry(k) - z);
    }

    for (std::size_t k = 0; k < s.length(); ++k) {
        d.recombination = std::max(d.recombination, hs_norm(d.y[k] + d.z[k] - s.entry(k)));
        if (k + 1 < s.length())
            d.martingale_defect = std::max(d.martingale_defect, hs_norm(filt.expectation(k, d.y[k + 1]) - d.y[k]));
        if (k > 0) {
            d.predictability = std::max(d.predictability, filt.level(k - 1).distance(d.z[k]));
            const auto eig = hermitian_eig((d.z[k] - d.z[k - 1]).real_part());
            if (d.sense == SequenceClass::supermartingale)
                d.monotonicity = std::max(d.monotonicity, eig.max_eigenvalue());
            else if (d.sense == SequenceClass::submartingale)
                d.monotonicity = std::max(d.monotonicity, -eig.min_eigenvalue());
        }
    }
    return d;
}

// ---------------------------------------------------------------- split and lemma

TruncationParts truncation_split(const Element& s, const Element& q) {
    require_same_spec(s.spec(), q.spec(), "truncation_split");
    if (projection_defect(q) > 1e-9) throw DomainError("truncation_split: q is not a projection");
    const Element one_minus_q = Element::identity(q.spec()) - q;
    return {q * s * q, one_minus_q * s * q, s * one_minus_q};
}

Lemma1Result lemma1_bound(const Martingale& x, const MultiplierSequence& xi, double lambda, double alpha,
                          double beta) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0))
        throw DomainError("lemma1_bound: alpha and beta must lie in (0,1)");
    return lemma1_bound(x, xi, cuculescu(x, lambda), alpha, beta);
}

Lemma1Result lemma1_bound(const Martingale& x, const MultiplierSequence& xi, const CuculescuResult& cuc,
                          double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0))
        throw DomainError("lemma1_bound: alpha and beta must lie in (0,1)");
    const double lambda = cuc.lambda;
    const Element t = transform(x, xi);
    const Element& q = cuc.q();
    Lemma1Result r;
    r.lhs = distribution(t, lambda);
    r.rhs = distribution(q * t * q, beta * lambda) / alpha +
            2.0 / (1.0 - alpha) * trace(x.level(0)).real() / lambda;
    r.holds = r.lhs <= r.rhs * (1.0 + kCertTol) + kCertTol;
    return r;
}

TruncatedChain truncated_chain(const Martingale& x, const MultiplierSequence& xi, double lambda) {
    TruncatedChain c;
    c.cuculescu = cuculescu(x, lambda);
    std::vector<Element> s;
    s.reserve(x.length());
    for (std::size_t k = 0; k < x.length(); ++k) {
        const Element& q = c.cuculescu.projections[k];
        // q_k x_k q_k lies in level k; the projection strips rounding residue when q_k x_k q_k ≈ 0
        s.push_back(x.filtration()->expectation(k, (q * x.level(k) * q).real_part()));
    }
    const AdaptedSequence seq(x.filtration(), std::move(s));
    c.doob = doob_decompose(seq);
    c.y_norm = hs_norm(c.doob.y.back());
    c.z_norm = hs_norm(c.doob.z.back());
    c.energy = c.y_norm * c.y_norm;
    c.energy_bound = 6.0 * lambda * trace(x.level(0)).real();
    const double r = hs_norm(transform_sequence(seq, xi));
    c.removal = r * r;
    c.removal_bound = 4.0 * c.energy;
    return c;
}

// ---------------------------------------------------------------- square functions

SquareFunctions square_functions(const Martingale& x, std::size_t n) {
    if (n < 1 || n > x.length()) throw DomainError("square_functions: level out of range");
    const AlgebraSpec& spec = x.spec();
    Element col = Element::zero(spec);
    Element row = Element::zero(spec);
    for (std::size_t k = 0; k < n; ++k) {
        const Element& d = x.difference(k);
        col = col + d.adjoint() * d;
        row = row + d * d.adjoint();
    }
    return {psd_sqrt(col.real_part()), psd_sqrt(row.real_part())};
}

namespace {

double gram_norm(const std::vector<Element>& a, double p, bool column) {
    if (!(p >= 1.0)) throw DomainError("column/row norm: p must be >= 1");
    if (a.empty()) return 0.0;
    Element g = Element::zero(a[0].spec());
    for (const auto& e : a) {
        require_same_spec(a[0].spec(), e.spec(), "column/row norm");
        g = g + (column ? e.adjoint() * e : e * e.adjoint());
    }
    // ‖g^{1/2}‖_p = τ(g^{p/2})^{1/p}
    const auto eig = hermitian_eig(g.real_part());
    double acc = 0.0;
    for (std::size_t b = 0; b < eig.blocks.size(); ++b) {
        const double w = eig.spec.block(b).weight;
        for (Eigen::Index i = 0; i < eig.blocks[b].values.size(); ++i)
            acc += w * std::pow(std::max(eig.blocks[b].values(i), 0.0), p / 2.0);
    }
    return std::pow(acc, 1.0 / p);
}

} // namespace

double column_norm(const std::vector<Element>& a, double p) { return gram_norm(a, p, true); }
double row_norm(const std::vector<Element>& a, double p) { return gram_norm(a, p, false); }

ColumnRowResult column_row_norm(const std::vector<Element>& a, double p, ColumnRow which,
                                const DescentOptions& opt) {
    if (!(p >= 1.0)) throw DomainError("column_row_norm: p must be >= 1");
    ColumnRowResult r;
    switch (which) {
    case ColumnRow::column: r.value = column_norm(a, p); break;
    case ColumnRow::row: r.value = row_norm(a, p); break;
    case ColumnRow::intersection: r.value = std::max(column_norm(a, p), row_norm(a, p)); break;
    case ColumnRow::sum: return sum_norm_descent(a, p, {}, opt);
    }
    return r;
}

HardyResult hardy_norm(const Martingale& x, double p, const DescentOptions& opt) {
    if (!(p >= 1.0)) throw DomainError("hardy_norm: p must be >= 1");
    HardyResult h;
    h.column = column_norm(x.differences(), p);
    h.row = row_norm(x.differences(), p);
    if (p >= 2.0) {
        h.value = std::max(h.column, h.row);
        return h;
    }
    const auto& filt = x.filtration();
    const DirectionProjector project = [filt](std::size_t k, const Element& d) {
        return filt->difference_projection(k, d);
    };
    const auto r = sum_norm_descent(x.differences(), p, project, opt);
    h.value = r.value;
    h.upper_bound = true;
    return h;
}

std::vector<Element> stein_Q(const std::vector<Element>& a, const Filtration& filt) {
    if (a.size() > filt.depth()) throw DomainError("stein_Q: sequence longer than the filtration");
    std::vector<Element> out;
    out.reserve(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out.push_back(filt.expectation(k, a[k]));
    return out;
}

} // namespace ncm
