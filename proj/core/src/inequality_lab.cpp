// inequality_lab.cpp: individual inequality checks

#include "ncmart/inequality_lab.hpp"

#include <algorithm>
#include <cmath>

namespace ncm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

Element column_square_root(const std::vector<Element>& a, const AlgebraSpec& spec) {
    Element g = Element::zero(spec);
    for (const auto& e : a) g = g + e.adjoint() * e;
    return spectral_map(g.real_part(), [](double v) { return std::sqrt(std::max(v, 0.0)); });
}

} // namespace

InequalityVerdict make_verdict(std::string name, double lhs, double rhs, double ratio, bool asserted,
                               double tolerance) {
    InequalityVerdict v;
    v.name = std::move(name);
    v.lhs = lhs;
    v.rhs = rhs;
    v.ratio = ratio;
    v.asserted = asserted;
    v.tolerance = tolerance;
    v.holds = !std::isfinite(rhs) || lhs <= rhs * (1.0 + tolerance) + tolerance;
    return v;
}

double subquasi_reference(double p, double unit_trace, double c) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("subquasi_reference: p must lie in (0,1)");
    return c * std::pow(unit_trace, (1.0 - p) / p) * std::pow(1.0 / (1.0 - p), 1.0 / p);
}

double stein_weak_reference(double c) { return 2.0 + 2.0 * c; }

double sub_super_reference(double c) { return 6.0 * c + 4.0; }

InequalityVerdict check_weak_type(const Martingale& x, const MultiplierSequence& xi, double c) {
    const double lhs = weak_l1_norm(transform(x, xi));
    const double den = lp_norm(x.terminal(), 1.0);
    return make_verdict("weak_type", lhs, c * den, safe_ratio(lhs, den), true);
}

InequalityVerdict check_transform_p(const Martingale& x, const MultiplierSequence& xi, double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("check_transform_p: p must lie in (1, inf)");
    const double lhs = lp_norm(transform(x, xi), p);
    const double den = lp_norm(x.terminal(), p);
    const bool at_two = p == 2.0;
    auto v = make_verdict("transform_p", lhs, at_two ? den : kInf, safe_ratio(lhs, den), at_two, 1e-10);
    v.tags["p"] = p;
    return v;
}

InequalityVerdict check_subquasi_p(const Martingale& x, const MultiplierSequence& xi, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("check_subquasi_p: p must lie in (0,1)");
    const double lhs = lp_norm(transform(x, xi), p);
    const double den = lp_norm(x.terminal(), 1.0);
    const double k = subquasi_reference(p, x.spec().unit_trace(), reference_split_constant());
    auto v = make_verdict("subquasi_p", lhs, k * den, safe_ratio(lhs, den), false);
    v.tags["p"] = p;
    return v;
}

SubSuperResult check_sub_super_transform(const AdaptedSequence& s, const MultiplierSequence& signs) {
    if (signs.mode() != MultiplierMode::signs)
        throw DomainError("check_sub_super_transform: sign multipliers required");
    SubSuperResult r;
    const DoobDecomposition doob = doob_decompose(s);
    r.sense = doob.sense;
    if (r.sense == SequenceClass::none)
        throw DomainError("check_sub_super_transform: sequence is neither a sub- nor a supermartingale");

    double sup_l1 = 0.0;
    for (const auto& e : s.entries()) sup_l1 = std::max(sup_l1, lp_norm(e, 1.0));

    const double lhs = weak_l1_norm(transform_sequence(s, signs));
    r.transform = make_verdict("sub_super_transform", lhs, sub_super_reference(reference_split_constant()) * sup_l1,
                               safe_ratio(lhs, sup_l1), false);

    const Element& zn = doob.z.back();
    const double zl1 = lp_norm(zn, 1.0);
    r.predictable_bound = make_verdict("sub_super_predictable", zl1, 2.0 * sup_l1, safe_ratio(zl1, sup_l1), true);

    const AlgebraSpec& spec = s.filtration()->spec();
    Element x = Element::zero(spec);
    for (std::size_t k = 1; k < doob.z.size(); ++k) {
        const Element dz = doob.z[k] - doob.z[k - 1];
        x = signs.sign_values()[k] > 0 ? x + dz : x - dz;
    }
    const Element abs_z = modulus(zn);
    const double upper = hermitian_eig((x - abs_z).real_part()).max_eigenvalue();
    const double lower = hermitian_eig((-x - abs_z).real_part()).max_eigenvalue();
    const double excess = std::max({upper, lower, 0.0});
    const double tol = 1e-8 * std::max(1.0, operator_norm(zn));
    r.sandwich = make_verdict("sub_super_sandwich", excess, 0.0, excess, true, tol);
    return r;
}

InequalityVerdict check_stein(const std::vector<Element>& a, const Filtration& filt, SteinMode mode, double p,
                              double c) {
    const auto q = stein_Q(a, filt);
    if (mode == SteinMode::weak) {
        const double lhs = weak_l1_norm(column_square_root(q, filt.spec()));
        const double den = column_norm(a, 1.0);
        return make_verdict("stein_weak", lhs, stein_weak_reference(c) * den, safe_ratio(lhs, den), true);
    }
    const double lhs = column_norm(q, p);
    const double den = column_norm(a, p);
    const bool at_two = p == 2.0;
    auto v = make_verdict("stein_p", lhs, at_two ? den : kInf, safe_ratio(lhs, den), at_two, 1e-10);
    v.tags["p"] = p;
    return v;
}

KhintchineResult khintchine_average(const std::vector<Element>& a, double p, const DescentOptions& opt) {
    if (!(p >= 1.0)) throw DomainError("khintchine_average: p must be >= 1");
    if (a.size() > kKhintchineMaxTerms) throw SizeError("khintchine_average: too many terms for brute force");
    KhintchineResult r;
    if (a.empty()) {
        r.verdict = make_verdict("khintchine", 0.0, 0.0, 0.0, true, 1e-9);
        return r;
    }
    const AlgebraSpec& spec = a[0].spec();
    for (const auto& e : a) {
        require_same_spec(spec, e.spec(), "khintchine_average");
        const double n = hs_norm(e);
        r.square_sum += n * n;
    }
    // ‖Σεa‖ = ‖-Σεa‖: fix ε_0 = +1 and average over the remaining signs.
    const std::size_t n = a.size();
    const std::uint64_t count = std::uint64_t{1} << (n - 1);
    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        Element s = a[0];
        for (std::size_t k = 1; k < n; ++k) s = ((mask >> (k - 1)) & 1U) ? s - a[k] : s + a[k];
        const double v = lp_norm(s, p);
        acc += v * v;
    }
    r.average = std::sqrt(acc / static_cast<double>(count));
    r.column = column_norm(a, p);
    r.row = row_norm(a, p);
    r.intersection = std::max(r.column, r.row);
    if (p >= 2.0) {
        r.verdict = make_verdict("khintchine_lower", r.intersection, r.average, safe_ratio(r.intersection, r.average),
                                 true, 1e-9);
    } else {
        r.sum_upper = sum_norm_descent(a, p, {}, opt).value;
        r.verdict = make_verdict("khintchine_upper", r.average, r.sum_upper, safe_ratio(r.average, r.sum_upper), true,
                                 1e-9);
    }
    r.verdict.tags["p"] = p;
    r.verdict.tags["n"] = static_cast<double>(n);
    return r;
}

BgResult check_bg(const Martingale& x, double p, const DescentOptions& opt) {
    if (!(p > 1.0)) throw DomainError("check_bg: p must be > 1");
    BgResult r;
    r.norm_p = lp_norm(x.terminal(), p);
    r.hardy = hardy_norm(x, p, opt);
    r.alpha_ratio = safe_ratio(r.hardy.value, r.norm_p);
    r.beta_ratio = safe_ratio(r.norm_p, r.hardy.value);
    return r;
}

LloglResult check_llogl(const Martingale& x, const MultiplierSequence& xi, const DescentOptions& opt) {
    LloglResult r;
    r.transform_l1 = lp_norm(transform(x, xi), 1.0);
    r.llogl = llogl_functional(x.terminal());
    r.llogl_squared = llogl_squared_functional(x.terminal());
    r.hardy1_upper = hardy_norm(x, 1.0, opt).value;
    r.r1 = r.transform_l1 / (1.0 + r.llogl);
    r.r2 = r.hardy1_upper / (1.0 + r.llogl_squared);
    return r;
}

} // namespace ncm
