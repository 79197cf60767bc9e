// umd.cpp: lower bounds for UMD constants of Schatten-valued dyadic martingales

#include "ncmart/inequality_lab.hpp"

#include <algorithm>
#include <cmath>

namespace ncm {

namespace {

double schatten_norm(const Matrix& m, double q) {
    if (m.size() == 0) return 0.0;
    const RVector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
    if (std::isinf(q)) return sv.size() ? sv(0) : 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) acc += std::pow(sv(i), q);
    return std::pow(acc, 1.0 / q);
}

Element gaussian_element(const AlgebraSpec& spec, CounterRng& rng) {
    std::vector<Matrix> blocks;
    for (const auto& b : spec.blocks()) {
        Matrix m(b.dim, b.dim);
        for (int j = 0; j < b.dim; ++j)
            for (int i = 0; i < b.dim; ++i) m(i, j) = rng.complex_normal();
        blocks.push_back(std::move(m));
    }
    return Element(spec, std::move(blocks));
}

} // namespace

double umd_norm(const Element& f, double p, const UmdOptions& opt) {
    if (opt.norm == UmdNorm::algebra_lp) return lp_norm(f, p);
    const auto& blocks = f.blocks();
    if (blocks.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& b : blocks) acc += std::pow(schatten_norm(b, opt.schatten_q), p);
    return std::pow(acc / static_cast<double>(blocks.size()), 1.0 / p);
}

double umd_ratio(const Martingale& x, double p, const UmdOptions& opt, std::vector<int>* best_signs) {
    const double den = umd_norm(x.terminal(), p, opt);
    const std::size_t n = x.length();
    if (best_signs) best_signs->assign(n, 1);
    if (den == 0.0) return 0.0;
    if (n > 21) throw SizeError("umd_ratio: too many levels for exhaustive signs");
    double best = -1.0;
    const std::uint64_t count = std::uint64_t{1} << (n - 1);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        Element t = x.difference(0);
        for (std::size_t k = 1; k < n; ++k) t = ((mask >> (k - 1)) & 1U) ? t - x.difference(k) : t + x.difference(k);
        const double r = umd_norm(t, p, opt) / den;
        if (r > best) {
            best = r;
            if (best_signs)
                for (std::size_t k = 1; k < n; ++k) (*best_signs)[k] = ((mask >> (k - 1)) & 1U) ? -1 : 1;
        }
    }
    return best;
}

UmdEstimate umd_lower_bound(int n, double p, int depth, int budget, const UmdOptions& opt, int dimension_cap) {
    if (!(p >= 1.0)) throw DomainError("umd_lower_bound: p must be >= 1");
    if (n < 1 || depth < 1) throw DomainError("umd_lower_bound: n and depth must be >= 1");
    if (!(opt.schatten_q >= 1.0)) throw DomainError("umd_lower_bound: Schatten exponent must be >= 1");
    UmdEstimate est;
    est.n = n;
    est.p = p;
    est.depth = depth;
    est.budget = budget;
    est.filtration = FiltrationDescriptor::paley_walsh(depth, n);
    const FiltrationPtr filt = Filtration::build(est.filtration, dimension_cap);
    const AlgebraSpec& spec = filt->spec();

    HillClimbOptions hc;
    hc.budget = std::max(budget, 1);
    hc.restarts = opt.restarts > 0 ? opt.restarts : std::max(1, budget / 1000);
    hc.seed = opt.seed;
    const auto objective = [&](const Element& x) { return umd_ratio(Martingale::from_terminal(filt, x), p, opt); };
    const auto init = [&](CounterRng& rng) { return gaussian_element(spec, rng); };
    const auto found = hill_climb(spec, objective, init, hc);

    est.best_terminal = found.best_point;
    est.evaluations = found.evaluations;
    est.estimate = umd_ratio(Martingale::from_terminal(filt, est.best_terminal), p, opt, &est.best_signs);
    return est;
}

} // namespace ncm
