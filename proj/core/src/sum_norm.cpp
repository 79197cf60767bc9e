// sum_norm.cpp: descent upper bound for inf{‖b‖_C + ‖a - b‖_R}
//
// The objective is convex but not smooth where a Gram operator is singular, so
// projected gradient steps with Armijo backtracking are alternated with random
// feasible moves. Only feasible points are ever evaluated, and the best one is
// returned, so the value is always a genuine upper bound for the infimum.

#include "ncmart/martingale_ops.hpp"
#include "ncmart/random.hpp"

#include <algorithm>
#include <cmath>

namespace ncm {

namespace {

struct GramPart {
    double value = 0.0;
    EigenDecomposition eig;
};

GramPart gram_part(const std::vector<Element>& v, double p, bool column) {
    const AlgebraSpec& spec = v[0].spec();
    Element g = Element::zero(spec);
    for (const auto& e : v) g = g + (column ? e.adjoint() * e : e * e.adjoint());
    GramPart out;
    out.eig = hermitian_eig(g.real_part());
    double acc = 0.0;
    for (std::size_t b = 0; b < out.eig.blocks.size(); ++b) {
        const double w = spec.block(b).weight;
        for (Eigen::Index i = 0; i < out.eig.blocks[b].values.size(); ++i)
            acc += w * std::pow(std::max(out.eig.blocks[b].values(i), 0.0), p / 2.0);
    }
    out.value = std::pow(acc, 1.0 / p);
    return out;
}

// F^{1-p} · g^{p/2-1}, with the spectrum floored to keep the power finite.
Element gradient_weight(const GramPart& part, double p) {
    const double top = std::max(part.eig.max_abs_eigenvalue(), 1e-300);
    const double floor = 1e-14 * top;
    const double lead = std::pow(part.value, 1.0 - p);
    return spectral_map(part.eig, [=](double g) { return lead * std::pow(std::max(g, floor), p / 2.0 - 1.0); });
}

class Objective {
public:
    Objective(const std::vector<Element>& a, double p) : a_(a), p_(p) {}

    double value(const std::vector<Element>& b) {
        ++evaluations;
        return gram_part(b, p_, true).value + gram_part(residual(b), p_, false).value;
    }

    // Gradient with respect to b in trace-inner-product coordinates.
    std::vector<Element> gradient(const std::vector<Element>& b) {
        const auto c = residual(b);
        const auto col = gram_part(b, p_, true);
        const auto row = gram_part(c, p_, false);
        std::vector<Element> g;
        g.reserve(b.size());
        const Element wc = col.value > 0.0 ? gradient_weight(col, p_) : Element::zero(a_[0].spec());
        const Element wr = row.value > 0.0 ? gradient_weight(row, p_) : Element::zero(a_[0].spec());
        for (std::size_t k = 0; k < b.size(); ++k) g.push_back(b[k] * wc - wr * c[k]);
        return g;
    }

    std::vector<Element> residual(const std::vector<Element>& b) const {
        std::vector<Element> c;
        c.reserve(b.size());
        for (std::size_t k = 0; k < b.size(); ++k) c.push_back(a_[k] - b[k]);
        return c;
    }

    int evaluations = 0;

private:
    const std::vector<Element>& a_;
    double p_;
};

std::vector<Element> axpy(const std::vector<Element>& b, double t, const std::vector<Element>& d) {
    std::vector<Element> out;
    out.reserve(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) out.push_back(b[k] + t * d[k]);
    return out;
}

double squared_norm(const std::vector<Element>& v) {
    double s = 0.0;
    for (const auto& e : v) {
        const double n = hs_norm(e);
        s += n * n;
    }
    return s;
}

Element random_direction(const AlgebraSpec& spec, CounterRng& rng) {
    std::vector<Matrix> blocks;
    for (const auto& blk : spec.blocks()) {
        Matrix m(blk.dim, blk.dim);
        for (int j = 0; j < blk.dim; ++j)
            for (int i = 0; i < blk.dim; ++i) m(i, j) = rng.complex_normal();
        blocks.push_back(std::move(m));
    }
    return Element(spec, std::move(blocks));
}

} // namespace

ColumnRowResult sum_norm_descent(const std::vector<Element>& a, double p, const DirectionProjector& project,
                                 const DescentOptions& opt) {
    if (!(p >= 1.0)) throw DomainError("sum_norm_descent: p must be >= 1");
    ColumnRowResult r;
    r.upper_bound = true;
    if (a.empty()) return r;
    for (const auto& e : a) require_same_spec(a[0].spec(), e.spec(), "sum_norm_descent");
    const AlgebraSpec& spec = a[0].spec();
    const auto proj = [&](std::size_t k, const Element& d) { return project ? project(k, d) : d; };

    Objective f(a, p);
    std::vector<Element> zero(a.size(), Element::zero(spec));
    std::vector<Element> half;
    for (const auto& e : a) half.push_back(0.5 * e);

    std::vector<Element> best = a;
    double best_value = f.value(a);
    for (const auto* start : {&zero, &half}) {
        const double v = f.value(*start);
        if (v < best_value) {
            best_value = v;
            best = *start;
        }
    }

    const double scale = std::sqrt(squared_norm(a));
    if (scale == 0.0) {
        r.column_part = zero;
        r.row_part = zero;
        r.evaluations = f.evaluations;
        return r;
    }

    CounterRng rng(opt.seed);
    double step = scale;
    double move = 0.1 * scale;
    std::vector<Element> b = best;
    double fb = best_value;
    for (int it = 0; it < opt.iterations; ++it) {
        auto g = f.gradient(b);
        std::vector<Element> d;
        d.reserve(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) d.push_back(-proj(k, g[k]));
        const double dn2 = squared_norm(d);
        bool improved = false;
        if (dn2 > 1e-30) {
            double t = step / std::sqrt(dn2);
            for (int bt = 0; bt < 40; ++bt) {
                auto cand = axpy(b, t, d);
                const double fc = f.value(cand);
                if (fc <= fb - 1e-4 * t * dn2) {
                    b = std::move(cand);
                    fb = fc;
                    improved = true;
                    step = 2.0 * t * std::sqrt(dn2);
                    break;
                }
                t *= 0.5;
            }
        }
        if (!improved) step = std::max(step * 0.25, 1e-12 * scale);

        if (it < opt.random_moves) {
            const std::size_t k = static_cast<std::size_t>(rng.below(a.size()));
            Element dir = proj(k, random_direction(spec, rng));
            const double n = hs_norm(dir);
            if (n > 0.0) {
                dir = (move / n) * dir;
                bool accepted = false;
                for (double sgn : {1.0, -1.0}) {
                    auto cand = b;
                    cand[k] = cand[k] + sgn * dir;
                    const double fc = f.value(cand);
                    if (fc < fb) {
                        b = std::move(cand);
                        fb = fc;
                        accepted = true;
                        break;
                    }
                }
                move *= accepted ? 1.5 : 0.7;
                move = std::clamp(move, 1e-9 * scale, scale);
            }
        }
        if (fb < best_value) {
            best_value = fb;
            best = b;
        }
        if (!improved && step <= 1e-10 * scale && it >= opt.random_moves) break;
    }

    r.value = best_value;
    r.row_part = f.residual(best);
    r.column_part = std::move(best);
    r.evaluations = f.evaluations;
    return r;
}

} // namespace ncm
