// constant_search.cpp: split-constant optimization and a generic hill climb

#include "ncmart/inequality_lab.hpp"

#include <algorithm>
#include <cmath>

namespace ncm {

double split_constant_objective(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta <= 1.0))
        throw DomainError("split_constant_objective: alpha must lie in (0,1) and beta in (0,1]");
    return 24.0 / (alpha * beta * beta) + 2.0 / (1.0 - alpha);
}

double reference_split_constant() {
    const double s = std::sqrt(24.0) + std::sqrt(2.0);
    return s * s;
}

double published_split_constant() { return 14.0 * std::sqrt(3.0) / 3.0 + 28.0; }

SplitConstant optimize_split_constant(double grid_step) {
    if (!(grid_step > 0.0 && grid_step < 0.5)) throw DomainError("optimize_split_constant: bad grid step");
    SplitConstant r;
    r.grid_value = std::numeric_limits<double>::infinity();
    const int steps = static_cast<int>(std::floor(1.0 / grid_step + 0.5));
    for (int i = 1; i < steps; ++i) {
        const double a = i * grid_step;
        for (int j = 1; j < steps; ++j) {
            const double b = j * grid_step;
            const double v = split_constant_objective(a, b);
            if (v < r.grid_value) {
                r.grid_value = v;
                r.grid_alpha = a;
                r.grid_beta = b;
            }
        }
    }
    // f decreases in β, so the infimum sits on the β = 1 edge; minimize there in α.
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::max(r.grid_alpha - 2.0 * grid_step, 1e-9);
    double hi = std::min(r.grid_alpha + 2.0 * grid_step, 1.0 - 1e-9);
    auto g = [](double a) { return split_constant_objective(a, 1.0); };
    double c = hi - phi * (hi - lo);
    double d = lo + phi * (hi - lo);
    double gc = g(c);
    double gd = g(d);
    while (hi - lo > 1e-12) {
        if (gc < gd) {
            hi = d;
            d = c;
            gd = gc;
            c = hi - phi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + phi * (hi - lo);
            gd = g(d);
        }
    }
    r.alpha = 0.5 * (lo + hi);
    r.beta = 1.0;
    r.value = g(r.alpha);
    return r;
}

HillClimbResult hill_climb(const AlgebraSpec& spec, const std::function<double(const Element&)>& objective,
                           const std::function<Element(CounterRng&)>& init, const HillClimbOptions& opt) {
    HillClimbResult best;
    best.best = -std::numeric_limits<double>::infinity();
    if (opt.budget <= 0) return best;
    CounterRng rng(opt.seed);
    const int restarts = std::max(1, std::min(opt.restarts, opt.budget));
    std::vector<int> cumulative;
    int total = 0;
    for (const auto& b : spec.blocks()) {
        total += b.dim * b.dim;
        cumulative.push_back(total);
    }

    for (int r = 0; r < restarts; ++r) {
        const int share = opt.budget / restarts + (r == restarts - 1 ? opt.budget % restarts : 0);
        if (share <= 0) continue;
        Element x = init(rng);
        double fx = objective(x);
        ++best.evaluations;
        if (fx > best.best) {
            best.best = fx;
            best.best_point = x;
        }
        const double size = hs_norm(x) / std::sqrt(spec.unit_trace());
        const double typical = size > 0.0 ? size : 1.0;
        double sigma = opt.initial_step * typical;
        for (int e = 1; e < share; ++e) {
            const int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(total)));
            const std::size_t blk = static_cast<std::size_t>(
                std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin());
            const int local = pick - (blk == 0 ? 0 : cumulative[blk - 1]);
            const int d = spec.block(blk).dim;
            std::vector<Matrix> blocks = x.blocks();
            blocks[blk](local % d, local / d) += sigma * rng.complex_normal();
            Element cand(spec, std::move(blocks));
            const double fc = objective(cand);
            ++best.evaluations;
            if (fc > fx) {
                x = std::move(cand);
                fx = fc;
                sigma *= 1.25;
            } else {
                sigma *= 0.97;
            }
            sigma = std::clamp(sigma, 1e-6 * typical, 4.0 * typical);
            if (fx > best.best) {
                best.best = fx;
                best.best_point = x;
            }
        }
    }
    return best;
}

} // namespace ncm
