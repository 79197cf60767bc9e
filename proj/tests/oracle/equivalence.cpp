#include "equivalence.hpp"

#include "commutative.hpp"

#include <ncmart/martingale_ops.hpp>

#include <cmath>
#include <random>

namespace oracle {

namespace {

ncm::Element to_element(const ncm::AlgebraSpec& spec, const Func& f) {
    std::vector<ncm::Matrix> blocks;
    for (auto v : f) blocks.push_back(ncm::Matrix::Constant(1, 1, v));
    return ncm::Element(spec, std::move(blocks));
}

Func from_element(const ncm::Element& e) {
    Func f;
    for (const auto& b : e.blocks()) f.push_back(b(0, 0));
    return f;
}

struct Tracker {
    Discrepancy& d;

    void scalar(double lib, double ref, const std::string& what) {
        const double err = std::abs(lib - ref) / std::max(1.0, std::abs(ref));
        if (err > d.worst) {
            d.worst = err;
            d.worst_what = what;
        }
    }

    void func(const Func& lib, const Func& ref, const std::string& what) {
        double scale = 1.0;
        for (auto v : ref) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const double err = std::abs(lib[i] - ref[i]) / scale;
            if (err > d.worst) {
                d.worst = err;
                d.worst_what = what;
            }
        }
    }
};

} // namespace

Discrepancy compare_dyadic(std::uint64_t seed, int instances, int max_depth) {
    Discrepancy d;
    Tracker t{d};
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> depth_dist(1, max_depth);
    std::bernoulli_distribution coin(0.5);

    for (int it = 0; it < instances; ++it) {
        const int depth = depth_dist(gen);
        const auto filt = ncm::Filtration::build(ncm::FiltrationDescriptor::dyadic(depth));
        const auto& spec = filt->spec();
        const std::size_t points = std::size_t{1} << depth;

        Func f(points), g(points);
        for (auto& v : f) v = Complex(normal(gen), normal(gen));
        for (auto& v : g) v = std::norm(Complex(normal(gen), normal(gen))) + 1e-3;
        std::vector<int> signs{1};
        for (int k = 0; k < depth; ++k) signs.push_back(coin(gen) ? 1 : -1);

        const auto x = ncm::Martingale::from_terminal(filt, to_element(spec, f));
        const auto levels = martingale(f, depth);
        const auto diffs = differences(levels);
        for (std::size_t n = 0; n < levels.size(); ++n)
            t.func(from_element(x.level(n)), levels[n], "martingale level");

        for (double p : {1.0, 1.5, 2.0, 3.0})
            t.scalar(ncm::lp_norm(x.terminal(), p), lp_norm(f, p), "L^p norm");
        t.scalar(ncm::operator_norm(x.terminal()), sup_norm(f), "operator norm");
        t.scalar(ncm::weak_l1_norm(x.terminal()), weak_l1(f), "weak L1 norm");
        const double s = 0.7 * sup_norm(f);
        t.scalar(ncm::distribution(x.terminal(), s), distribution(f, s), "distribution");

        for (std::size_t n = 1; n <= diffs.size(); ++n) {
            const auto sq = ncm::square_functions(x, n);
            const auto ref = square_function(diffs, n);
            const Func ref_c(ref.begin(), ref.end());
            t.func(from_element(sq.column), ref_c, "column square function");
            t.func(from_element(sq.row), ref_c, "row square function");
        }

        const auto xi = ncm::MultiplierSequence::signs(filt, signs);
        const Func tr = sign_transform(diffs, signs);
        t.func(from_element(ncm::transform(x, xi)), tr, "sign transform");
        t.scalar(ncm::weak_l1_norm(ncm::transform(x, xi)), weak_l1(tr), "weak L1 of transform");

        const auto sf = square_function(diffs, diffs.size());
        const Func sf_c(sf.begin(), sf.end());
        for (double p : {2.0, 3.0, 4.0}) t.scalar(ncm::hardy_norm(x, p).value, lp_norm(sf_c, p), "Hardy norm");

        const auto y = ncm::Martingale::from_terminal(filt, to_element(spec, g));
        const auto ylevels = martingale(g, depth);
        const double top = sup_norm(g);
        for (double factor : {0.2, 0.5, 0.9}) {
            const double lambda = factor * top;
            const auto cuc = ncm::cuculescu(y, lambda);
            const auto ref = stopped_indicators(ylevels, lambda);
            for (std::size_t n = 0; n < ref.size(); ++n) {
                const Func ref_c(ref[n].begin(), ref[n].end());
                t.func(from_element(cuc.projections[n]), ref_c, "Cuculescu projection");
            }
        }
        ++d.instances;
    }
    return d;
}

} // namespace oracle
