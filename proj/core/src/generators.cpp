#include "ncmart/generators.hpp"

#include <algorithm>
#include <cmath>

namespace ncm {

Element random_gaussian_element(const AlgebraSpec& spec, CounterRng& rng) {
    std::vector<Matrix> blocks;
    blocks.reserve(spec.block_count());
    for (const auto& b : spec.blocks()) {
        Matrix m(b.dim, b.dim);
        for (int j = 0; j < b.dim; ++j)
            for (int i = 0; i < b.dim; ++i) m(i, j) = rng.complex_normal();
        blocks.push_back(std::move(m));
    }
    return Element(spec, std::move(blocks));
}

Element random_self_adjoint(const AlgebraSpec& spec, CounterRng& rng) {
    return random_gaussian_element(spec, rng).real_part();
}

Martingale random_positive_martingale(FiltrationPtr filtration, CounterRng& rng, double scale) {
    const AlgebraSpec& spec = filtration->spec();
    const Element g = random_gaussian_element(spec, rng);
    const Element x = (scale * scale) * (g.adjoint() * g + Element::scalar(spec, 1e-6));
    return Martingale::from_terminal(std::move(filtration), x.real_part());
}

Martingale random_positive_martingale(FiltrationPtr filtration, std::uint64_t seed, double scale) {
    CounterRng rng(seed);
    return random_positive_martingale(std::move(filtration), rng, scale);
}

Martingale random_martingale(FiltrationPtr filtration, CounterRng& rng, bool self_adjoint, double scale) {
    const AlgebraSpec& spec = filtration->spec();
    Element x = scale * random_gaussian_element(spec, rng);
    if (self_adjoint) x = x.real_part();
    return Martingale::from_terminal(std::move(filtration), x);
}

MultiplierSequence random_multiplier(FiltrationPtr filtration, CounterRng& rng, MultiplierMode mode) {
    const std::size_t n = filtration->depth();
    if (mode == MultiplierMode::signs) {
        std::vector<int> signs(n, 1);
        for (std::size_t k = 1; k < n; ++k) signs[k] = rng.sign();
        return MultiplierSequence::signs(std::move(filtration), signs);
    }
    const AlgebraSpec& spec = filtration->spec();
    std::vector<Element> entries{Element::identity(spec)};
    for (std::size_t k = 1; k < n; ++k) {
        const Subalgebra& comm = filtration->relative_commutant(k - 1);
        Element e = Element::zero(spec);
        for (int i = 0; i < comm.dimension(); ++i) e = e + rng.normal() * comm.basis_element(i);
        e = e.real_part();
        const double nrm = operator_norm(e);
        // spread the norm around 1 so that clipping is active on about half of the draws
        const double target = 0.5 + rng.uniform();
        if (nrm > 0.0) e = (target / nrm) * e;
        e = spectral_map(e, [](double v) { return std::clamp(v, -1.0, 1.0); });
        entries.push_back(std::move(e));
    }
    return MultiplierSequence::operators(std::move(filtration), std::move(entries));
}

MultiplierSequence random_multiplier(FiltrationPtr filtration, std::uint64_t seed, MultiplierMode mode) {
    CounterRng rng(seed);
    return random_multiplier(std::move(filtration), rng, mode);
}

FiltrationDescriptor random_tensor_descriptor(CounterRng& rng, int max_total_dim, int max_depth) {
    if (max_total_dim < 1 || max_depth < 1) throw DomainError("random_tensor_descriptor: bad limits");
    const int depth = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_depth)));
    std::vector<int> dims;
    int total = 1;
    for (int i = 0; i < depth; ++i) {
        const int room = std::min(4, max_total_dim / total);
        const int d = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(room, 1))));
        dims.push_back(d);
        total *= d;
    }
    return FiltrationDescriptor::tensor(std::move(dims));
}

} // namespace ncm
