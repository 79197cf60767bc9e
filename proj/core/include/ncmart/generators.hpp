// generators.hpp: seeded random instances: elements, martingales, multipliers, filtrations

#pragma once

#include "ncmart/martingale_ops.hpp"
#include "ncmart/random.hpp"

namespace ncm {

// Complex Gaussian entries in every block.
Element random_gaussian_element(const AlgebraSpec& spec, CounterRng& rng);
Element random_self_adjoint(const AlgebraSpec& spec, CounterRng& rng);

// terminal = scale²·(g*g + 1e-6·1), g complex Gaussian.
Martingale random_positive_martingale(FiltrationPtr filtration, CounterRng& rng, double scale = 1.0);
Martingale random_positive_martingale(FiltrationPtr filtration, std::uint64_t seed, double scale = 1.0);

// Gaussian terminal, made self-adjoint on request.
Martingale random_martingale(FiltrationPtr filtration, CounterRng& rng, bool self_adjoint, double scale = 1.0);

// signs: ξ_k = ±1. operators: self-adjoint elements of M_{k-1} ∩ M_k' with spectrum clipped to [-1, 1].
MultiplierSequence random_multiplier(FiltrationPtr filtration, CounterRng& rng, MultiplierMode mode);
MultiplierSequence random_multiplier(FiltrationPtr filtration, std::uint64_t seed, MultiplierMode mode);

// Tensor filtration with 1..max_depth factors of size 1..4 and total dimension ≤ max_total_dim.
FiltrationDescriptor random_tensor_descriptor(CounterRng& rng, int max_total_dim = 16, int max_depth = 4);

} // namespace ncm
