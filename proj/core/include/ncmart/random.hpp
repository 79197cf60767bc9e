// random.hpp: counter-based generator with per-trial streams

#pragma once

#include <complex>
#include <cstdint>

namespace ncm {

std::uint64_t splitmix64(std::uint64_t x);

// Stream key for trial `index` of a run seeded with `master`.
std::uint64_t stream_key(std::uint64_t master, std::uint64_t index);

// next() = splitmix64(key + counter·γ). Gaussians use Box–Muller on our own uniforms so
// sequences are identical across standard libraries.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}
    CounterRng(std::uint64_t master, std::uint64_t index) : key_(stream_key(master, index)) {}

    std::uint64_t next();
    // Uniform in [0, 1) with 53 random bits.
    double uniform();
    // Uniform in (0, 1].
    double uniform_open0();
    double normal();
    // Standard complex Gaussian: real and imaginary parts N(0, 1/2).
    std::complex<double> complex_normal();
    int sign() { return (next() >> 63) ? -1 : 1; }
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace ncm
