#include "ncmart/random.hpp"

#include <cmath>
#include <numbers>

namespace ncm {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

std::uint64_t CounterRng::next() {
    ++counter_;
    return splitmix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform_open0() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::complex<double> CounterRng::complex_normal() {
    const double s = std::sqrt(0.5);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

std::uint64_t CounterRng::below(std::uint64_t n) {
    if (n <= 1) return 0;
    // rejection keeps the result exactly uniform
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
        v = next();
    } while (v >= limit);
    return v % n;
}

} // namespace ncm
