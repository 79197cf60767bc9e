#include "commutative.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

Func expectation(const Func& f, int depth, int n) {
    const std::size_t run = std::size_t{1} << (depth - n);
    Func out(f.size());
    for (std::size_t start = 0; start < f.size(); start += run) {
        Complex sum = 0.0;
        for (std::size_t i = start; i < start + run; ++i) sum += f[i];
        for (std::size_t i = start; i < start + run; ++i) out[i] = sum / static_cast<double>(run);
    }
    return out;
}

std::vector<Func> martingale(const Func& terminal, int depth) {
    std::vector<Func> levels;
    for (int n = 0; n <= depth; ++n) levels.push_back(expectation(terminal, depth, n));
    return levels;
}

std::vector<Func> differences(const std::vector<Func>& levels) {
    std::vector<Func> d{levels[0]};
    for (std::size_t n = 1; n < levels.size(); ++n) {
        Func dn(levels[n].size());
        for (std::size_t i = 0; i < dn.size(); ++i) dn[i] = levels[n][i] - levels[n - 1][i];
        d.push_back(dn);
    }
    return d;
}

double lp_norm(const Func& f, double p) {
    double s = 0.0;
    for (auto v : f) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

double sup_norm(const Func& f) {
    double m = 0.0;
    for (auto v : f) m = std::max(m, std::abs(v));
    return m;
}

double weak_l1(const Func& f) {
    std::vector<double> a;
    for (auto v : f) a.push_back(std::abs(v));
    std::sort(a.begin(), a.end(), std::greater<>());
    double best = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) best = std::max(best, static_cast<double>(k + 1) * a[k]);
    return best;
}

double distribution(const Func& f, double s) {
    double c = 0.0;
    for (auto v : f)
        if (std::abs(v) > s) c += 1.0;
    return c;
}

std::vector<double> square_function(const std::vector<Func>& diffs, std::size_t n) {
    std::vector<double> s(diffs[0].size(), 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += std::norm(diffs[k][i]);
    for (auto& v : s) v = std::sqrt(v);
    return s;
}

Func sign_transform(const std::vector<Func>& diffs, const std::vector<int>& signs) {
    Func t(diffs[0].size(), 0.0);
    for (std::size_t k = 0; k < diffs.size(); ++k)
        for (std::size_t i = 0; i < t.size(); ++i) t[i] += static_cast<double>(signs[k]) * diffs[k][i];
    return t;
}

std::vector<std::vector<double>> stopped_indicators(const std::vector<Func>& levels, double lambda) {
    std::vector<std::vector<double>> q;
    std::vector<double> alive(levels[0].size(), 1.0);
    for (const auto& x : levels) {
        for (std::size_t i = 0; i < alive.size(); ++i)
            if (x[i].real() > lambda) alive[i] = 0.0;
        q.push_back(alive);
    }
    return q;
}

} // namespace oracle
