#include <ncmart/generators.hpp>
#include <ncmart/inequality_lab.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ncm;

namespace {

Element mat2(const AlgebraSpec& s, Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return Element::from_matrix(s, m);
}

std::vector<int> all_plus(std::size_t n) { return std::vector<int>(n, 1); }

} // namespace

TEST(Verdict, HoldsRule) {
    EXPECT_TRUE(make_verdict("v", 1.0, 1.0, 1.0, true, 0.0).holds);
    EXPECT_FALSE(make_verdict("v", 1.1, 1.0, 1.1, true, 1e-3).holds);
    EXPECT_TRUE(make_verdict("v", 1.0005, 1.0, 1.0, true, 1e-3).holds);
    EXPECT_TRUE(make_verdict("v", 5.0, std::numeric_limits<double>::infinity(), 0.0, false).holds);
}

TEST(SplitConstant, ObjectiveAndReferences) {
    EXPECT_NEAR(split_constant_objective(0.5, 0.5), 196.0, 1e-12);
    EXPECT_NEAR(reference_split_constant(), std::pow(std::sqrt(24.0) + std::sqrt(2.0), 2), 1e-12);
    EXPECT_NEAR(reference_split_constant(), 26.0 + 8.0 * std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(published_split_constant(), 14.0 * std::sqrt(3.0) / 3.0 + 28.0, 1e-12);
    EXPECT_NEAR(stein_weak_reference(10.0), 22.0, 1e-15);
    EXPECT_NEAR(sub_super_reference(10.0), 64.0, 1e-15);
    EXPECT_NEAR(subquasi_reference(0.5, 4.0, 2.0), 2.0 * std::pow(4.0, 1.0) * std::pow(2.0, 2.0), 1e-12);
}

// 1-D oracle: on the β → 1 edge the objective is 24/α + 2/(1-α); scan it by brute force.
TEST(SplitConstant, OptimizerMatchesCalculus) {
    double best = std::numeric_limits<double>::infinity(), arg = 0.0;
    for (int i = 1; i < 1000000; ++i) {
        const double a = i * 1e-6;
        const double v = 24.0 / a + 2.0 / (1.0 - a);
        if (v < best) best = v, arg = a;
    }
    const auto s = optimize_split_constant();
    EXPECT_NEAR(s.value, best, 1e-6);
    EXPECT_NEAR(s.value, 26.0 + 8.0 * std::sqrt(3.0), 1e-3);
    EXPECT_NEAR(s.alpha, 2.0 * std::sqrt(3.0) / (1.0 + 2.0 * std::sqrt(3.0)), 1e-4);
    EXPECT_NEAR(s.alpha, arg, 1e-4);
    EXPECT_GE(s.grid_value, s.value);

    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(1e-9, 1.0 - 1e-9);
    for (int i = 0; i < 10000; ++i) EXPECT_LE(s.value, split_constant_objective(u(gen), u(gen)) + 1e-9);
}

TEST(WeakType, TrivialBounds) {
    CounterRng rng(2);
    const auto c = Filtration::constant(AlgebraSpec::full_matrix(3), 1);
    const auto one = random_positive_martingale(c, rng);
    EXPECT_LE(check_weak_type(one, MultiplierSequence::signs(c, {1})).ratio, 1.0 + 1e-12);

    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2, 2}));
    const auto x = random_positive_martingale(f, rng);
    const auto v = check_weak_type(x, MultiplierSequence::signs(f, all_plus(3)));
    EXPECT_NEAR(v.ratio, weak_l1_norm(x.terminal()) / lp_norm(x.terminal(), 1.0), 1e-12);
    EXPECT_TRUE(v.asserted);
    EXPECT_TRUE(v.holds);
    EXPECT_NEAR(v.rhs, reference_split_constant() * lp_norm(x.terminal(), 1.0), 1e-9);

    const auto zero = Martingale::from_terminal(f, Element::zero(f->spec()));
    EXPECT_EQ(check_weak_type(zero, MultiplierSequence::signs(f, all_plus(3))).ratio, 0.0);
}

TEST(WeakType, ScaleInvariance) {
    CounterRng rng(3);
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 3, 2}));
    for (int i = 0; i < 5; ++i) {
        const auto x = random_martingale(f, rng, false);
        const auto xi = random_multiplier(f, rng, MultiplierMode::signs);
        for (double t : {0.01, 7.5}) {
            const auto xt = Martingale::from_terminal(f, t * x.terminal());
            EXPECT_NEAR(check_weak_type(xt, xi).ratio, check_weak_type(x, xi).ratio, 1e-9);
            EXPECT_NEAR(check_transform_p(xt, xi, 3.0).ratio, check_transform_p(x, xi, 3.0).ratio, 1e-9);
            EXPECT_NEAR(check_subquasi_p(xt, xi, 0.5).ratio, check_subquasi_p(x, xi, 0.5).ratio, 1e-9);
            EXPECT_NEAR(check_bg(xt, 3.0).alpha_ratio, check_bg(x, 3.0).alpha_ratio, 1e-9);
        }
    }
}

TEST(TransformP, Examples) {
    CounterRng rng(4);
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2, 2}));
    const auto x = random_martingale(f, rng, false);
    const auto xi = random_multiplier(f, rng, MultiplierMode::signs);
    const auto v2 = check_transform_p(x, xi, 2.0);
    EXPECT_NEAR(v2.ratio, 1.0, 1e-10);
    EXPECT_TRUE(v2.asserted);
    EXPECT_FALSE(check_transform_p(x, xi, 3.0).asserted);
    EXPECT_THROW(check_transform_p(x, xi, 1.0), DomainError);

    const auto c = Filtration::constant(AlgebraSpec::full_matrix(2), 1);
    const auto one = random_martingale(c, rng, false);
    EXPECT_NEAR(check_transform_p(one, MultiplierSequence::signs(c, {1}), 4.0).ratio, 1.0, 1e-12);
}

TEST(Subquasi, DomainAndFiniteness) {
    CounterRng rng(5);
    const auto c = Filtration::constant(AlgebraSpec::full_matrix(2), 1);
    const auto one = random_martingale(c, rng, false);
    const auto v = check_subquasi_p(one, MultiplierSequence::signs(c, {1}), 0.5);
    EXPECT_TRUE(std::isfinite(v.ratio));
    EXPECT_FALSE(v.asserted);
    EXPECT_THROW(check_subquasi_p(one, MultiplierSequence::signs(c, {1}), 1.0), DomainError);
}

TEST(SubSuper, IncreasingConstants) {
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2, 2}));
    const Element one = Element::identity(f->spec());
    const AdaptedSequence s(f, {one, 2.0 * one, 3.0 * one});
    const auto r = check_sub_super_transform(s, MultiplierSequence::signs(f, {1, -1, 1}));
    EXPECT_EQ(r.sense, SequenceClass::submartingale);
    // transform = 1 - 1 + 1 = 1·I; ‖I‖_{1,∞} = 8, sup ‖s_n‖₁ = 24
    EXPECT_NEAR(r.transform.ratio, 8.0 / 24.0, 1e-12);
    EXPECT_TRUE(r.predictable_bound.holds);
    EXPECT_TRUE(r.sandwich.holds);

    // down then up: neither sub nor super
    const AdaptedSequence zigzag(f, {one, -1.0 * one, one});
    EXPECT_THROW(check_sub_super_transform(zigzag, MultiplierSequence::signs(f, {1, 1, 1})), DomainError);
}

TEST(Stein, Examples) {
    CounterRng rng(7);
    const auto c = Filtration::constant(AlgebraSpec::full_matrix(3), 2);
    const std::vector<Element> a{random_gaussian_element(c->spec(), rng), random_gaussian_element(c->spec(), rng)};
    EXPECT_LE(check_stein(a, *c, SteinMode::weak).ratio, 1.0 + 1e-12);

    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2, 2}));
    std::vector<Element> b;
    for (int k = 0; k < 3; ++k) b.push_back(random_gaussian_element(f->spec(), rng));
    const auto v = check_stein(b, *f, SteinMode::lp, 2.0);
    EXPECT_TRUE(v.asserted);
    EXPECT_LE(v.ratio, 1.0 + 1e-10);
    const auto w = check_stein(b, *f, SteinMode::weak);
    EXPECT_NEAR(w.rhs / w.lhs * w.ratio, stein_weak_reference(reference_split_constant()), 1e-9);
}

TEST(Khintchine, Examples) {
    const AlgebraSpec s = AlgebraSpec::full_matrix(2);
    const Element e11 = mat2(s, 1, 0, 0, 0), e21 = mat2(s, 0, 0, 1, 0);
    // e11 ± e21 both have singular values {√2, 0}
    const auto r = khintchine_average({e11, e21}, 4.0);
    EXPECT_NEAR(r.average, std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(r.column, std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(r.row, std::pow(2.0, 0.25), 1e-12);
    EXPECT_TRUE(r.verdict.holds);

    CounterRng rng(8);
    std::vector<Element> a;
    for (int k = 0; k < 5; ++k) a.push_back(random_gaussian_element(s, rng));
    const auto two = khintchine_average(a, 2.0);
    double sq = 0.0;
    for (const auto& e : a) sq += hs_norm(e) * hs_norm(e);
    EXPECT_NEAR(two.average * two.average, sq, 1e-9 * sq);
    EXPECT_NEAR(khintchine_average({a[0]}, 3.0).average, lp_norm(a[0], 3.0), 1e-12);

    const auto one = khintchine_average(a, 1.0);
    EXPECT_EQ(one.verdict.name, "khintchine_upper");
    EXPECT_TRUE(one.verdict.holds);
    EXPECT_THROW(khintchine_average(std::vector<Element>(15, e11), 2.0), SizeError);
}

TEST(BurkholderGundy, Examples) {
    CounterRng rng(9);
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 3}));
    const auto x = random_martingale(f, rng, false);
    const auto r2 = check_bg(x, 2.0);
    EXPECT_NEAR(r2.alpha_ratio, 1.0, 1e-9);
    EXPECT_NEAR(r2.beta_ratio, 1.0, 1e-9);
    const auto c = Filtration::constant(AlgebraSpec::full_matrix(2), 1);
    const auto one = Martingale::from_terminal(c, random_self_adjoint(c->spec(), rng));
    EXPECT_NEAR(check_bg(one, 4.0).alpha_ratio, 1.0, 1e-10);
    EXPECT_THROW(check_bg(x, 1.0), DomainError);
}

TEST(Llogl, BoundedTerminal) {
    CounterRng rng(10);
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2}));
    const auto g = random_martingale(f, rng, false);
    const auto x = Martingale::from_terminal(f, (0.9 / operator_norm(g.terminal())) * g.terminal());
    const auto xi = random_multiplier(f, rng, MultiplierMode::signs);
    const auto r = check_llogl(x, xi);
    EXPECT_NEAR(r.llogl, 0.0, 1e-15);
    EXPECT_NEAR(r.r1, lp_norm(transform(x, xi), 1.0), 1e-12);
}

TEST(HillClimb, ImprovesObjective) {
    const AlgebraSpec s = AlgebraSpec::full_matrix(2);
    const Element target = mat2(s, 1, 2, 3, 4);
    auto objective = [&](const Element& g) { return -hs_norm(g - target); };
    HillClimbOptions opt;
    opt.budget = 3000;
    opt.seed = 3;
    const auto r = hill_climb(s, objective, [&](CounterRng&) { return Element::zero(s); }, opt);
    EXPECT_GT(r.best, objective(Element::zero(s)));
    EXPECT_GT(r.best, -0.5);
    EXPECT_LE(r.evaluations, opt.budget);
    EXPECT_DOUBLE_EQ(r.best, objective(r.best_point));
}

TEST(Umd, TrivialCases) {
    EXPECT_NEAR(umd_lower_bound(1, 2.0, 3, 300).estimate, 1.0, 1e-6);
    EXPECT_NEAR(umd_lower_bound(3, 3.0, 1, 200).estimate, 1.0, 1e-9);
    const auto e = umd_lower_bound(2, 2.0, 2, 300);
    EXPECT_GE(e.estimate, 1.0);
    EXPECT_EQ(e.best_signs.size(), 3u);
    EXPECT_THROW(umd_lower_bound(64, 2.0, 3, 10), SizeError);
}

TEST(Umd, RatioIsDeterministic) {
    UmdOptions opt;
    opt.seed = 42;
    const auto a = umd_lower_bound(2, 2.0, 3, 500, opt);
    const auto b = umd_lower_bound(2, 2.0, 3, 500, opt);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.best_signs, b.best_signs);
    const auto f = Filtration::build(a.filtration);
    EXPECT_NEAR(umd_ratio(Martingale::from_terminal(f, a.best_terminal), 2.0, opt), a.estimate, 1e-12);
}
