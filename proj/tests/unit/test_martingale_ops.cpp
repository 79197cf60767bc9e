#include <ncmart/generators.hpp>
#include <ncmart/martingale_ops.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ncm;

namespace {

double dist(const Element& a, const Element& b) { return hs_norm(a - b); }

Element mat2(const AlgebraSpec& s, Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return Element::from_matrix(s, m);
}

FiltrationPtr two_point() { return Filtration::build(FiltrationDescriptor::dyadic(1)); }

} // namespace

TEST(Transform, HandComputedDyadic) {
    const auto f = two_point();
    const auto x = Martingale::from_terminal(f, Element::diagonal(f->spec(), {3.0, 1.0}));
    EXPECT_LT(dist(x.difference(0), Element::diagonal(f->spec(), {2.0, 2.0})), 1e-15);
    EXPECT_LT(dist(x.difference(1), Element::diagonal(f->spec(), {1.0, -1.0})), 1e-15);
    const auto t = transform(x, MultiplierSequence::signs(f, {1, -1}));
    EXPECT_LT(dist(t, Element::diagonal(f->spec(), {1.0, 3.0})), 1e-14);
}

TEST(Transform, TelescopingIsometryInvolution) {
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 3, 2}));
    CounterRng rng(11);
    for (int i = 0; i < 10; ++i) {
        const auto x = random_martingale(f, rng, false);
        EXPECT_LT(dist(transform(x, MultiplierSequence::signs(f, {1, 1, 1})), x.terminal()), 1e-12);
        const auto xi = random_multiplier(f, rng, MultiplierMode::signs);
        const Element t = transform(x, xi);
        EXPECT_NEAR(hs_norm(t), hs_norm(x.terminal()), 1e-10 * std::max(1.0, hs_norm(t)));
        EXPECT_LT(dist(transform(Martingale::from_terminal(f, t), xi), x.terminal()), 1e-12 * std::max(1.0, hs_norm(t)));
    }
}

TEST(Transform, Linearity) {
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2}));
    CounterRng rng(12);
    const auto x = random_martingale(f, rng, false);
    const auto y = random_martingale(f, rng, false);
    const auto xi = random_multiplier(f, rng, MultiplierMode::operators);
    ASSERT_TRUE(xi.certified());
    const auto sum = Martingale::from_terminal(f, x.terminal() + 2.0 * y.terminal());
    EXPECT_LT(dist(transform(sum, xi), transform(x, xi) + 2.0 * transform(y, xi)), 1e-12);
}

TEST(Multiplier, OperatorCertificate) {
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2, 2}));
    CounterRng rng(13);
    for (int i = 0; i < 5; ++i) {
        const auto xi = random_multiplier(f, rng, MultiplierMode::operators);
        EXPECT_TRUE(xi.certified());
        for (std::size_t k = 0; k < xi.length(); ++k) EXPECT_LE(operator_norm(xi.entry(k)), 1.0 + 1e-10);
    }
    // a full matrix in level 1 does not commute with level 1
    const AlgebraSpec& s = f->spec();
    Matrix a = Matrix::Zero(8, 8);
    a(0, 4) = a(4, 0) = 1.0;
    const auto bad = MultiplierSequence::operators(f, {Element::identity(s), Element::from_matrix(s, a), Element::identity(s)});
    EXPECT_FALSE(bad.certified());
    const auto x = random_martingale(f, rng, false);
    EXPECT_THROW(transform(x, bad), ContractError);
}

TEST(Multiplier, ShapeChecks) {
    const auto f = two_point();
    EXPECT_THROW(MultiplierSequence::signs(f, {-1, 1}), DomainError);
    EXPECT_THROW(MultiplierSequence::signs(f, {1}), DomainError);
    const auto other = Filtration::build(FiltrationDescriptor::dyadic(1));
    const auto x = Martingale::from_terminal(f, Element::identity(f->spec()));
    EXPECT_THROW(transform(x, MultiplierSequence::signs(other, {1, 1})), CompositionError);
}

TEST(Cuculescu, HandComputed) {
    const auto f = two_point();
    const auto x = Martingale::from_terminal(f, Element::diagonal(f->spec(), {3.0, 1.0}));
    const auto r = cuculescu(x, 2.5);
    EXPECT_LT(dist(r.projections[0], Element::identity(f->spec())), 1e-14);
    EXPECT_LT(dist(r.projections[1], Element::diagonal(f->spec(), {0.0, 1.0})), 1e-14);
    EXPECT_NEAR(r.tau_one_minus_q, 1.0, 1e-14);
    EXPECT_NEAR(r.trace_bound, 4.0 / 2.5, 1e-14);
    EXPECT_TRUE(r.holds());

    const auto big = cuculescu(x, 3.5);
    EXPECT_LT(dist(big.q(), Element::identity(f->spec())), 1e-14);
    EXPECT_NEAR(big.tau_one_minus_q, 0.0, 1e-15);
}

TEST(Cuculescu, Errors) {
    const auto f = two_point();
    const auto x = Martingale::from_terminal(f, Element::diagonal(f->spec(), {3.0, 1.0}));
    EXPECT_THROW(cuculescu(x, 0.0), DomainError);
    const auto neg = Martingale::from_terminal(f, Element::diagonal(f->spec(), {3.0, -1.0}));
    EXPECT_THROW(cuculescu(neg, 1.0), DomainError);
}

TEST(Cuculescu, RandomCertificates) {
    CounterRng rng(14);
    for (int i = 0; i < 30; ++i) {
        const auto f = Filtration::build(random_tensor_descriptor(rng));
        const auto x = random_positive_martingale(f, rng);
        for (double factor : {0.1, 0.5, 0.9}) {
            const auto r = cuculescu(x, factor * operator_norm(x.terminal()));
            EXPECT_TRUE(r.holds(1e-8)) << f->descriptor().label();
            EXPECT_LE(r.tau_one_minus_q, r.trace_bound + 1e-8);
        }
    }
}

TEST(Doob, Examples) {
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2, 2}));
    const AlgebraSpec& s = f->spec();
    CounterRng rng(15);
    const auto x = random_martingale(f, rng, true);
    const auto d = doob_decompose(AdaptedSequence::from_martingale(x));
    for (std::size_t k = 0; k < x.length(); ++k) {
        EXPECT_LT(hs_norm(d.z[k]), 1e-10);
        EXPECT_LT(dist(d.y[k], x.level(k)), 1e-10);
    }

    const Element one = Element::identity(s);
    const auto inc = doob_decompose(AdaptedSequence(f, {one, 2.0 * one, 3.0 * one}));
    EXPECT_EQ(inc.sense, SequenceClass::submartingale);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_LT(dist(inc.y[k], one), 1e-12);
        EXPECT_LT(dist(inc.z[k], static_cast<double>(k) * one), 1e-12);
    }
}

TEST(Doob, CuculescuTruncationIsSupermartingale) {
    CounterRng rng(16);
    for (int i = 0; i < 20; ++i) {
        const auto f = Filtration::build(random_tensor_descriptor(rng));
        const auto x = random_positive_martingale(f, rng);
        const auto xi = random_multiplier(f, rng, MultiplierMode::operators);
        const double lambda = 0.4 * operator_norm(x.terminal());
        const auto c = truncated_chain(x, xi, lambda);
        EXPECT_NE(c.doob.sense, SequenceClass::submartingale);
        EXPECT_NE(c.doob.sense, SequenceClass::none);
        for (const auto& z : c.doob.z) EXPECT_LE(hermitian_eig(z).max_eigenvalue(), 1e-8);
        EXPECT_LE(c.energy, c.energy_bound * (1 + 1e-8));
        EXPECT_GE(c.y_norm, c.z_norm - 1e-8);
        EXPECT_LE(c.removal, c.removal_bound * (1 + 1e-8));
    }
}

TEST(TruncationSplit, Identities) {
    const AlgebraSpec s = AlgebraSpec::full_matrix(3);
    CounterRng rng(17);
    const Element S = random_gaussian_element(s, rng);
    const auto full = truncation_split(S, Element::identity(s));
    EXPECT_LT(dist(full.qsq, S), 1e-15);
    EXPECT_LT(hs_norm(full.lower_left) + hs_norm(full.right), 1e-15);
    const auto none = truncation_split(S, Element::zero(s));
    EXPECT_LT(dist(none.right, S), 1e-15);

    const Element q = spectral_projection(random_self_adjoint(s, rng), Interval::open_above(0.0));
    const auto p = truncation_split(S, q);
    EXPECT_LT(dist(p.qsq + p.lower_left + p.right, S), 1e-12);
    EXPECT_THROW(truncation_split(S, 0.5 * Element::identity(s)), DomainError);
}

TEST(Lemma1, HandComputed) {
    const auto f = two_point();
    const auto x = Martingale::from_terminal(f, Element::diagonal(f->spec(), {3.0, 1.0}));
    const auto xi = MultiplierSequence::signs(f, {1, 1});
    // T = diag(3,1): one eigenvalue above 2.5. q = diag(0,1), qTq = diag(0,1) has nothing above 1.25.
    const auto r = lemma1_bound(x, xi, 2.5, 0.5, 0.5);
    EXPECT_NEAR(r.lhs, 1.0, 1e-14);
    EXPECT_NEAR(r.rhs, 0.0 / 0.5 + 2.0 / 0.5 * 4.0 / 2.5, 1e-13);
    EXPECT_TRUE(r.holds);
    EXPECT_THROW(lemma1_bound(x, xi, 2.5, 1.0, 0.5), DomainError);
    EXPECT_THROW(lemma1_bound(x, xi, 2.5, 0.5, 0.0), DomainError);

    const auto bounded = lemma1_bound(x, xi, 10.0, 0.3, 0.7);
    EXPECT_EQ(bounded.lhs, 0.0);
    EXPECT_TRUE(bounded.holds);
}

TEST(SquareFunctions, Examples) {
    const AlgebraSpec s = AlgebraSpec::full_matrix(2);
    const Element e11 = mat2(s, 1, 0, 0, 0), e21 = mat2(s, 0, 0, 1, 0);
    EXPECT_NEAR(column_norm({e11, e21}, 1.0), std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(row_norm({e11, e21}, 1.0), 2.0, 1e-14);
    EXPECT_NEAR(column_row_norm({e11, e21}, 1.0, ColumnRow::intersection).value, 2.0, 1e-14);
    const auto sum = column_row_norm({e11, e21}, 1.0, ColumnRow::sum);
    EXPECT_TRUE(sum.upper_bound);
    EXPECT_LE(sum.value, std::sqrt(2.0) + 1e-12);
    EXPECT_THROW(column_norm({e11}, 0.5), DomainError);

    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2}));
    CounterRng rng(18);
    const auto x = random_martingale(f, rng, false);
    const auto one = square_functions(x, 1);
    EXPECT_LT(dist(one.column, modulus(x.level(0))), 1e-12);
    EXPECT_LT(dist(one.row, modulus(x.level(0).adjoint())), 1e-12);
    EXPECT_THROW(square_functions(x, 0), DomainError);
    EXPECT_THROW(square_functions(x, 3), DomainError);

    const auto sa = random_martingale(f, rng, true);
    const auto sq = square_functions(sa, 2);
    EXPECT_LT(dist(sq.column, sq.row), 1e-12);
    EXPECT_NEAR(lp_norm(sq.column, 2.0), hs_norm(sa.terminal()), 1e-9);
}

TEST(SumNorm, WitnessIsFeasibleAndBelowPureNorms) {
    const AlgebraSpec s = AlgebraSpec::full_matrix(3);
    CounterRng rng(19);
    for (double p : {1.0, 1.5}) {
        std::vector<Element> a;
        for (int k = 0; k < 3; ++k) a.push_back(random_gaussian_element(s, rng));
        const auto r = column_row_norm(a, p, ColumnRow::sum);
        ASSERT_EQ(r.column_part.size(), a.size());
        for (std::size_t k = 0; k < a.size(); ++k) EXPECT_LT(dist(r.column_part[k] + r.row_part[k], a[k]), 1e-10);
        EXPECT_NEAR(r.value, column_norm(r.column_part, p) + row_norm(r.row_part, p), 1e-9);
        EXPECT_LE(r.value, std::min(column_norm(a, p), row_norm(a, p)) + 1e-12);
    }
}

// For commuting diagonal tuples C = R and the triangle inequality makes C+R = C.
TEST(SumNorm, CommutativeTuplesAreExact) {
    const AlgebraSpec d = AlgebraSpec::diagonal(4);
    CounterRng rng(20);
    std::vector<Element> a;
    for (int k = 0; k < 3; ++k) a.push_back(random_gaussian_element(d, rng));
    const auto r = column_row_norm(a, 1.0, ColumnRow::sum);
    EXPECT_NEAR(r.value, column_norm(a, 1.0), 1e-9);
}

TEST(Hardy, Examples) {
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 3}));
    CounterRng rng(21);
    const auto x = random_martingale(f, rng, false);
    EXPECT_NEAR(hardy_norm(x, 2.0).value, hs_norm(x.terminal()), 1e-9);
    const auto h3 = hardy_norm(x, 3.0);
    EXPECT_GE(h3.value, h3.column - 1e-12);
    EXPECT_GE(h3.value, h3.row - 1e-12);
    EXPECT_FALSE(h3.upper_bound);
    EXPECT_THROW(hardy_norm(x, 0.9), DomainError);

    const auto c = Filtration::constant(AlgebraSpec::full_matrix(3), 1);
    const auto one = Martingale::from_terminal(c, random_gaussian_element(c->spec(), rng));
    const double expected = std::max(lp_norm(modulus(one.terminal()), 4.0), lp_norm(modulus(one.terminal().adjoint()), 4.0));
    EXPECT_NEAR(hardy_norm(one, 4.0).value, expected, 1e-10);

    // below p = 2 the descent value is a feasible point, so it bounds the p = 2 identity from above
    const auto h15 = hardy_norm(x, 1.5);
    EXPECT_TRUE(h15.upper_bound);
    EXPECT_LE(h15.value, std::min(h15.column, h15.row) + 1e-12);
}

TEST(Stein, ProjectionExamples) {
    const auto c = Filtration::constant(AlgebraSpec::full_matrix(2), 3);
    CounterRng rng(22);
    std::vector<Element> a;
    for (int k = 0; k < 3; ++k) a.push_back(random_gaussian_element(c->spec(), rng));
    const auto qa = stein_Q(a, *c);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_LT(dist(qa[k], a[k]), 1e-15);

    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2, 2}));
    std::vector<Element> b;
    for (int k = 0; k < 3; ++k) b.push_back(random_gaussian_element(f->spec(), rng));
    EXPECT_LE(column_norm(stein_Q(b, *f), 2.0), column_norm(b, 2.0) + 1e-10);
    b.push_back(b[0]);
    EXPECT_THROW(stein_Q(b, *f), DomainError);
}
