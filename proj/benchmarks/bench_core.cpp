#include <ncmart/generators.hpp>
#include <ncmart/martingale_ops.hpp>

#include <benchmark/benchmark.h>

using namespace ncm;

static void BM_HermitianEig(benchmark::State& state) {
    CounterRng rng(1);
    const auto a = random_self_adjoint(AlgebraSpec::full_matrix(static_cast<int>(state.range(0))), rng);
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(a));
}
BENCHMARK(BM_HermitianEig)->Arg(4)->Arg(16)->Arg(64);

static void BM_ConditionalExpectation(benchmark::State& state) {
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2, 2, 2}));
    CounterRng rng(2);
    const auto x = random_gaussian_element(f->spec(), rng);
    const auto level = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(f->expectation(level, x));
}
BENCHMARK(BM_ConditionalExpectation)->DenseRange(0, 3);

static void BM_CuculescuTensor(benchmark::State& state) {
    const auto f = Filtration::build(FiltrationDescriptor::tensor({2, 2, 2, 2}));
    const auto x = random_positive_martingale(f, 3);
    const double lambda = 0.5 * operator_norm(x.terminal());
    for (auto _ : state) benchmark::DoNotOptimize(cuculescu(x, lambda));
}
BENCHMARK(BM_CuculescuTensor);

static void BM_CuculescuDyadic(benchmark::State& state) {
    const auto f = Filtration::build(FiltrationDescriptor::dyadic(static_cast<int>(state.range(0))));
    CounterRng rng(4);
    const auto x = random_martingale(f, rng, true);
    const double lambda = 0.5 * operator_norm(x.terminal());
    for (auto _ : state) benchmark::DoNotOptimize(cuculescu(Martingale::from_terminal(f, modulus(x.terminal())), lambda));
}
BENCHMARK(BM_CuculescuDyadic)->Arg(3)->Arg(5);

BENCHMARK_MAIN();
