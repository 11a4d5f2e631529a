#include "cpcross/corpus.hpp"
#include "cpcross/correspondence.hpp"
#include "cpcross/cp_finite.hpp"
#include "cpcross/exel.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace cpcross;

namespace {

GraphPtr rose(std::size_t loops)
{
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i < loops; ++i) edges.push_back({"e" + std::to_string(i), "v", "v"});
    return std::make_shared<const Graph>(std::vector<std::string>{"v"}, edges);
}

Matrix<Rational> dense_matrix(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Matrix<Rational> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (draw(rng, 0, 1)) m(i, j) = Rational(static_cast<long>(draw(rng, 1, 5)), static_cast<long>(draw(rng, 1, 5)));
    return m;
}

void transfer_identity_rose(benchmark::State& state)
{
    auto g = rose(static_cast<std::size_t>(state.range(0)));
    auto w = WeightSystem::uniform(*g);
    for (auto _ : state) benchmark::DoNotOptimize(verify_transfer_identity(g, w, 3));
}
BENCHMARK(transfer_identity_rose)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void transfer_identity_random(benchmark::State& state)
{
    std::mt19937_64 rng(static_cast<std::uint64_t>(state.range(0)));
    auto g = random_graph(rng, {8, 16, RandomGraphOptions::Shape::any});
    auto w = random_weights(rng, *g);
    for (auto _ : state) benchmark::DoNotOptimize(verify_transfer_identity(g, w, 4));
}
BENCHMARK(transfer_identity_random)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void normalize_products(benchmark::State& state)
{
    auto g = rose(static_cast<std::size_t>(state.range(0)));
    const auto paths = paths_up_to(*g, 3);
    DiagElement sum(g);
    for (const auto& p : paths) sum += DiagElement::projection(g, p) + alpha(DiagElement::projection(g, p));
    for (auto _ : state) benchmark::DoNotOptimize(normalize(sum, 5));
}
BENCHMARK(normalize_products)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

void correspondence_dense(benchmark::State& state)
{
    PositiveMapMatrix m(dense_matrix(static_cast<std::size_t>(state.range(0)), 11));
    for (auto _ : state) benchmark::DoNotOptimize(gns_correspondence(m));
}
BENCHMARK(correspondence_dense)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

void multiplicative_domain_dense(benchmark::State& state)
{
    PositiveMapMatrix m(dense_matrix(static_cast<std::size_t>(state.range(0)), 12));
    for (auto _ : state) benchmark::DoNotOptimize(multiplicative_domain(m));
}
BENCHMARK(multiplicative_domain_dense)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
