#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "fgpr/agraph.hpp"
#include "fgpr/genericity.hpp"
#include "fgpr/pirank.hpp"
#include "fgpr/whitehead.hpp"
#include "fgpr/wordmeasure.hpp"
#include "fgpr/words.hpp"

namespace {

using namespace fgpr;

std::vector<word> bench_words(int n, int count, std::uint64_t seed) {
    std::vector<word> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(sample_word(2, n, true, derive_seed(seed, static_cast<std::uint64_t>(i))));
    return out;
}

void bm_fold(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<word> words = bench_words(n, 64, 11);
    std::size_t i = 0;
    for (auto _ : state) {
        agraph g = path_graph(words[i++ % words.size()], 2);
        benchmark::DoNotOptimize(fold(g));
    }
}
BENCHMARK(bm_fold)->Arg(16)->Arg(64)->Arg(256);

void bm_quotient_closure(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<word> words = bench_words(n, 16, 12);
    std::size_t i = 0;
    for (auto _ : state) {
        agraph g = cycle_graph(cyclic_word::of(words[i++ % words.size()]), 2);
        std::uint64_t visited =
            for_each_quotient(g, closure_options{}, [](std::string_view) { return true; });
        benchmark::DoNotOptimize(visited);
    }
}
BENCHMARK(bm_quotient_closure)->Arg(6)->Arg(8)->Arg(10);

void bm_whitehead_minimize(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<word> words = bench_words(n, 64, 13);
    std::size_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(whitehead_minimize(words[i++ % words.size()], 2));
}
BENCHMARK(bm_whitehead_minimize)->Arg(8)->Arg(16)->Arg(32);

void bm_pirank(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<word> words = bench_words(n, 16, 14);
    std::size_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(primitivity_rank(words[i++ % words.size()], 2));
}
BENCHMARK(bm_pirank)->Arg(6)->Arg(8)->Arg(10);

void bm_canonical_form(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<agraph> graphs;
    for (const word& w : bench_words(n, 64, 15))
        graphs.push_back(fold(cycle_graph(cyclic_word::of(w), 2)));
    std::size_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(canonical_form(graphs[i++ % graphs.size()]));
}
BENCHMARK(bm_canonical_form)->Arg(16)->Arg(64)->Arg(256);

void bm_mc_expected_fix(benchmark::State& state) {
    const int degree = static_cast<int>(state.range(0));
    word w = word::parse("aabbAB", 2);
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(mc_expected_fix(w, 2, degree, 10000, ++seed));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(bm_mc_expected_fix)->Arg(10)->Arg(40)->Arg(160);

void bm_max_piece_length(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<cyclic_word> words;
    for (const word& w : bench_words(n, 64, 16)) words.push_back(cyclic_word::of(w));
    std::size_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(max_piece_length(words[i++ % words.size()]));
}
BENCHMARK(bm_max_piece_length)->Arg(32)->Arg(128)->Arg(512);

} // namespace

BENCHMARK_MAIN();
