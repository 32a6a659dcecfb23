// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors
//
// Serial reference vs OpenMP kernels. Run with --benchmark_filter=... to pick one.

#include "bioie/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

namespace {

using namespace bioie::kernels;

std::vector<std::string> make_docs(std::size_t n) {
    std::mt19937_64 rng(42);
    std::vector<std::string> docs(n);
    for (auto& d : docs) {
        auto words = 120 + rng() % 200;
        for (std::size_t w = 0; w < words; ++w) d += std::string(2 + rng() % 9, 'a' + static_cast<char>(rng() % 26)) + ' ';
    }
    return docs;
}

std::vector<std::vector<Mention>> make_mentions(std::size_t papers) {
    std::mt19937_64 rng(43);
    std::vector<std::vector<Mention>> out(papers);
    for (auto& p : out) {
        auto k = 3 + rng() % 12;
        for (std::size_t i = 0; i < k; ++i) {
            auto id = rng() % 2000;
            p.push_back({"entity " + std::to_string(id), (rng() % 4 ? "Entity " : "entity ") + std::to_string(id)});
        }
    }
    return out;
}

template <auto Kernel>
void BM_tokens(benchmark::State& state) {
    auto docs = make_docs(static_cast<std::size_t>(state.range(0)));
    std::vector<std::string_view> views(docs.begin(), docs.end());
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(views));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_mentions(benchmark::State& state) {
    auto papers = make_mentions(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(papers));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_tokens<token_summary_serial>)->Name("tokens/serial")->Arg(1000)->Arg(12636);
BENCHMARK(BM_tokens<token_summary_parallel>)->Name("tokens/parallel")->Arg(1000)->Arg(12636);
BENCHMARK(BM_mentions<count_mentions_serial>)->Name("mentions/serial")->Arg(1000)->Arg(12636);
BENCHMARK(BM_mentions<count_mentions_parallel>)->Name("mentions/parallel")->Arg(1000)->Arg(12636);

}  // namespace

BENCHMARK_MAIN();
