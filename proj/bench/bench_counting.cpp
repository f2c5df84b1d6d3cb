// Throughput comparison between the OpenMP counting kernels and the serial
// reference implementations, over synthetic corpora of growing size.

#include <benchmark/benchmark.h>

#include "harmgram/encoding.hpp"
#include "harmgram/fixtures.hpp"
#include "harmgram/ngram.hpp"
#include "harmgram/ref.hpp"

namespace {

using namespace harmgram;

EncodedCorpus make_corpus(int movements, int slices) {
  FixtureConfig config;
  config.movements = movements;
  config.slices_per_movement = slices;
  config.seed = 7;
  return encode_corpus(generate_fixture_corpus(config), 1);
}

void bm_skip_vectors_serial(benchmark::State& state) {
  auto corpus = make_corpus(static_cast<int>(state.range(0)), 400);
  for (auto _ : state) {
    auto vectors = ref::skip_count_vectors_serial(corpus, 10);
    benchmark::DoNotOptimize(vectors);
  }
}

void bm_skip_vectors_parallel(benchmark::State& state) {
  auto corpus = make_corpus(static_cast<int>(state.range(0)), 400);
  for (auto _ : state) {
    auto vectors = skip_count_vectors(corpus, 10, /*threads=*/0);
    benchmark::DoNotOptimize(vectors);
  }
}

void bm_contiguous_serial(benchmark::State& state) {
  auto corpus = make_corpus(static_cast<int>(state.range(0)), 400);
  for (auto _ : state) {
    auto table = ref::count_contiguous_serial(corpus, 2);
    benchmark::DoNotOptimize(table);
  }
}

void bm_contiguous_parallel(benchmark::State& state) {
  auto corpus = make_corpus(static_cast<int>(state.range(0)), 400);
  for (auto _ : state) {
    auto table = count_contiguous(corpus, 2, /*threads=*/0);
    benchmark::DoNotOptimize(table);
  }
}

BENCHMARK(bm_skip_vectors_serial)->Arg(8)->Arg(32)->Arg(128);
BENCHMARK(bm_skip_vectors_parallel)->Arg(8)->Arg(32)->Arg(128);
BENCHMARK(bm_contiguous_serial)->Arg(8)->Arg(32)->Arg(128);
BENCHMARK(bm_contiguous_parallel)->Arg(8)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
