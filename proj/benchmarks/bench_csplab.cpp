#include <benchmark/benchmark.h>

#include "csplab/codecs.hpp"
#include "csplab/csp.hpp"
#include "csplab/measurement.hpp"
#include "csplab/source_models.hpp"

namespace {

csplab::BlockCode small_code() {
  csplab::BlockCode code;
  code.kind = csplab::CodecKind::PiecewiseConstant;
  code.n = 16;
  code.value_bits = 2;
  code.max_jumps = 2;
  return code;
}

csplab::SourceSpec markov_source(double p) {
  csplab::SourceSpec spec;
  spec.kind = csplab::SourceKind::PiecewiseMarkov;
  spec.jump_prob = p;
  return spec;
}

void BM_EnumerateCodebook(benchmark::State& state) {
  const csplab::BlockCode code = small_code();
  for (auto _ : state) {
    benchmark::DoNotOptimize(csplab::enumerate_codebook(code));
  }
}
BENCHMARK(BM_EnumerateCodebook);

void BM_CspDecode(benchmark::State& state) {
  const csplab::BlockCode code = small_code();
  const csplab::Codebook codebook = csplab::enumerate_codebook(code);
  const std::size_t m = 6;
  const auto x = csplab::sample_block(markov_source(0.1), code.n, 7);
  const auto sys = csplab::sample_matrix(m, code.n, 7);
  const auto y = csplab::measure(sys, x, csplab::NoiseSpec{}, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(csplab::csp_decode(y, sys, codebook));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(codebook.size()));
}
BENCHMARK(BM_CspDecode);

void BM_PwcRoundtrip(benchmark::State& state) {
  csplab::BlockCode code;
  code.kind = csplab::CodecKind::PiecewiseConstant;
  code.n = 1024;
  code.value_bits = 8;
  const auto x = csplab::sample_block(markov_source(0.1), code.n, 13);
  for (auto _ : state) {
    const csplab::BitString bits = csplab::pwc_encode(code, x);
    benchmark::DoNotOptimize(csplab::pwc_decode(code, bits));
  }
}
BENCHMARK(BM_PwcRoundtrip);

void BM_SampleMatrix(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(csplab::sample_matrix(50, 200, 11));
  }
}
BENCHMARK(BM_SampleMatrix);

void BM_MaxSingularValue(benchmark::State& state) {
  const auto sys = csplab::sample_matrix(50, 200, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(csplab::max_singular_value(sys));
  }
}
BENCHMARK(BM_MaxSingularValue);

}  // namespace

BENCHMARK_MAIN();
