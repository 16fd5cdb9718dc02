#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "csplab/codecs.hpp"
#include "csplab/errors.hpp"
#include "csplab/rng.hpp"
#include "csplab/source_models.hpp"

using namespace csplab;

namespace {

SourceSpec markov(double p) {
  SourceSpec spec;
  spec.kind = SourceKind::PiecewiseMarkov;
  spec.jump_prob = p;
  return spec;
}

BlockCode pwc(std::size_t n, int b, std::size_t max_jumps = SIZE_MAX,
              LengthMode mode = LengthMode::VariableLength) {
  BlockCode code;
  code.kind = CodecKind::PiecewiseConstant;
  code.n = n;
  code.value_bits = b;
  code.max_jumps = max_jumps;
  code.length_mode = mode;
  return code;
}

std::size_t gamma_len_oracle(std::uint64_t n) {
  std::size_t log = 0;
  while ((n >> (log + 1)) != 0) ++log;
  return 2 * log + 1;
}

}  // namespace

TEST_CASE("elias gamma known codewords") {
  CHECK(elias_gamma_encode(1).to_string() == "1");
  CHECK(elias_gamma_encode(2).to_string() == "010");
  CHECK(elias_gamma_encode(3).to_string() == "011");
  CHECK(elias_gamma_encode(4).to_string() == "00100");
  CHECK(elias_gamma_encode(13).to_string() == "0001101");
  CHECK_THROWS_AS(elias_gamma_encode(0), ParamError);
}

TEST_CASE("elias gamma roundtrip and length formula up to 100000") {
  for (std::uint64_t n = 1; n <= 100000; ++n) {
    const BitString bits = elias_gamma_encode(n);
    CHECK(bits.size() == gamma_len_oracle(n));
    CHECK(elias_gamma_length(n) == bits.size());
    const GammaDecodeResult res = elias_gamma_decode(bits);
    CHECK(res.value == n);
    CHECK(res.consumed == bits.size());
  }
}

TEST_CASE("elias gamma concatenation decodes in order") {
  const std::vector<std::uint64_t> values = {1, 7, 2, 100, 31, 1, 999999};
  BitString stream;
  for (std::uint64_t v : values) stream.append(elias_gamma_encode(v));
  BitReader reader(stream);
  for (std::uint64_t v : values) {
    CHECK(elias_gamma_decode(reader) == v);
  }
  CHECK(reader.remaining() == 0);
}

TEST_CASE("elias gamma rejects truncation") {
  BitString truncated = elias_gamma_encode(100);
  BitString cut;
  for (std::size_t i = 0; i + 1 < truncated.size(); ++i) {
    cut.push_back(truncated.bit(i));
  }
  CHECK_THROWS_AS(elias_gamma_decode(cut), DecodeError);
  CHECK_THROWS_AS(elias_gamma_decode(BitString::from_string("0000")), DecodeError);
}

TEST_CASE("pwc bit layout: header, run lengths, value indices") {
  const BlockCode code = pwc(3, 2, 2);
  const std::vector<double> x = {0.2, 0.2, 0.9};
  const BitString bits = pwc_encode(code, x);
  // gamma(2) ++ gamma(2) ++ index(0.2)=00 ++ index(0.9)=11
  CHECK(bits.to_string() == "0100100011");
  const std::vector<double> decoded = pwc_decode(code, bits);
  CHECK(decoded == std::vector<double>{0.125, 0.125, 0.875});
}

TEST_CASE("pwc single-run block uses only the header and one index") {
  const BlockCode code = pwc(5, 1);
  const BitString bits = pwc_encode(code, {0.6, 0.6, 0.6, 0.6, 0.6});
  CHECK(bits.to_string() == "11");  // gamma(1) ++ index(0.6)=1
  CHECK(pwc_decode(code, bits) == std::vector<double>(5, 0.75));
}

TEST_CASE("pwc roundtrip equals per-run quantization") {
  const BlockCode code = pwc(64, 3);
  const ScalarQuantizer q = code.value_quantizer();
  CounterRng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = sample_block(markov(0.2), code.n, 500 + trial);
    const auto decoded = pwc_decode(code, pwc_encode(code, x));
    const RunDecomposition runs = decompose_runs(x);
    RunDecomposition expected = runs;
    for (double& v : expected.values) v = q.decode(q.encode(v));
    CHECK(decoded == reassemble_runs(expected));
    // Distortion never exceeds the worst case.
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      worst = std::max(worst, (x[i] - decoded[i]) * (x[i] - decoded[i]));
    }
    CHECK(worst <= code.worst_case_distortion());
  }
}

TEST_CASE("pwc rejects blocks with too many jumps") {
  const BlockCode code = pwc(4, 2, 1);
  CHECK_NOTHROW(pwc_encode(code, {0.1, 0.1, 0.9, 0.9}));
  CHECK_THROWS_AS(pwc_encode(code, {0.1, 0.9, 0.1, 0.1}), ParamError);
}

TEST_CASE("pwc variable-length decode rejects malformed strings") {
  const BlockCode code = pwc(3, 2, 2);
  const BitString good = pwc_encode(code, {0.2, 0.2, 0.9});
  // Trailing bit after a complete encoding.
  BitString trailing = good;
  trailing.push_back(0);
  CHECK_THROWS_AS(pwc_decode(code, trailing), DecodeError);
  // Truncated value index.
  BitString cut;
  for (std::size_t i = 0; i + 1 < good.size(); ++i) cut.push_back(good.bit(i));
  CHECK_THROWS_AS(pwc_decode(code, cut), DecodeError);
  // More runs than letters: gamma(4) with n=3.
  BitString many = elias_gamma_encode(4);
  for (int i = 0; i < 8; ++i) many.push_back(0);
  CHECK_THROWS_AS(pwc_decode(code, many), DecodeError);
  // Run lengths that spill past the block: gamma(2) gamma(3) with n=3.
  BitString spill = elias_gamma_encode(2);
  spill.append(elias_gamma_encode(3));
  spill.append_uint(0, 4);
  CHECK_THROWS_AS(pwc_decode(code, spill), DecodeError);
  // Run count above the jump budget.
  const BlockCode tight = pwc(4, 1, 1);
  BitString three_runs = elias_gamma_encode(3);
  three_runs.append(elias_gamma_encode(1));
  three_runs.append(elias_gamma_encode(1));
  three_runs.append_uint(0, 3);
  CHECK_THROWS_AS(pwc_decode(tight, three_runs), DecodeError);
}

TEST_CASE("fixed-length mode pads to the family maximum") {
  const BlockCode code = pwc(8, 2, 3, LengthMode::FixedLength);
  CounterRng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = sample_block(markov(0.25), code.n, 900 + trial);
    RunDecomposition runs = decompose_runs(x);
    if (runs.run_count() > code.effective_max_jumps() + 1) continue;
    const BitString bits = pwc_encode(code, x);
    CHECK(bits.size() == code.max_codeword_length());
    const auto decoded = pwc_decode(code, bits);
    // Padding content is ignored by the decoder.
    const BitString unpadded = pwc_encode(pwc(8, 2, 3), x);
    if (unpadded.size() < bits.size()) {
      BitString altered;
      for (std::size_t i = 0; i < bits.size(); ++i) {
        altered.push_back(i == bits.size() - 1 ? 1 - bits.bit(i) : bits.bit(i));
      }
      CHECK(pwc_decode(code, altered) == decoded);
    }
    // Exact length is required.
    BitString longer = bits;
    longer.push_back(0);
    CHECK_THROWS_AS(pwc_decode(code, longer), DecodeError);
    BitString shorter;
    for (std::size_t i = 0; i + 1 < bits.size(); ++i) shorter.push_back(bits.bit(i));
    CHECK_THROWS_AS(pwc_decode(code, shorter), DecodeError);
  }
}

TEST_CASE("scalar iid code is n fixed-width fields") {
  BlockCode code;
  code.kind = CodecKind::ScalarIID;
  code.n = 4;
  code.value_bits = 2;
  const std::vector<double> x = {0.1, 0.3, 0.6, 0.9};
  const BitString bits = scalar_iid_encode(code, x);
  CHECK(bits.size() == 8);
  CHECK(bits.to_string() == "00011011");
  CHECK(scalar_iid_decode(code, bits) ==
        std::vector<double>{0.125, 0.375, 0.625, 0.875});
  BitString wrong = bits;
  wrong.push_back(0);
  CHECK_THROWS_AS(scalar_iid_decode(code, wrong), DecodeError);
  CHECK(block_encode(code, x) == bits);
  CHECK(block_decode(code, bits) == scalar_iid_decode(code, bits));
}

TEST_CASE("max codeword length matches a brute-force scan of run structures") {
  for (std::size_t n : {3, 4, 5, 7, 9, 12}) {
    for (int b : {1, 3}) {
      for (std::size_t K : {std::size_t{0}, std::size_t{1}, std::size_t{2}, n - 1}) {
        const BlockCode code = pwc(n, b, K);
        std::size_t best = 0;
        const std::size_t max_runs = std::min(n, code.effective_max_jumps() + 1);
        // Enumerate every composition of n into N positive parts.
        std::function<void(std::size_t, std::size_t, std::size_t, std::size_t)> rec =
            [&](std::size_t parts_left, std::size_t letters_left, std::size_t bits,
                std::size_t total_runs) {
              if (parts_left == 1) {
                const std::size_t len = elias_gamma_length(total_runs) + bits +
                                        total_runs * static_cast<std::size_t>(b);
                best = std::max(best, len);
                return;
              }
              for (std::size_t t = 1; letters_left - t >= parts_left - 1; ++t) {
                rec(parts_left - 1, letters_left - t, bits + elias_gamma_length(t),
                    total_runs);
              }
            };
        for (std::size_t runs = 1; runs <= max_runs; ++runs) {
          rec(runs, n, 0, runs);
        }
        CHECK(code.max_codeword_length() == best);
      }
    }
  }
  // Frozen spot value used by the acceptance experiments.
  CHECK(pwc(24, 3, 2).max_codeword_length() == 26);
}

TEST_CASE("excess probability is exact for each source family") {
  SUBCASE("scalar iid never exceeds") {
    BlockCode code;
    code.kind = CodecKind::ScalarIID;
    code.n = 6;
    code.value_bits = 2;
    CHECK(excess_code_prob(code, markov(0.5)) == 0.0);
  }
  SUBCASE("unbounded jump budget never exceeds") {
    const BlockCode code = pwc(6, 2);  // K defaults to n-1
    CHECK(excess_code_prob(code, markov(0.9)) == 0.0);
    SourceSpec cont;
    cont.kind = SourceKind::ContinuousIID;
    CHECK(excess_code_prob(code, cont) == 0.0);
  }
  SUBCASE("continuous iid always exceeds a strict budget") {
    const BlockCode code = pwc(6, 2, 2);
    SourceSpec cont;
    cont.kind = SourceKind::ContinuousIID;
    CHECK(excess_code_prob(code, cont) == 1.0);
  }
  SUBCASE("piecewise markov binomial tail vs Monte Carlo") {
    const BlockCode code = pwc(10, 2, 2);
    const SourceSpec spec = markov(0.3);
    const double exact = excess_code_prob(code, spec);
    // Independent binomial evaluation.
    double tail = 0.0;
    for (int j = 3; j <= 9; ++j) {
      double c = 1.0;
      for (int i = 0; i < j; ++i) c = c * (9 - i) / (i + 1);
      tail += c * std::pow(0.3, j) * std::pow(0.7, 9 - j);
    }
    CHECK(exact == doctest::Approx(tail).epsilon(1e-12));
    int exceed = 0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
      const auto x = sample_block(spec, code.n, 3000 + t);
      if (decompose_runs(x).run_count() - 1 > code.effective_max_jumps()) ++exceed;
    }
    const double freq = static_cast<double>(exceed) / trials;
    CHECK(std::abs(freq - exact) < 4.0 * std::sqrt(exact * (1 - exact) / trials));
  }
  SUBCASE("sparse iid DP vs Monte Carlo") {
    const BlockCode code = pwc(8, 2, 2);
    SourceSpec spec;
    spec.kind = SourceKind::SparseIID;
    spec.jump_prob = 0.5;
    const double exact = excess_code_prob(code, spec);
    int exceed = 0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
      const auto x = sample_block(spec, code.n, 7000 + t);
      if (decompose_runs(x).run_count() - 1 > code.effective_max_jumps()) ++exceed;
    }
    const double freq = static_cast<double>(exceed) / trials;
    CHECK(std::abs(freq - exact) < 4.0 * std::sqrt(exact * (1 - exact) / trials) + 1e-6);
  }
  SUBCASE("always-jump degenerate case") {
    const BlockCode code = pwc(5, 2, 2);
    CHECK(excess_code_prob(code, markov(1.0)) == 1.0);
    CHECK(excess_code_prob(pwc(5, 2), markov(1.0)) == 0.0);
  }
}

TEST_CASE("codebook for n=3, K=1, b=1 is the six hand-listed vectors") {
  const BlockCode code = pwc(3, 1, 1);
  CHECK(predicted_codebook_size(code) == 6.0);
  const Codebook cb = enumerate_codebook(code);
  CHECK(cb.size() == 6);
  CHECK(cb.n == 3);
  CHECK(cb.declared_rate == doctest::Approx(std::log2(6.0) / 3.0).epsilon(1e-12));

  std::set<std::vector<double>> vecs;
  for (const CodebookEntry& e : cb.entries) vecs.insert(e.vec);
  const double lo = 0.25, hi = 0.75;
  const std::set<std::vector<double>> expected = {
      {lo, lo, lo}, {hi, hi, hi}, {lo, hi, hi},
      {hi, lo, lo}, {lo, lo, hi}, {hi, hi, lo}};
  CHECK(vecs == expected);

  CHECK(std::is_sorted(cb.entries.begin(), cb.entries.end(),
                       [](const CodebookEntry& a, const CodebookEntry& b) {
                         return canonical_less(a.bits, b.bits);
                       }));
  for (const CodebookEntry& e : cb.entries) {
    CHECK(block_decode(code, e.bits) == e.vec);
  }
}

TEST_CASE("codebook entries are exactly the encodable quantized vectors") {
  const BlockCode code = pwc(6, 2, 2);
  const Codebook cb = enumerate_codebook(code);
  CHECK(static_cast<double>(cb.size()) == predicted_codebook_size(code));
  std::set<std::vector<double>> vecs;
  for (const CodebookEntry& e : cb.entries) {
    CHECK(block_decode(code, e.bits) == e.vec);
    vecs.insert(e.vec);
  }
  CHECK(vecs.size() == cb.size());  // distinct as vectors
  // Every encodable block decodes to a codebook member.
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = sample_block(markov(0.3), code.n, 40000 + trial);
    if (decompose_runs(x).run_count() - 1 > code.effective_max_jumps()) continue;
    const auto rec = pwc_decode(code, pwc_encode(code, x));
    CHECK(vecs.count(rec) == 1);
  }
}

TEST_CASE("codebook capacity errors carry the prediction") {
  const BlockCode code = pwc(3, 1, 1);
  try {
    enumerate_codebook(code, 5);
    FAIL("expected CapacityError");
  } catch (const CapacityError& e) {
    CHECK(e.predicted_size == 6.0);
    CHECK(e.cap == 5);
  }
  CHECK_NOTHROW(enumerate_codebook(code, 6));
}

TEST_CASE("fixed-length codebooks declare the padded rate") {
  const BlockCode code = pwc(5, 1, 2, LengthMode::FixedLength);
  const Codebook cb = enumerate_codebook(code);
  for (const CodebookEntry& e : cb.entries) {
    CHECK(e.bits.size() == code.max_codeword_length());
  }
  CHECK(cb.declared_rate ==
        doctest::Approx(static_cast<double>(code.max_codeword_length()) / 5.0)
            .epsilon(1e-12));
}

TEST_CASE("scalar codebook is the full product grid") {
  BlockCode code;
  code.kind = CodecKind::ScalarIID;
  code.n = 2;
  code.value_bits = 1;
  const Codebook cb = enumerate_codebook(code);
  CHECK(cb.size() == 4);
  CHECK(cb.declared_rate == doctest::Approx(1.0).epsilon(1e-12));
  std::set<std::vector<double>> vecs;
  for (const CodebookEntry& e : cb.entries) vecs.insert(e.vec);
  CHECK(vecs == std::set<std::vector<double>>{
                    {0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}});
}

TEST_CASE("empirical rate-distortion of the scalar code on uniform letters") {
  BlockCode code;
  code.kind = CodecKind::ScalarIID;
  code.n = 256;
  code.value_bits = 4;
  SourceSpec cont;
  cont.kind = SourceKind::ContinuousIID;
  const RateDistortionStats stats = empirical_rate_distortion(code, cont, 50, 77);
  CHECK(stats.rates.size() == 50);
  CHECK(stats.distortions.size() == 50);
  CHECK(stats.mean_rate == doctest::Approx(4.0).epsilon(1e-12));
  // Uniform within a cell of width 2^-4: mean squared error cell^2/12.
  const double cell = std::ldexp(1.0, -4);
  CHECK(stats.mean_distortion == doctest::Approx(cell * cell / 12.0).epsilon(0.1));
  CHECK(stats.excess_prob == 0.0);
  CHECK(stats.excess_threshold == code.worst_case_distortion());
}

TEST_CASE("pwc operational rate lies in the analytic ledger bracket") {
  const double p = 0.1;
  const int b = 8;
  const BlockCode code = pwc(1024, b);
  const RateDistortionStats stats = empirical_rate_distortion(code, markov(p), 100, 424242);
  const double h = -p * std::log2(p) - (1 - p) * std::log2(1 - p);
  const double overhead = (2.0 * std::floor(std::log2(1024.0)) + 1.0) / 1024.0 +
                          p * (2.0 * std::floor(std::log2(3.0 / p)) + 1.0) + 0.05;
  CHECK(stats.mean_rate >= p * b);
  CHECK(stats.mean_rate <= h + p * b + overhead);
  // Determinism of the measurement itself.
  const RateDistortionStats again = empirical_rate_distortion(code, markov(p), 100, 424242);
  CHECK(again.rates == stats.rates);
  CHECK(again.distortions == stats.distortions);
}
