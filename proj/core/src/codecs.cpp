#include "csplab/codecs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "csplab/errors.hpp"
#include "csplab/rng.hpp"

namespace csplab {

// ---------------------------------------------------------------------------
// Elias gamma
// ---------------------------------------------------------------------------

BitString elias_gamma_encode(std::uint64_t n) {
  if (n == 0) {
    throw ParamError("elias_gamma_encode: n must be >= 1");
  }
  const int width = std::bit_width(n);  // 1 + floor(log2 n)
  BitString bits;
  for (int i = 0; i < width - 1; ++i) {
    bits.push_back(false);
  }
  bits.append_uint(n, width);
  return bits;
}

std::size_t elias_gamma_length(std::uint64_t n) {
  if (n == 0) {
    throw ParamError("elias_gamma_length: n must be >= 1");
  }
  return 2 * static_cast<std::size_t>(std::bit_width(n) - 1) + 1;
}

std::uint64_t elias_gamma_decode(BitReader& reader) {
  int zeros = 0;
  while (!reader.read_bit()) {
    if (++zeros > 63) {
      throw DecodeError("elias gamma: value exceeds 64 bits");
    }
  }
  std::uint64_t value = 1;
  for (int i = 0; i < zeros; ++i) {
    value = (value << 1) | (reader.read_bit() ? 1u : 0u);
  }
  return value;
}

GammaDecodeResult elias_gamma_decode(const BitString& bits, std::size_t offset) {
  if (offset > bits.size()) {
    throw ParamError("elias_gamma_decode: offset past end");
  }
  BitReader reader(bits);
  for (std::size_t i = 0; i < offset; ++i) {
    reader.read_bit();
  }
  const std::uint64_t value = elias_gamma_decode(reader);
  return {value, reader.consumed() - offset};
}

// ---------------------------------------------------------------------------
// BlockCode
// ---------------------------------------------------------------------------

void BlockCode::validate() const {
  if (n < 1) {
    throw ParamError("BlockCode: n must be >= 1");
  }
  value_dist.validate();
  // Constructing the quantizer checks value_bits.
  (void)ScalarQuantizer(value_dist.lower, value_dist.upper, value_bits);
}

ScalarQuantizer BlockCode::value_quantizer() const {
  return ScalarQuantizer(value_dist.lower, value_dist.upper, value_bits);
}

std::size_t BlockCode::effective_max_jumps() const {
  return std::min(max_jumps, n - 1);
}

double BlockCode::worst_case_distortion() const {
  return value_quantizer().worst_case_distortion();
}

namespace {

// Maximum total Elias-gamma cost of the N-1 encoded run lengths of an
// n-letter block split into N runs. Equivalent to maximizing
// sum(2*floor(log2 T_i) + 1) over T_1..T_{N-1} >= 1 with sum <= n-1
// (the last run absorbs the remaining letters). An exchange argument shows
// an optimum exists with all floor(log2 T_i) equal up to 1, so it suffices
// to scan the base exponent.
std::size_t max_run_length_bits(std::size_t n, std::size_t num_runs) {
  if (num_runs <= 1) return 0;
  const std::uint64_t parts = num_runs - 1;
  const std::uint64_t budget = n - 1;
  std::size_t best = 0;
  for (int a = 0; a < 63; ++a) {
    const std::uint64_t part_size = 1ull << a;
    if (part_size > budget / parts) break;  // base level no longer affordable
    const std::uint64_t spare = budget - parts * part_size;
    const std::uint64_t raised = std::min<std::uint64_t>(parts, spare / part_size);
    const std::size_t log_sum = static_cast<std::size_t>(parts) * a + raised;
    best = std::max(best, 2 * log_sum + parts);
  }
  return best;
}

}  // namespace

std::size_t BlockCode::max_codeword_length() const {
  validate();
  if (kind == CodecKind::ScalarIID) {
    return n * static_cast<std::size_t>(value_bits);
  }
  const std::size_t max_runs = effective_max_jumps() + 1;
  std::size_t best = 0;
  for (std::size_t runs = 1; runs <= max_runs; ++runs) {
    const std::size_t len = elias_gamma_length(runs) + max_run_length_bits(n, runs) +
                            runs * static_cast<std::size_t>(value_bits);
    best = std::max(best, len);
  }
  return best;
}

const char* codec_kind_name(CodecKind kind) {
  switch (kind) {
    case CodecKind::ScalarIID:
      return "scalar-iid";
    case CodecKind::PiecewiseConstant:
      return "piecewise-constant";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Piecewise-constant codec
// ---------------------------------------------------------------------------

BitString pwc_encode(const BlockCode& code, const std::vector<double>& x) {
  code.validate();
  if (code.kind != CodecKind::PiecewiseConstant) {
    throw ParamError("pwc_encode: code kind is not PiecewiseConstant");
  }
  if (x.size() != code.n) {
    throw ParamError("pwc_encode: block length " + std::to_string(x.size()) +
                     " does not match code n=" + std::to_string(code.n));
  }
  const RunDecomposition runs = decompose_runs(x);
  const std::size_t num_runs = runs.run_count();
  if (num_runs - 1 > code.effective_max_jumps()) {
    throw ParamError("pwc_encode: block has " + std::to_string(num_runs - 1) +
                     " jumps; format capacity is " +
                     std::to_string(code.effective_max_jumps()));
  }
  const ScalarQuantizer q = code.value_quantizer();

  BitString bits = elias_gamma_encode(num_runs);
  for (std::size_t r = 0; r + 1 < num_runs; ++r) {
    bits.append(elias_gamma_encode(runs.run_lengths[r]));
  }
  for (std::size_t r = 0; r < num_runs; ++r) {
    bits.append_uint(q.encode(runs.values[r]), code.value_bits);
  }
  if (code.length_mode == LengthMode::FixedLength) {
    const std::size_t target = code.max_codeword_length();
    while (bits.size() < target) {
      bits.push_back(false);
    }
  }
  return bits;
}

std::vector<double> pwc_decode(const BlockCode& code, const BitString& bits) {
  code.validate();
  if (code.kind != CodecKind::PiecewiseConstant) {
    throw ParamError("pwc_decode: code kind is not PiecewiseConstant");
  }
  if (code.length_mode == LengthMode::FixedLength &&
      bits.size() != code.max_codeword_length()) {
    throw DecodeError("pwc_decode: fixed-length codeword must have " +
                      std::to_string(code.max_codeword_length()) + " bits, got " +
                      std::to_string(bits.size()));
  }
  BitReader reader(bits);

  const std::uint64_t num_runs = elias_gamma_decode(reader);
  if (num_runs > code.n) {
    throw DecodeError("pwc_decode: run count exceeds blocklength");
  }
  if (num_runs - 1 > code.effective_max_jumps()) {
    throw DecodeError("pwc_decode: run count exceeds format capacity");
  }

  std::vector<std::size_t> lengths(num_runs);
  std::uint64_t used = 0;
  for (std::uint64_t r = 0; r + 1 < num_runs; ++r) {
    const std::uint64_t t = elias_gamma_decode(reader);
    if (t > code.n || used + t > code.n - 1) {
      throw DecodeError("pwc_decode: run lengths overflow blocklength");
    }
    used += t;
    lengths[r] = static_cast<std::size_t>(t);
  }
  lengths[num_runs - 1] = code.n - static_cast<std::size_t>(used);

  const ScalarQuantizer q = code.value_quantizer();
  std::vector<double> x;
  x.reserve(code.n);
  for (std::uint64_t r = 0; r < num_runs; ++r) {
    const std::uint32_t index =
        static_cast<std::uint32_t>(reader.read_uint(code.value_bits));
    x.insert(x.end(), lengths[r], q.decode(index));
  }
  // Variable-length strings must be consumed exactly; fixed-length padding
  // is ignored (length already checked above).
  if (code.length_mode == LengthMode::VariableLength && reader.remaining() != 0) {
    throw DecodeError("pwc_decode: " + std::to_string(reader.remaining()) +
                      " trailing bits after a complete encoding");
  }
  return x;
}

// ---------------------------------------------------------------------------
// Scalar i.i.d. codec
// ---------------------------------------------------------------------------

BitString scalar_iid_encode(const BlockCode& code, const std::vector<double>& x) {
  code.validate();
  if (code.kind != CodecKind::ScalarIID) {
    throw ParamError("scalar_iid_encode: code kind is not ScalarIID");
  }
  if (x.size() != code.n) {
    throw ParamError("scalar_iid_encode: block length mismatch");
  }
  const ScalarQuantizer q = code.value_quantizer();
  BitString bits;
  for (double v : x) {
    bits.append_uint(q.encode(v), code.value_bits);
  }
  return bits;
}

std::vector<double> scalar_iid_decode(const BlockCode& code, const BitString& bits) {
  code.validate();
  if (code.kind != CodecKind::ScalarIID) {
    throw ParamError("scalar_iid_decode: code kind is not ScalarIID");
  }
  if (bits.size() != code.n * static_cast<std::size_t>(code.value_bits)) {
    throw DecodeError("scalar_iid_decode: expected " +
                      std::to_string(code.n * code.value_bits) + " bits, got " +
                      std::to_string(bits.size()));
  }
  BitReader reader(bits);
  const ScalarQuantizer q = code.value_quantizer();
  std::vector<double> x(code.n);
  for (std::size_t i = 0; i < code.n; ++i) {
    x[i] = q.decode(static_cast<std::uint32_t>(reader.read_uint(code.value_bits)));
  }
  return x;
}

BitString block_encode(const BlockCode& code, const std::vector<double>& x) {
  return code.kind == CodecKind::PiecewiseConstant ? pwc_encode(code, x)
                                                   : scalar_iid_encode(code, x);
}

std::vector<double> block_decode(const BlockCode& code, const BitString& bits) {
  return code.kind == CodecKind::PiecewiseConstant ? pwc_decode(code, bits)
                                                   : scalar_iid_decode(code, bits);
}

// ---------------------------------------------------------------------------
// Excess-distortion probability
// ---------------------------------------------------------------------------

double excess_code_prob(const BlockCode& code, const SourceSpec& source) {
  code.validate();
  source.validate();
  if (code.kind == CodecKind::ScalarIID) {
    return 0.0;  // every block is encodable within the quantizer bound
  }
  const std::size_t k = code.effective_max_jumps();
  const std::size_t n = code.n;
  if (k >= n - 1) {
    return 0.0;
  }
  switch (source.kind) {
    case SourceKind::ContinuousIID:
      // Adjacent values differ almost surely: always n-1 jumps.
      return 1.0;
    case SourceKind::PiecewiseMarkov: {
      // Jump count ~ Binomial(n-1, p); evaluate the upper tail exactly.
      const double p = source.jump_prob;
      if (p == 1.0) {
        return 1.0;  // n-1 jumps surely (n-1 > k here)
      }
      const std::size_t trials = n - 1;
      double term = std::pow(1.0 - p, static_cast<double>(trials));
      double cdf = term;  // P(J <= j) accumulated up to j = 0
      for (std::size_t j = 0; j < k; ++j) {
        term *= static_cast<double>(trials - j) / static_cast<double>(j + 1) * p /
                (1.0 - p);
        cdf += term;
      }
      return std::max(0.0, 1.0 - cdf);
    }
    case SourceKind::SparseIID: {
      // Adjacent letters are equal iff both are zero (equal nonzero draws
      // have probability 0), so the jump count is a function of the
      // zero/nonzero pattern. Exact distribution by dynamic programming
      // over (current letter zero?, jumps so far), truncated at k+1.
      const double p = source.jump_prob;
      const double pz = 1.0 - p;  // P(letter == 0)
      // dp[state][j], state 0 = current letter zero, 1 = nonzero.
      std::vector<std::vector<double>> dp(2, std::vector<double>(k + 2, 0.0));
      dp[0][0] = pz;
      dp[1][0] = p;
      for (std::size_t i = 1; i < n; ++i) {
        std::vector<std::vector<double>> next(2, std::vector<double>(k + 2, 0.0));
        for (int s = 0; s < 2; ++s) {
          for (std::size_t j = 0; j <= k + 1; ++j) {
            const double mass = dp[s][j];
            if (mass == 0.0) continue;
            // next letter zero
            {
              const std::size_t jumps = (s == 0) ? j : std::min(j + 1, k + 1);
              next[0][jumps] += mass * pz;
            }
            // next letter nonzero: always a change
            {
              const std::size_t jumps = std::min(j + 1, k + 1);
              next[1][jumps] += mass * p;
            }
          }
        }
        dp = std::move(next);
      }
      return dp[0][k + 1] + dp[1][k + 1];
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Codebook enumeration
// ---------------------------------------------------------------------------

double predicted_codebook_size(const BlockCode& code) {
  code.validate();
  const double b_levels = std::ldexp(1.0, code.value_bits);
  if (code.kind == CodecKind::ScalarIID) {
    return std::pow(b_levels, static_cast<double>(code.n));
  }
  const std::size_t k = code.effective_max_jumps();
  const double boundaries = static_cast<double>(code.n - 1);
  double comb = 1.0;  // C(n-1, j)
  double alt = 1.0;   // (2^b - 1)^j
  double total = 0.0;
  for (std::size_t j = 0; j <= k; ++j) {
    if (j > 0) {
      comb *= (boundaries - static_cast<double>(j - 1)) / static_cast<double>(j);
      alt *= b_levels - 1.0;
    }
    total += comb * alt;
    if (!std::isfinite(total)) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return total * b_levels;
}

namespace {

// Advances `positions` (strictly increasing j-subset of [0, limit)) to the
// next combination in lexicographic order. Returns false after the last.
bool next_combination(std::vector<std::size_t>& positions, std::size_t limit) {
  const std::size_t j = positions.size();
  if (j == 0) return false;
  std::size_t i = j;
  while (i-- > 0) {
    if (positions[i] + (j - i) < limit) {
      ++positions[i];
      for (std::size_t t = i + 1; t < j; ++t) {
        positions[t] = positions[t - 1] + 1;
      }
      return true;
    }
  }
  return false;
}

void enumerate_pwc_entries(const BlockCode& code, Codebook& cb) {
  const std::size_t n = code.n;
  const std::size_t max_j = code.effective_max_jumps();
  const ScalarQuantizer q = code.value_quantizer();
  const std::uint32_t levels = q.levels();
  std::vector<double> midpoints(levels);
  for (std::uint32_t i = 0; i < levels; ++i) {
    midpoints[i] = q.decode(i);
  }
  const std::size_t pad_target = code.length_mode == LengthMode::FixedLength
                                     ? code.max_codeword_length()
                                     : 0;

  for (std::size_t jumps = 0; jumps <= max_j; ++jumps) {
    const std::size_t num_runs = jumps + 1;
    // Jump positions: boundary c means a run break between letters c and c+1.
    std::vector<std::size_t> positions(jumps);
    for (std::size_t i = 0; i < jumps; ++i) positions[i] = i;
    do {
      std::vector<std::size_t> lengths(num_runs);
      std::size_t prev = 0;
      for (std::size_t r = 0; r < jumps; ++r) {
        lengths[r] = positions[r] + 1 - prev;
        prev = positions[r] + 1;
      }
      lengths[num_runs - 1] = n - prev;

      BitString structure = elias_gamma_encode(num_runs);
      for (std::size_t r = 0; r + 1 < num_runs; ++r) {
        structure.append(elias_gamma_encode(lengths[r]));
      }

      // Odometer over value assignments; digits after the first skip the
      // previous level so adjacent runs always differ.
      std::vector<std::uint32_t> digit(num_runs, 0);
      for (;;) {
        std::vector<std::uint32_t> index(num_runs);
        index[0] = digit[0];
        for (std::size_t r = 1; r < num_runs; ++r) {
          index[r] = digit[r] < index[r - 1] ? digit[r] : digit[r] + 1;
        }

        CodebookEntry entry;
        entry.bits = structure;
        entry.vec.reserve(n);
        for (std::size_t r = 0; r < num_runs; ++r) {
          entry.bits.append_uint(index[r], code.value_bits);
          entry.vec.insert(entry.vec.end(), lengths[r], midpoints[index[r]]);
        }
        while (entry.bits.size() < pad_target) {
          entry.bits.push_back(false);
        }
        cb.entries.push_back(std::move(entry));

        // Advance the odometer (last digit fastest).
        std::size_t d = num_runs;
        while (d-- > 0) {
          const std::uint32_t radix = (d == 0) ? levels : levels - 1;
          if (++digit[d] < radix) break;
          digit[d] = 0;
          if (d == 0) goto assignments_done;
        }
      }
    assignments_done:;
    } while (next_combination(positions, n - 1));
  }
}

void enumerate_scalar_entries(const BlockCode& code, Codebook& cb) {
  const ScalarQuantizer q = code.value_quantizer();
  const std::uint32_t levels = q.levels();
  std::vector<double> midpoints(levels);
  for (std::uint32_t i = 0; i < levels; ++i) {
    midpoints[i] = q.decode(i);
  }
  std::vector<std::uint32_t> digit(code.n, 0);
  for (;;) {
    CodebookEntry entry;
    entry.vec.reserve(code.n);
    for (std::size_t i = 0; i < code.n; ++i) {
      entry.bits.append_uint(digit[i], code.value_bits);
      entry.vec.push_back(midpoints[digit[i]]);
    }
    cb.entries.push_back(std::move(entry));

    std::size_t d = code.n;
    while (d-- > 0) {
      if (++digit[d] < levels) break;
      digit[d] = 0;
      if (d == 0) return;
    }
  }
}

}  // namespace

Codebook enumerate_codebook(const BlockCode& code, std::uint64_t cap) {
  code.validate();
  const double predicted = predicted_codebook_size(code);
  if (!(predicted <= static_cast<double>(cap))) {
    throw CapacityError("enumerate_codebook: predicted size " +
                            std::to_string(predicted) + " exceeds cap " +
                            std::to_string(cap),
                        predicted, cap);
  }
  Codebook cb;
  cb.n = code.n;
  cb.entries.reserve(static_cast<std::size_t>(predicted));
  if (code.kind == CodecKind::PiecewiseConstant) {
    enumerate_pwc_entries(code, cb);
  } else {
    enumerate_scalar_entries(code, cb);
  }
  std::sort(cb.entries.begin(), cb.entries.end(),
            [](const CodebookEntry& a, const CodebookEntry& b) {
              return canonical_less(a.bits, b.bits);
            });
  cb.declared_rate =
      code.length_mode == LengthMode::FixedLength
          ? static_cast<double>(code.max_codeword_length()) / static_cast<double>(code.n)
          : std::log2(static_cast<double>(cb.entries.size())) /
                static_cast<double>(code.n);
  return cb;
}

// ---------------------------------------------------------------------------
// Monte-Carlo rate / distortion
// ---------------------------------------------------------------------------

RateDistortionStats empirical_rate_distortion(const BlockCode& code,
                                              const SourceSpec& source,
                                              std::size_t trials,
                                              std::uint64_t seed,
                                              double excess_threshold) {
  code.validate();
  source.validate();
  if (trials < 1) {
    throw ParamError("empirical_rate_distortion: trials must be >= 1");
  }
  RateDistortionStats stats;
  stats.excess_threshold =
      excess_threshold < 0.0 ? code.worst_case_distortion() : excess_threshold;
  stats.rates.reserve(trials);
  stats.distortions.reserve(trials);

  std::size_t excess = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::vector<double> x =
        sample_block(source, code.n, derive_stream(seed, t));
    const BitString bits = block_encode(code, x);
    const std::vector<double> xhat = block_decode(code, bits);
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - xhat[i];
      sq += d * d;
    }
    const double rate = static_cast<double>(bits.size()) / static_cast<double>(code.n);
    const double dist = sq / static_cast<double>(code.n);
    stats.rates.push_back(rate);
    stats.distortions.push_back(dist);
    if (dist > stats.excess_threshold) {
      ++excess;
    }
  }
  const double inv = 1.0 / static_cast<double>(trials);
  for (double r : stats.rates) stats.mean_rate += r;
  for (double d : stats.distortions) stats.mean_distortion += d;
  stats.mean_rate *= inv;
  stats.mean_distortion *= inv;
  stats.excess_prob = static_cast<double>(excess) * inv;
  return stats;
}

}  // namespace csplab
