#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "csplab/bitstring.hpp"
#include "csplab/quantization.hpp"
#include "csplab/source_models.hpp"

namespace csplab {

// ---------------------------------------------------------------------------
// Elias gamma code for positive integers: floor(log2 n) zeros followed by
// the binary digits of n (MSB first). Length is exactly 2*floor(log2 n) + 1
// and the code is prefix-free, so concatenated values decode unambiguously.
// ---------------------------------------------------------------------------

BitString elias_gamma_encode(std::uint64_t n);  // ParamError if n == 0
std::size_t elias_gamma_length(std::uint64_t n);

struct GammaDecodeResult {
  std::uint64_t value;
  std::size_t consumed;
};
// Decodes one value starting at `offset`. DecodeError on truncated input.
GammaDecodeResult elias_gamma_decode(const BitString& bits, std::size_t offset = 0);
std::uint64_t elias_gamma_decode(BitReader& reader);

// ---------------------------------------------------------------------------
// Block codes
// ---------------------------------------------------------------------------

enum class CodecKind { ScalarIID, PiecewiseConstant };
enum class LengthMode { FixedLength, VariableLength };

// Parametric lossy block code for length-n vectors.
//
// PiecewiseConstant encodes the run structure losslessly and the run values
// through the midpoint scalar quantizer:
//   gamma(N) ++ gamma(T_1) .. gamma(T_{N-1}) ++ N fixed-width b-bit indices
// (T_N is implied by n). Blocks with more than max_jumps jumps are outside
// the format. Only values are distorted; per-letter squared error is at
// most ((upper-lower) * 2^-(b+1))^2.
//
// ScalarIID is the plain fixed-length code: n concatenated b-bit indices.
//
// FixedLength mode pads PiecewiseConstant encodings with zeros to the
// maximum encoding length of the (n, K, b) family; decoders then require
// exactly that length and ignore the padding content.
struct BlockCode {
  CodecKind kind = CodecKind::PiecewiseConstant;
  std::size_t n = 0;
  int value_bits = 3;                      // b
  std::size_t max_jumps = SIZE_MAX;        // K; clamped to n-1; pwc only
  ContinuousDistSpec value_dist;
  LengthMode length_mode = LengthMode::VariableLength;

  void validate() const;
  ScalarQuantizer value_quantizer() const;
  std::size_t effective_max_jumps() const;  // min(max_jumps, n-1)
  double worst_case_distortion() const;     // quantizer bound, any encodable block
  // Longest encoding in the family: n*value_bits for ScalarIID, the padded
  // length for PiecewiseConstant.
  std::size_t max_codeword_length() const;
};

const char* codec_kind_name(CodecKind kind);

BitString pwc_encode(const BlockCode& code, const std::vector<double>& x);
std::vector<double> pwc_decode(const BlockCode& code, const BitString& bits);

BitString scalar_iid_encode(const BlockCode& code, const std::vector<double>& x);
std::vector<double> scalar_iid_decode(const BlockCode& code, const BitString& bits);

// Dispatch on code.kind.
BitString block_encode(const BlockCode& code, const std::vector<double>& x);
std::vector<double> block_decode(const BlockCode& code, const BitString& bits);

// Exact P(jump count of a blocklength-n sample exceeds max_jumps) for the
// given source: the binomial tail sum_{j > K} C(n-1, j) p^j (1-p)^(n-1-j)
// for PiecewiseMarkov, 0 for sources every block of which is encodable.
// This is the excess-distortion probability epsilon of the code at its
// worst-case distortion.
double excess_code_prob(const BlockCode& code, const SourceSpec& source);

// ---------------------------------------------------------------------------
// Codebook enumeration
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultCodebookCap = 1ull << 21;

struct CodebookEntry {
  std::vector<double> vec;  // reconstruction vector, length n
  BitString bits;           // canonical encoding of vec
};

// All reconstruction vectors a code can output, paired with their canonical
// encodings, sorted canonically (length, then lex) so that downstream
// argmin tie-breaking is deterministic. Entries are distinct as vectors.
struct Codebook {
  std::vector<CodebookEntry> entries;
  std::size_t n = 0;
  double declared_rate = 0.0;  // bits per sample

  std::size_t size() const noexcept { return entries.size(); }
};

// Number of entries enumerate_codebook would produce; +inf on overflow.
// PiecewiseConstant: sum_{j=0}^{K} C(n-1, j) * 2^b * (2^b - 1)^j
// (adjacent run levels distinct). ScalarIID: 2^(n*b).
double predicted_codebook_size(const BlockCode& code);

// CapacityError when the predicted size exceeds `cap`.
Codebook enumerate_codebook(const BlockCode& code,
                            std::uint64_t cap = kDefaultCodebookCap);

// ---------------------------------------------------------------------------
// Monte-Carlo rate / distortion measurement
// ---------------------------------------------------------------------------

struct RateDistortionStats {
  double mean_rate = 0.0;        // bits per sample
  double mean_distortion = 0.0;  // per-letter squared error
  double excess_prob = 0.0;      // fraction of trials with distortion > threshold
  double excess_threshold = 0.0;
  std::vector<double> rates;        // per-trial records
  std::vector<double> distortions;  // per-trial records
};

// Encodes `trials` independent blocks (per-trial streams derived from
// `seed`) and measures rate and distortion of decode(encode(x)).
// `excess_threshold` < 0 selects the code's worst-case distortion.
RateDistortionStats empirical_rate_distortion(const BlockCode& code,
                                              const SourceSpec& source,
                                              std::size_t trials,
                                              std::uint64_t seed,
                                              double excess_threshold = -1.0);

}  // namespace csplab
