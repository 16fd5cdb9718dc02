#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace csplab {

// Finite binary sequence. Stored one byte per bit: codebooks in scope hold
// at most a few hundred thousand strings of well under 100 bits, so clarity
// wins over packing.
class BitString {
 public:
  BitString() = default;

  static BitString from_string(std::string_view s);  // '0'/'1' only

  void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
  void append(const BitString& other);
  // Appends `width` bits of `value`, most significant first.
  void append_uint(std::uint64_t value, int width);

  bool bit(std::size_t i) const { return bits_[i] != 0; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Canonical order used for codebook sorting and argmin tie-breaking:
// shorter strings first, equal lengths compared lexicographically.
bool canonical_less(const BitString& a, const BitString& b);

// Sequential reader over a BitString. Throws DecodeError past the end.
class BitReader {
 public:
  explicit BitReader(const BitString& bits) : bits_(&bits) {}

  bool read_bit();
  std::uint64_t read_uint(int width);  // MSB first

  std::size_t consumed() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bits_->size() - pos_; }

 private:
  const BitString* bits_;
  std::size_t pos_ = 0;
};

}  // namespace csplab
