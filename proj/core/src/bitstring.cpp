#include "csplab/bitstring.hpp"

#include "csplab/errors.hpp"

namespace csplab {

BitString BitString::from_string(std::string_view s) {
  BitString out;
  out.bits_.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw ParamError("BitString::from_string: invalid character '" +
                       std::string(1, c) + "'");
    }
    out.bits_.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

void BitString::append_uint(std::uint64_t value, int width) {
  if (width < 0 || width > 64) {
    throw ParamError("BitString::append_uint: width must be in [0, 64]");
  }
  for (int i = width - 1; i >= 0; --i) {
    bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
  }
}

std::string BitString::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

bool canonical_less(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.bit(i) != b.bit(i)) return !a.bit(i);
  }
  return false;
}

bool BitReader::read_bit() {
  if (pos_ >= bits_->size()) {
    throw DecodeError("bit reader: read past end of bitstring");
  }
  return bits_->bit(pos_++);
}

std::uint64_t BitReader::read_uint(int width) {
  if (width < 0 || width > 64) {
    throw ParamError("BitReader::read_uint: width must be in [0, 64]");
  }
  std::uint64_t value = 0;
  for (int i = 0; i < width; ++i) {
    value = (value << 1) | (read_bit() ? 1u : 0u);
  }
  return value;
}

}  // namespace csplab
