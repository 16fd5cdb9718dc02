#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace csplab {

// Invalid argument, precondition violation, or bad configuration value.
// The CLI maps this to exit code 2.
class ParamError : public std::runtime_error {
 public:
  explicit ParamError(const std::string& what) : std::runtime_error(what) {}
};

// A predicted enumeration size exceeds the configured cap. Carries the
// prediction so callers can report how far over budget the request was.
// The CLI maps this to exit code 3.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, double predicted_size, std::uint64_t cap)
      : std::runtime_error(what), predicted_size(predicted_size), cap(cap) {}

  double predicted_size;  // may be +inf when the count overflows
  std::uint64_t cap;
};

// Malformed bitstring handed to a decoder (truncated prefix, inconsistent
// run sums, trailing bits, ...).
class DecodeError : public std::runtime_error {
 public:
  explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

// No bitstring within the given budget decodes successfully.
class NoCandidateError : public std::runtime_error {
 public:
  explicit NoCandidateError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure while reading configs or writing result files.
// The CLI maps this (and any other uncaught failure) to exit code 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace csplab
