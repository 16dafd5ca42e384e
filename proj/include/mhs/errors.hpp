#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mhs {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument was zero where a nonzero value is required (valuations, unit parts).
struct ZeroInput : Error {
  using Error::Error;
};

// gcd(a, modulus) != 1.
struct NotInvertible : Error {
  using Error::Error;
};

// Requested prime power does not fit the fast 64-bit path.
struct ModulusTooLarge : Error {
  using Error::Error;
};

// advance() called past the end of the current segment.
struct SegmentExhausted : Error {
  using Error::Error;
};

// Operation only defined for depth-1 compositions.
struct DepthUnsupported : Error {
  using Error::Error;
};

// Segment-1 member set is not symmetric under r -> p-1-r.
struct AsymmetricSet : Error {
  using Error::Error;
};

// No reserved-set rule known for this composition shape.
struct RuleUnavailable : Error {
  using Error::Error;
};

// Predicted scan size exceeds the configured budget and no override was given.
struct BudgetExceeded : Error {
  using Error::Error;
};

// Checkpoint store has an invalid record before the final line.
struct StoreCorrupt : Error {
  std::size_t record_index;
  StoreCorrupt(const std::string& msg, std::size_t index)
      : Error(msg + " (record " + std::to_string(index) + ")"), record_index(index) {}
};

}  // namespace mhs
