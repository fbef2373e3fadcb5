#pragma once

#include <stdexcept>
#include <string>

namespace qrst {

/// Malformed caller input: bad shapes, out-of-range indices, bad files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request that is well formed but has no mathematical meaning here,
/// e.g. an identity tensor of odd order.
class UnsupportedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace qrst
