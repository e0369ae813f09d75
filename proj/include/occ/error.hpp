#pragma once

#include <stdexcept>
#include <string>

namespace occ {

/// Malformed or inconsistent input: bad JSON, schema violations, invalid
/// models or logs, unknown identifiers.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Files that cannot be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace occ
