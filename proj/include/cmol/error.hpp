#pragma once

#include <stdexcept>
#include <string>

namespace cmol {

/// Malformed or inconsistent user input (netlists, config files, pins).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A broken internal invariant, e.g. a satisfying model that decodes to a
/// non-injective placement.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace cmol
