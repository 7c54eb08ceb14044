#pragma once

#include <stdexcept>
#include <string>

namespace techspace {

/// Bad or inconsistent input: unreadable files, malformed rows, unknown names,
/// stale caches. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A well-formed request that cannot be computed (e.g. no agent passes the
/// breadth threshold). The CLI maps this to exit code 3.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace techspace
