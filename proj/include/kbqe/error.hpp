#pragma once

#include <stdexcept>
#include <string>

namespace kbqe {

/// Problem with user-supplied data (malformed files, duplicate ids, ...).
/// The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace kbqe
