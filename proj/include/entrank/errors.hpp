#pragma once

#include <stdexcept>
#include <string>

namespace entrank {

// Raised for malformed or missing input data; the CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace entrank
