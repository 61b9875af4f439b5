#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace farm {

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-fatal conditions (constant columns, skipped regions) are appended here
/// when the caller passes a sink; otherwise they go to stderr.
using Warnings = std::vector<std::string>;

void warn(Warnings* sink, std::string message);

}  // namespace farm
