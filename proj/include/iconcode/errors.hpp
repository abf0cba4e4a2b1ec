#pragma once

#include <stdexcept>

namespace iconcode {

// Input that parses but violates a documented contract (bad schema, out-of-range
// parameter, duplicate name, ...). The CLI maps it to exit status 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing or unreadable files and assets. The CLI maps it to exit status 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iconcode
