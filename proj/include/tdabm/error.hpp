#pragma once

#include <stdexcept>
#include <string>

namespace tdabm {

/// Raised for malformed input data or inconsistent artifacts (bad CSV cells,
/// unknown columns, a graph document that does not match its source table).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tdabm
