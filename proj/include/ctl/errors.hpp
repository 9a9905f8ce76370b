#pragma once

#include <stdexcept>
#include <string>

namespace ctl {

// Input data is malformed or inconsistent (unreadable files, ragged CSV,
// dimension mismatches between files and models).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical precondition failed (singular transform, non-finite values,
// failed factorization).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctl
