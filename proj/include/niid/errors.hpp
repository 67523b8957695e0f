#pragma once

#include <stdexcept>
#include <string>

namespace niid {

/// A caller-supplied parameter is outside its valid range.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data is malformed: ragged rows, non-numeric cells, bad headers,
/// non-finite values, empty datasets.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace niid
