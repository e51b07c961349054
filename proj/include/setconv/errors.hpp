#pragma once

#include <stdexcept>
#include <string>

namespace setconv {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible shapes: matrix operands, model vs. data dimensions,
/// parameter arrays whose sizes do not chain.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter value outside its documented domain (empty input, bad
/// permutation, support size < 2, split ratio outside (0,1), ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Problems with input data: unreadable or malformed CSV, ragged rows,
/// non-numeric cells, missing columns, classes too small to sample from.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure while reading or writing an artifact.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Model file is structurally broken (truncated, not JSON, missing keys,
/// bad array encoding).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Model file has a format version this build does not understand.
class VersionError : public Error {
 public:
  using Error::Error;
};

/// A metric that has no defined value for the given input
/// (e.g. AUC when only one class is present).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace setconv
