#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spikefuse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, manifests or command-line values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data. Carries the offending file and line
/// when known (line 0 means "not line specific").
class DataError : public Error {
 public:
  explicit DataError(const std::string& message) : Error(message) {}
  DataError(const std::string& path, std::size_t line, const std::string& message)
      : Error(path + ":" + std::to_string(line) + ": " + message), path_(path), line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_ = 0;
};

/// An evaluation had no usable pairs left.
class EvalEmptyError : public Error {
 public:
  using Error::Error;
};

}  // namespace spikefuse
