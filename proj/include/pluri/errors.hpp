#pragma once

#include <stdexcept>
#include <string>

namespace pluri {

// Base class for all structured errors thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg) : Error("dimension-mismatch", msg) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error("invalid-value", msg) {}
};

class NotSupportedError : public Error {
 public:
  explicit NotSupportedError(const std::string& msg) : Error("not-supported", msg) {}
};

// Carries the path of the offending field, e.g. "solver.tol".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& msg)
      : Error("config", path + ": " + msg), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace pluri
