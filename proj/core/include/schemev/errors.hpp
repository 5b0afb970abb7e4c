// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace schemev {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A source file could not be segmented into declarations at all.
class ParseFailure : public Error {
 public:
  explicit ParseFailure(const std::string& msg) : Error(msg) {}
};

// History source is missing, unreadable, or structurally invalid.
class RepoAccessError : public Error {
 public:
  explicit RepoAccessError(const std::string& msg) : Error(msg) {}
};

// The version-control tool could not be run or exited nonzero.
class ToolInvocationError : public Error {
 public:
  explicit ToolInvocationError(const std::string& msg) : Error(msg) {}
};

// A report file could not be written.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Invalid run configuration (bad flags, conflicting paths).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Correlation input too short or with zero variance.
class DegenerateSeries : public Error {
 public:
  explicit DegenerateSeries(const std::string& msg) : Error(msg) {}
};

}  // namespace schemev
