#pragma once

#include <stdexcept>
#include <string>

namespace dilatation {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point left the domain of the dilatation it was fed to.
class DomainViolation : public Error {
 public:
  explicit DomainViolation(const std::string& what) : Error("domain violation: " + what) {}
};

/// A limit sweep did not behave like a convergent sequence.
class NonConvergent : public Error {
 public:
  explicit NonConvergent(const std::string& what) : Error("non-convergent: " + what) {}
};

/// Fixed-point iteration hit its iteration cap or stalled.
class MaxIterExceeded : public Error {
 public:
  explicit MaxIterExceeded(const std::string& what) : Error("max iterations exceeded: " + what) {}
};

/// An exact 2-adic computation needed digits beyond the stored precision.
class PrecisionExhausted : public Error {
 public:
  explicit PrecisionExhausted(const std::string& what) : Error("precision exhausted: " + what) {}
};

/// Invalid model description.
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error("model error: " + what) {}
};

/// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config error: " + what) {}
};

}  // namespace dilatation
