#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace l2e {

/// Invalid user-supplied configuration (bad length, nesting, flag combination).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Structurally invalid object handed to the library, e.g. a non-bijective
/// scrambling permutation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A character outside the vocabulary was fed to the encoder.
class EncodingError : public std::runtime_error {
 public:
  EncodingError(const std::string& what, char offending)
      : std::runtime_error(what), offending_(offending) {}
  char offending() const noexcept { return offending_; }

 private:
  char offending_;
};

/// Training diverged or hit an unrecoverable state.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace l2e
