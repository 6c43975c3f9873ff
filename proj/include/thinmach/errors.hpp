#pragma once

#include <stdexcept>
#include <string>

namespace thinmach {

enum class ErrorKind {
  invalid_argument,
  invalid_state,
  grid_mismatch,
  insufficient_samples,
  positivity_loss,
  hypothesis_violated,
  misaligned_times,
  config,
  budget_exceeded,
  io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace thinmach
