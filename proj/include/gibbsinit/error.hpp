#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gibbsinit {

// Recoverable failures carry a stable machine-readable code ("empty-dataset",
// "bad-subsample-size", ...) plus a free-form detail message. The CLI maps any
// Error to exit code 2 unless noted otherwise.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace gibbsinit
