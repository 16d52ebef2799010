#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cliptrack {

// All library errors carry a stable machine-readable code next to the
// human-readable message, so callers can branch without string matching
// on prose.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
  throw Error(std::move(code), message);
}

}  // namespace cliptrack
