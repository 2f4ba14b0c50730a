#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace accumlab {

// Library errors carry a stable machine-readable code ("invalid-modulus",
// "insufficient-elements", ...) next to the human-readable message. Tests and
// the CLI dispatch on the code, never on the message text.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& what) {
  throw Error(std::move(code), what);
}

inline void require(bool cond, const char* code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace accumlab
