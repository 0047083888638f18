#pragma once

#include <stdexcept>
#include <string>

namespace catent {

// Coarse classes of failure. The CLI maps these onto process exit codes.
enum class ErrorKind {
  Parse,     // malformed input file or token
  Domain,    // input parses but violates an operation's precondition
  Internal,  // two independent computations disagreed; a bug signal
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Short machine tag, e.g. "NilpotentInput".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error parse_error(const std::string& message) {
  return Error(ErrorKind::Parse, "ParseError", message);
}

inline Error domain_error(const std::string& code, const std::string& message) {
  return Error(ErrorKind::Domain, code, code + ": " + message);
}

inline Error internal_error(const std::string& message) {
  return Error(ErrorKind::Internal, "InternalInconsistency",
               "InternalInconsistency: " + message);
}

}  // namespace catent
