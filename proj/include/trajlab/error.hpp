#pragma once

#include <stdexcept>
#include <string>

namespace trajlab {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorKind {
  Precondition = 2,  // e.g. trajectory not entirely useful, NotSafe, bad witness
  Input = 3,         // malformed regex, JSON schema violation, alphabet mismatch
  Resource = 4,      // desk-scale cap exceeded, coefficient overflow
  Internal = 5,      // violated internal invariant (a bug)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorKind::Precondition, w) {}
};

struct InputError : Error {
  explicit InputError(const std::string& w) : Error(ErrorKind::Input, w) {}
};

/// Syntax error carrying the offending character offset.
struct SyntaxError : InputError {
  SyntaxError(const std::string& w, std::size_t offset)
      : InputError(w + " at offset " + std::to_string(offset)), offset(offset) {}
  std::size_t offset;
};

struct ResourceError : Error {
  explicit ResourceError(const std::string& w) : Error(ErrorKind::Resource, w) {}
};

struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorKind::Internal, w) {}
};

}  // namespace trajlab
