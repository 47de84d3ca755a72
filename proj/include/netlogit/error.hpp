#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netlogit {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  IndexOutOfRange,
  EmptyGraph,
  ZeroMatrix,
  TooLarge,
  NonFinite,
  NoConvergedFit,
  InsufficientData,
  Io,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every library failure is reported through this one exception type; callers
// that care about the cause switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace netlogit
