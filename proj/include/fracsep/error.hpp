#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracsep {

enum class ErrorKind {
  Domain,
  InvalidWord,
  BudgetExceeded,
  NotInvariant,
  UnsupportedOrientation,
  Precondition,
  Overlap,
  Ordering,
  Overflow,
  Parse,
  Usage,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InvalidWord: return "invalid-word";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::NotInvariant: return "not-invariant";
    case ErrorKind::UnsupportedOrientation: return "unsupported-orientation";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Overlap: return "overlap";
    case ErrorKind::Ordering: return "ordering";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace fracsep
