#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flowcalc {

enum class Errc {
  PartialOrderViolation,
  NotComparable,
  NotBounded,
  CapMismatch,
  DegreeOutOfRange,
  EmptyComplex,
  MalformedSimplicialSet,
  UnknownState,
  NotJoinable,
  MalformedFlow,
  NotABall,
  NotLoopless,
  BudgetExceeded,
  NotAnInclusion,
  MalformedSubdivision,
  SyntaxError,
  DuplicateIdentifier,
  DanglingReference,
  ArityMismatch,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace flowcalc
