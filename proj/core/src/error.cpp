#include "flowcalc/error.hpp"

namespace flowcalc {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::PartialOrderViolation: return "PartialOrderViolation";
    case Errc::NotComparable: return "NotComparable";
    case Errc::NotBounded: return "NotBounded";
    case Errc::CapMismatch: return "CapMismatch";
    case Errc::DegreeOutOfRange: return "DegreeOutOfRange";
    case Errc::EmptyComplex: return "EmptyComplex";
    case Errc::MalformedSimplicialSet: return "MalformedSimplicialSet";
    case Errc::UnknownState: return "UnknownState";
    case Errc::NotJoinable: return "NotJoinable";
    case Errc::MalformedFlow: return "MalformedFlow";
    case Errc::NotABall: return "NotABall";
    case Errc::NotLoopless: return "NotLoopless";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::NotAnInclusion: return "NotAnInclusion";
    case Errc::MalformedSubdivision: return "MalformedSubdivision";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::DuplicateIdentifier: return "DuplicateIdentifier";
    case Errc::DanglingReference: return "DanglingReference";
    case Errc::ArityMismatch: return "ArityMismatch";
  }
  return "Unknown";
}

}  // namespace flowcalc
