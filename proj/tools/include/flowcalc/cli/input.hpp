#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "flowcalc/poset.hpp"
#include "flowcalc/presentation.hpp"

namespace flowcalc::cli {

struct PosetInput {
  std::string name;
  Poset poset;
};

/// A flow file: cells become simplices of per-pair generator blocks.
struct FlowInput {
  std::string name;
  FlowPresentation presentation;
  struct CellRef {
    std::size_t block = 0;
    int dim = 0;
    SimplexId simplex = 0;  // at level dim
  };
  std::map<std::string, CellRef> cells;
};

using Input = std::variant<PosetInput, FlowInput>;

/// Parses a poset or flow file. Errors carry "source:line:col: " prefixes and
/// one of SyntaxError, DuplicateIdentifier, DanglingReference, ArityMismatch,
/// MalformedSimplicialSet or PartialOrderViolation.
Input parse_input(const std::string& text, const std::string& source = "<input>",
                  int cap = kDefaultCap);

PosetInput parse_poset(const std::string& text, const std::string& source = "<input>");
FlowInput parse_flow(const std::string& text, const std::string& source = "<input>",
                     int cap = kDefaultCap);

/// F(P) for posets, the saturated presentation for flow files.
Flow to_flow(const Input& input, int cap, std::size_t budget);

}  // namespace flowcalc::cli
