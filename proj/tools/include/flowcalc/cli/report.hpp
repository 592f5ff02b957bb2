#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "flowcalc/flow.hpp"
#include "flowcalc/homology.hpp"
#include "flowcalc/poset.hpp"

namespace flowcalc::cli {

using Json = nlohmann::ordered_json;

enum class Format { Text, Json };

/// Both renderings end with a newline. JSON uses two-space indentation so a
/// parse/dump cycle reproduces it byte for byte.
std::string render(const Json& report, Format format);

Json to_json(const HomologyGroup& h);
Json to_json(const std::vector<HomologyGroup>& profile);

/// "(0, A, 1)" style chain label.
std::string chain_label(const Poset& p, const std::vector<Element>& chain);

/// Graphviz text for the opposite chain category and for flow state graphs
/// (edge labels count level-0 paths).
std::string ext_category_dot(const Poset& p, const ExtCategory& cat);
std::string flow_dot(const Flow& x, const std::string& name);

}  // namespace flowcalc::cli
