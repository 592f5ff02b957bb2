#include "flowcalc/cli/report.hpp"

#include <sstream>

namespace flowcalc::cli {

namespace {

bool scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "-";
  return j.dump();
}

bool flat_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (!scalar(e)) return false;
  }
  return true;
}

std::string inline_array(const Json& j) {
  std::string s = "[";
  bool first = true;
  for (const auto& e : j) {
    s += (first ? "" : ", ") + scalar_text(e);
    first = false;
  }
  return s + "]";
}

void text(const Json& j, std::ostream& out, int indent);

void item(const std::string& key, const Json& v, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (scalar(v)) {
    out << pad << key << ": " << scalar_text(v) << '\n';
  } else if (flat_array(v)) {
    out << pad << key << ": " << inline_array(v) << '\n';
  } else {
    out << pad << key << ":\n";
    text(v, out, indent + 2);
  }
}

void text(const Json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) item(k, v, out, indent);
  } else if (j.is_array()) {
    if (j.empty()) out << pad << "(none)\n";
    for (const auto& e : j) {
      if (scalar(e) || flat_array(e)) {
        out << pad << "- " << (scalar(e) ? scalar_text(e) : inline_array(e)) << '\n';
        continue;
      }
      // First field on the dash line, the rest aligned under it.
      std::ostringstream nested;
      text(e, nested, indent + 2);
      std::string body = nested.str();
      if (body.size() >= static_cast<std::size_t>(indent) + 2) body.replace(indent, 2, "- ");
      out << body;
    }
  } else {
    out << pad << scalar_text(j) << '\n';
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render(const Json& report, Format format) {
  if (format == Format::Json) return report.dump(2) + "\n";
  std::ostringstream out;
  text(report, out, 0);
  return out.str();
}

Json to_json(const HomologyGroup& h) {
  Json j;
  j["group"] = h.to_string();
  j["betti"] = h.betti.convert_to<long long>();
  Json torsion = Json::array();
  for (const auto& t : h.torsion) torsion.push_back(t.convert_to<long long>());
  j["torsion"] = std::move(torsion);
  return j;
}

Json to_json(const std::vector<HomologyGroup>& profile) {
  Json out = Json::array();
  for (std::size_t n = 0; n < profile.size(); ++n) {
    Json g = to_json(profile[n]);
    Json j;
    j["degree"] = n;
    for (auto& [k, v] : g.items()) j[k] = v;
    out.push_back(std::move(j));
  }
  return out;
}

std::string chain_label(const Poset& p, const std::vector<Element>& chain) {
  std::string s = "(";
  for (std::size_t i = 0; i < chain.size(); ++i) s += (i ? ", " : "") + p.name(chain[i]);
  return s + ")";
}

std::string ext_category_dot(const Poset& p, const ExtCategory& cat) {
  std::ostringstream out;
  out << "digraph ext {\n  node [shape=box];\n";
  for (std::size_t o = 0; o < cat.objects.size(); ++o) {
    out << "  n" << o << " [label=" << quote(chain_label(p, cat.objects[o]));
    if (o == cat.terminal) out << ", peripheries=2";
    out << "];\n";
  }
  for (const auto& a : cat.generators) {
    out << "  n" << a.source << " -> n" << a.target << " [label=\"d" << a.index << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string flow_dot(const Flow& x, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << quote(name) << " {\n  rankdir=LR;\n";
  for (StateId s = 0; s < x.state_count(); ++s) out << "  " << quote(x.state_name(s)) << ";\n";
  for (StateId a = 0; a < x.state_count(); ++a) {
    for (StateId b = 0; b < x.state_count(); ++b) {
      if (!x.has_paths(a, b)) continue;
      out << "  " << quote(x.state_name(a)) << " -> " << quote(x.state_name(b)) << " [label=\""
          << x.path(a, b).size(0) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace flowcalc::cli
