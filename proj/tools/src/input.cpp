#include "flowcalc/cli/input.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "flowcalc/error.hpp"

namespace flowcalc::cli {

namespace {

struct Token {
  std::string text;
  int line = 1;
  int col = 1;
};

using Line = std::vector<Token>;

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    Line line;
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      line.push_back({raw.substr(start, i - start), number, static_cast<int>(start) + 1});
    }
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

class Reporter {
 public:
  explicit Reporter(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void at(Errc code, int line, int col, const std::string& msg) const {
    fail(code, source_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
  [[noreturn]] void at(Errc code, const Token& t, const std::string& msg) const {
    at(code, t.line, t.col, msg);
  }

 private:
  std::string source_;
};

const Token& expect_header(const std::vector<Line>& lines, const std::string& keyword,
                           const Reporter& r) {
  if (lines.empty()) r.at(Errc::SyntaxError, 1, 1, "empty input, expected '" + keyword + " <name>'");
  const Line& first = lines.front();
  if (first[0].text != keyword) {
    r.at(Errc::SyntaxError, first[0], "expected '" + keyword + " <name>', found '" + first[0].text + "'");
  }
  if (first.size() != 2) {
    r.at(Errc::SyntaxError, first.size() < 2 ? first[0] : first[2],
         "'" + keyword + "' takes exactly one name");
  }
  return first[1];
}

// Monotone surjections [m] -> [k].
std::vector<std::vector<int>> surjections(int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur{0};
  std::function<void()> grow = [&] {
    if (static_cast<int>(cur.size()) == m + 1) {
      if (cur.back() == k) out.push_back(cur);
      return;
    }
    for (int step = 0; step <= 1; ++step) {
      if (cur.back() + step > k) continue;
      cur.push_back(cur.back() + step);
      grow();
      cur.pop_back();
    }
  };
  grow();
  return out;
}

}  // namespace

PosetInput parse_poset(const std::string& text, const std::string& source) {
  const Reporter r(source);
  const auto lines = tokenize(text);
  PosetInput out;
  out.name = expect_header(lines, "poset", r).text;
  std::vector<std::string> names;
  std::map<std::string, Element> ids;
  std::vector<std::pair<Element, Element>> rel;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const std::string& kw = line[0].text;
    if (kw == "elem") {
      if (line.size() < 2) r.at(Errc::SyntaxError, line[0], "'elem' needs at least one identifier");
      for (std::size_t t = 1; t < line.size(); ++t) {
        if (!ids.emplace(line[t].text, names.size()).second) {
          r.at(Errc::DuplicateIdentifier, line[t], "element '" + line[t].text + "' declared twice");
        }
        names.push_back(line[t].text);
      }
    } else if (kw == "rel") {
      // rel a < b [< c ...]
      if (line.size() < 4 || line.size() % 2 != 0) {
        r.at(Errc::SyntaxError, line[0], "expected 'rel <a> < <b>'");
      }
      std::vector<Element> chain;
      for (std::size_t t = 1; t < line.size(); ++t) {
        if (t % 2 == 0) {
          if (line[t].text != "<") r.at(Errc::SyntaxError, line[t], "expected '<', found '" + line[t].text + "'");
          continue;
        }
        const auto it = ids.find(line[t].text);
        if (it == ids.end()) {
          r.at(Errc::DanglingReference, line[t], "undeclared element '" + line[t].text + "'");
        }
        chain.push_back(it->second);
      }
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        if (chain[i] == chain[i + 1]) {
          r.at(Errc::PartialOrderViolation, line[0], "element '" + names[chain[i]] + "' below itself");
        }
        rel.emplace_back(chain[i], chain[i + 1]);
      }
    } else {
      r.at(Errc::SyntaxError, line[0], "unknown keyword '" + kw + "' in a poset file");
    }
  }
  if (names.empty()) r.at(Errc::SyntaxError, lines.front()[0], "poset declares no elements");
  out.poset = Poset::from_relations(std::move(names), rel);
  return out;
}

FlowInput parse_flow(const std::string& text, const std::string& source, int cap) {
  const Reporter r(source);
  const auto lines = tokenize(text);
  FlowInput out;
  out.name = expect_header(lines, "flow", r).text;
  auto& pres = out.presentation;
  pres.name = out.name;
  pres.cap = cap;
  std::map<std::string, StateId> states;

  struct PendingCell {
    std::string name;
    std::size_t pair;
    std::size_t index;  // builder cell index
    int dim;
  };
  struct PairBuilder {
    StateId a, b;
    SimplicialSetBuilder builder;
    std::vector<std::string> cells;
  };
  std::vector<PairBuilder> pairs;
  std::map<std::pair<StateId, StateId>, std::size_t> pair_of;
  std::map<std::string, PendingCell> cells;
  std::vector<std::string> cell_order;
  std::vector<const Line*> relation_lines;

  auto state_ref = [&](const Token& t) {
    const auto it = states.find(t.text);
    if (it == states.end()) r.at(Errc::DanglingReference, t, "undeclared state '" + t.text + "'");
    return it->second;
  };

  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const std::string& kw = line[0].text;
    if (kw == "state") {
      if (line.size() < 2) r.at(Errc::SyntaxError, line[0], "'state' needs at least one identifier");
      for (std::size_t t = 1; t < line.size(); ++t) {
        if (!states.emplace(line[t].text, pres.states.size()).second) {
          r.at(Errc::DuplicateIdentifier, line[t], "state '" + line[t].text + "' declared twice");
        }
        pres.states.push_back(line[t].text);
      }
    } else if (kw == "cell") {
      // cell <id> : <a> -> <b> dim <n> [faces d0=<id> ... dn=<id>]
      if (line.size() < 8 || line[2].text != ":" || line[4].text != "->" || line[6].text != "dim") {
        r.at(Errc::SyntaxError, line[0], "expected 'cell <id> : <a> -> <b> dim <n> [faces d0=<id> ...]'");
      }
      const Token& id = line[1];
      if (cells.count(id.text)) r.at(Errc::DuplicateIdentifier, id, "cell '" + id.text + "' declared twice");
      const StateId a = state_ref(line[3]);
      const StateId b = state_ref(line[5]);
      int dim = -1;
      try {
        std::size_t used = 0;
        dim = std::stoi(line[7].text, &used);
        if (used != line[7].text.size()) dim = -1;
      } catch (const std::exception&) {
        dim = -1;
      }
      if (dim < 0) r.at(Errc::SyntaxError, line[7], "dimension must be a non-negative integer");
      if (dim > cap) {
        r.at(Errc::ArityMismatch, line[7],
             "cell of dimension " + std::to_string(dim) + " exceeds the dimension cap " + std::to_string(cap));
      }
      std::vector<const Token*> face_tokens(static_cast<std::size_t>(dim) + 1, nullptr);
      std::vector<std::string> face_names(static_cast<std::size_t>(dim) + 1);
      if (line.size() > 8) {
        if (line[8].text != "faces") r.at(Errc::SyntaxError, line[8], "expected 'faces'");
        if (dim == 0) r.at(Errc::ArityMismatch, line[8], "a dimension-0 cell has no faces");
        for (std::size_t t = 9; t < line.size(); ++t) {
          const Token& f = line[t];
          const auto eq = f.text.find('=');
          if (eq == std::string::npos || eq < 2 || f.text[0] != 'd') {
            r.at(Errc::SyntaxError, f, "expected 'd<i>=<cell>'");
          }
          int i = -1;
          try {
            std::size_t used = 0;
            i = std::stoi(f.text.substr(1, eq - 1), &used);
            if (used != eq - 1) i = -1;
          } catch (const std::exception&) {
            i = -1;
          }
          if (i < 0 || i > dim) {
            r.at(Errc::ArityMismatch, f, "face index out of range for a dimension-" + std::to_string(dim) + " cell");
          }
          if (face_tokens[i]) r.at(Errc::DuplicateIdentifier, f, "face d" + std::to_string(i) + " given twice");
          face_tokens[i] = &f;
          face_names[i] = f.text.substr(eq + 1);
        }
      }
      if (dim > 0) {
        for (int i = 0; i <= dim; ++i) {
          if (!face_tokens[i]) {
            r.at(Errc::ArityMismatch, line[0],
                 "cell '" + id.text + "' is missing face d" + std::to_string(i));
          }
        }
      }
      auto [slot, fresh] = pair_of.emplace(std::make_pair(a, b), pairs.size());
      if (fresh) pairs.push_back({a, b, {}, {}});
      PairBuilder& pb = pairs[slot->second];

      // Candidate normal forms per face; lower-dimensional faces are implicit
      // degeneracies and are resolved against the simplicial identities.
      std::vector<std::vector<CellSimplex>> options(static_cast<std::size_t>(dim) + 1);
      for (int i = 0; dim > 0 && i <= dim; ++i) {
        const Token& f = *face_tokens[i];
        const auto it = cells.find(face_names[i]);
        if (it == cells.end()) {
          r.at(Errc::DanglingReference, f, "undeclared cell '" + face_names[i] + "'");
        }
        const PendingCell& fc = it->second;
        if (fc.pair != slot->second) {
          r.at(Errc::DanglingReference, f,
               "face '" + face_names[i] + "' lies in another path space than cell '" + id.text + "'");
        }
        if (fc.dim > dim - 1) {
          r.at(Errc::ArityMismatch, f,
               "face '" + face_names[i] + "' has dimension " + std::to_string(fc.dim) + ", at most " +
                   std::to_string(dim - 1) + " allowed");
        }
        for (auto& s : surjections(dim - 1, fc.dim)) options[i].push_back(CellSimplex{fc.index, s});
      }
      std::size_t index = 0;
      if (dim == 0) {
        index = pb.builder.add_vertex(id.text);
      } else {
        std::vector<CellSimplex> chosen(dim + 1);
        std::vector<std::vector<CellSimplex>> valid;
        std::function<void(int)> pick = [&](int i) {
          if (valid.size() > 1) return;
          if (i > dim) {
            SimplicialSetBuilder trial = pb.builder;
            trial.add_cell(dim, chosen);
            if (trial.violations().empty()) valid.push_back(chosen);
            return;
          }
          for (const auto& c : options[i]) {
            chosen[i] = c;
            pick(i + 1);
          }
        };
        pick(0);
        if (valid.empty()) {
          r.at(Errc::MalformedSimplicialSet, line[0],
               "faces of cell '" + id.text + "' violate the simplicial identities");
        }
        if (valid.size() > 1) {
          r.at(Errc::ArityMismatch, line[0],
               "degenerate faces of cell '" + id.text + "' are ambiguous; declare the intermediate cell");
        }
        index = pb.builder.add_cell(dim, valid.front(), id.text);
      }
      pb.cells.push_back(id.text);
      cells[id.text] = {id.text, slot->second, index, dim};
      cell_order.push_back(id.text);
    } else if (kw == "relation") {
      if (line.size() != 4 || line[2].text != "=") {
        r.at(Errc::SyntaxError, line[0], "expected 'relation <word> = <word>'");
      }
      relation_lines.push_back(&line);
    } else {
      r.at(Errc::SyntaxError, line[0], "unknown keyword '" + kw + "' in a flow file");
    }
  }
  if (pres.states.empty()) r.at(Errc::SyntaxError, lines.front()[0], "flow declares no states");

  std::vector<std::vector<SimplexId>> cell_index(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& pb = pairs[p];
    pres.add_block(pb.a, pb.b, pb.builder.build(cap, &cell_index[p]),
                   pres.states[pb.a] + "->" + pres.states[pb.b]);
  }
  for (const auto& name : cell_order) {
    const PendingCell& c = cells.at(name);
    out.cells[name] = {c.pair, c.dim, cell_index[c.pair][c.index]};
  }

  for (const Line* line : relation_lines) {
    struct Parsed {
      std::vector<FlowInput::CellRef> letters;
    };
    auto parse_word = [&](const Token& t) {
      Parsed w;
      std::size_t start = 0;
      int col = t.col;
      while (true) {
        const std::size_t dot = t.text.find('.', start);
        const std::string name = t.text.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (name.empty()) r.at(Errc::SyntaxError, t.line, col, "empty letter in word '" + t.text + "'");
        const auto it = out.cells.find(name);
        if (it == out.cells.end()) r.at(Errc::DanglingReference, t.line, col, "undeclared cell '" + name + "'");
        if (!w.letters.empty()) {
          const auto& prev = pres.generators[w.letters.back().block];
          if (prev.target != pres.generators[it->second.block].source) {
            r.at(Errc::SyntaxError, t.line, col,
                 "cell '" + name + "' does not start where the previous letter ends");
          }
        }
        w.letters.push_back(it->second);
        if (dot == std::string::npos) break;
        col = t.col + static_cast<int>(dot) + 1;
        start = dot + 1;
      }
      return w;
    };
    const Parsed lhs = parse_word((*line)[1]);
    const Parsed rhs = parse_word((*line)[3]);
    int level = 0;
    for (const auto* w : {&lhs, &rhs}) {
      for (const auto& l : w->letters) level = std::max(level, l.dim);
    }
    auto to_word = [&](const Parsed& p) {
      Word w{level, {}};
      for (const auto& l : p.letters) {
        w.letters.push_back({l.block, pres.generators[l.block].space.lift(l.dim, level, l.simplex)});
      }
      return w;
    };
    Word left = to_word(lhs);
    Word right = to_word(rhs);
    if (pres.source(left) != pres.source(right) || pres.target(left) != pres.target(right)) {
      r.at(Errc::SyntaxError, (*line)[2], "the two sides of the relation have different endpoints");
    }
    pres.relations.emplace_back(std::move(left), std::move(right));
  }
  return out;
}

Input parse_input(const std::string& text, const std::string& source, int cap) {
  const auto lines = tokenize(text);
  if (lines.empty()) {
    Reporter(source).at(Errc::SyntaxError, 1, 1, "empty input, expected a 'poset' or 'flow' header");
  }
  const Token& head = lines.front().front();
  if (head.text == "poset") return parse_poset(text, source);
  if (head.text == "flow") return parse_flow(text, source, cap);
  Reporter(source).at(Errc::SyntaxError, head, "expected 'poset' or 'flow', found '" + head.text + "'");
}

Flow to_flow(const Input& input, int cap, std::size_t budget) {
  if (const auto* p = std::get_if<PosetInput>(&input)) return poset_flow(p->poset, cap);
  const auto& f = std::get<FlowInput>(input);
  Flow x = saturate(f.presentation, budget).flow;
  return x;
}

}  // namespace flowcalc::cli
