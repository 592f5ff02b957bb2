// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flowcalc/ball.hpp"
#include "flowcalc/cli/app.hpp"
#include "flowcalc/dihomotopy.hpp"
#include "flowcalc/error.hpp"
#include "flowcalc/homology.hpp"
#include "flowcalc/isomorphism.hpp"
#include "flowcalc/poset.hpp"
#include "flowcalc/presentation.hpp"
#include "generators.hpp"

using namespace flowcalc;

namespace {

const std::string kData = FLOWCALC_TEST_DATA;

struct Verdict {
  bool ok = true;
  std::string detail;
  std::vector<std::string> problems;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (problems.size() < 5) problems.push_back(what);
  }
};

cli::Json run_cli(const std::string& command, const std::string& input, int* status) {
  cli::Manifest m;
  m.command = command;
  m.input = input;
  const cli::Outcome o = cli::execute(m);
  if (status) *status = o.status;
  return o.report;
}

// ---------------------------------------------------------------------------

Verdict two_branch_report() {
  Verdict v;
  int status = -1;
  const cli::Json r = run_cli("poset-report", kData + "/branches.poset", &status);
  v.require(status == cli::kPass, "exit status");
  std::set<std::string> objects;
  for (const auto& o : r["ext"]["objects"]) objects.insert(o["chain"].get<std::string>());
  const std::set<std::string> want_objects = {"(0, 1)", "(0, A, 1)", "(0, B, 1)", "(0, A, B, 1)", "(0, C, 1)"};
  v.require(objects == want_objects && r["ext"]["objects"].size() == 5, "objects differ");
  std::set<std::pair<std::string, std::string>> arrows;
  for (const auto& a : r["ext"]["arrows"]) arrows.insert({a["from"].get<std::string>(), a["to"].get<std::string>()});
  const std::set<std::pair<std::string, std::string>> want_arrows = {
      {"(0, A, B, 1)", "(0, B, 1)"},
      {"(0, A, B, 1)", "(0, A, 1)"},
      {"(0, A, 1)", "(0, 1)"},
      {"(0, B, 1)", "(0, 1)"},
      {"(0, C, 1)", "(0, 1)"},
  };
  v.require(arrows == want_arrows && r["ext"]["arrows"].size() == 5, "arrows differ");
  v.require(r["ext"]["terminal"] == "(0, 1)", "terminal object");
  v.detail = std::to_string(objects.size()) + " objects, " + std::to_string(arrows.size()) +
             " generating arrows, terminal " + r["ext"]["terminal"].get<std::string>();
  return v;
}

Verdict reedy_direct() {
  Verdict v;
  std::mt19937 rng(101);
  std::size_t arrows = 0, triangles = 0;
  for (int t = 0; t < 200; ++t) {
    const Poset p = testing::random_bounded_poset(rng, 8);
    const ReedyReport r = reedy_report(p);
    arrows += r.arrows_checked;
    triangles += r.triangles_checked;
    v.require(r.direct() && r.violations.empty(), "poset " + std::to_string(t) + " has violations");
  }
  v.detail = "200 posets, " + std::to_string(arrows) + " arrows, " + std::to_string(triangles) + " triangles";
  return v;
}

Verdict bottom_branch() {
  Verdict v;
  const auto posets = testing::bounded_posets(6);
  for (std::size_t k = 0; k < posets.size(); ++k) {
    const BottomBranchReport r = bottom_branch_check(poset_flow(posets[k], 2));
    v.require(r.poset_classes == 1 && r.passed(), "poset " + std::to_string(k));
  }
  v.detail = std::to_string(posets.size()) + " bounded posets up to isomorphism";
  return v;
}

Verdict invariance() {
  Verdict v;
  std::mt19937 rng(4242);
  testing::RandomFlowOptions options;
  options.max_states = 8;
  options.cap = 2;
  std::size_t comparisons = 0, fresh = 0;
  for (int t = 0; t < 500; ++t) {
    const Flow x = testing::random_flow(rng, options);
    const auto edges = testing::level_zero_edges(x);
    if (edges.empty()) {
      v.require(false, "triple " + std::to_string(t) + " has no level-0 path");
      continue;
    }
    const testing::Edge e = edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
    const Flow ball = poset_flow(testing::random_bounded_poset(rng, 6), 2);
    const Subdivision s = t_subdivide(x, e.a, e.b, e.u, ball);
    const InvarianceReport r = check_invariance(x, s.flow, s.from_x);
    bool minus = false, plus = false;
    for (const auto& c : r.comparisons) (c.direction == Direction::Minus ? minus : plus) = true;
    v.require(minus && plus, "triple " + std::to_string(t) + " misses a direction");
    for (const auto& f : r.failures) v.require(false, "triple " + std::to_string(t) + ": " + f);
    comparisons += r.comparisons.size();
    fresh += r.new_states.size();
  }
  v.detail = "500 triples, " + std::to_string(comparisons) + " state comparisons, " + std::to_string(fresh) +
             " new-state checks";
  return v;
}

// All posets on at most three elements up to isomorphism, as flows.
std::vector<Flow> small_poset_flows(int cap) {
  std::vector<Flow> out;
  for (std::size_t n = 0; n <= 3; ++n) {
    std::vector<std::pair<Element, Element>> pairs;
    for (Element i = 0; i < n; ++i) {
      for (Element j = i + 1; j < n; ++j) pairs.push_back({i, j});
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
    for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
      std::vector<std::pair<Element, Element>> rel;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (mask >> k & 1) rel.push_back(pairs[k]);
      }
      const Flow f = poset_flow(Poset::from_relations(names, rel), cap);
      bool seen = false;
      for (const auto& g : out) seen = seen || isomorphic(f, g);
      if (!seen) out.push_back(f);
    }
  }
  return out;
}

// Z glued in front of a segment: 0 -(Z)-> 1 -> 2.
Flow glob_then_segment(const SimplicialSet& z) {
  FlowPresentation p;
  p.states = {"0", "1", "2"};
  p.cap = z.cap();
  p.add_block(0, 1, z);
  p.add_block(1, 2, point(z.cap()));
  return saturate(p).flow;
}

std::vector<Flow> small_flows(int cap, const std::vector<SimplicialSet>& spaces) {
  std::vector<Flow> out = small_poset_flows(cap);
  for (const auto& z : spaces) {
    if (z.size(0) == 0) continue;
    out.push_back(glob(z));
    out.push_back(glob_then_segment(z));
  }
  return out;
}

Verdict tensor_identities() {
  Verdict v;
  const int cap = 2;
  const auto sets = testing::small_simplicial_sets(cap, 3);
  const auto flows = small_flows(cap, sets);
  std::size_t checks = 0;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const Flow& x = flows[i];
    const Flow t = tensor(empty_set(cap), x).flow;
    v.require(isomorphic(t, discrete_flow(x.states(), cap)), "empty tensor, flow " + std::to_string(i));
    ++checks;
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      const bool ok = isomorphic(tensor(sets[i], glob(sets[j])).flow, glob(product(sets[i], sets[j])));
      v.require(ok, "glob identity U=" + std::to_string(i) + " Z=" + std::to_string(j));
      ++checks;
    }
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      const SimplicialSet uv = product(sets[i], sets[j]);
      for (std::size_t k = 0; k < flows.size(); ++k) {
        const Flow lhs = tensor(uv, flows[k]).flow;
        const Flow rhs = tensor(sets[i], tensor(sets[j], flows[k]).flow).flow;
        v.require(isomorphic(lhs, rhs), "associativity U=" + std::to_string(i) + " V=" + std::to_string(j) +
                                            " X=" + std::to_string(k));
        ++checks;
      }
    }
  }
  v.detail = std::to_string(sets.size()) + " simplicial sets, " + std::to_string(flows.size()) + " flows, " +
             std::to_string(checks) + " isomorphism checks";
  return v;
}

bool uses_only(const Word& w, std::size_t blocks) {
  for (const auto& l : w.letters) {
    if (l.block >= blocks) return false;
  }
  return true;
}

// Stage k keeps the first blocks[k] generator blocks and the relations among them.
FlowPresentation stage(const FlowPresentation& p, std::size_t blocks) {
  FlowPresentation s;
  s.name = p.name;
  s.states = p.states;
  s.cap = p.cap;
  s.generators.assign(p.generators.begin(), p.generators.begin() + static_cast<std::ptrdiff_t>(blocks));
  for (const auto& r : p.relations) {
    if (uses_only(r.first, blocks) && uses_only(r.second, blocks)) s.relations.push_back(r);
  }
  return s;
}

// Word representatives carried into the next stage; nullopt if two classes merge.
std::optional<FlowMorphism> link(const Saturation& from, const Saturation& to) {
  const Flow& x = from.flow;
  const std::size_t n = x.state_count();
  FlowMorphism f;
  for (StateId s = 0; s < n; ++s) f.states.push_back(s);
  f.paths.resize(n * n);
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      auto& map = f.paths[a * n + b];
      if (!x.has_paths(a, b)) continue;
      map.levels.resize(static_cast<std::size_t>(x.cap()) + 1);
      for (int level = 0; level <= x.cap(); ++level) {
        std::set<SimplexId> image;
        for (SimplexId c = 0; c < x.path(a, b).size(level); ++c) {
          const auto d = to.class_of(from.representative(a, b, level, c));
          if (!d || !image.insert(*d).second) return std::nullopt;
          map.levels[static_cast<std::size_t>(level)].push_back(*d);
        }
      }
    }
  }
  return f;
}

Verdict sequential_colimits() {
  Verdict v;
  std::mt19937 rng(606);
  testing::RandomFlowOptions options;
  options.max_states = 5;
  options.cap = 2;
  int built = 0, rejected = 0;
  std::size_t proper = 0;
  while (built < 100) {
    const FlowPresentation p = testing::random_presentation(rng, options);
    const std::size_t total = p.generators.size();
    const std::size_t length = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    std::vector<std::size_t> cuts;
    for (std::size_t k = 1; k < length; ++k) cuts.push_back(std::uniform_int_distribution<std::size_t>(0, total)(rng));
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(total);
    std::vector<Saturation> stages;
    for (std::size_t c : cuts) stages.push_back(saturate(stage(p, c)));
    std::vector<Flow> chain;
    std::vector<FlowMorphism> links;
    bool inclusion = true;
    for (std::size_t k = 0; k < stages.size(); ++k) {
      chain.push_back(stages[k].flow);
      if (k == 0) continue;
      const auto l = link(stages[k - 1], stages[k]);
      if (!l) {
        inclusion = false;
        break;
      }
      links.push_back(*l);
    }
    if (!inclusion) {
      ++rejected;
      continue;
    }
    for (std::size_t k = 1; k < chain.size(); ++k) {
      if (chain[k].total_simplices() > chain[k - 1].total_simplices()) ++proper;
    }
    const std::string tag = "chain " + std::to_string(built);
    ++built;
    const SequentialColimit s = sequential_colimit(chain, links);
    const Flow& want = saturate(p).flow;
    v.require(s.flow.state_count() == want.state_count(), tag + ": state count");
    if (s.flow.state_count() != want.state_count()) continue;
    for (StateId a = 0; a < want.state_count(); ++a) {
      for (StateId b = 0; b < want.state_count(); ++b) {
        for (int level = 0; level <= want.cap(); ++level) {
          v.require(s.flow.path(a, b).size(level) == want.path(a, b).size(level),
                    tag + ": level " + std::to_string(level) + " sizes");
        }
      }
    }
    v.require(isomorphic(s.flow, want), tag + ": not isomorphic");
    for (std::size_t k = 0; k < chain.size(); ++k) {
      v.require(is_morphism(s.injections[k], chain[k], s.flow), tag + ": injection");
    }
  }
  v.detail = "100 chains, " + std::to_string(proper) + " strictly growing links, " + std::to_string(rejected) +
             " non-inclusion draws redrawn";
  return v;
}

bool small_enough(const Flow& x) {
  if (x.state_count() > 3) return false;
  for (int level = 0; level <= x.cap(); ++level) {
    std::size_t n = 0;
    for (StateId a = 0; a < x.state_count(); ++a) {
      for (StateId b = 0; b < x.state_count(); ++b) n += x.path(a, b).size(level);
    }
    if (n > 3) return false;
  }
  return true;
}

Verdict pushout_cones() {
  Verdict v;
  const int cap = 1;
  std::vector<Flow> family;
  for (const auto& f : small_flows(cap, testing::small_simplicial_sets(cap, 3))) {
    if (!small_enough(f)) continue;
    bool seen = false;
    for (const auto& g : family) seen = seen || isomorphic(f, g);
    if (!seen) family.push_back(f);
  }
  std::size_t spans = 0, cones = 0, cyclic = 0;
  std::vector<std::vector<std::vector<FlowMorphism>>> homs(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < family.size(); ++j) homs[i].push_back(enumerate_morphisms(family[i], family[j]));
  }
  for (std::size_t ai = 0; ai < family.size(); ++ai) {
    const Flow& a = family[ai];
    for (std::size_t bi = 0; bi < family.size(); ++bi) {
      const Flow& b = family[bi];
      const auto& fs = homs[ai][bi];
      if (fs.empty()) continue;
      for (std::size_t ci = 0; ci < family.size(); ++ci) {
        const Flow& c = family[ci];
        const auto& gs = homs[ai][ci];
        for (const auto& f : fs) {
          for (const auto& g : gs) {
            std::optional<Colimit> glued;
            try {
              glued = pushout(a, b, f, c, g);
            } catch (const Error& e) {
              if (e.code() != Errc::NotLoopless) throw;
              ++cyclic;
              continue;
            }
            const Colimit& po = *glued;
            ++spans;
            for (std::size_t ti = 0; ti < family.size(); ++ti) {
              const auto& hs = homs[bi][ti];
              const auto& ks = homs[ci][ti];
              if (hs.empty() || ks.empty()) continue;
              std::vector<FlowMorphism> hf, kg;
              for (const auto& h : hs) hf.push_back(compose(h, f, a));
              for (const auto& k : ks) kg.push_back(compose(k, g, a));
              // mediating[i * |ks| + j]: morphisms out of the pushout restricting to (hs[i], ks[j]).
              std::vector<std::size_t> mediating(hs.size() * ks.size(), 0);
              for (const auto& m : enumerate_morphisms(po.flow, family[ti])) {
                const FlowMorphism mb = compose(m, po.injections[0], b);
                const FlowMorphism mc = compose(m, po.injections[1], c);
                const auto i = std::find(hs.begin(), hs.end(), mb) - hs.begin();
                const auto j = std::find(ks.begin(), ks.end(), mc) - ks.begin();
                v.require(static_cast<std::size_t>(i) < hs.size() && static_cast<std::size_t>(j) < ks.size(),
                          "restriction of a pushout morphism is not a morphism");
                if (static_cast<std::size_t>(i) < hs.size() && static_cast<std::size_t>(j) < ks.size()) {
                  ++mediating[static_cast<std::size_t>(i) * ks.size() + static_cast<std::size_t>(j)];
                }
              }
              for (std::size_t i = 0; i < hs.size(); ++i) {
                for (std::size_t j = 0; j < ks.size(); ++j) {
                  const std::size_t n = mediating[i * ks.size() + j];
                  if (hf[i] != kg[j]) {
                    v.require(n == 0, "a non-cone factors through the pushout");
                    continue;
                  }
                  ++cones;
                  v.require(n == 1, "cone " + std::to_string(cones) + " has " + std::to_string(n) +
                                        " mediating morphisms");
                }
              }
            }
          }
        }
      }
    }
  }
  v.detail = std::to_string(family.size()) + " flows, " + std::to_string(spans) + " spans, " +
             std::to_string(cones) + " cones, " +
             std::to_string(cyclic) + " spans with a cyclic pushout skipped";
  return v;
}

Verdict homology_engine() {
  Verdict v;
  std::mt19937 rng(8);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int t = 0; t < 1000; ++t) {
    IntMatrix m(dim(rng), dim(rng));
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = entry(rng);
    }
    v.require(verify_certificate(m, smith_normal_form(m)), "matrix " + std::to_string(t));
  }
  const auto s1 = homology_profile(circle(3));
  v.require(s1.size() >= 2 && s1[0] == HomologyGroup{1, {}} && s1[1] == HomologyGroup{1, {}}, "circle");
  const auto rp2 = homology_profile(projective_plane(3));
  v.require(rp2.size() >= 2 && rp2[0] == HomologyGroup{1, {}} && rp2[1] == HomologyGroup{0, {2}}, "projective plane");
  v.detail = "1000 certificates; circle H0=" + s1[0].to_string() + " H1=" + s1[1].to_string() +
             "; projective plane H1=" + rp2[1].to_string();
  return v;
}

Verdict lemma_probe() {
  Verdict v;
  int status = -1;
  const cli::Json r = run_cli("lemma-probe", kData + "/branches.poset", &status);
  v.require(status == cli::kPass, "exit status");
  v.require(r["verdict"] == "CONSISTENT", "consistency verdict");
  v.require(r["consistency"]["problems"].empty(), "consistency problems");
  v.require(!r["joins"].empty(), "no join comparisons");
  std::size_t isomorphic_joins = 0;
  for (const auto& j : r["joins"]) {
    v.require(j.contains("isomorphic") && j["isomorphic"].is_boolean(), "join without outcome");
    if (j["isomorphic"] == true) {
      ++isomorphic_joins;
    } else {
      v.require(!j["incomparable"].empty(), "non-isomorphic join without witness");
    }
  }
  const auto& l = r["latching"];
  v.require(l.is_object(), "latching comparison missing");
  if (l.is_object()) {
    v.require(l["isomorphic"].is_boolean(), "latching outcome");
    v.require(l["isomorphic"] == true || !l["witnesses"].empty(), "latching witnesses");
  }
  std::ostringstream d;
  d << r["joins"].size() << " joins (" << isomorphic_joins << " isomorphic); latching "
    << (l.is_object() ? l["latching_states"].dump() + " vs " + l["poset_states"].dump() + " states" : "-")
    << "; " << r["consistency"]["checks"].dump() << " consistency checks";
  v.detail = d.str();
  return v;
}

struct Criterion {
  int number;
  const char* title;
  double seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "chain category of the two-branch poset", 1, two_branch_report},
      {2, "Reedy direct-category property", 30, reedy_direct},
      {3, "single branch class at the bottom", 60, bottom_branch},
      {4, "invariance under T-subdivision", 300, invariance},
      {5, "tensor identities", 60, tensor_identities},
      {6, "sequential colimits", 30, sequential_colimits},
      {7, "pushout universal property", 30, pushout_cones},
      {8, "homology engine", 30, homology_engine},
      {9, "lemma-probe consistency", 60, lemma_probe},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.problems.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > c.seconds) v.require(false, "time limit " + std::to_string(c.seconds) + " s exceeded");
    std::printf("criterion %d %s: %s (%.2f s) %s\n", c.number, c.title, v.ok ? "PASS" : "FAIL", elapsed,
                v.detail.c_str());
    for (const auto& p : v.problems) std::printf("    %s\n", p.c_str());
    std::fflush(stdout);
    if (!v.ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
