#include "flowcalc/cli/app.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flowcalc/ball.hpp"
#include "flowcalc/cli/input.hpp"
#include "flowcalc/dihomotopy.hpp"
#include "flowcalc/error.hpp"

namespace flowcalc::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::SyntaxError, path + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Input load(const std::string& path, int cap) { return parse_input(read_file(path), path, cap); }

std::string input_name(const Input& in) {
  if (const auto* p = std::get_if<PosetInput>(&in)) return p->name;
  return std::get<FlowInput>(in).name;
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

Json header(const Manifest& m, const std::string& input) {
  Json j;
  j["command"] = m.command;
  j["input"] = input;
  j["dim_cap"] = m.cap;
  if (m.seed) j["seed"] = *m.seed;
  return j;
}

Json path_table(const Flow& x) {
  Json out = Json::array();
  for (StateId a = 0; a < x.state_count(); ++a) {
    for (StateId b = 0; b < x.state_count(); ++b) {
      if (!x.has_paths(a, b)) continue;
      Json row;
      row["from"] = x.state_name(a);
      row["to"] = x.state_name(b);
      Json sizes = Json::array();
      Json nondeg = Json::array();
      for (int lv = 0; lv <= x.cap(); ++lv) {
        sizes.push_back(x.path(a, b).size(lv));
        nondeg.push_back(x.path(a, b).nondegenerate(lv).size());
      }
      row["simplices"] = std::move(sizes);
      row["nondegenerate"] = std::move(nondeg);
      out.push_back(std::move(row));
    }
  }
  return out;
}

Json names(const Flow& x, const std::vector<StateId>& ids) {
  Json out = Json::array();
  for (StateId s : ids) out.push_back(x.state_name(s));
  return out;
}

Json profile_json(const std::optional<std::vector<HomologyGroup>>& p) {
  if (!p) return "empty";
  Json out = Json::array();
  for (const auto& h : *p) out.push_back(h.to_string());
  return out;
}

void write_dot(const Manifest& m, const std::string& text) {
  if (m.dot.empty()) return;
  std::ofstream out(m.dot);
  if (!out) fail(Errc::SyntaxError, m.dot + ": cannot write DOT file");
  out << text;
}

const Poset& require_poset(const Input& in, const std::string& path) {
  if (const auto* p = std::get_if<PosetInput>(&in)) return p->poset;
  fail(Errc::SyntaxError, path + ": expected a poset file");
}

StateId state_named(const Flow& x, const std::string& name) {
  const auto id = x.find_state(name);
  if (!id) fail(Errc::UnknownState, "no state named '" + name + "'");
  return *id;
}

// --------------------------------------------------------------------------

Outcome poset_report(const Manifest& m) {
  const Input in = load(m.input, m.cap);
  const Poset& p = require_poset(in, m.input);
  Outcome o{header(m, m.input), kPass};
  Json& r = o.report;
  Json poset;
  poset["name"] = input_name(in);
  poset["elements"] = p.names();
  Json covering = Json::array();
  for (auto [a, b] : p.covering_relations()) covering.push_back(p.name(a) + " < " + p.name(b));
  poset["covering"] = std::move(covering);
  const PosetReport pr = validate_poset(p);
  poset["bounded"] = pr.bounded;
  poset["bottom"] = pr.bottom ? Json(p.name(*pr.bottom)) : Json();
  poset["top"] = pr.top ? Json(p.name(*pr.top)) : Json();
  r["poset"] = std::move(poset);

  Json ell = Json::array();
  for (Element a : p.topological_order()) {
    for (Element b : p.topological_order()) {
      if (!p.less(a, b)) continue;
      Json row;
      row["pair"] = p.name(a) + " < " + p.name(b);
      row["length"] = chain_length(p, a, b);
      ell.push_back(std::move(row));
    }
  }
  r["ell"] = std::move(ell);

  if (!pr.bounded) {
    r["ext"] = nullptr;
    r["verdict"] = verdict(false);
    o.status = kCheckFailed;
    return o;
  }
  const ExtCategory cat = ext_category(p);
  Json ext;
  Json objects = Json::array();
  for (std::size_t k = 0; k < cat.objects.size(); ++k) {
    Json obj;
    obj["id"] = k;
    obj["chain"] = chain_label(p, cat.objects[k]);
    obj["degree"] = cat.degree[k];
    objects.push_back(std::move(obj));
  }
  ext["objects"] = std::move(objects);
  Json arrows = Json::array();
  for (const auto& a : cat.generators) {
    Json arrow;
    arrow["from"] = chain_label(p, cat.objects[a.source]);
    arrow["to"] = chain_label(p, cat.objects[a.target]);
    arrow["deletes"] = "d" + std::to_string(a.index);
    arrows.push_back(std::move(arrow));
  }
  ext["arrows"] = std::move(arrows);
  ext["terminal"] = chain_label(p, cat.objects[cat.terminal]);
  r["ext"] = std::move(ext);

  const ReedyReport reedy = reedy_report(p);
  Json rj;
  rj["arrows_checked"] = reedy.arrows_checked;
  rj["triangles_checked"] = reedy.triangles_checked;
  Json violations = Json::array();
  for (const auto& v : reedy.violations) {
    Json vj;
    vj["kind"] = v.kind;
    vj["witness"] = chain_label(p, v.witness);
    vj["lhs"] = v.lhs;
    vj["rhs"] = v.rhs;
    violations.push_back(std::move(vj));
  }
  rj["violations"] = std::move(violations);
  rj["direct"] = reedy.direct();
  r["reedy"] = std::move(rj);
  r["verdict"] = verdict(reedy.direct());
  o.status = reedy.direct() ? kPass : kCheckFailed;
  write_dot(m, ext_category_dot(p, cat));
  return o;
}

Outcome validate(const Manifest& m) {
  const Input in = load(m.input, m.cap);
  Outcome o{header(m, m.input), kPass};
  Json& r = o.report;
  if (const auto* p = std::get_if<PosetInput>(&in)) {
    const PosetReport pr = validate_poset(p->poset);
    r["kind"] = "poset";
    r["name"] = p->name;
    r["elements"] = p->poset.size();
    r["bounded"] = pr.bounded;
    r["locally_finite"] = pr.locally_finite;
    r["bottom"] = pr.bottom ? Json(p->poset.name(*pr.bottom)) : Json();
    r["top"] = pr.top ? Json(p->poset.name(*pr.top)) : Json();
    r["verdict"] = verdict(true);
    return o;
  }
  const auto& f = std::get<FlowInput>(in);
  const Flow x = saturate(f.presentation, m.budget).flow;
  const auto problems = x.violations();
  r["kind"] = "flow";
  r["name"] = f.name;
  r["states"] = x.states();
  r["violations"] = problems;
  if (problems.empty()) {
    const FlowReport fr = validate_flow(x);
    r["loopless"] = fr.loopless;
    r["initial"] = names(x, fr.initial_states);
    r["final"] = names(x, fr.final_states);
  }
  r["paths"] = path_table(x);
  r["verdict"] = verdict(problems.empty());
  o.status = problems.empty() ? kPass : kCheckFailed;
  write_dot(m, flow_dot(x, f.name));
  return o;
}

Outcome homology_cmd(const Manifest& m) {
  const Input in = load(m.input, m.cap);
  Outcome o{header(m, m.input), kPass};
  Json& r = o.report;
  auto groups = [&](const SimplicialSet& s) {
    if (!m.degree) return to_json(homology_profile(s));
    Json one = Json::array();
    Json g;
    g["degree"] = *m.degree;
    if (*m.degree < 0) fail(Errc::DegreeOutOfRange, "degree must be non-negative");
    const Json h = to_json(homology(normalized_chains(s), *m.degree));
    for (const auto& [k, v] : h.items()) g[k] = v;
    one.push_back(std::move(g));
    return one;
  };
  if (const auto* p = std::get_if<PosetInput>(&in)) {
    r["space"] = "order complex";
    r["groups"] = groups(order_complex(p->poset, m.cap));
    return o;
  }
  const Flow x = to_flow(in, m.cap, m.budget);
  r["space"] = "path spaces";
  Json rows = Json::array();
  for (StateId a = 0; a < x.state_count(); ++a) {
    for (StateId b = 0; b < x.state_count(); ++b) {
      if (!x.has_paths(a, b)) continue;
      Json row;
      row["from"] = x.state_name(a);
      row["to"] = x.state_name(b);
      row["groups"] = groups(x.path(a, b));
      rows.push_back(std::move(row));
    }
  }
  r["path_spaces"] = std::move(rows);
  return o;
}

Outcome branch_cmd(const Manifest& m, Direction dir) {
  const Input in = load(m.input, m.cap);
  const Flow x = to_flow(in, m.cap, m.budget);
  Outcome o{header(m, m.input), kPass};
  Json& r = o.report;
  r["direction"] = std::string(to_string(dir));
  Json states = Json::array();
  for (const auto& s : branching_space(x, dir).states) {
    Json row;
    row["state"] = x.state_name(s.state);
    row["empty"] = s.empty();
    row["classes"] = s.space.size(0);
    row["homology"] = s.empty() ? Json::array() : to_json(s.homology);
    states.push_back(std::move(row));
  }
  r["states"] = std::move(states);
  write_dot(m, flow_dot(x, input_name(in)));
  return o;
}

Outcome ball_check(const Manifest& m) {
  const Input in = load(m.input, m.cap);
  const Flow x = to_flow(in, m.cap, m.budget);
  Outcome o{header(m, m.input), kPass};
  Json& r = o.report;
  const BallReport b = is_full_directed_ball(x);
  Json checks;
  checks["finite"] = b.finite;
  checks["unique_ends"] = b.unique_ends;
  checks["all_between"] = b.all_between;
  checks["loopless"] = b.loopless;
  checks["contractible_paths"] = b.contractible_paths;
  r["checks"] = std::move(checks);
  r["bottom"] = b.bottom ? Json(x.state_name(*b.bottom)) : Json();
  r["top"] = b.top ? Json(x.state_name(*b.top)) : Json();
  r["failures"] = b.failures;
  bool ok = b.ok();
  if (ok) {
    const BottomBranchReport br = bottom_branch_check(x);
    Json bj;
    bj["poset_classes"] = br.poset_classes;
    bj["single_class"] = br.single_class;
    bj["contractible"] = br.contractible;
    bj["homology"] = to_json(br.homology);
    r["bottom_branch"] = std::move(bj);
    ok = br.passed();
  } else {
    r["bottom_branch"] = nullptr;
  }
  r["verdict"] = verdict(ok);
  o.status = ok ? kPass : kCheckFailed;
  write_dot(m, flow_dot(x, input_name(in)));
  return o;
}

struct Subdivided {
  Flow x;
  Flow ball;
  Subdivision sub;
  Json edge;
};

Subdivided subdivide_inputs(const Manifest& m) {
  const std::string& flow_path = m.flow.empty() ? m.input : m.flow;
  if (flow_path.empty()) fail(Errc::SyntaxError, "no flow given (positional or --flow)");
  if (m.ball.empty()) fail(Errc::SyntaxError, "--ball is required");
  if (m.edge.size() != 2) fail(Errc::SyntaxError, "--edge takes two state names");
  Subdivided s;
  s.x = to_flow(load(flow_path, m.cap), m.cap, m.budget);
  s.ball = to_flow(load(m.ball, m.cap), m.cap, m.budget);
  const StateId a = state_named(s.x, m.edge[0]);
  const StateId b = state_named(s.x, m.edge[1]);
  s.sub = t_subdivide(s.x, a, b, static_cast<SimplexId>(m.vertex), s.ball, m.budget);
  s.edge["from"] = m.edge[0];
  s.edge["to"] = m.edge[1];
  s.edge["vertex"] = m.vertex;
  return s;
}

Outcome subdivide(const Manifest& m) {
  const Subdivided s = subdivide_inputs(m);
  Outcome o{header(m, m.flow.empty() ? m.input : m.flow), kPass};
  Json& r = o.report;
  r["ball"] = m.ball;
  r["edge"] = s.edge;
  const Flow& y = s.sub.flow;
  std::vector<StateId> fresh;
  for (StateId t = 0; t < y.state_count(); ++t) {
    if (std::find(s.sub.from_x.states.begin(), s.sub.from_x.states.end(), t) == s.sub.from_x.states.end()) {
      fresh.push_back(t);
    }
  }
  Json result;
  result["states"] = y.states();
  result["new_states"] = names(y, fresh);
  result["paths"] = path_table(y);
  r["result"] = std::move(result);
  write_dot(m, flow_dot(y, "subdivision"));
  return o;
}

Outcome check_invariance_cmd(const Manifest& m) {
  const Subdivided s = subdivide_inputs(m);
  Outcome o{header(m, m.flow.empty() ? m.input : m.flow), kPass};
  Json& r = o.report;
  r["ball"] = m.ball;
  r["edge"] = s.edge;
  const Flow& y = s.sub.flow;
  const InvarianceReport inv = check_invariance(s.x, y, s.sub.from_x);
  Json comparisons = Json::array();
  for (const auto& c : inv.comparisons) {
    Json row;
    row["direction"] = std::string(to_string(c.direction));
    row["state"] = s.x.state_name(c.x_state);
    row["before"] = profile_json(c.before);
    row["after"] = profile_json(c.after);
    row["ok"] = c.ok;
    comparisons.push_back(std::move(row));
  }
  r["comparisons"] = std::move(comparisons);
  Json fresh = Json::array();
  for (const auto& c : inv.new_states) {
    Json row;
    row["direction"] = std::string(to_string(c.direction));
    row["state"] = y.state_name(c.y_state);
    row["profile"] = profile_json(c.profile);
    row["ok"] = c.ok;
    fresh.push_back(std::move(row));
  }
  r["new_states"] = std::move(fresh);
  r["failures"] = inv.failures;
  r["verdict"] = verdict(inv.passed());
  o.status = inv.passed() ? kPass : kCheckFailed;
  write_dot(m, flow_dot(y, "subdivision"));
  return o;
}

Outcome lemma_probe(const Manifest& m) {
  const Input in = load(m.input, m.cap);
  const Poset& p = require_poset(in, m.input);
  Outcome o{header(m, m.input), kPass};
  Json& r = o.report;
  std::vector<std::string> problems;
  std::size_t checks = 0;
  Json joins = Json::array();
  for (Element a : p.topological_order()) {
    for (Element b : p.topological_order()) {
      if (!p.less(a, b)) continue;
      for (Element c : p.topological_order()) {
        if (!p.less(b, c)) continue;
        const JoinProbe j = join_probe(p, a, b, c, m.cap);
        Json row;
        row["interval"] = "[" + p.name(a) + ", " + p.name(c) + "]";
        row["through"] = p.name(b);
        row["join_states"] = j.join_states;
        row["interval_states"] = j.interval_states;
        Json inc = Json::array();
        for (Element e : j.incomparable) inc.push_back(p.name(e));
        row["incomparable"] = std::move(inc);
        row["isomorphic"] = j.isomorphic;
        const std::string where = p.name(a) + " < " + p.name(b) + " < " + p.name(c);
        ++checks;
        if (j.isomorphic && j.join_states != j.interval_states) {
          problems.push_back("join at " + where + " reported isomorphic with different state counts");
        }
        ++checks;
        if (j.incomparable.empty() != (j.join_states == j.interval_states)) {
          problems.push_back("join at " + where + " state count disagrees with the incomparable set");
        }
        joins.push_back(std::move(row));
      }
    }
  }
  r["joins"] = std::move(joins);
  if (p.bounded()) {
    const LatchingComparison l = compare_latching(p, m.cap, m.budget);
    Json lj;
    lj["latching_states"] = l.latching_states;
    lj["poset_states"] = l.poset_states;
    lj["components"] = l.components;
    lj["isomorphic"] = l.isomorphic;
    lj["injective_on_states"] = l.map_injective_on_states;
    lj["surjective_on_states"] = l.map_surjective_on_states;
    lj["witnesses"] = l.witnesses;
    r["latching"] = std::move(lj);
    ++checks;
    if (l.isomorphic && l.latching_states != l.poset_states) {
      problems.push_back("latching object reported isomorphic with different state counts");
    }
    ++checks;
    if (l.map_injective_on_states && l.map_surjective_on_states && l.latching_states != l.poset_states) {
      problems.push_back("bijective state map between sets of different sizes");
    }
    ++checks;
    if (!l.isomorphic && l.witnesses.empty()) problems.push_back("negative verdict without witnesses");
  } else {
    r["latching"] = nullptr;
  }
  Json cj;
  cj["checks"] = checks;
  cj["problems"] = problems;
  r["consistency"] = std::move(cj);
  r["verdict"] = problems.empty() ? "CONSISTENT" : "INCONSISTENT";
  o.status = problems.empty() ? kPass : kCheckFailed;
  return o;
}

}  // namespace

Outcome execute(const Manifest& m) {
  if (m.cap < 1 || m.cap > kMaxCap) fail(Errc::DegreeOutOfRange, "--dim-cap must lie in 1.." + std::to_string(kMaxCap));
  if (m.budget < 1) fail(Errc::BudgetExceeded, "--budget must be at least 1");
  if (m.command == "poset-report") return poset_report(m);
  if (m.command == "validate") return validate(m);
  if (m.command == "homology") return homology_cmd(m);
  if (m.command == "branch") return branch_cmd(m, Direction::Minus);
  if (m.command == "merge") return branch_cmd(m, Direction::Plus);
  if (m.command == "ball-check") return ball_check(m);
  if (m.command == "subdivide") return subdivide(m);
  if (m.command == "check-invariance") return check_invariance_cmd(m);
  if (m.command == "lemma-probe") return lemma_probe(m);
  fail(Errc::SyntaxError, "unknown command '" + m.command + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Manifest m;
  CLI::App app{"Directed homotopy toolkit for finite flows and posets", "flowcalc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "flowcalc 0.1.0");
  std::string format = "text";
  std::optional<std::size_t> budget;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--dim-cap", m.cap, "Highest simplicial level kept")->capture_default_str();
    sub->add_option("--budget", budget, "Word budget per level (env FLOWCALC_BUDGET)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--dot", m.dot, "Write a Graphviz file");
    sub->add_option("--seed", m.seed, "Seed recorded in the report");
  };
  auto with_input = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("input", m.input, "Poset or flow file");
    if (required) opt->required();
  };
  struct Spec {
    const char* name;
    const char* help;
  };
  const Spec simple[] = {
      {"poset-report", "Chain lengths, chain category and Reedy degrees of a poset"},
      {"validate", "Parse and validate a poset or flow file"},
      {"branch", "Per-state branching homology"},
      {"merge", "Per-state merging homology"},
      {"ball-check", "Full directed ball conditions and the bottom branching check"},
      {"lemma-probe", "Join and latching-object comparisons on a poset"},
  };
  for (const auto& s : simple) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    with_input(sub, true);
  }
  CLI::App* hom = app.add_subcommand("homology", "Homology of an order complex or of path spaces");
  common(hom);
  with_input(hom, true);
  hom->add_option("--degree", m.degree, "Report a single degree");
  for (const char* name : {"subdivide", "check-invariance"}) {
    CLI::App* sub = app.add_subcommand(
        name, std::string(name) == "subdivide" ? "Replace a level-0 path by a full directed ball"
                                               : "Compare branching homology before and after subdivision");
    common(sub);
    with_input(sub, false);
    sub->add_option("--flow", m.flow, "Flow (or poset) file to subdivide");
    sub->add_option("--edge", m.edge, "Source and target state of the path")->expected(2)->required();
    sub->add_option("--vertex", m.vertex, "Which level-0 path between them")->capture_default_str();
    sub->add_option("--ball", m.ball, "Ball as a poset or flow file")->required();
  }

  std::vector<std::string> argv_storage{"flowcalc"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "flowcalc: " << e.what() << '\n';
    return kInputError;
  }
  for (auto* sub : app.get_subcommands()) m.command = sub->get_name();
  m.format = format == "json" ? Format::Json : Format::Text;

  try {
    if (budget) {
      m.budget = *budget;
    } else if (const char* env = std::getenv("FLOWCALC_BUDGET"); env && *env) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(env, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || env[used] != '\0') fail(Errc::SyntaxError, "FLOWCALC_BUDGET is not a number");
      m.budget = static_cast<std::size_t>(v);
    }
    const Outcome o = execute(m);
    out << render(o.report, m.format);
    return o.status;
  } catch (const Error& e) {
    err << "flowcalc: " << e.what() << '\n';
    if (m.format == Format::Json) {
      Json j;
      j["command"] = m.command;
      j["error"]["code"] = std::string(to_string(e.code()));
      j["error"]["message"] = e.what();
      out << render(j, m.format);
    }
    return kInputError;
  }
}

}  // namespace flowcalc::cli
