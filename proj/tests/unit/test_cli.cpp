#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "flowcalc/cli/app.hpp"
#include "flowcalc/cli/input.hpp"
#include "flowcalc/error.hpp"
#include "flowcalc/isomorphism.hpp"

using namespace flowcalc;
using namespace flowcalc::cli;

namespace {

const std::string kData = FLOWCALC_TEST_DATA;

std::string data(const std::string& name) { return kData + "/" + name; }

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::SyntaxError;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("two-branch poset file") {
  std::ifstream in(data("branches.poset"));
  std::stringstream s;
  s << in.rdbuf();
  const PosetInput p = parse_poset(s.str(), "branches.poset");
  CHECK(p.name == "branches");
  CHECK(p.poset.size() == 5);
  CHECK(p.poset.covering_relations().size() == 5);
}

TEST_CASE("parse errors carry positions and codes") {
  CHECK(code_of([] { parse_input("", "empty"); }) == Errc::SyntaxError);
  CHECK(message_of([] { parse_input("\n# nothing\n", "empty"); }).find("empty:1:1:") != std::string::npos);
  CHECK(code_of([] { parse_poset("poset p\nelem a b a\n"); }) == Errc::DuplicateIdentifier);
  CHECK(message_of([] { parse_poset("poset p\nelem a b a\n", "f"); }).find("f:2:10:") != std::string::npos);
  CHECK(code_of([] { parse_poset("poset p\nelem a\nrel a < z\n"); }) == Errc::DanglingReference);
  CHECK(code_of([] { parse_poset("poset p\nelem a b\nrel a b\n"); }) == Errc::SyntaxError);
  CHECK(code_of([] { parse_poset("poset p\nelem a b\nrel a < b\nrel b < a\n"); }) ==
        Errc::PartialOrderViolation);
  CHECK(code_of([] { parse_flow("flow f\nstate a b\ncell u : a -> c dim 0\n"); }) == Errc::DanglingReference);
  CHECK(code_of([] {
          parse_flow("flow f\nstate a b\ncell u : a -> b dim 0\ncell h : a -> b dim 1 faces d0=u d1=v\n");
        }) == Errc::DanglingReference);
  CHECK(code_of([] { parse_flow("flow f\nstate a b\ncell u : a -> b dim 0\ncell h : a -> b dim 1 faces d0=u\n"); }) ==
        Errc::ArityMismatch);
  CHECK(code_of([] {
          parse_flow("flow f\nstate a b\ncell u : a -> b dim 0\ncell h : a -> b dim 1 faces d0=u d2=u\n");
        }) == Errc::ArityMismatch);
  CHECK(code_of([] { parse_flow("flow f\nstate a b\ncell u : a -> b dim 4\n"); }) == Errc::ArityMismatch);
  CHECK(code_of([] { parse_flow("flow f\nstate a a\n"); }) == Errc::DuplicateIdentifier);
  CHECK(code_of([] { parse_flow("flow f\nstate a b\ncell u a -> b dim 0\n"); }) == Errc::SyntaxError);
  CHECK(code_of([] { parse_input("graph g\n"); }) == Errc::SyntaxError);
  // A 2-cell whose boundary cannot close up.
  CHECK(code_of([] {
          parse_flow(
              "flow f\nstate a b\ncell u : a -> b dim 0\ncell w : a -> b dim 0\n"
              "cell e : a -> b dim 1 faces d0=w d1=u\ncell t : a -> b dim 2 faces d0=e d1=e d2=e\n");
        }) == Errc::MalformedSimplicialSet);
}

TEST_CASE("flow files build the expected path spaces") {
  auto load = [](const std::string& name) {
    std::ifstream in(data(name));
    std::stringstream s;
    s << in.rdbuf();
    return to_flow(parse_input(s.str(), name, 3), 3, kDefaultBudget);
  };
  CHECK(isomorphic(load("segment.flow"), directed_segment(3)));
  CHECK(isomorphic(load("circle.flow"), glob(circle(3))));
  CHECK(isomorphic(load("rp2.flow"), glob(projective_plane(3))));
  const Flow sq = load("square.flow");
  CHECK(sq.path(0, 3).size(0) == 1);
}

TEST_CASE("relations lift lower cells") {
  const FlowInput f = parse_flow(
      "flow f\nstate a b\ncell u : a -> b dim 0\ncell w : a -> b dim 0\n"
      "cell e : a -> b dim 1 faces d0=w d1=u\nrelation u = w\n");
  REQUIRE(f.presentation.relations.size() == 1);
  CHECK(f.presentation.relations[0].first.level == 0);
  const Flow x = saturate(f.presentation).flow;
  CHECK(x.path(0, 1).size(0) == 1);
  CHECK(x.path(0, 1).nondegenerate(1).size() == 1);
}

TEST_CASE("command exit codes") {
  CHECK(call({"poset-report", data("branches.poset")}).status == kPass);
  CHECK(call({"poset-report", data("antichain.poset")}).status == kCheckFailed);
  CHECK(call({"check-invariance", "--flow", data("segment.flow"), "--edge", "0", "1", "--ball",
              data("branches.poset")})
            .status == kPass);
  CHECK(call({"ball-check", data("circle.flow")}).status == kCheckFailed);
  CHECK(call({"ball-check", data("branches.poset")}).status == kPass);
  const Run deg = call({"homology", data("circle.flow"), "--degree", "3"});
  CHECK(deg.status == kInputError);
  CHECK(deg.err.find("DegreeOutOfRange") != std::string::npos);
  CHECK(call({"homology", data("circle.flow"), "--degree", "1"}).status == kPass);
  CHECK(call({"validate", data("dangling.flow")}).status == kInputError);
  CHECK(call({"validate", data("missing.flow")}).status == kInputError);
  CHECK(call({"frobnicate"}).status == kInputError);
  CHECK(call({"subdivide", data("fork.flow"), "--edge", "0", "zz", "--ball", data("branches.poset")}).status ==
        kInputError);
  CHECK(call({"lemma-probe", data("branches.poset")}).status == kPass);
  CHECK(call({"branch", data("fork.flow")}).status == kPass);
  CHECK(call({"--help"}).status == kPass);
}

TEST_CASE("json reports round-trip byte for byte") {
  const std::vector<std::vector<std::string>> commands = {
      {"poset-report", data("branches.poset")},
      {"validate", data("square.flow")},
      {"validate", data("branches.poset")},
      {"homology", data("rp2.flow")},
      {"homology", data("branches.poset")},
      {"branch", data("branches.poset")},
      {"merge", data("square.flow")},
      {"ball-check", data("branches.poset")},
      {"subdivide", data("fork.flow"), "--edge", "0", "a", "--ball", data("branches.poset")},
      {"check-invariance", data("fork.flow"), "--edge", "0", "b", "--ball", data("branches.poset")},
      {"lemma-probe", data("branches.poset")},
      {"homology", data("circle.flow"), "--degree", "5"},
  };
  for (auto args : commands) {
    args.push_back("--format");
    args.push_back("json");
    const Run r = call(args);
    CAPTURE(args[0]);
    const Json parsed = Json::parse(r.out);
    CHECK(parsed.dump(2) + "\n" == r.out);
    CHECK(parsed["command"] == args[0]);
  }
}

TEST_CASE("poset report lists the chain category") {
  const Run r = call({"poset-report", data("branches.poset"), "--format", "json"});
  const Json j = Json::parse(r.out);
  CHECK(j["ext"]["objects"].size() == 5);
  CHECK(j["ext"]["arrows"].size() == 5);
  CHECK(j["ext"]["terminal"] == "(0, 1)");
  CHECK(j["reedy"]["direct"] == true);
  CHECK(j["ell"].size() == 8);
}

TEST_CASE("budget comes from the flag or the environment") {
  ::setenv("FLOWCALC_BUDGET", "1", 1);
  const Run tight = call({"validate", data("square.flow")});
  CHECK(tight.status == kInputError);
  CHECK(tight.err.find("BudgetExceeded") != std::string::npos);
  CHECK(call({"validate", data("square.flow"), "--budget", "1000"}).status == kPass);
  ::setenv("FLOWCALC_BUDGET", "lots", 1);
  CHECK(call({"validate", data("square.flow")}).status == kInputError);
  ::unsetenv("FLOWCALC_BUDGET");
  CHECK(call({"validate", data("square.flow")}).status == kPass);
}

TEST_CASE("dot export") {
  const std::string path = "flowcalc_test_ext.dot";
  CHECK(call({"poset-report", data("branches.poset"), "--dot", path}).status == kPass);
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  CHECK(s.str().rfind("digraph ext {", 0) == 0);
  CHECK(s.str().find("\"(0, A, B, 1)\"") != std::string::npos);
  std::remove(path.c_str());
}
