#include <catch2/catch_amalgamated.hpp>
#include <fstream>
#include <sstream>

#include "symscan/model.hpp"

using namespace symscan;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(SYMSCAN_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int declared_vars(const Model& m) {
  int n = 0;
  for (auto& v : m.variables)
    if (!v.anonymous) ++n;
  return n;
}

}  // namespace

TEST_CASE("fig2 builds with the expected structure") {
  Model m = build_model(read_fixture("fig2.fg"));
  CHECK(declared_vars(m) == 5);
  auto np = non_prior_factors(m);
  REQUIRE(np.size() == 2);
  CHECK(np[0]->kind == "plus");
  CHECK(np[1]->kind == "times");
  int priors = 0;
  for (auto& f : m.factors) priors += f.is_prior;
  CHECK(priors == 3);
  CHECK(m.var("th5").obs == Observation::ObservedUnknown);
}

TEST_CASE("empty model") {
  Model m = build_model("model empty {}");
  CHECK(m.variables.empty());
  CHECK(m.factors.empty());
  CHECK(non_prior_factors(m).empty());
}

TEST_CASE("undeclared variable is reported by name") {
  try {
    build_model("model m { real a; a = copy(w); }");
    FAIL("expected UndeclaredVariable");
  } catch (const AnalysisError& e) {
    CHECK(e.code() == ErrorCode::UndeclaredVariable);
    CHECK(e.detail().find("'w'") != std::string::npos);
  }
}

TEST_CASE("arity mismatches are rejected for cataloged kinds") {
  CHECK_THROWS_AS(build_model("model m { real a; real c; c = plus(a); }"),
                  AnalysisError);
  // Unknown kinds accept any arity and only produce a lint.
  Model m = build_model("model m { real a; real c; c = frobnicate(a, a, a); }");
  REQUIRE(m.lints.size() == 1);
  CHECK(m.lints[0].find("frobnicate") != std::string::npos);
}

TEST_CASE("priors-only model yields no non-prior factors") {
  Model m = build_model(
      "model m { real a; real b; a ~ gaussian(0, 1); b ~ gamma(2, 2); }");
  CHECK(non_prior_factors(m).empty());
}

TEST_CASE("distribution priorness follows parameters and modifiers") {
  Model m = build_model(read_fixture("probit_noise_var.fg"));
  for (auto* f : non_prior_factors(m)) {
    // The explicit-noise factor has constant parameters, hence stays a prior
    // unless overridden; it must not appear here.
    bool writes_u = m.variables[f->output().var].name == "u";
    CHECK_FALSE(writes_u);
  }
  // Overrides flip the default in both directions.
  Model m2 = build_model(
      "model m { real a; real b; a ~ gaussian(0, 1) likelihood; "
      "b ~ gaussian(a, 1) prior; }");
  CHECK(m2.factors[0].is_prior == false);
  CHECK(m2.factors[1].is_prior == true);
}

TEST_CASE("gate contexts flatten and conditions must be boolean") {
  Model m = build_model(
      "model m { bool b; bool c; real x; real y; b ~ bernoulli(1/2); "
      "c ~ bernoulli(1/2); if (b) { if (c) { x = copy(y); } } }");
  const FactorInstance* gated = nullptr;
  for (auto& f : m.factors)
    if (f.kind == "copy") gated = &f;
  REQUIRE(gated);
  REQUIRE(gated->gate_context.size() == 2);
  CHECK(gated->gate_context[0].cond_var == "b");
  CHECK(gated->gate_context[1].cond_var == "c");

  CHECK_THROWS_AS(
      build_model("model m { real b; real x; real y; if (b) { x = copy(y); } }"),
      AnalysisError);
}

TEST_CASE("gate temporary lint fires only for write-write pairs") {
  Model bad = build_model(R"(
model m {
  bool b; real x; real y1; real y2; real one;
  b ~ bernoulli(1/2);
  if (b) { x ~ gaussian(0, 1); y1 = plus(x, 1); }
  else   { x ~ gaussian(0, 1); y2 = square(x); }
})");
  bool has_lint = false;
  for (auto& l : bad.lints) has_lint |= l.find("'x'") != std::string::npos;
  CHECK(has_lint);

  // Reading the shared variable outside the gate silences the lint.
  Model good = build_model(R"(
model m {
  bool b; real x; real y1; real y2; real w;
  b ~ bernoulli(1/2);
  if (b) { x ~ gaussian(0, 1); y1 = plus(x, 1); }
  else   { x ~ gaussian(0, 1); y2 = square(x); }
  w = copy(x);
})");
  for (auto& l : good.lints) CHECK(l.find("'x'") == std::string::npos);
}

TEST_CASE("unroll replicates by index tuples") {
  Model m = build_model(read_fixture("collabfilter.fg"));
  GroundModel g = unroll(m, {{"n", 2}, {"m", 2}, {"k", 2}});
  int u_count = 0, v_count = 0, times_count = 0, sum_count = 0;
  for (auto& gv : g.vars) {
    const std::string& base = m.variables[gv.model_var].name;
    if (base == "u") ++u_count;
    if (base == "v") ++v_count;
  }
  for (auto& gf : g.factors) {
    if (gf.kind == "times") ++times_count;
    if (gf.kind == "nary_sum") ++sum_count;
  }
  CHECK(u_count == 4);
  CHECK(v_count == 4);
  CHECK(times_count == 8);
  CHECK(sum_count == 4);
  // The sum aggregates two elements per instance.
  for (auto& gf : g.factors)
    if (gf.kind == "nary_sum") CHECK(gf.slots[0].elems.size() == 2);
}

TEST_CASE("unroll of a scalar model is the model itself") {
  Model m = build_model(read_fixture("fig2.fg"));
  GroundModel g = unroll(m, {});
  CHECK(g.factors.size() == m.factors.size());
  int declared = 0;
  for (auto& gv : g.vars)
    if (!m.variables[gv.model_var].anonymous) ++declared;
  CHECK(declared == 5);
}

TEST_CASE("unroll with all ranges of size one gives one instance each") {
  Model m = build_model(read_fixture("collabfilter.fg"));
  GroundModel g = unroll(m, {{"n", 1}, {"m", 1}, {"k", 1}});
  CHECK(g.factors.size() == m.factors.size());
}

TEST_CASE("unroll preserves the set of factor kinds") {
  for (const char* fx : {"fig2.fg", "fig4.fg", "collabfilter.fg",
                         "difficulty.fg", "probit.fg"}) {
    Model m = build_model(read_fixture(fx));
    GroundModel g = unroll(m, {{"n", 2}, {"m", 2}, {"k", 2}, {"j", 2},
                               {"p", 2}, {"q", 2}, {"ans", 2}});
    std::set<std::string> before, after;
    for (auto& f : m.factors) before.insert(f.kind);
    for (auto& f : g.factors) after.insert(f.kind);
    CHECK(before == after);
  }
}

TEST_CASE("bad sizes raise MissingRangeSize") {
  Model m = build_model(read_fixture("collabfilter.fg"));
  CHECK_THROWS_AS(unroll(m, {{"n", 0}}), AnalysisError);
}

TEST_CASE("index validation") {
  CHECK_THROWS_AS(build_model("model m { range r = 3; real x[r]; real y; "
                              "y = copy(x); }"),
                  AnalysisError);  // missing index
  CHECK_THROWS_AS(build_model("model m { range r = 3; range s = 3; "
                              "real x[r]; real y; y = copy(x[s]); }"),
                  AnalysisError);  // wrong range symbol
  CHECK_THROWS_AS(build_model("model m { range r = 3; real x[r]; "
                              "observe x[0]; }"),
                  AnalysisError);  // element observation
  // Random index: discrete over the right range is accepted.
  Model m = build_model(
      "model m { range r = 3; real x[r]; discrete(r) z; real y; "
      "z ~ uniform_discrete(); y = copy(x[z]); }");
  const FactorInstance* f = nullptr;
  for (auto& fi : m.factors)
    if (fi.kind == "copy") f = &fi;
  REQUIRE(f);
  CHECK(f->args[0].indices[0].kind == IndexKind::RandomVar);
}
