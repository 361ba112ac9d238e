#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "symscan/parser.hpp"

using namespace symscan;

TEST_CASE("basic model parses into the expected statement list") {
  auto m = parse(
      "model m { real a; real b; real c; c = plus(a, b); observe c = 3; }");
  CHECK(m.name == "m");
  REQUIRE(m.statements.size() == 5);
  CHECK(std::holds_alternative<VarDeclStmt>(m.statements[0]));
  CHECK(std::holds_alternative<VarDeclStmt>(m.statements[1]));
  CHECK(std::holds_alternative<VarDeclStmt>(m.statements[2]));
  auto& f = std::get<FactorStmtNode>(m.statements[3]);
  CHECK(f.kind_name == "plus");
  CHECK(f.args.size() == 2);
  CHECK_FALSE(f.is_distribution);
  auto& o = std::get<ObserveStmt>(m.statements[4]);
  REQUIRE(o.value.has_value());
  CHECK(o.value->value == Rat(3));
}

TEST_CASE("missing comma yields a located syntax error") {
  try {
    parse("model m { real a; real b; real c; c = plus(a b); }");
    FAIL("expected a syntax error");
  } catch (const AnalysisError& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
    CHECK(e.detail().find("','") != std::string::npos);
    CHECK(e.detail().find("'b'") != std::string::npos);
    CHECK(e.span().line == 1);
  }
}

TEST_CASE("duplicate declarations are rejected") {
  CHECK_THROWS_AS(parse("model m { real a; real a; }"), AnalysisError);
  try {
    parse("model m { range r = 3; bool r; }");
    FAIL("expected duplicate declaration");
  } catch (const AnalysisError& e) {
    CHECK(e.code() == ErrorCode::DuplicateDeclaration);
  }
}

TEST_CASE("types, arrays, gates, modifiers, literals parse") {
  auto m = parse(R"(
model demo {
  range k = 4;
  real+ v;
  discrete(k) y;
  real x[k];
  bool b;
  b ~ bernoulli(1/2);
  x[k] ~ gaussian(0, 1) prior;
  v ~ gamma(2, 0.25) likelihood;
  if (b) { y ~ uniform_discrete(); } else { y ~ uniform_discrete(); }
  observe y;
}
)");
  REQUIRE(m.statements.size() == 10);
  auto& v = std::get<VarDeclStmt>(m.statements[1]);
  CHECK(v.kind == ValueKind::NonNegReal);
  auto& y = std::get<VarDeclStmt>(m.statements[2]);
  CHECK(y.kind == ValueKind::Discrete);
  CHECK(y.discrete_range == "k");
  auto& g = std::get<FactorStmtNode>(m.statements[6]);
  CHECK(g.modifier == PriorMod::Prior);
  auto& gm = std::get<FactorStmtNode>(m.statements[7]);
  CHECK(gm.modifier == PriorMod::Likelihood);
  CHECK(gm.args[1].literal.value == Rat(1, 4));
  auto& gate = std::get<IfStmtNode>(m.statements[8]);
  CHECK(gate.condition.name == "b");
  CHECK(gate.then_block.size() == 1);
  CHECK(gate.else_block.size() == 1);
}

TEST_CASE("negative and fractional literals") {
  auto m = parse("model m { real a; real c; c = plus(a, -1/2); }");
  auto& f = std::get<FactorStmtNode>(m.statements[2]);
  CHECK(f.args[1].literal.value == Rat(-1, 2));
}

TEST_CASE("pretty printing round-trips") {
  std::string src = R"(
model roundtrip {
  range k = 3;
  real u[k];
  real+ s;
  bool b;
  discrete(k) y;
  u[k] ~ gaussian(0, 1);
  b ~ bernoulli(1/2) prior;
  if (b) { s = square(u[1]); } else { s = copy(u[2]); }
  y = argmax(u[k]);
  observe y;
  observe s = 0;
}
)";
  auto m1 = parse(src);
  std::string printed = pretty_print(m1);
  auto m2 = parse(printed);
  CHECK(m1.name == m2.name);
  CHECK(block_equal(m1.statements, m2.statements));
  CHECK(pretty_print(m2) == printed);
}

TEST_CASE("parse is total on malformed inputs") {
  // Random garbage either parses or raises AnalysisError; nothing else.
  std::mt19937_64 rng(7);
  const std::string alphabet = "modelrange{}()[];=~,.+-/0123456789abz \n";
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<size_t> len(0, 60),
        pick(0, alphabet.size() - 1);
    std::string s = "model m {";
    size_t n = len(rng);
    for (size_t i = 0; i < n; ++i) s += alphabet[pick(rng)];
    s += "}";
    try {
      parse(s);
    } catch (const AnalysisError&) {
      // fine: located error
    }
  }
  SUCCEED();
}
