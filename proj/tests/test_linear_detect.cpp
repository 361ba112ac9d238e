#include <catch2/catch_amalgamated.hpp>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "symscan/linear_detect.hpp"

using namespace symscan;
using namespace symscan::testing;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(SYMSCAN_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Model fixture_model(const std::string& name) {
  return build_model(read_fixture(name));
}

using Coeffs = std::map<std::string, Rat>;

}  // namespace

TEST_CASE("fig2 scaling: the single family from the worked example") {
  auto res = detect_scaling(fixture_model("fig2.fg"));
  REQUIRE(res.families.size() == 1);
  const auto& f = res.families[0];
  CHECK(f.coefficients ==
        Coeffs{{"th1", Rat(1)}, {"th2", Rat(1)}, {"th3", Rat(1)}, {"th4", Rat(-1)}});
  CHECK(f.bound == Bound::Exact);
  CHECK(f.replicated_over.empty());
}

TEST_CASE("difficulty scaling exponents") {
  auto res = detect_scaling(fixture_model("difficulty.fg"));
  REQUIRE(res.families.size() == 1);
  CHECK(res.families[0].coefficients ==
        Coeffs{{"a", Rat(1)},
               {"d", Rat(1)},
               {"tau", Rat(-2)},
               {"adv", Rat(1)},
               {"advn", Rat(1)}});
  CHECK(res.families[0].replicated_over.empty());
  CHECK(detect_signflip(fixture_model("difficulty.fg")).families.empty());
}

TEST_CASE("probit has no scaling or sign-flip families") {
  Model m = fixture_model("probit.fg");
  CHECK(detect_scaling(m).families.empty());
  CHECK(detect_signflip(m).families.empty());
}

TEST_CASE("probit with explicit noise gains the joint scaling family") {
  auto res = detect_scaling(fixture_model("probit_noise_var.fg"));
  REQUIRE(res.families.size() == 1);
  CHECK(res.families[0].coefficients ==
        Coeffs{{"w", Rat(1)}, {"s", Rat(1)}, {"u", Rat(1)}, {"sp", Rat(1)}});
  CHECK(res.families[0].replicated_over.empty());
}

TEST_CASE("collaborative filtering scaling and sign-flip replicate over k") {
  Model m = fixture_model("collabfilter.fg");
  auto sc = detect_scaling(m);
  REQUIRE(sc.families.size() == 1);
  CHECK(sc.families[0].coefficients == Coeffs{{"u", Rat(1)}, {"v", Rat(-1)}});
  CHECK(sc.families[0].replicated_over == std::set<std::string>{"k"});
  CHECK(sc.families[0].bound == Bound::Exact);

  auto sf = detect_signflip(m);
  REQUIRE(sf.families.size() == 1);
  CHECK(sf.families[0].coefficients == Coeffs{{"u", Rat(1)}, {"v", Rat(1)}});
  CHECK(sf.families[0].replicated_over == std::set<std::string>{"k"});
}

TEST_CASE("sign-flip on fig2 with a nonzero observation") {
  Model m = build_model(
      "model m { real th1; real th2; real th3; real th4; real th5; "
      "th1 ~ gaussian(0, 1); th2 ~ gaussian(0, 1); th4 ~ gaussian(0, 1); "
      "th3 = plus(th1, th2); th5 = times(th3, th4); observe th5 = 2; }");
  auto res = detect_signflip(m);
  REQUIRE(res.families.size() == 1);
  CHECK(res.families[0].coefficients ==
        Coeffs{{"th1", Rat(1)}, {"th2", Rat(1)}, {"th3", Rat(1)}, {"th4", Rat(1)}});

  // Brute force over all 32 assignments of the declared bits against the
  // instantiated rows restricted to declared variables.
  const auto& sys = res.system;
  std::vector<int> declared_unknowns;
  for (size_t u = 0; u < sys.unknown_vars.size(); ++u)
    if (!m.variables[sys.unknown_vars[u]].anonymous)
      declared_unknowns.push_back(int(u));
  REQUIRE(declared_unknowns.size() == 5);
  std::vector<std::vector<uint8_t>> solutions;
  for (uint32_t bits = 0; bits < 32; ++bits) {
    std::map<int, uint8_t> assign;
    for (size_t i = 0; i < declared_unknowns.size(); ++i)
      assign[declared_unknowns[i]] = (bits >> i) & 1;
    bool ok = true;
    for (const auto& row : sys.rows) {
      bool declared_only = true;
      uint8_t parity = 0;
      for (auto& [u, c] : row.coeffs) {
        if (!assign.count(u)) declared_only = false;
        mpz_class num = c.get_num();
        if (assign.count(u) && mpz_odd_p(num.get_mpz_t())) parity ^= assign[u];
      }
      if (declared_only && parity != 0) ok = false;
    }
    if (ok) {
      std::vector<uint8_t> v;
      for (int u : declared_unknowns) v.push_back(assign[u]);
      solutions.push_back(std::move(v));
    }
  }
  // Exactly the zero vector and the reported family, in declaration order
  // (th1..th5).
  REQUIRE(solutions.size() == 2);
  CHECK(solutions[0] == std::vector<uint8_t>{0, 0, 0, 0, 0});
  CHECK(solutions[1] == std::vector<uint8_t>{1, 1, 1, 1, 0});
}

TEST_CASE("constrain_nonneg pins the sign bit") {
  Model m = build_model(
      "model m { real x; real y; bool ok; x ~ gaussian(0, 1); "
      "y = copy(x); ok = constrain_nonneg(y); }");
  auto res = detect_signflip(m);
  for (auto& fam : res.families) {
    CHECK(fam.coefficients.count("x") == 0);
    CHECK(fam.coefficients.count("y") == 0);
  }
}

TEST_CASE("gate branches both constrain the shared output") {
  Model m = fixture_model("gate_scale.fg");
  auto res = detect_scaling(m);
  REQUIRE(res.families.size() == 1);
  CHECK(res.families[0].coefficients ==
        Coeffs{{"x", Rat(1)}, {"y", Rat(1)}, {"z", Rat(1)}});

  // Both branch rows are present, and dropping either strictly enlarges the
  // null space.
  int then_row = -1, else_row = -1;
  for (size_t i = 0; i < res.system.rows.size(); ++i) {
    const auto& d = res.system.rows[i].description;
    if (d.find("d(y)") != std::string::npos) then_row = int(i);
    if (d.find("d(z)") != std::string::npos) else_row = int(i);
  }
  REQUIRE(then_row >= 0);
  REQUIRE(else_row >= 0);
  for (int drop : {then_row, else_row}) {
    LinearSystem reduced = res.system;
    reduced.rows.erase(reduced.rows.begin() + drop);
    CHECK(nullspace_Q(reduced.matrix()).size() ==
          nullspace_Q(res.system.matrix()).size() + 1);
  }
}

TEST_CASE("free variable yields the trivial scaling family") {
  Model m = build_model("model m { real x; }");
  auto res = detect_scaling(m);
  REQUIRE(res.families.size() == 1);
  CHECK(res.families[0].coefficients == Coeffs{{"x", Rat(1)}});
  auto sf = detect_signflip(m);
  REQUIRE(sf.families.size() == 1);
}

TEST_CASE("observed zeros stay scalable") {
  Model m = build_model(
      "model m { real a; real c; a ~ gaussian(0, 1); c = plus(a, 0); "
      "observe c = 0; }");
  auto res = detect_scaling(m);
  REQUIRE(res.families.size() == 1);
  CHECK(res.families[0].coefficients == Coeffs{{"a", Rat(1)}, {"c", Rat(1)}});
  // A gaussian with zero mean scales with its variance.
  Model m2 = build_model(
      "model m2 { real x; real+ v; v ~ gamma(2, 2); "
      "x ~ gaussian(0, v) likelihood; observe x; }");
  CHECK(detect_scaling(m2).families.empty());  // nonzero data pins the chain
  Model m3 = build_model(
      "model m3 { real x; real+ v; v ~ gamma(2, 2); "
      "x ~ gaussian(0, v) likelihood; }");
  auto res3 = detect_scaling(m3);
  REQUIRE(res3.families.size() == 1);
  CHECK(res3.families[0].coefficients == Coeffs{{"x", Rat(1)}, {"v", Rat(2)}});
}

TEST_CASE("literal index pins give subset and superset bounds") {
  Model m = build_model(
      "model m { range r = 3; real x[r]; real y; x[r] ~ gaussian(0, 1); "
      "y = copy(x[1]); observe y; }");
  auto res = detect_scaling(m);
  REQUIRE(res.families.size() == 1);
  CHECK(res.families[0].bound == Bound::Superset);
  CHECK(res.families[0].coefficients == Coeffs{{"x", Rat(1)}});
}

TEST_CASE("prior factors contribute zero rows") {
  for (const char* fx : {"fig2.fg", "difficulty.fg", "collabfilter.fg"}) {
    Model m = fixture_model(fx);
    Model stripped = m;
    stripped.factors.clear();
    for (auto& f : m.factors)
      if (!f.is_prior) stripped.factors.push_back(f);
    for (SymClass cls : {SymClass::Scaling, SymClass::SignFlip}) {
      auto a = build_linear_system(m, cls);
      auto b = build_linear_system(stripped, cls);
      REQUIRE(a.rows.size() == b.rows.size());
      for (size_t i = 0; i < a.rows.size(); ++i)
        CHECK(a.rows[i].coeffs == b.rows[i].coeffs);
    }
  }
}

TEST_CASE("array-level completeness against the elimination oracle") {
  for (const char* fx : {"fig2.fg", "fig4.fg", "difficulty.fg",
                         "collabfilter.fg", "probit.fg", "gate_scale.fg"}) {
    Model m = fixture_model(fx);
    auto res = detect_scaling(m);
    const auto& sys = res.system;
    std::vector<std::vector<Rat>> rows;
    for (auto& r : sys.rows) {
      std::vector<Rat> row(sys.unknown_vars.size(), Rat(0));
      for (auto& [u, c] : r.coeffs) row[u] = c;
      rows.push_back(std::move(row));
    }
    for (auto& v : res.raw_kernel) CHECK(oracle_in_nullspace_Q(rows, v));
    CHECK(int(res.raw_kernel.size()) + oracle_rank_Q(rows) ==
          int(sys.unknown_vars.size()));
  }
}
