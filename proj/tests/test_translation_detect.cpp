#include <catch2/catch_amalgamated.hpp>
#include <fstream>
#include <sstream>

#include "symscan/translation_detect.hpp"

using namespace symscan;

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

std::map<std::string, std::string> offset_strings(const TranslationFamily& f) {
  std::map<std::string, std::string> out;
  for (auto& [name, c] : f.offsets) out[name] = c.str();
  return out;
}

using Offsets = std::map<std::string, std::string>;

}  // namespace

TEST_CASE("fig4 translation: exactly the two displayed families") {
  auto res = detect_translation(fixture_model("fig4.fg"));
  REQUIRE(res.families.size() == 2);
  CHECK(res.branch_count <= 4);

  std::vector<Offsets> got;
  for (auto& f : res.families) {
    CHECK(f.bound == Bound::Exact);
    got.push_back(offset_strings(f));
  }
  Offsets fam_a{{"th4", "1"}, {"th5", "th3"}, {"th6", "th3"}};
  Offsets fam_b{{"th2", "1"},
                {"th3", "th1"},
                {"th5", "th1*th4"},
                {"th6", "th1*th4"}};
  CHECK(std::find(got.begin(), got.end(), fam_a) != got.end());
  CHECK(std::find(got.begin(), got.end(), fam_b) != got.end());
}

TEST_CASE("fig2 translation balances the two plus inputs") {
  auto res = detect_translation(fixture_model("fig2.fg"));
  REQUIRE(res.families.size() == 1);
  CHECK(offset_strings(res.families[0]) == Offsets{{"th1", "1"}, {"th2", "-1"}});
}

TEST_CASE("difficulty translation: common shift of ability and difficulty") {
  auto res = detect_translation(fixture_model("difficulty.fg"));
  REQUIRE(res.families.size() == 1);
  CHECK(offset_strings(res.families[0]) == Offsets{{"a", "1"}, {"d", "1"}});
  CHECK(res.families[0].bound == Bound::Exact);
  CHECK(res.families[0].replicated_over.empty());
}

TEST_CASE("probit translation: weight shifts propagate through the scores") {
  auto res = detect_translation(fixture_model("probit.fg"));
  REQUIRE(res.families.size() == 1);
  const auto& f = res.families[0];
  CHECK(offset_strings(f) ==
        Offsets{{"w", "1"}, {"s", "sum{j}(x)"}, {"sp", "sum{j}(x)"}});
  CHECK(f.bound == Bound::Subset);
  CHECK(f.replicated_over == std::set<std::string>{"j"});
}

TEST_CASE("collaborative filtering translation: subset and superset") {
  auto res = detect_translation(fixture_model("collabfilter.fg"));
  std::vector<TranslationFamily> subset, superset;
  for (auto& f : res.families)
    (f.bound == Bound::Superset ? superset : subset).push_back(f);

  REQUIRE(subset.size() == 1);
  CHECK(offset_strings(subset[0]) == Offsets{{"b", "1"}, {"c", "-1"}});
  CHECK(subset[0].bound == Bound::Subset);
  CHECK(subset[0].replicated_over.empty());

  REQUIRE(superset.size() == 2);
  Offsets miss_u{{"u", "1"},
                 {"p", "v"},
                 {"i", "sum{k}(v)"},
                 {"c", "-sum{k}(v)"}};
  Offsets miss_v{{"v", "1"},
                 {"p", "u"},
                 {"i", "sum{k}(u)"},
                 {"b", "-sum{k}(u)"}};
  std::vector<Offsets> got{offset_strings(superset[0]),
                           offset_strings(superset[1])};
  CHECK(std::find(got.begin(), got.end(), miss_u) != got.end());
  CHECK(std::find(got.begin(), got.end(), miss_v) != got.end());
  for (auto& f : superset) CHECK(f.replicated_over == std::set<std::string>{"k"});
}

TEST_CASE("all-observed model has no translation families") {
  Model m = build_model(
      "model m { real a; real b; real c; c = plus(a, b); "
      "observe a; observe b; observe c; }");
  CHECK(detect_translation(m).families.empty());
}

TEST_CASE("case split counts") {
  // A single product: one complementarity pair, two branches.
  Model one = build_model(
      "model m { real a; real b; real c; c = times(a, b); }");
  CHECK(translation_case_split_count(one) == 2);
  // No complementarity: a single branch.
  Model none = build_model(
      "model m { real a; real b; real c; c = plus(a, b); }");
  CHECK(translation_case_split_count(none) == 1);
  // fig4 has two products; duplicated pin-sets may merge.
  CHECK(translation_case_split_count(fixture_model("fig4.fg")) <= 4);
}

TEST_CASE("case split budget is a hard error naming the factors") {
  std::string src = "model m { ";
  for (int i = 0; i < 13; ++i) {
    src += "real a" + std::to_string(i) + "; real b" + std::to_string(i) +
           "; real c" + std::to_string(i) + "; ";
  }
  for (int i = 0; i < 13; ++i) {
    src += "c" + std::to_string(i) + " = times(a" + std::to_string(i) + ", b" +
           std::to_string(i) + "); ";
  }
  src += "}";
  try {
    detect_translation(build_model(src));
    FAIL("expected CaseSplitBudgetExceeded");
  } catch (const AnalysisError& e) {
    CHECK(e.code() == ErrorCode::CaseSplitBudgetExceeded);
    CHECK(e.detail().find("times") != std::string::npos);
  }
}

TEST_CASE("dependency rule rejects self-dependent directions") {
  // Synthetic system: t_x = x * t_y makes x's offset mention x itself; the
  // single kernel direction violates the rule and must be rejected.
  Model m = build_model("model m { real x; real y; real z; }");
  auto sys = detail::build_translation_system(m);
  int ux = sys.unknown_of(m.var_index.at("x"));
  int uy = sys.unknown_of(m.var_index.at("y"));
  int uz = sys.unknown_of(m.var_index.at("z"));
  {
    auto bad = sys;
    detail::TransRow row;
    row.coeffs[ux] = AggPoly(Poly(Rat(1)));
    row.coeffs[uy] = -AggPoly(Poly::symbol("x"));
    row.description = "synthetic";
    bad.rows.push_back(row);
    // Pin z so the only direction is the offending one.
    detail::TransRow pin;
    pin.coeffs[uz] = AggPoly(Poly(Rat(1)));
    bad.rows.push_back(pin);
    auto sol = detail::solve_branch(bad, {}, true);
    int accepted = 0;
    for (auto& dir : sol.directions)
      if (detail::direction_to_family(bad, dir, sol.pivots)) ++accepted;
    CHECK(accepted == 0);
  }
  {
    // Coefficients over an untranslated variable are fine.
    auto good = sys;
    detail::TransRow row;
    row.coeffs[ux] = AggPoly(Poly(Rat(1)));
    row.coeffs[uy] = -AggPoly(Poly::symbol("z"));
    row.description = "synthetic";
    good.rows.push_back(row);
    detail::TransRow pin;
    pin.coeffs[uz] = AggPoly(Poly(Rat(1)));
    good.rows.push_back(pin);
    auto sol = detail::solve_branch(good, {}, true);
    int accepted = 0;
    for (auto& dir : sol.directions)
      if (detail::direction_to_family(good, dir, sol.pivots)) ++accepted;
    CHECK(accepted == 1);
  }
}

TEST_CASE("genericity notes carry symbolic pivots") {
  auto res = detect_translation(fixture_model("fig2.fg"));
  REQUIRE(res.families.size() == 1);
  // Solving pinned the product output, which forces the other side through a
  // division by a symbolic coefficient.
  CHECK_FALSE(res.families[0].genericity.empty());
}

TEST_CASE("translation additivity holds exactly") {
  auto res = detect_translation(fixture_model("fig4.fg"));
  std::map<std::string, Rat> theta{
      {"th1", Rat(3, 2)}, {"th2", Rat(-2)},     {"th3", Rat(-3)},
      {"th4", Rat(5, 4)}, {"th5", Rat(-15, 4)}, {"th6", Rat(1, 2)},
      {"th7", Rat(7)}};
  for (auto& fam : res.families) {
    Rat c1(2, 3), c2(-5, 7);
    auto apply = [&](std::map<std::string, Rat> th, const Rat& c) {
      auto out = th;
      for (auto& [name, off] : fam.offsets) {
        REQUIRE(off.is_plain());
        out[name] = th.at(name) + c * off.plain_part().eval(th);
      }
      return out;
    };
    auto seq = apply(apply(theta, c1), c2);
    auto joint = apply(theta, c1 + c2);
    CHECK(seq == joint);
  }
}

TEST_CASE("proportional families collapse to the simpler one") {
  Model m = build_model("model m { range r = 3; real x; real y; }");
  auto sys = detail::build_translation_system(m);
  AggOps ops{&sys.symbol_ranges};
  TranslationFamily f1, f2;
  f1.offsets["x"] = AggPoly(Poly(Rat(1)));
  f1.offsets["y"] = AggPoly(Poly::symbol("q"));
  f2.offsets["x"] = AggPoly(Poly::symbol("w"));
  f2.offsets["y"] = AggPoly(Poly::symbol("q") * Poly::symbol("w"));
  CHECK(detail::offsets_proportional(ops, f1, f2));
  f2.offsets["y"] = AggPoly(Poly::symbol("q"));
  CHECK_FALSE(detail::offsets_proportional(ops, f1, f2));
}
