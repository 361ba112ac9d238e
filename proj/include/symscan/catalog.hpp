#pragma once

#include <map>
#include <string>
#include <vector>

#include "symscan/rational.hpp"

namespace symscan {

// How a factor interacts with the ranges its inputs carry beyond the output:
//   SumLink  — the output accumulates per-index contributions (n-ary sum,
//              inner product); offsets of the output are sums over the range.
//   Equality — per-index quantities must agree across the range (argmax
//              scores, categorical probability reads).
enum class AggKind { None, SumLink, Equality };

enum class EvalKind { DetEquality, Indicator, Density, Unknown };

// One linear template row: sum of coeff * unknown(slot) == 0, where for
// translation templates the coefficient may be the value of another slot
// (sym_slot >= 0) times the rational factor.
struct TemplateTerm {
  int slot = 0;
  Rat coeff = Rat(1);
  int sym_slot = -1;
};

using TemplateRow = std::vector<TemplateTerm>;

// Per-factor-kind annotation bundle. Slots are ordered inputs first, output
// last. Absence of an entry in the catalog means the all-pinned default: no
// argument of the factor may be transformed.
struct FactorSpec {
  std::string kind;
  int arity = -1;  // slot count including output; -1 accepts any
  bool known = false;
  bool all_pinned = false;
  EvalKind eval = EvalKind::Unknown;

  std::vector<TemplateRow> scaling;
  std::vector<std::vector<int>> signflip;  // each row: slots summing to 0 mod 2
  std::vector<TemplateRow> translation;
  std::vector<std::pair<int, int>> complementarity;  // product of offsets = 0

  std::vector<std::vector<int>> perm_arg_classes;  // partition of slots

  // True when input slots may carry ranges the output lacks; those ranges
  // are the ones the factor aggregates.
  bool index_aggregating = false;
  AggKind agg_kind = AggKind::None;
  bool range_perm_symmetric = false;        // joint index permutation allowed
  bool relabel_output_on_range_perm = false;  // permuting indices relabels output
  bool value_relabel_ok = false;  // tolerates relabeling of discrete arg values
};

namespace detail {

inline TemplateRow row(std::initializer_list<TemplateTerm> ts) { return ts; }

inline FactorSpec make_spec(const std::string& kind, int arity, EvalKind ev) {
  FactorSpec s;
  s.kind = kind;
  s.arity = arity;
  s.known = true;
  s.eval = ev;
  for (int i = 0; i < arity; ++i) s.perm_arg_classes.push_back({i});
  return s;
}

inline std::map<std::string, FactorSpec> build_catalog() {
  std::map<std::string, FactorSpec> cat;
  auto add = [&](FactorSpec s) { cat[s.kind] = std::move(s); };

  {  // c = a + b
    FactorSpec s = make_spec("plus", 3, EvalKind::DetEquality);
    s.scaling = {row({{0, 1}, {2, -1}}), row({{1, 1}, {2, -1}})};
    s.signflip = {{0, 2}, {1, 2}};
    s.translation = {row({{0, 1}, {1, 1}, {2, -1}})};
    s.perm_arg_classes = {{0, 1}, {2}};
    add(s);
  }
  {  // c = a + b + d, n-ary form exposing full commutativity
    FactorSpec s = make_spec("ternary_plus", 4, EvalKind::DetEquality);
    s.scaling = {row({{0, 1}, {3, -1}}), row({{1, 1}, {3, -1}}),
                 row({{2, 1}, {3, -1}})};
    s.signflip = {{0, 3}, {1, 3}, {2, 3}};
    s.translation = {row({{0, 1}, {1, 1}, {2, 1}, {3, -1}})};
    s.perm_arg_classes = {{0, 1, 2}, {3}};
    add(s);
  }
  {  // c = a * b; translating both inputs at once is not linear, so the
     // offsets satisfy t_a * t_b = 0 and the cross term drops per branch.
    FactorSpec s = make_spec("times", 3, EvalKind::DetEquality);
    s.scaling = {row({{0, 1}, {1, 1}, {2, -1}})};
    s.signflip = {{0, 1, 2}};
    s.translation = {row({{0, Rat(1), 1}, {1, Rat(1), 0}, {2, -1}})};
    s.complementarity = {{0, 1}};
    s.perm_arg_classes = {{0, 1}, {2}};
    add(s);
  }
  {  // c = a - b
    FactorSpec s = make_spec("minus", 3, EvalKind::DetEquality);
    s.scaling = {row({{0, 1}, {2, -1}}), row({{1, 1}, {2, -1}})};
    s.signflip = {{0, 2}, {1, 2}};
    s.translation = {row({{0, 1}, {1, -1}, {2, -1}})};
    add(s);
  }
  {  // y = x
    FactorSpec s = make_spec("copy", 2, EvalKind::DetEquality);
    s.scaling = {row({{0, 1}, {1, -1}})};
    s.signflip = {{0, 1}};
    s.translation = {row({{0, 1}, {1, -1}})};
    s.value_relabel_ok = true;
    add(s);
  }
  {  // y = tanh(x)
    FactorSpec s = make_spec("tanh", 2, EvalKind::DetEquality);
    s.scaling = {row({{0, 1}}), row({{1, 1}})};
    s.signflip = {{0, 1}};
    s.translation = {row({{0, 1}}), row({{1, 1}})};
    add(s);
  }
  {  // y = x^2
    FactorSpec s = make_spec("square", 2, EvalKind::DetEquality);
    s.scaling = {row({{0, 2}, {1, -1}})};
    s.signflip = {{1}};
    s.translation = {row({{0, 1}}), row({{1, 1}})};
    add(s);
  }
  {  // x ~ N(mu, v)
    FactorSpec s = make_spec("gaussian", 3, EvalKind::Density);
    s.scaling = {row({{2, 1}, {0, -1}}), row({{2, 1}, {1, Rat(-1, 2)}})};
    s.signflip = {{2, 0}, {1}};
    s.translation = {row({{2, 1}, {0, -1}}), row({{1, 1}})};
    add(s);
  }
  {  // x ~ N(mu, 1/tau)
    FactorSpec s = make_spec("gaussian_prec", 3, EvalKind::Density);
    s.scaling = {row({{2, 1}, {0, -1}}), row({{2, 1}, {1, Rat(1, 2)}})};
    s.signflip = {{2, 0}, {1}};
    s.translation = {row({{2, 1}, {0, -1}}), row({{1, 1}})};
    add(s);
  }
  {  // x ~ Gamma(shape, rate)
    FactorSpec s = make_spec("gamma", 3, EvalKind::Density);
    s.scaling = {row({{0, 1}}), row({{2, 1}, {1, 1}})};
    s.signflip = {{0}, {1}, {2}};
    s.translation = {row({{0, 1}}), row({{1, 1}}), row({{2, 1}})};
    add(s);
  }
  {  // b = [x >= 0]
    FactorSpec s = make_spec("is_positive", 2, EvalKind::Indicator);
    s.signflip = {{0}};
    s.translation = {row({{0, 1}})};
    add(s);
  }
  {  // x >= 0 stated as a factor; same constraint shape as is_positive
    FactorSpec s = make_spec("constrain_nonneg", 2, EvalKind::Indicator);
    s.signflip = {{0}};
    s.translation = {row({{0, 1}})};
    add(s);
  }
  {  // c = sum over a range of x[.]
    FactorSpec s = make_spec("nary_sum", 2, EvalKind::DetEquality);
    s.scaling = {row({{0, 1}, {1, -1}})};
    s.signflip = {{0, 1}};
    s.translation = {row({{0, 1}, {1, -1}})};
    s.perm_arg_classes = {{0}, {1}};
    s.index_aggregating = true;
    s.agg_kind = AggKind::SumLink;
    s.range_perm_symmetric = true;
    add(s);
  }
  {  // s = sum over a range of w[.] * x[.]
    FactorSpec s = make_spec("inner_product", 3, EvalKind::DetEquality);
    s.scaling = {row({{0, 1}, {1, 1}, {2, -1}})};
    s.signflip = {{0, 1, 2}};
    s.translation = {row({{0, Rat(1), 1}, {1, Rat(1), 0}, {2, -1}})};
    s.complementarity = {{0, 1}};
    s.perm_arg_classes = {{0, 1}, {2}};
    s.index_aggregating = true;
    s.agg_kind = AggKind::SumLink;
    s.range_perm_symmetric = true;
    add(s);
  }
  {  // y = argmax over a range of s[.]; any common positive scale or common
     // offset of the scores is immaterial, a global sign flip is not.
    FactorSpec s = make_spec("argmax", 2, EvalKind::Indicator);
    s.signflip = {{0}};
    s.index_aggregating = true;
    s.agg_kind = AggKind::Equality;
    s.range_perm_symmetric = true;
    s.relabel_output_on_range_perm = true;
    s.value_relabel_ok = true;
    add(s);
  }
  {  // b ~ Bernoulli(p)
    FactorSpec s = make_spec("bernoulli", 2, EvalKind::Density);
    s.scaling = {row({{0, 1}})};
    s.signflip = {{0}};
    s.translation = {row({{0, 1}})};
    add(s);
  }
  {  // y ~ Discrete(p[.])
    FactorSpec s = make_spec("discrete", 2, EvalKind::Density);
    s.scaling = {row({{0, 1}})};
    s.signflip = {{0}};
    s.translation = {row({{0, 1}})};
    s.index_aggregating = true;
    s.agg_kind = AggKind::Equality;
    s.range_perm_symmetric = true;
    s.relabel_output_on_range_perm = true;
    s.value_relabel_ok = true;
    add(s);
  }
  {  // y ~ UniformDiscrete()
    FactorSpec s = make_spec("uniform_discrete", 1, EvalKind::Density);
    s.value_relabel_ok = true;
    add(s);
  }
  return cat;
}

}  // namespace detail

inline const std::map<std::string, FactorSpec>& factor_catalog() {
  static const std::map<std::string, FactorSpec> cat = detail::build_catalog();
  return cat;
}

// Unknown kinds fall back to the all-pinned spec: nothing the factor touches
// may be transformed, and no arguments are interchangeable.
inline FactorSpec catalog_lookup(const std::string& kind) {
  const auto& cat = factor_catalog();
  auto it = cat.find(kind);
  if (it != cat.end()) return it->second;
  FactorSpec s;
  s.kind = kind;
  s.known = false;
  s.all_pinned = true;
  s.eval = EvalKind::Unknown;
  return s;
}

}  // namespace symscan
