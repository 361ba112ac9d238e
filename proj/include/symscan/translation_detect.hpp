#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symscan/aggpoly.hpp"
#include "symscan/constraints.hpp"
#include "symscan/linalg.hpp"
#include "symscan/linear_detect.hpp"
#include "symscan/model.hpp"

namespace symscan {

// One 1-parameter translation family: each transformed variable moves by
// offset(variable) * t, where the offset may mention only variables that are
// not themselves translated. Aggregated terms denote range sums resolved at
// verification time.
struct TranslationFamily {
  std::map<std::string, AggPoly> offsets;  // declared variables, nonzero only
  std::string parameter = "t";
  std::set<std::string> replicated_over;
  Bound bound = Bound::Exact;
  std::vector<Poly> genericity;  // pivot polynomials assumed nonzero
};

struct TranslationDetectResult {
  std::vector<TranslationFamily> families;
  int branch_count = 0;
};

namespace detail {

struct TransRow {
  std::map<int, AggPoly> coeffs;  // unknown index -> coefficient
  int factor_id = -1;
  std::string description;
};

struct TransSystem {
  const Model* model = nullptr;
  std::vector<int> unknown_vars;
  std::map<int, int> var_unknown;
  std::vector<TransRow> rows;
  std::vector<std::pair<int, int>> compl_pairs;  // unknown indices
  std::vector<std::string> compl_origin;
  std::map<std::string, std::set<std::string>> symbol_ranges;
  std::set<int> sum_arg_unknowns;  // aggregated inputs of sum-link factors
  bool has_sum_link = false;

  int unknown_of(int var) const {
    auto it = var_unknown.find(var);
    return it == var_unknown.end() ? -1 : it->second;
  }
};

inline TransSystem build_translation_system(const Model& m) {
  TransSystem sys;
  sys.model = &m;
  for (size_t i = 0; i < m.variables.size(); ++i) {
    if (!m.variables[i].is_numeric()) continue;
    sys.var_unknown[int(i)] = int(sys.unknown_vars.size());
    sys.unknown_vars.push_back(int(i));
  }
  for (const auto& v : m.variables) {
    std::set<std::string> rs(v.index_ranges.begin(), v.index_ranges.end());
    sys.symbol_ranges[v.name] = std::move(rs);
  }

  auto add_row = [&](std::map<int, AggPoly> coeffs, int fid,
                     std::string desc) {
    TransRow row;
    for (auto& [u, c] : coeffs)
      if (!c.is_zero()) row.coeffs.emplace(u, std::move(c));
    if (row.coeffs.empty()) return;
    row.factor_id = fid;
    row.description = std::move(desc);
    sys.rows.push_back(std::move(row));
  };

  for (const auto& f : m.factors) {
    if (f.is_prior) continue;
    FactorSpec spec = catalog_lookup(f.kind);
    if (spec.all_pinned) {
      for (const auto& slot : f.args) {
        int u = sys.unknown_of(slot.var);
        if (u >= 0)
          add_row({{u, AggPoly(Poly(Rat(1)))}}, f.id,
                  "t(" + m.variables[slot.var].name + ") = 0  [" + f.display +
                      ", uncataloged]");
      }
      continue;
    }
    bool sum_link = spec.agg_kind == AggKind::SumLink &&
                    !f.aggregated_ranges.empty();
    if (sum_link) {
      sys.has_sum_link = true;
      for (int i = 0; i < f.input_count(); ++i) {
        const auto& slot = f.args[i];
        bool spans = false;
        for (size_t p = 0; p < slot.indices.size(); ++p)
          if (slot.indices[p].kind == IndexKind::RangeSym &&
              f.aggregated_ranges.count(slot.indices[p].name))
            spans = true;
        int u = sys.unknown_of(slot.var);
        if (spans && u >= 0) sys.sum_arg_unknowns.insert(u);
      }
    }
    for (const auto& trow : spec.translation) {
      std::map<int, AggPoly> coeffs;
      for (const auto& term : trow) {
        int var = f.args[term.slot].var;
        int u = sys.unknown_of(var);
        if (u < 0) continue;  // discrete or boolean: offset identically zero
        Poly c(term.coeff);
        if (term.sym_slot >= 0) {
          const VariableDecl& sv = m.variables[f.args[term.sym_slot].var];
          if (sv.obs == Observation::ObservedValue && !sv.observed_value.is_bool)
            c = c * sv.observed_value.value;
          else
            c = c * Poly::symbol(sv.name);
        }
        bool is_input = term.slot < int(f.args.size()) - 1;
        AggPoly coeff = (sum_link && is_input)
                            ? AggPoly::aggregate(c, f.aggregated_ranges)
                            : AggPoly(c);
        auto it = coeffs.find(u);
        if (it == coeffs.end())
          coeffs.emplace(u, coeff);
        else
          it->second = it->second + coeff;
      }
      add_row(std::move(coeffs), f.id, f.display);
    }
    for (auto& [sa, sb] : spec.complementarity) {
      int ua = sys.unknown_of(f.args[sa].var);
      int ub = sys.unknown_of(f.args[sb].var);
      if (ua < 0 || ub < 0) continue;
      sys.compl_pairs.emplace_back(ua, ub);
      sys.compl_origin.push_back(f.display);
    }
  }

  for (size_t i = 0; i < m.variables.size(); ++i) {
    const VariableDecl& v = m.variables[i];
    if (!v.is_numeric() || !v.observed()) continue;
    int u = sys.unknown_of(int(i));
    add_row({{u, AggPoly(Poly(Rat(1)))}}, -1,
            "t(" + v.name + ") = 0  [" +
                (v.anonymous ? "constant " + v.observed_value.str()
                             : "observed") +
                "]");
  }
  return sys;
}

// Branches assign each complementarity pair a zeroed side; branches whose
// pinned sets coincide are merged.
inline std::vector<std::set<int>> case_split_impl(
    const TransSystem& sys, size_t budget) {
  size_t n = sys.compl_pairs.size();
  if (n > 24 || (size_t(1) << n) > budget) {
    std::string which;
    std::set<std::string> origins(sys.compl_origin.begin(),
                                  sys.compl_origin.end());
    for (auto& o : origins) which += (which.empty() ? "" : "; ") + o;
    throw AnalysisError(
        ErrorCode::CaseSplitBudgetExceeded, {},
        std::to_string(size_t(1) << std::min<size_t>(n, 25)) +
            " case-split branches exceed the budget of " +
            std::to_string(budget) + "; factors: " + which);
  }
  std::vector<std::set<int>> out;
  for (size_t pick = 0; pick < (size_t(1) << n); ++pick) {
    std::set<int> zeroed;
    for (size_t i = 0; i < n; ++i)
      zeroed.insert(((pick >> i) & 1) ? sys.compl_pairs[i].second
                                      : sys.compl_pairs[i].first);
    if (std::find(out.begin(), out.end(), zeroed) == out.end())
      out.push_back(std::move(zeroed));
  }
  return out;
}

struct BranchSolution {
  std::vector<std::vector<AggPoly>> directions;
  std::vector<Poly> pivots;
};

inline std::set<std::string> free_ranges_of(const AggOps& ops,
                                            const AggPoly& c) {
  std::set<std::string> out;
  for (auto& t : c.terms()) {
    for (auto& r : ops.ranges_of_poly(t.inner))
      if (!t.ranges.count(r)) out.insert(r);
  }
  return out;
}

inline BranchSolution solve_branch(const TransSystem& sys,
                                   const std::set<int>& zeroed,
                                   bool constancy) {
  AggOps ops{&sys.symbol_ranges};
  const Model& m = *sys.model;
  int cols = int(sys.unknown_vars.size());

  std::vector<std::vector<AggPoly>> rows;
  for (auto& r : sys.rows) {
    std::vector<AggPoly> row(cols);
    for (auto& [u, c] : r.coeffs) row[u] = c;
    rows.push_back(std::move(row));
  }
  for (int u : zeroed) {
    std::vector<AggPoly> row(cols);
    row[u] = AggPoly(Poly(Rat(1)));
    rows.push_back(std::move(row));
  }

  BranchSolution sol;
  std::set<int> extra_pins;
  for (;;) {
    std::vector<AggPoly> flat;
    for (auto& r : rows)
      for (auto& c : r) flat.push_back(c);
    auto kr = ring_kernel(ops, int(rows.size()), cols, flat);
    sol.pivots = kr.symbolic_pivots;

    if (!constancy) {
      sol.directions = std::move(kr.basis);
      return sol;
    }
    // Most restrictive array treatment: the per-index contributions feeding
    // a sum must not vary with any index, so offsets of aggregated inputs
    // may not mention range-indexed symbols. Violating directions get their
    // free column pinned and the branch is re-solved.
    int violator = -1;
    for (size_t d = 0; d < kr.basis.size() && violator < 0; ++d) {
      for (int u : sys.sum_arg_unknowns) {
        const AggPoly& c = kr.basis[d][u];
        if (c.is_zero()) continue;
        bool indexed = false;
        for (auto& s : c.symbols())
          if (!ops.symbol_ranges->at(s).empty()) indexed = true;
        if (indexed) {
          violator = kr.free_cols[d];
          break;
        }
      }
    }
    if (violator < 0) {
      sol.directions = std::move(kr.basis);
      return sol;
    }
    if (!extra_pins.insert(violator).second) {
      sol.directions = std::move(kr.basis);
      return sol;  // should not happen; avoid looping forever
    }
    std::vector<AggPoly> row(cols);
    row[violator] = AggPoly(Poly(Rat(1)));
    rows.push_back(std::move(row));
  }
}

// Offsets must make sense at array level: the offset of a variable may only
// vary along that variable's own indices, so any leftover (non-aggregated)
// range of the coefficient must index the variable. Offending directions are
// repaired by absorbing the offset into another direction when possible,
// otherwise dropped.
inline void repair_wellformedness(const TransSystem& sys,
                                  std::vector<std::vector<AggPoly>>& dirs,
                                  std::vector<Poly>& genericity) {
  AggOps ops{&sys.symbol_ranges};
  const Model& m = *sys.model;
  auto violation = [&](const std::vector<AggPoly>& d) -> int {
    for (size_t u = 0; u < d.size(); ++u) {
      if (d[u].is_zero()) continue;
      const VariableDecl& v = m.variables[sys.unknown_vars[u]];
      std::set<std::string> own(v.index_ranges.begin(), v.index_ranges.end());
      for (auto& r : free_ranges_of(ops, d[u]))
        if (!own.count(r)) return int(u);
    }
    return -1;
  };

  std::vector<std::vector<AggPoly>> kept;
  for (size_t i = 0; i < dirs.size(); ++i) {
    auto d = dirs[i];
    bool ok = false;
    for (int round = 0; round < int(dirs.size()) + 1; ++round) {
      int bad = violation(d);
      if (bad < 0) {
        ok = true;
        break;
      }
      bool repaired = false;
      for (size_t j = 0; j < dirs.size() && !repaired; ++j) {
        if (j == i) continue;
        const AggPoly& pivot = dirs[j][bad];
        if (pivot.is_zero() || !pivot.is_plain()) continue;
        auto lambda = ops.div_exact(d[bad], pivot);
        if (!lambda) continue;
        for (size_t u = 0; u < d.size(); ++u)
          d[u] = ops.sub(d[u], ops.mul(*lambda, dirs[j][u]));
        if (auto sym = ops.symbolic_part(pivot)) genericity.push_back(*sym);
        repaired = true;
      }
      if (!repaired) break;
    }
    if (ok) kept.push_back(std::move(d));
  }
  dirs = std::move(kept);
}

inline std::optional<TranslationFamily> direction_to_family(
    const TransSystem& sys, const std::vector<AggPoly>& dir,
    const std::vector<Poly>& genericity) {
  const Model& m = *sys.model;
  AggOps ops{&sys.symbol_ranges};
  TranslationFamily fam;
  for (size_t u = 0; u < dir.size(); ++u) {
    if (dir[u].is_zero()) continue;
    const VariableDecl& v = m.variables[sys.unknown_vars[u]];
    if (v.anonymous) return std::nullopt;  // constants never move
    fam.offsets[v.name] = dir[u];
  }
  if (fam.offsets.empty()) return std::nullopt;

  // Dependency rule: offsets may mention only untranslated variables.
  std::set<std::string> translated, mentioned;
  for (auto& [name, c] : fam.offsets) {
    translated.insert(name);
    for (auto& s : c.symbols()) mentioned.insert(s);
  }
  for (auto& name : translated)
    if (mentioned.count(name)) return std::nullopt;

  // Canonical parameter scale: the first transformed variable in declaration
  // order gets a monic leading coefficient.
  for (const auto& v : m.variables) {
    auto it = fam.offsets.find(v.name);
    if (it == fam.offsets.end()) continue;
    const auto& terms = it->second.terms();
    Rat lc = terms.front().inner.terms().rbegin()->second;
    if (lc != 1) {
      Rat inv = Rat(1) / lc;
      for (auto& [_, c] : fam.offsets) c = c * inv;
    }
    break;
  }

  for (auto& p : genericity) {
    bool dup = false;
    for (auto& q : fam.genericity) dup |= (q == p);
    if (!dup && !p.is_constant()) fam.genericity.push_back(p);
  }
  return fam;
}

inline std::set<std::string> translation_replication(
    const TransSystem& sys, const TranslationFamily& fam) {
  const Model& m = *sys.model;
  std::set<std::string> nonzero;
  for (auto& [name, _] : fam.offsets) nonzero.insert(name);

  std::set<std::string> candidates;
  for (auto& r : m.ranges) candidates.insert(r.name);
  // The per-range copies must be assignable: either the variable carries the
  // range, or every offset term aggregates over it (the sum absorbs the
  // per-index parameter values).
  for (auto& [name, c] : fam.offsets) {
    const VariableDecl& v = m.var(name);
    std::set<std::string> own(v.index_ranges.begin(), v.index_ranges.end());
    std::set<std::string> keep;
    for (auto& r : candidates) {
      if (own.count(r)) {
        keep.insert(r);
        continue;
      }
      bool all_agg = true;
      for (auto& t : c.terms())
        if (!t.ranges.count(r)) all_agg = false;
      if (all_agg) keep.insert(r);
    }
    candidates = std::move(keep);
  }
  if (candidates.empty()) return {};

  for (const auto& f : m.factors) {
    if (f.is_prior) continue;
    bool touches = false;
    for (const auto& slot : f.args)
      if (nonzero.count(m.variables[slot.var].name)) touches = true;
    if (!touches) continue;
    FactorSpec spec = catalog_lookup(f.kind);
    if (spec.agg_kind == AggKind::Equality)
      for (auto& r : f.aggregated_ranges) candidates.erase(r);
    for (const auto& slot : f.args) {
      const VariableDecl& v = m.variables[slot.var];
      for (size_t i = 0; i < slot.indices.size(); ++i)
        if (slot.indices[i].kind != IndexKind::RangeSym)
          candidates.erase(v.index_ranges[i]);
    }
  }
  return candidates;
}

inline bool offsets_proportional(const AggOps& ops, const TranslationFamily& a,
                                 const TranslationFamily& b) {
  std::set<std::string> sa, sb;
  for (auto& [n, _] : a.offsets) sa.insert(n);
  for (auto& [n, _] : b.offsets) sb.insert(n);
  if (sa != sb) return false;
  const std::string& first = *sa.begin();
  const AggPoly &ca = a.offsets.at(first), &cb = b.offsets.at(first);
  try {
    for (auto& n : sa) {
      AggPoly lhs = ops.mul(ca, b.offsets.at(n));
      AggPoly rhs = ops.mul(cb, a.offsets.at(n));
      if (!(lhs == rhs)) return false;
    }
  } catch (const std::exception&) {
    return false;  // overlapping range sums: treat as incomparable
  }
  return true;
}

}  // namespace detail

inline int translation_case_split_count(const Model& m,
                                        size_t budget = 4096) {
  auto sys = detail::build_translation_system(m);
  return int(detail::case_split_impl(sys, budget).size());
}

// Detects translation families: case-splits every product complementarity,
// solves the branch systems symbolically, keeps directions satisfying the
// dependency rule, and merges duplicated branches. With aggregating sums
// present, the constrained solve yields lower-bound (subset) families and a
// second unconstrained solve contributes upper-bound (superset) candidates.
inline TranslationDetectResult detect_translation(const Model& m,
                                                  size_t budget = 4096) {
  TranslationDetectResult res;
  auto sys = detail::build_translation_system(m);
  auto branches = detail::case_split_impl(sys, budget);
  res.branch_count = int(branches.size());
  AggOps ops{&sys.symbol_ranges};

  auto pins = index_pins(m);
  std::set<std::string> pinned_vars;
  for (auto& p : pins) pinned_vars.insert(m.variables[p.var].name);

  auto run = [&](bool constancy) {
    std::vector<TranslationFamily> fams;
    for (const auto& zeroed : branches) {
      auto sol = detail::solve_branch(sys, zeroed, constancy);
      std::vector<Poly> gen = sol.pivots;
      detail::repair_wellformedness(sys, sol.directions, gen);
      for (const auto& dir : sol.directions) {
        auto fam = detail::direction_to_family(sys, dir, gen);
        if (!fam) continue;
        bool dup = false;
        for (auto& f : fams) dup |= f.offsets == fam->offsets;
        if (dup) continue;
        fam->replicated_over = detail::translation_replication(sys, *fam);
        fams.push_back(std::move(*fam));
      }
    }
    // Union minimality: drop families whose offset line is pointwise
    // contained in a simpler one.
    std::vector<TranslationFamily> kept;
    for (size_t i = 0; i < fams.size(); ++i) {
      bool redundant = false;
      for (size_t j = 0; j < fams.size() && !redundant; ++j) {
        if (i == j) continue;
        if (!detail::offsets_proportional(ops, fams[i], fams[j])) continue;
        int di = 0, dj = 0;
        for (auto& [_, c] : fams[i].offsets) di += c.total_degree();
        for (auto& [_, c] : fams[j].offsets) dj += c.total_degree();
        if (dj < di || (di == dj && j < i)) redundant = true;
      }
      if (!redundant) kept.push_back(std::move(fams[i]));
    }
    return kept;
  };

  res.families = run(true);
  for (auto& fam : res.families) {
    if (sys.has_sum_link) fam.bound = Bound::Subset;
    for (auto& [name, _] : fam.offsets)
      if (pinned_vars.count(name)) fam.bound = Bound::Subset;
  }
  if (sys.has_sum_link) {
    auto super = run(false);
    for (auto& fam : super) {
      bool known = false;
      for (auto& f : res.families) known |= f.offsets == fam.offsets;
      if (known) continue;
      fam.bound = Bound::Superset;
      res.families.push_back(std::move(fam));
    }
  }
  return res;
}

}  // namespace symscan
