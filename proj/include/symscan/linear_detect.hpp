#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "symscan/constraints.hpp"
#include "symscan/linalg.hpp"
#include "symscan/model.hpp"

namespace symscan {

enum class Bound { Exact, Subset, Superset };

inline const char* bound_name(Bound b) {
  switch (b) {
    case Bound::Exact: return "exact";
    case Bound::Subset: return "subset";
    case Bound::Superset: return "superset";
  }
  return "?";
}

// One basis element of a scaling or sign-flip space: per-variable exponents
// (rational) or flip bits, together with the ranges along which independent
// copies of the family exist.
struct SymmetryFamily {
  SymClass sym_class = SymClass::Scaling;
  std::map<std::string, Rat> coefficients;  // declared variables, nonzero only
  std::set<std::string> replicated_over;
  Bound bound = Bound::Exact;

  bool same_coefficients(const SymmetryFamily& o) const {
    return coefficients == o.coefficients;
  }
};

struct LinearDetectResult {
  std::vector<SymmetryFamily> families;
  LinearSystem system;
  std::vector<std::vector<Rat>> raw_kernel;  // over all numeric unknowns
};

namespace detail {

// Ranges along which a factor relates or singles out array elements, so
// per-index copies of a family touching it would not stay independent.
inline std::set<std::string> factor_blocked_ranges(const Model& m,
                                                   const FactorInstance& f) {
  std::set<std::string> blocked = f.aggregated_ranges;
  for (const auto& slot : f.args) {
    const VariableDecl& v = m.variables[slot.var];
    for (size_t i = 0; i < slot.indices.size(); ++i)
      if (slot.indices[i].kind != IndexKind::RangeSym)
        blocked.insert(v.index_ranges[i]);
  }
  return blocked;
}

inline std::set<std::string> replication_ranges_impl(
    const Model& m, const std::set<std::string>& nonzero_vars) {
  // Candidates: ranges indexing every nonzero-coefficient variable.
  std::set<std::string> candidates;
  bool first = true;
  for (const auto& name : nonzero_vars) {
    const VariableDecl& v = m.var(name);
    std::set<std::string> rs(v.index_ranges.begin(), v.index_ranges.end());
    if (first) {
      candidates = rs;
      first = false;
    } else {
      std::set<std::string> keep;
      for (auto& r : candidates)
        if (rs.count(r)) keep.insert(r);
      candidates = keep;
    }
  }
  if (candidates.empty()) return {};
  // A non-prior factor touching a nonzero variable must not aggregate over
  // the range or pin one of its indices.
  for (const auto& f : m.factors) {
    if (f.is_prior) continue;
    bool touches = false;
    for (const auto& slot : f.args)
      if (nonzero_vars.count(m.variables[slot.var].name)) touches = true;
    if (!touches) continue;
    for (const auto& r : factor_blocked_ranges(m, f)) candidates.erase(r);
  }
  return candidates;
}

inline std::vector<SymmetryFamily> kernel_to_families(
    const Model& m, const LinearSystem& sys, SymClass cls,
    const std::vector<std::vector<Rat>>& kernel) {
  std::vector<SymmetryFamily> out;
  for (const auto& vec : kernel) {
    SymmetryFamily fam;
    fam.sym_class = cls;
    for (size_t u = 0; u < vec.size(); ++u) {
      if (vec[u] == 0) continue;
      const VariableDecl& v = m.variables[sys.unknown_vars[u]];
      if (v.anonymous) continue;  // scaling a constant zero is a no-op
      fam.coefficients[v.name] = vec[u];
    }
    if (fam.coefficients.empty()) continue;
    // Canonical sign: first nonzero coefficient in declaration order > 0.
    for (const auto& v : m.variables) {
      auto it = fam.coefficients.find(v.name);
      if (it == fam.coefficients.end()) continue;
      if (it->second < 0)
        for (auto& [_, c] : fam.coefficients) c = -c;
      break;
    }
    bool dup = false;
    for (auto& f : out) dup |= f.same_coefficients(fam);
    if (dup) continue;
    std::set<std::string> nonzero;
    for (auto& [name, _] : fam.coefficients) nonzero.insert(name);
    fam.replicated_over = replication_ranges_impl(m, nonzero);
    out.push_back(std::move(fam));
  }
  return out;
}

inline std::vector<std::vector<Rat>> solve_kernel(const LinearSystem& sys,
                                                  SymClass cls) {
  if (cls == SymClass::Scaling) return nullspace_Q(sys.matrix());
  auto bits = nullspace_GF2(sys.gf2_matrix());
  std::vector<std::vector<Rat>> out;
  for (auto& v : bits) {
    std::vector<Rat> q(v.size());
    for (size_t i = 0; i < v.size(); ++i) q[i] = Rat(int(v[i]));
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace detail

// Detected families solve the union of all gate branches' constraints.
// Families touching a variable whose array elements get singled out by a
// literal or random index are lower bounds (subset); dropping the rows of
// the pinning factors yields the superset candidates, reported unverified.
inline LinearDetectResult detect_linear(const Model& m, SymClass cls) {
  LinearDetectResult res;
  res.system = build_linear_system(m, cls);
  res.raw_kernel = detail::solve_kernel(res.system, cls);
  res.families = detail::kernel_to_families(m, res.system, cls, res.raw_kernel);

  auto pins = index_pins(m);
  if (!pins.empty()) {
    std::set<int> pinning_factors;
    std::set<std::string> pinned_vars;
    for (auto& p : pins) {
      pinning_factors.insert(p.factor_id);
      pinned_vars.insert(m.variables[p.var].name);
    }
    for (auto& fam : res.families)
      for (auto& [name, _] : fam.coefficients)
        if (pinned_vars.count(name)) fam.bound = Bound::Subset;

    LinearSystem relaxed = res.system;
    relaxed.rows.clear();
    for (auto& row : res.system.rows)
      if (!pinning_factors.count(row.factor_id)) relaxed.rows.push_back(row);
    auto super_kernel = detail::solve_kernel(relaxed, cls);
    auto super = detail::kernel_to_families(m, relaxed, cls, super_kernel);
    for (auto& fam : super) {
      bool known = false;
      for (auto& f : res.families) known |= f.same_coefficients(fam);
      if (known) continue;
      fam.bound = Bound::Superset;
      res.families.push_back(std::move(fam));
    }
  }
  return res;
}

inline LinearDetectResult detect_scaling(const Model& m) {
  return detect_linear(m, SymClass::Scaling);
}

inline LinearDetectResult detect_signflip(const Model& m) {
  return detect_linear(m, SymClass::SignFlip);
}

// Ranges along which independent copies of the family exist: the range must
// index every transformed variable and no non-prior factor touching one may
// aggregate over it or single out one of its indices.
inline std::set<std::string> replication_ranges(const Model& m,
                                                const SymmetryFamily& fam) {
  std::set<std::string> nonzero;
  for (auto& [name, _] : fam.coefficients) nonzero.insert(name);
  return detail::replication_ranges_impl(m, nonzero);
}

}  // namespace symscan
