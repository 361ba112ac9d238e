#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "symscan/catalog.hpp"
#include "symscan/linalg.hpp"
#include "symscan/model.hpp"

namespace symscan {

enum class SymClass { Scaling, SignFlip };

// One instantiated linear constraint over per-variable unknowns, with the
// provenance needed for reports and for the gate-union tests.
struct ConstraintRow {
  std::map<int, Rat> coeffs;  // unknown index -> coefficient
  int factor_id = -1;         // -1: observation or constant pin
  std::string description;
  SourceSpan span;
};

struct LinearSystem {
  std::vector<int> unknown_vars;   // model variable ids, declaration order
  std::map<int, int> var_unknown;  // model variable id -> unknown index
  std::vector<ConstraintRow> rows;

  int unknown_of(int var) const {
    auto it = var_unknown.find(var);
    return it == var_unknown.end() ? -1 : it->second;
  }
  RatMatrix matrix() const {
    RatMatrix m(int(rows.size()), int(unknown_vars.size()));
    for (int r = 0; r < m.rows; ++r)
      for (auto& [u, c] : rows[r].coeffs) m.at(r, u) = c;
    return m;
  }
  GF2Matrix gf2_matrix() const {
    GF2Matrix m(int(rows.size()), int(unknown_vars.size()));
    for (int r = 0; r < m.rows; ++r)
      for (auto& [u, c] : rows[r].coeffs) {
        mpz_class num = c.get_num();
        m.at(r, u) = uint8_t(mpz_odd_p(num.get_mpz_t()) ? 1 : 0);
      }
    return m;
  }
};

// Constraints that single out or relate specific elements of an array:
// a literal index pin, or per-element access through a random index. Pure
// equality couplings from aggregation are representable at array level and
// tracked separately through the factor's aggregated ranges.
struct IndexPin {
  int factor_id = -1;
  int var = -1;
  std::string range;
  bool random_index = false;
};

inline std::vector<IndexPin> index_pins(const Model& m) {
  std::vector<IndexPin> pins;
  for (const auto& f : m.factors) {
    if (f.is_prior) continue;
    for (const auto& slot : f.args) {
      const VariableDecl& v = m.variables[slot.var];
      for (size_t i = 0; i < slot.indices.size(); ++i) {
        const IndexExpr& e = slot.indices[i];
        if (e.kind == IndexKind::IntLiteral)
          pins.push_back({f.id, slot.var, v.index_ranges[i], false});
        else if (e.kind == IndexKind::RandomVar)
          pins.push_back({f.id, slot.var, v.index_ranges[i], true});
      }
    }
  }
  return pins;
}

namespace detail {

inline std::string unknown_name(SymClass cls, const Model& m, int var) {
  return std::string(cls == SymClass::Scaling ? "d" : "s") + "(" +
         m.variables[var].name + ")";
}

inline std::string row_text(SymClass cls, const Model& m,
                            const std::map<int, Rat>& coeffs,
                            const std::string& origin) {
  std::string out;
  bool first = true;
  for (auto& [var, c] : coeffs) {
    if (c == 1) {
      out += (first ? "" : " + ");
    } else if (c == -1) {
      out += (first ? "-" : " - ");
    } else if (c > 0) {
      out += (first ? rat_str(c) + "*" : " + " + rat_str(c) + "*");
    } else {
      out += (first ? rat_str(c) + "*" : " - " + rat_str(Rat(-c)) + "*");
    }
    out += unknown_name(cls, m, var);
    first = false;
  }
  if (cls == SymClass::SignFlip)
    return out + " = 0 (mod 2)  [" + origin + "]";
  return out + " = 0  [" + origin + "]";
}

}  // namespace detail

// Instantiates the catalog templates of every non-prior factor, then appends
// observation pins. Observed values equal to zero stay free: scaling or
// flipping a zero is a no-op, so those pins would only hide symmetries.
inline LinearSystem build_linear_system(const Model& m, SymClass cls) {
  LinearSystem sys;
  for (size_t i = 0; i < m.variables.size(); ++i) {
    if (!m.variables[i].is_numeric()) continue;
    sys.var_unknown[int(i)] = int(sys.unknown_vars.size());
    sys.unknown_vars.push_back(int(i));
  }

  auto add_row = [&](std::map<int, Rat> by_var, int factor_id,
                     const std::string& origin, SourceSpan span) {
    ConstraintRow row;
    for (auto& [var, c] : by_var) {
      if (c == 0) continue;
      int u = sys.unknown_of(var);
      if (u >= 0) row.coeffs[u] = c;
    }
    if (row.coeffs.empty()) return;
    row.factor_id = factor_id;
    row.description = detail::row_text(cls, m, by_var, origin);
    row.span = span;
    sys.rows.push_back(std::move(row));
  };

  for (const auto& f : m.factors) {
    if (f.is_prior) continue;
    FactorSpec spec = catalog_lookup(f.kind);
    if (spec.all_pinned) {
      for (const auto& slot : f.args) {
        if (!m.variables[slot.var].is_numeric()) continue;
        add_row({{slot.var, Rat(1)}}, f.id, f.display + ", uncataloged",
                f.span);
      }
      continue;
    }
    if (cls == SymClass::Scaling) {
      for (const auto& trow : spec.scaling) {
        std::map<int, Rat> by_var;
        for (const auto& term : trow) {
          int var = f.args[term.slot].var;
          if (!m.variables[var].is_numeric()) continue;
          by_var[var] += term.coeff;
        }
        add_row(std::move(by_var), f.id, f.display, f.span);
      }
    } else {
      for (const auto& srow : spec.signflip) {
        std::map<int, Rat> by_var;
        for (int slot : srow) {
          int var = f.args[slot].var;
          if (!m.variables[var].is_numeric()) continue;
          by_var[var] += 1;
        }
        // Parity: duplicate slots of one variable cancel mod 2.
        for (auto& [var, c] : by_var) {
          mpz_class num = c.get_num();
          by_var[var] = mpz_odd_p(num.get_mpz_t()) ? Rat(1) : Rat(0);
        }
        add_row(std::move(by_var), f.id, f.display, f.span);
      }
    }
  }

  for (size_t i = 0; i < m.variables.size(); ++i) {
    const VariableDecl& v = m.variables[i];
    if (!v.is_numeric() || !v.observed()) continue;
    if (v.observed_zero()) continue;
    add_row({{int(i), Rat(1)}}, -1,
            v.anonymous ? "constant " + v.observed_value.str() : "observed",
            v.span);
  }
  return sys;
}

}  // namespace symscan
