#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symscan/ast.hpp"
#include "symscan/catalog.hpp"
#include "symscan/parser.hpp"
#include "symscan/span.hpp"

namespace symscan {

struct RangeDecl {
  std::string name;
  long declared_size = 1;
  SourceSpan span;
};

enum class Observation { Latent, ObservedValue, ObservedUnknown };

struct VariableDecl {
  std::string name;
  ValueKind kind = ValueKind::Real;
  std::string discrete_range;  // when kind == Discrete
  std::vector<std::string> index_ranges;
  Observation obs = Observation::Latent;
  Literal observed_value;  // meaningful when obs == ObservedValue
  bool anonymous = false;  // synthesized from a constant literal argument
  SourceSpan span;

  bool is_scalar() const { return index_ranges.empty(); }
  bool is_numeric() const {
    return kind == ValueKind::Real || kind == ValueKind::NonNegReal;
  }
  bool observed() const { return obs != Observation::Latent; }
  // Observed values equal to zero may be scaled or sign-flipped; translating
  // them is never allowed.
  bool observed_zero() const {
    return obs == Observation::ObservedValue && !observed_value.is_bool &&
           observed_value.value == 0;
  }
};

enum class IndexKind { RangeSym, IntLiteral, RandomVar };

struct IndexExpr {
  IndexKind kind = IndexKind::RangeSym;
  std::string name;  // range name or random-index variable name
  long literal = 0;

  std::string str() const {
    return kind == IndexKind::IntLiteral ? std::to_string(literal) : name;
  }
};

struct ArgSlot {
  int var = -1;  // index into Model::variables
  std::vector<IndexExpr> indices;
};

struct GateBranch {
  std::string cond_var;
  bool branch = true;
  bool operator==(const GateBranch&) const = default;
  bool operator<(const GateBranch& o) const {
    return std::tie(cond_var, branch) < std::tie(o.cond_var, o.branch);
  }
};

struct FactorInstance {
  int id = 0;
  std::string kind;
  std::vector<ArgSlot> args;  // inputs first, output last
  bool is_prior = false;
  bool is_distribution = false;
  std::vector<GateBranch> gate_context;
  std::set<std::string> quantified_ranges;
  std::set<std::string> aggregated_ranges;  // input ranges absent from output
  SourceSpan span;
  std::string display;

  const ArgSlot& output() const { return args.back(); }
  int input_count() const { return int(args.size()) - 1; }
};

struct Model {
  std::string name;
  std::vector<RangeDecl> ranges;
  std::vector<VariableDecl> variables;  // declared order, anonymous appended
  std::vector<FactorInstance> factors;
  std::vector<std::string> lints;

  std::map<std::string, int> range_index;
  std::map<std::string, int> var_index;

  bool has_range(const std::string& n) const { return range_index.count(n); }
  bool has_var(const std::string& n) const { return var_index.count(n); }
  const VariableDecl& var(const std::string& n) const {
    return variables[var_index.at(n)];
  }
  const RangeDecl& range(const std::string& n) const {
    return ranges[range_index.at(n)];
  }
};

inline std::vector<const FactorInstance*> non_prior_factors(const Model& m) {
  std::vector<const FactorInstance*> out;
  for (const auto& f : m.factors)
    if (!f.is_prior) out.push_back(&f);
  return out;
}

// ---------------------------------------------------------------------------
// build_model
// ---------------------------------------------------------------------------

namespace detail {

class ModelBuilder {
 public:
  Model build(const ParsedModel& parsed) {
    model_.name = parsed.name;
    collect_decls(parsed.statements);
    std::vector<GateBranch> gates;
    walk(parsed.statements, gates);
    apply_observations();
    lint_gate_temporaries();
    lint_unknown_kinds();
    return std::move(model_);
  }

 private:
  void collect_decls(const std::vector<Stmt>& stmts) {
    for (const auto& s : stmts) {
      if (auto* r = std::get_if<RangeDeclStmt>(&s)) {
        model_.range_index[r->name] = int(model_.ranges.size());
        model_.ranges.push_back({r->name, r->size, r->span});
      } else if (auto* v = std::get_if<VarDeclStmt>(&s)) {
        VariableDecl d;
        d.name = v->name;
        d.kind = v->kind;
        d.discrete_range = v->discrete_range;
        d.index_ranges = v->dims;
        d.span = v->span;
        model_.var_index[d.name] = int(model_.variables.size());
        model_.variables.push_back(std::move(d));
      } else if (auto* i = std::get_if<IfStmtNode>(&s)) {
        collect_decls(i->then_block);
        collect_decls(i->else_block);
      }
    }
  }

  void walk(const std::vector<Stmt>& stmts, std::vector<GateBranch>& gates) {
    for (const auto& s : stmts) {
      if (auto* f = std::get_if<FactorStmtNode>(&s)) {
        add_factor(*f, gates);
      } else if (auto* o = std::get_if<ObserveStmt>(&s)) {
        observations_.push_back(o);
      } else if (auto* i = std::get_if<IfStmtNode>(&s)) {
        if (!model_.has_var(i->condition.name))
          throw AnalysisError(ErrorCode::UndeclaredVariable,
                              i->condition.span,
                              "gate condition '" + i->condition.name +
                                  "' is not declared");
        if (model_.var(i->condition.name).kind != ValueKind::Boolean)
          throw AnalysisError(ErrorCode::BadIndex, i->condition.span,
                              "gate condition '" + i->condition.name +
                                  "' must be boolean");
        gates.push_back({i->condition.name, true});
        walk(i->then_block, gates);
        gates.back().branch = false;
        walk(i->else_block, gates);
        gates.pop_back();
      }
    }
  }

  void validate_decls() {
    for (auto& v : model_.variables) {
      for (auto& r : v.index_ranges)
        if (!model_.has_range(r))
          throw AnalysisError(ErrorCode::BadIndex, v.span,
                              "undeclared range '" + r + "' indexing '" +
                                  v.name + "'");
      if (v.kind == ValueKind::Discrete && !model_.has_range(v.discrete_range))
        throw AnalysisError(ErrorCode::BadIndex, v.span,
                            "undeclared value range '" + v.discrete_range +
                                "' for '" + v.name + "'");
    }
  }

  // Constant literal arguments become anonymous observed variables so that
  // constraint generation is uniform; observed zeros keep the scale and
  // sign-flip relaxation.
  int anonymous_const(const Literal& lit, SourceSpan span) {
    VariableDecl d;
    d.name = "$const" + std::to_string(anon_counter_++) + ":" + lit.str();
    d.kind = lit.is_bool ? ValueKind::Boolean : ValueKind::Real;
    d.obs = Observation::ObservedValue;
    d.observed_value = lit;
    d.anonymous = true;
    d.span = span;
    model_.var_index[d.name] = int(model_.variables.size());
    model_.variables.push_back(d);
    return model_.var_index[d.name];
  }

  ArgSlot resolve_lval(const LVal& lv) {
    if (!model_.has_var(lv.name))
      throw AnalysisError(ErrorCode::UndeclaredVariable, lv.span,
                          "undeclared variable '" + lv.name + "'");
    const VariableDecl& v = model_.var(lv.name);
    ArgSlot slot;
    slot.var = model_.var_index.at(lv.name);
    if (lv.indices.size() != v.index_ranges.size())
      throw AnalysisError(
          ErrorCode::BadIndex, lv.span,
          "'" + lv.name + "' has " + std::to_string(v.index_ranges.size()) +
              " dimension(s), " + std::to_string(lv.indices.size()) +
              " index(es) given");
    for (size_t i = 0; i < lv.indices.size(); ++i) {
      const AstIndex& ix = lv.indices[i];
      const std::string& expect_range = v.index_ranges[i];
      IndexExpr e;
      if (ix.is_literal) {
        if (ix.literal < 0)
          throw AnalysisError(ErrorCode::BadIndex, lv.span,
                              "negative index literal");
        e.kind = IndexKind::IntLiteral;
        e.literal = ix.literal;
      } else if (ix.name == expect_range) {
        e.kind = IndexKind::RangeSym;
        e.name = ix.name;
      } else if (model_.has_var(ix.name)) {
        const VariableDecl& rv = model_.var(ix.name);
        if (rv.kind != ValueKind::Discrete ||
            rv.discrete_range != expect_range)
          throw AnalysisError(ErrorCode::BadIndex, lv.span,
                              "random index '" + ix.name +
                                  "' must be discrete over range '" +
                                  expect_range + "'");
        e.kind = IndexKind::RandomVar;
        e.name = ix.name;
      } else {
        throw AnalysisError(ErrorCode::BadIndex, lv.span,
                            "index '" + ix.name + "' matches neither range '" +
                                expect_range + "' nor a discrete variable");
      }
      slot.indices.push_back(e);
    }
    return slot;
  }

  void add_factor(const FactorStmtNode& f, const std::vector<GateBranch>& gates) {
    validate_decls_once();
    FactorInstance inst;
    inst.id = int(model_.factors.size());
    inst.kind = f.kind_name;
    inst.is_distribution = f.is_distribution;
    inst.gate_context = gates;
    inst.span = f.span;

    FactorSpec spec = catalog_lookup(f.kind_name);
    if (spec.known && spec.arity >= 0 &&
        int(f.args.size()) + 1 != spec.arity)
      throw AnalysisError(ErrorCode::ArityMismatch, f.span,
                          "'" + f.kind_name + "' takes " +
                              std::to_string(spec.arity - 1) +
                              " argument(s), " +
                              std::to_string(f.args.size()) + " given");

    bool all_literal_params = true;
    for (const auto& a : f.args) {
      if (a.is_literal) {
        ArgSlot slot;
        slot.var = anonymous_const(a.literal, f.span);
        inst.args.push_back(slot);
      } else {
        all_literal_params = false;
        inst.args.push_back(resolve_lval(a.lval));
      }
    }
    inst.args.push_back(resolve_lval(f.output));

    // A distribution statement is a prior by default exactly when every
    // parameter is a constant; deterministic statements are never priors.
    if (!f.is_distribution) {
      inst.is_prior = false;
    } else if (f.modifier == PriorMod::Prior) {
      inst.is_prior = true;
    } else if (f.modifier == PriorMod::Likelihood) {
      inst.is_prior = false;
    } else {
      inst.is_prior = all_literal_params;
    }

    for (const auto& slot : inst.args)
      for (const auto& e : slot.indices)
        if (e.kind == IndexKind::RangeSym) inst.quantified_ranges.insert(e.name);
    for (const auto& g : gates)
      for (const auto& r : model_.var(g.cond_var).index_ranges)
        inst.quantified_ranges.insert(r);

    if (spec.index_aggregating) {
      std::set<std::string> out_ranges;
      for (const auto& e : inst.output().indices)
        if (e.kind == IndexKind::RangeSym) out_ranges.insert(e.name);
      for (int i = 0; i < inst.input_count(); ++i)
        for (const auto& e : inst.args[i].indices)
          if (e.kind == IndexKind::RangeSym && !out_ranges.count(e.name))
            inst.aggregated_ranges.insert(e.name);
    }

    inst.display = f.output.str() + (f.is_distribution ? " ~ " : " = ") +
                   f.kind_name + "(...)";
    {
      std::string args_str;
      for (size_t i = 0; i < f.args.size(); ++i) {
        if (i) args_str += ", ";
        args_str += f.args[i].str();
      }
      inst.display = f.output.str() + (f.is_distribution ? " ~ " : " = ") +
                     f.kind_name + "(" + args_str + ")";
    }
    model_.factors.push_back(std::move(inst));
  }

  void validate_decls_once() {
    if (!decls_validated_) {
      validate_decls();
      decls_validated_ = true;
    }
  }

  void apply_observations() {
    validate_decls_once();
    for (const ObserveStmt* o : observations_) {
      if (!model_.has_var(o->target.name))
        throw AnalysisError(ErrorCode::UndeclaredVariable, o->target.span,
                            "undeclared variable '" + o->target.name + "'");
      for (const auto& ix : o->target.indices)
        if (ix.is_literal)
          throw AnalysisError(ErrorCode::BadIndex, o->target.span,
                              "observations cover whole variables; "
                              "element observation is not supported");
      VariableDecl& v = model_.variables[model_.var_index.at(o->target.name)];
      if (o->value) {
        v.obs = Observation::ObservedValue;
        v.observed_value = *o->value;
      } else {
        v.obs = Observation::ObservedUnknown;
      }
    }
  }

  // A temporary written in both branches of a gate but never read outside it
  // hides symmetries; surfaced as a lint, not renamed.
  void lint_gate_temporaries() {
    struct Writes {
      std::string cond;
      std::set<bool> branches;
      bool mixed = false;  // written under several conditions or ungated
    };
    std::map<std::string, Writes> written;
    // var -> gate conditions of each factor reading it
    std::map<std::string, std::vector<std::set<std::string>>> reads;
    for (const auto& f : model_.factors) {
      const std::string& out = model_.variables[f.output().var].name;
      if (f.gate_context.empty()) {
        written[out].mixed = true;
      } else {
        const auto& g = f.gate_context.back();
        Writes& w = written[out];
        if (w.cond.empty())
          w.cond = g.cond_var;
        else if (w.cond != g.cond_var)
          w.mixed = true;
        w.branches.insert(g.branch);
      }
      std::set<std::string> conds;
      for (const auto& g : f.gate_context) conds.insert(g.cond_var);
      for (int i = 0; i < f.input_count(); ++i)
        reads[model_.variables[f.args[i].var].name].push_back(conds);
    }
    for (auto& [name, w] : written) {
      if (w.mixed || w.branches.size() != 2) continue;
      if (model_.var(name).observed()) continue;
      bool read_outside = false;
      for (auto& conds : reads[name])
        if (!conds.count(w.cond)) read_outside = true;
      if (!read_outside)
        model_.lints.push_back(
            "variable '" + name + "' is written in both branches of gate '" +
            w.cond +
            "' and never read outside it; the two writes pin each other. "
            "Consider distinct per-branch variables.");
    }
  }

  void lint_unknown_kinds() {
    std::set<std::string> seen;
    for (const auto& f : model_.factors) {
      if (!catalog_lookup(f.kind).known && seen.insert(f.kind).second)
        model_.lints.push_back("factor kind '" + f.kind +
                               "' is not in the catalog; its arguments are "
                               "treated as untransformable");
    }
  }

  Model model_;
  std::vector<const ObserveStmt*> observations_;
  int anon_counter_ = 0;
  bool decls_validated_ = false;
};

}  // namespace detail

inline Model build_model(const ParsedModel& parsed) {
  detail::ModelBuilder b;
  return b.build(parsed);
}

inline Model build_model(std::string_view source) {
  return build_model(parse(source));
}

// ---------------------------------------------------------------------------
// Unrolling (verifier only; detectors never unroll)
// ---------------------------------------------------------------------------

struct GroundVar {
  std::string name;
  int model_var = -1;
  std::vector<long> index;
  ValueKind kind = ValueKind::Real;
  Observation obs = Observation::Latent;
  Literal observed_value;
  long discrete_card = 0;  // for discrete variables
};

struct GroundSlot {
  std::vector<int> elems;        // ground vars; >1 along aggregated ranges
  int random_index_var = -1;     // ground id of the discrete index, if any
};

struct GroundFactor {
  int model_factor = -1;
  std::string kind;
  std::vector<GroundSlot> slots;  // inputs first, output last
  std::vector<std::pair<int, bool>> gates;  // (ground cond var, branch)
  bool is_prior = false;
};

struct GroundModel {
  std::vector<GroundVar> vars;
  std::vector<GroundFactor> factors;
  std::map<std::string, int> var_index;
  std::map<std::string, long> sizes;

  int ground_id(const std::string& base, const std::vector<long>& idx) const {
    std::string key = base;
    if (!idx.empty()) {
      key += "[";
      for (size_t i = 0; i < idx.size(); ++i) {
        if (i) key += ",";
        key += std::to_string(idx[i]);
      }
      key += "]";
    }
    auto it = var_index.find(key);
    return it == var_index.end() ? -1 : it->second;
  }
};

namespace detail {

inline void odometer(const std::vector<long>& sizes,
                     const std::function<void(const std::vector<long>&)>& fn) {
  std::vector<long> idx(sizes.size(), 0);
  for (;;) {
    fn(idx);
    int pos = int(sizes.size()) - 1;
    while (pos >= 0) {
      if (++idx[pos] < sizes[pos]) break;
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace detail

inline GroundModel unroll(const Model& m,
                          const std::map<std::string, long>& range_sizes) {
  GroundModel g;
  auto size_of = [&](const std::string& r) -> long {
    auto it = range_sizes.find(r);
    long s = it != range_sizes.end() ? it->second : m.range(r).declared_size;
    if (s < 1)
      throw AnalysisError(ErrorCode::MissingRangeSize, m.range(r).span,
                          "range '" + r + "' needs a positive size");
    return s;
  };
  for (const auto& r : m.ranges) g.sizes[r.name] = size_of(r.name);

  for (const auto& v : m.variables) {
    std::vector<long> dims;
    for (const auto& r : v.index_ranges) dims.push_back(g.sizes.at(r));
    detail::odometer(dims, [&](const std::vector<long>& idx) {
      GroundVar gv;
      gv.model_var = m.var_index.at(v.name);
      gv.index = idx;
      gv.kind = v.kind;
      gv.obs = v.obs;
      gv.observed_value = v.observed_value;
      if (v.kind == ValueKind::Discrete)
        gv.discrete_card = g.sizes.at(v.discrete_range);
      gv.name = v.name;
      if (!idx.empty()) {
        gv.name += "[";
        for (size_t i = 0; i < idx.size(); ++i) {
          if (i) gv.name += ",";
          gv.name += std::to_string(idx[i]);
        }
        gv.name += "]";
      }
      g.var_index[gv.name] = int(g.vars.size());
      g.vars.push_back(std::move(gv));
    });
  }

  for (const auto& f : m.factors) {
    // Instance ranges replicate the statement; aggregated ranges expand
    // inside one instance.
    std::vector<std::string> inst_ranges;
    for (const auto& r : f.quantified_ranges)
      if (!f.aggregated_ranges.count(r)) inst_ranges.push_back(r);
    std::vector<std::string> agg_ranges(f.aggregated_ranges.begin(),
                                        f.aggregated_ranges.end());
    std::vector<long> inst_dims, agg_dims;
    for (auto& r : inst_ranges) inst_dims.push_back(g.sizes.at(r));
    for (auto& r : agg_ranges) agg_dims.push_back(g.sizes.at(r));

    detail::odometer(inst_dims, [&](const std::vector<long>& inst_idx) {
      std::map<std::string, long> env;
      for (size_t i = 0; i < inst_ranges.size(); ++i)
        env[inst_ranges[i]] = inst_idx[i];

      GroundFactor gf;
      gf.model_factor = f.id;
      gf.kind = f.kind;
      gf.is_prior = f.is_prior;
      for (const auto& gate : f.gate_context) {
        const VariableDecl& cv = m.var(gate.cond_var);
        std::vector<long> cidx;
        for (const auto& r : cv.index_ranges) cidx.push_back(env.at(r));
        int gid = g.ground_id(cv.name, cidx);
        gf.gates.emplace_back(gid, gate.branch);
      }

      auto resolve_slot = [&](const ArgSlot& slot,
                              const std::map<std::string, long>& full_env)
          -> std::optional<int> {
        const VariableDecl& v = m.variables[slot.var];
        std::vector<long> idx;
        for (size_t i = 0; i < slot.indices.size(); ++i) {
          const IndexExpr& e = slot.indices[i];
          if (e.kind == IndexKind::IntLiteral) {
            if (e.literal >= g.sizes.at(v.index_ranges[i]))
              throw AnalysisError(ErrorCode::BadIndex, f.span,
                                  "literal index out of bounds for '" +
                                      v.name + "'");
            idx.push_back(e.literal);
          } else if (e.kind == IndexKind::RangeSym) {
            idx.push_back(full_env.at(e.name));
          } else {
            return std::nullopt;  // random index: runtime resolution
          }
        }
        return g.ground_id(v.name, idx);
      };

      for (const auto& slot : f.args) {
        GroundSlot gs;
        bool has_random = false;
        for (const auto& e : slot.indices)
          if (e.kind == IndexKind::RandomVar) has_random = true;
        bool spans_agg = false;
        for (const auto& e : slot.indices)
          if (e.kind == IndexKind::RangeSym &&
              f.aggregated_ranges.count(e.name))
            spans_agg = true;

        if (has_random) {
          // One candidate per value of the random index (single random
          // index per slot is supported).
          const VariableDecl& v = m.variables[slot.var];
          std::string rand_name;
          for (const auto& e : slot.indices)
            if (e.kind == IndexKind::RandomVar) rand_name = e.name;
          const VariableDecl& rv = m.var(rand_name);
          std::vector<long> ridx;
          for (const auto& r : rv.index_ranges) ridx.push_back(env.at(r));
          gs.random_index_var = g.ground_id(rv.name, ridx);
          long card = g.sizes.at(rv.discrete_range);
          for (long val = 0; val < card; ++val) {
            std::vector<long> idx;
            for (size_t i = 0; i < slot.indices.size(); ++i) {
              const IndexExpr& e = slot.indices[i];
              if (e.kind == IndexKind::IntLiteral)
                idx.push_back(e.literal);
              else if (e.kind == IndexKind::RangeSym)
                idx.push_back(env.at(e.name));
              else
                idx.push_back(val);
            }
            gs.elems.push_back(g.ground_id(v.name, idx));
          }
        } else if (spans_agg) {
          detail::odometer(agg_dims, [&](const std::vector<long>& agg_idx) {
            auto full_env = env;
            for (size_t i = 0; i < agg_ranges.size(); ++i)
              full_env[agg_ranges[i]] = agg_idx[i];
            auto gid = resolve_slot(slot, full_env);
            gs.elems.push_back(*gid);
          });
        } else {
          auto gid = resolve_slot(slot, env);
          gs.elems.push_back(*gid);
        }
        gf.slots.push_back(std::move(gs));
      }
      g.factors.push_back(std::move(gf));
    });
  }
  return g;
}

}  // namespace symscan
