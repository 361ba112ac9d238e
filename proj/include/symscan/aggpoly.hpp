#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "symscan/poly.hpp"

namespace symscan {

// Polynomial extended with formal range sums: a term (p, R) denotes the sum
// of p over the index tuples of the ranges in R, with p evaluated per tuple.
// These arise when an aggregating factor links its output's offset to the
// per-index contributions of its inputs.
struct AggTerm {
  Poly inner;
  std::set<std::string> ranges;  // empty: plain polynomial term

  bool operator==(const AggTerm&) const = default;
};

class AggPoly {
 public:
  AggPoly() = default;
  explicit AggPoly(Poly p) {
    if (!p.is_zero()) terms_.push_back({std::move(p), {}});
  }
  static AggPoly plain(Poly p) { return AggPoly(std::move(p)); }
  static AggPoly aggregate(Poly inner, std::set<std::string> ranges) {
    AggPoly a;
    if (!inner.is_zero()) a.terms_.push_back({std::move(inner), std::move(ranges)});
    return a;
  }

  const std::vector<AggTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_plain() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].ranges.empty());
  }
  Poly plain_part() const {
    for (auto& t : terms_)
      if (t.ranges.empty()) return t.inner;
    return Poly();
  }
  bool is_constant() const { return is_plain() && plain_part().is_constant(); }

  std::set<std::string> symbols() const {
    std::set<std::string> out;
    for (auto& t : terms_)
      for (auto& s : t.inner.symbols()) out.insert(s);
    return out;
  }

  int total_degree() const {
    int d = 0;
    for (auto& t : terms_) d = std::max(d, t.inner.total_degree());
    return d;
  }

  void add_term(AggTerm t) {
    if (t.inner.is_zero()) return;
    for (auto& mine : terms_) {
      if (mine.ranges == t.ranges) {
        mine.inner = mine.inner + t.inner;
        prune();
        return;
      }
    }
    terms_.push_back(std::move(t));
    sort_terms();
  }

  friend AggPoly operator+(const AggPoly& a, const AggPoly& b) {
    AggPoly r = a;
    for (auto& t : b.terms_) r.add_term(t);
    return r;
  }
  friend AggPoly operator-(const AggPoly& a) {
    AggPoly r = a;
    for (auto& t : r.terms_) t.inner = -t.inner;
    return r;
  }
  friend AggPoly operator-(const AggPoly& a, const AggPoly& b) {
    return a + (-b);
  }
  friend AggPoly operator*(const AggPoly& a, const Rat& c) {
    AggPoly r = a;
    if (c == 0) return AggPoly();
    for (auto& t : r.terms_) t.inner = t.inner * c;
    return r;
  }

  bool operator==(const AggPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const AggPoly& o) const { return !(*this == o); }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < terms_.size(); ++i) {
      const AggTerm& t = terms_[i];
      std::string s;
      bool negated = false;
      if (t.ranges.empty()) {
        s = t.inner.str();
        if (!s.empty() && s[0] == '-') {
          negated = true;
          s = s.substr(1);
        }
      } else {
        Poly inner = t.inner;
        if (inner.lead_sign() < 0) {
          negated = true;
          inner = -inner;
        }
        s = "sum{";
        bool first = true;
        for (auto& r : t.ranges) {
          if (!first) s += ",";
          s += r;
          first = false;
        }
        s += "}(" + inner.str() + ")";
      }
      if (i == 0)
        out += negated ? "-" + s : s;
      else
        out += (negated ? " - " : " + ") + s;
    }
    return out;
  }

 private:
  void sort_terms() {
    std::sort(terms_.begin(), terms_.end(),
              [](const AggTerm& a, const AggTerm& b) {
                if (a.ranges != b.ranges) return a.ranges < b.ranges;
                return a.inner.str() < b.inner.str();
              });
  }
  void prune() {
    std::vector<AggTerm> keep;
    for (auto& t : terms_)
      if (!t.inner.is_zero()) keep.push_back(t);
    terms_ = std::move(keep);
  }

  std::vector<AggTerm> terms_;
};

// Ring operations with the range context needed to multiply against formal
// sums. A product folds into the sum body: coefficients multiplied onto an
// aggregated term always originate from per-index substitution, and for
// index-independent factors folding is the algebraic identity anyway.
struct AggOps {
  using Coeff = AggPoly;
  const std::map<std::string, std::set<std::string>>* symbol_ranges = nullptr;

  std::set<std::string> ranges_of_poly(const Poly& p) const {
    std::set<std::string> out;
    for (auto& s : p.symbols()) {
      auto it = symbol_ranges->find(s);
      if (it != symbol_ranges->end())
        out.insert(it->second.begin(), it->second.end());
    }
    return out;
  }

  bool is_zero(const AggPoly& a) const { return a.is_zero(); }
  AggPoly add(const AggPoly& a, const AggPoly& b) const { return a + b; }
  AggPoly sub(const AggPoly& a, const AggPoly& b) const { return a - b; }
  AggPoly neg(const AggPoly& a) const { return -a; }
  AggPoly from_poly(const Poly& p) const { return AggPoly(p); }

  AggPoly mul(const AggPoly& a, const AggPoly& b) const {
    AggPoly out;
    for (auto& ta : a.terms()) {
      for (auto& tb : b.terms()) {
        std::set<std::string> inter;
        for (auto& r : ta.ranges)
          if (tb.ranges.count(r)) inter.insert(r);
        if (!inter.empty())
          throw std::runtime_error(
              "unsupported product of overlapping range sums");
        AggTerm t;
        t.inner = ta.inner * tb.inner;
        t.ranges = ta.ranges;
        t.ranges.insert(tb.ranges.begin(), tb.ranges.end());
        out.add_term(std::move(t));
      }
    }
    return out;
  }

  std::optional<AggPoly> div_exact(const AggPoly& a, const AggPoly& d) const {
    if (a.is_zero()) return AggPoly();
    if (!d.is_plain() || d.is_zero()) return std::nullopt;
    Poly dp = d.plain_part();
    // Dividing a sum body by an index-dependent factor is not meaningful.
    auto divisor_ranges = ranges_of_poly(dp);
    AggPoly out;
    for (auto& t : a.terms()) {
      for (auto& r : t.ranges)
        if (divisor_ranges.count(r)) return std::nullopt;
      auto q = t.inner.divided_by(dp);
      if (!q) return std::nullopt;
      out.add_term({*q, t.ranges});
    }
    return out;
  }

  std::tuple<int, int, std::string> pivot_key(const AggPoly& a) const {
    int cat = a.is_constant() ? 0 : (a.is_plain() ? 1 : 2);
    return {cat, a.total_degree(), a.str()};
  }

  std::optional<Poly> symbolic_part(const AggPoly& a) const {
    if (a.is_constant() || !a.is_plain()) return std::nullopt;
    Poly p = a.plain_part();
    Rat c = p.content();
    if (c != 0 && c != 1) p = *p.divided_by(Poly(c));
    if (p.lead_sign() < 0) p = -p;
    return p;
  }

  void normalize_vector(std::vector<AggPoly>& v) const {
    Rat g(0);
    for (auto& a : v)
      for (auto& t : a.terms()) {
        Rat c = t.inner.content();
        if (c != 0) g = (g == 0) ? c : rat_gcd(g, c);
      }
    if (g == 0) return;
    int sign = 0;
    for (auto& a : v) {
      if (a.is_zero()) continue;
      sign = a.terms().front().inner.lead_sign();
      break;
    }
    Rat scale = Rat(1) / g;
    if (sign < 0) scale = -scale;
    for (auto& a : v) a = a * scale;
  }
};

}  // namespace symscan
