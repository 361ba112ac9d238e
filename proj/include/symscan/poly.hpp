#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symscan/rational.hpp"

namespace symscan {

// Monomial: symbol name -> positive exponent. Symbols are model variable
// names, so string keys keep ordering human-stable.
using Monomial = std::map<std::string, int>;

inline int monomial_degree(const Monomial& m) {
  int d = 0;
  for (auto& [_, e] : m) d += e;
  return d;
}

// Graded lexicographic order: total degree first, then lexicographic on
// exponent vectors with earlier symbol names more significant.
struct MonomialOrder {
  bool operator()(const Monomial& x, const Monomial& y) const {
    int dx = monomial_degree(x), dy = monomial_degree(y);
    if (dx != dy) return dx < dy;
    auto ix = x.begin(), iy = y.begin();
    while (ix != x.end() && iy != y.end()) {
      if (ix->first != iy->first) return ix->first > iy->first;
      if (ix->second != iy->second) return ix->second < iy->second;
      ++ix;
      ++iy;
    }
    return ix == x.end() && iy != y.end();
  }
};

// Sparse multivariate polynomial with rational coefficients.
class Poly {
 public:
  using Terms = std::map<Monomial, Rat, MonomialOrder>;

  Poly() = default;
  explicit Poly(const Rat& c) {
    if (c != 0) terms_[{}] = c;
  }
  static Poly symbol(const std::string& name) {
    Poly p;
    p.terms_[{{name, 1}}] = 1;
    return p;
  }
  static Poly constant(const Rat& c) { return Poly(c); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }
  Rat constant_value() const {
    if (terms_.empty()) return Rat(0);
    auto it = terms_.find({});
    return it == terms_.end() ? Rat(0) : it->second;
  }
  int total_degree() const {
    int d = 0;
    for (auto& [m, _] : terms_) d = std::max(d, monomial_degree(m));
    return d;
  }

  std::set<std::string> symbols() const {
    std::set<std::string> out;
    for (auto& [m, _] : terms_)
      for (auto& [s, __] : m) out.insert(s);
    return out;
  }

  void add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
  }
  friend Poly operator-(const Poly& a) {
    Poly r;
    for (auto& [m, c] : a.terms_) r.terms_[m] = -c;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ma, ca] : a.terms_)
      for (auto& [mb, cb] : b.terms_) {
        Monomial m = ma;
        for (auto& [s, e] : mb) m[s] += e;
        r.add_term(m, ca * cb);
      }
    return r;
  }
  friend Poly operator*(const Poly& a, const Rat& c) {
    Poly r;
    if (c == 0) return r;
    for (auto& [m, k] : a.terms_) r.terms_[m] = k * c;
    return r;
  }
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }
  bool operator<(const Poly& o) const { return str() < o.str(); }

  // Exact multivariate division; nullopt when the division has a remainder.
  std::optional<Poly> divided_by(const Poly& d) const {
    if (d.is_zero()) return std::nullopt;
    Poly rem = *this, quot;
    auto lead = [](const Poly& p) { return std::prev(p.terms_.end()); };
    while (!rem.is_zero()) {
      auto lr = lead(rem);
      auto ld = lead(const_cast<Poly&>(d));
      Monomial q;
      for (auto& [s, e] : lr->first) q[s] = e;
      for (auto& [s, e] : ld->first) {
        auto it = q.find(s);
        if (it == q.end() || it->second < e) return std::nullopt;
        it->second -= e;
        if (it->second == 0) q.erase(it);
      }
      Rat qc = lr->second / ld->second;
      Poly t;
      t.terms_[q] = qc;
      quot = quot + t;
      rem = rem - t * d;
    }
    return quot;
  }

  Rat eval(const std::map<std::string, Rat>& values) const {
    Rat out(0);
    for (auto& [m, c] : terms_) {
      Rat v = c;
      for (auto& [s, e] : m) {
        auto it = values.find(s);
        Rat base = it == values.end() ? Rat(0) : it->second;
        for (int i = 0; i < e; ++i) v *= base;
      }
      out += v;
    }
    return out;
  }

  // Positive rational content (gcd of coefficients); zero polynomial -> 0.
  Rat content() const {
    Rat g(0);
    for (auto& [_, c] : terms_) {
      Rat a = c < 0 ? Rat(-c) : c;
      g = (g == 0) ? a : rat_gcd(g, a);
    }
    return g;
  }

  // Sign of the leading (highest-order) coefficient; 0 for the zero poly.
  int lead_sign() const {
    if (terms_.empty()) return 0;
    return std::prev(terms_.end())->second < 0 ? -1 : 1;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    // Render highest-order terms first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      Rat a = c < 0 ? Rat(-c) : c;
      if (first) {
        if (c < 0) out += "-";
        first = false;
      } else {
        out += c < 0 ? " - " : " + ";
      }
      std::string mono;
      for (auto& [s, e] : m) {
        if (!mono.empty()) mono += "*";
        mono += s;
        if (e > 1) mono += "^" + std::to_string(e);
      }
      if (mono.empty()) {
        out += rat_str(a);
      } else if (a == 1) {
        out += mono;
      } else {
        out += rat_str(a) + "*" + mono;
      }
    }
    return out;
  }

 private:
  Terms terms_;
};

}  // namespace symscan
