#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "symscan/poly.hpp"
#include "symscan/rational.hpp"

namespace symscan {

// ---------------------------------------------------------------------------
// Matrix containers
// ---------------------------------------------------------------------------

struct RatMatrix {
  int rows = 0, cols = 0;
  std::vector<Rat> a;

  RatMatrix() = default;
  RatMatrix(int r, int c) : rows(r), cols(c), a(size_t(r) * c, Rat(0)) {}
  Rat& at(int r, int c) { return a[size_t(r) * cols + c]; }
  const Rat& at(int r, int c) const { return a[size_t(r) * cols + c]; }
};

struct GF2Matrix {
  int rows = 0, cols = 0;
  std::vector<uint8_t> a;

  GF2Matrix() = default;
  GF2Matrix(int r, int c) : rows(r), cols(c), a(size_t(r) * c, 0) {}
  uint8_t& at(int r, int c) { return a[size_t(r) * cols + c]; }
  const uint8_t& at(int r, int c) const { return a[size_t(r) * cols + c]; }
};

struct PolyMatrix {
  int rows = 0, cols = 0;
  std::vector<Poly> a;

  PolyMatrix() = default;
  PolyMatrix(int r, int c) : rows(r), cols(c), a(size_t(r) * c) {}
  Poly& at(int r, int c) { return a[size_t(r) * cols + c]; }
  const Poly& at(int r, int c) const { return a[size_t(r) * cols + c]; }
};

// ---------------------------------------------------------------------------
// Kernel over a field (rationals, GF(2))
//
// Reduced row echelon form with pivots at the smallest available column
// indices. The returned basis is the canonical one induced by the free
// columns: each basis vector carries 1 at its free column and 0 at every
// other free column, so identical inputs always produce identical bases.
// ---------------------------------------------------------------------------

template <class F>
struct FieldKernelResult {
  std::vector<std::vector<typename F::Coeff>> basis;
  std::vector<int> pivot_cols;
  int rank = 0;
};

template <class F>
FieldKernelResult<F> field_kernel(int rows, int cols,
                                  std::vector<typename F::Coeff> m) {
  using C = typename F::Coeff;
  auto at = [&](int r, int c) -> C& { return m[size_t(r) * cols + c]; };
  FieldKernelResult<F> out;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int piv = -1;
    for (int r = row; r < rows; ++r)
      if (!F::is_zero(at(r, col))) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int c = 0; c < cols; ++c) std::swap(at(piv, c), at(row, c));
    C inv = F::div(F::one(), at(row, col));
    for (int c = 0; c < cols; ++c) at(row, c) = F::mul(at(row, c), inv);
    for (int r = 0; r < rows; ++r) {
      if (r == row || F::is_zero(at(r, col))) continue;
      C factor = at(r, col);
      for (int c = 0; c < cols; ++c)
        at(r, c) = F::sub(at(r, c), F::mul(factor, at(row, c)));
    }
    out.pivot_cols.push_back(col);
    ++row;
  }
  out.rank = int(out.pivot_cols.size());
  std::vector<bool> is_pivot(cols, false);
  for (int c : out.pivot_cols) is_pivot[c] = true;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<C> v(cols, F::zero());
    v[f] = F::one();
    for (size_t i = 0; i < out.pivot_cols.size(); ++i)
      v[out.pivot_cols[i]] = F::neg(at(int(i), f));
    out.basis.push_back(std::move(v));
  }
  return out;
}

struct QField {
  using Coeff = Rat;
  static Coeff zero() { return Rat(0); }
  static Coeff one() { return Rat(1); }
  static bool is_zero(const Coeff& c) { return c == 0; }
  static Coeff add(const Coeff& a, const Coeff& b) { return a + b; }
  static Coeff sub(const Coeff& a, const Coeff& b) { return a - b; }
  static Coeff mul(const Coeff& a, const Coeff& b) { return a * b; }
  static Coeff div(const Coeff& a, const Coeff& b) { return a / b; }
  static Coeff neg(const Coeff& a) { return -a; }
};

struct GF2Field {
  using Coeff = uint8_t;
  static Coeff zero() { return 0; }
  static Coeff one() { return 1; }
  static bool is_zero(Coeff c) { return c == 0; }
  static Coeff add(Coeff a, Coeff b) { return a ^ b; }
  static Coeff sub(Coeff a, Coeff b) { return a ^ b; }
  static Coeff mul(Coeff a, Coeff b) { return a & b; }
  static Coeff div(Coeff a, Coeff b) {
    assert(b == 1);
    return a;
  }
  static Coeff neg(Coeff a) { return a; }
};

inline std::vector<std::vector<Rat>> nullspace_Q(const RatMatrix& m) {
  return field_kernel<QField>(m.rows, m.cols, m.a).basis;
}

inline int rank_Q(const RatMatrix& m) {
  return field_kernel<QField>(m.rows, m.cols, m.a).rank;
}

inline std::vector<std::vector<uint8_t>> nullspace_GF2(const GF2Matrix& m) {
  return field_kernel<GF2Field>(m.rows, m.cols, m.a).basis;
}

inline int rank_GF2(const GF2Matrix& m) {
  return field_kernel<GF2Field>(m.rows, m.cols, m.a).rank;
}

// ---------------------------------------------------------------------------
// Fraction-free kernel over a polynomial-like coefficient ring.
//
// Templated so the same engine runs over plain polynomials and over the
// aggregate-coefficient ring used by translation detection. Elimination is
// Gauss-Jordan by cross-multiplication (no divisions); pivots prefer
// symbol-free coefficients, then lowest total degree. Divisions only occur
// implicitly when reading off the kernel, where each coordinate is cleared
// back to ring form. Symbolic pivot coefficients are reported so callers can
// attach genericity caveats: the basis is valid where those pivots are
// nonzero.
//
// Required Ops interface:
//   using Coeff;
//   bool is_zero(c); Coeff add/sub/mul/neg; Coeff from_poly(Poly);
//   std::optional<Coeff> div_exact(c, d);
//   std::tuple<int,int,std::string> pivot_key(c);   // category, degree, tie
//   std::optional<Poly> symbolic_part(c);           // non-constant pivot?
//   void normalize_vector(std::vector<Coeff>&);     // content + sign
// ---------------------------------------------------------------------------

template <class Ops>
struct RingKernelResult {
  std::vector<std::vector<typename Ops::Coeff>> basis;
  std::vector<int> free_cols;  // one per basis vector, ascending
  std::vector<Poly> symbolic_pivots;
  int rank = 0;
};

template <class Ops>
RingKernelResult<Ops> ring_kernel(const Ops& ops, int rows, int cols,
                                  std::vector<typename Ops::Coeff> m) {
  using C = typename Ops::Coeff;
  auto at = [&](int r, int c) -> C& { return m[size_t(r) * cols + c]; };
  RingKernelResult<Ops> out;

  std::vector<bool> row_used(rows, false), col_used(cols, false);
  std::vector<std::pair<int, int>> pivots;  // (row, col)

  for (;;) {
    int best_r = -1, best_c = -1;
    std::tuple<int, int, std::string> best_key;
    for (int c = 0; c < cols; ++c) {
      if (col_used[c]) continue;
      for (int r = 0; r < rows; ++r) {
        if (row_used[r] || ops.is_zero(at(r, c))) continue;
        auto key = ops.pivot_key(at(r, c));
        if (best_r < 0 || key < best_key ||
            (key == best_key && std::make_pair(c, r) <
                                    std::make_pair(best_c, best_r))) {
          best_key = key;
          best_r = r;
          best_c = c;
        }
      }
    }
    if (best_r < 0) break;
    row_used[best_r] = true;
    col_used[best_c] = true;
    pivots.emplace_back(best_r, best_c);
    C piv = at(best_r, best_c);
    if (auto sym = ops.symbolic_part(piv)) out.symbolic_pivots.push_back(*sym);
    for (int r = 0; r < rows; ++r) {
      if (r == best_r || ops.is_zero(at(r, best_c))) continue;
      C factor = at(r, best_c);
      for (int c = 0; c < cols; ++c) {
        C t = ops.sub(ops.mul(piv, at(r, c)), ops.mul(factor, at(best_r, c)));
        at(r, c) = t;
      }
      std::vector<C> rowvec(cols);
      for (int c = 0; c < cols; ++c) rowvec[c] = at(r, c);
      ops.normalize_vector(rowvec);
      for (int c = 0; c < cols; ++c) at(r, c) = rowvec[c];
    }
  }
  out.rank = int(pivots.size());

  // Deduplicated pivot coefficients; kernel coordinates are cleared by the
  // product of all pivots not cancelling exactly.
  std::vector<C> pivot_coeffs;
  for (auto& [r, c] : pivots) pivot_coeffs.push_back(at(r, c));

  for (int f = 0; f < cols; ++f) {
    if (col_used[f]) continue;
    // v[f] = prod(pivots); v[pivot col] = -entry * prod(other pivots).
    std::vector<C> v(cols, ops.from_poly(Poly()));
    C all = ops.from_poly(Poly(Rat(1)));
    for (auto& p : pivot_coeffs) all = ops.mul(all, p);
    v[f] = all;
    for (size_t i = 0; i < pivots.size(); ++i) {
      auto [pr, pc] = pivots[i];
      if (ops.is_zero(at(pr, f))) continue;
      C others = ops.from_poly(Poly(Rat(1)));
      for (size_t j = 0; j < pivots.size(); ++j)
        if (j != i) others = ops.mul(others, pivot_coeffs[j]);
      v[pc] = ops.neg(ops.mul(at(pr, f), others));
    }
    // Shrink by any symbolic pivot dividing every coordinate exactly;
    // rational factors are absorbed by the final normalization.
    for (auto& p : pivot_coeffs) {
      if (std::get<0>(ops.pivot_key(p)) == 0) continue;
      for (;;) {
        std::vector<C> reduced(cols);
        bool ok = true;
        for (int c = 0; c < cols && ok; ++c) {
          if (auto q = ops.div_exact(v[c], p))
            reduced[c] = *q;
          else
            ok = false;
        }
        if (!ok) break;
        v = std::move(reduced);
      }
    }
    ops.normalize_vector(v);
    out.basis.push_back(std::move(v));
    out.free_cols.push_back(f);
  }
  return out;
}

// Plain polynomial coefficients.
struct PolyOps {
  using Coeff = Poly;
  bool is_zero(const Poly& p) const { return p.is_zero(); }
  Poly add(const Poly& a, const Poly& b) const { return a + b; }
  Poly sub(const Poly& a, const Poly& b) const { return a - b; }
  Poly mul(const Poly& a, const Poly& b) const { return a * b; }
  Poly neg(const Poly& a) const { return -a; }
  Poly from_poly(const Poly& p) const { return p; }
  std::optional<Poly> div_exact(const Poly& a, const Poly& d) const {
    if (a.is_zero()) return Poly();
    return a.divided_by(d);
  }
  std::tuple<int, int, std::string> pivot_key(const Poly& p) const {
    return {p.is_constant() ? 0 : 1, p.total_degree(), p.str()};
  }
  std::optional<Poly> symbolic_part(const Poly& p) const {
    if (p.is_constant()) return std::nullopt;
    Rat c = p.content();
    Poly n = p;
    if (c != 0 && c != 1) n = *p.divided_by(Poly(c));
    if (n.lead_sign() < 0) n = -n;
    return n;
  }
  void normalize_vector(std::vector<Poly>& v) const {
    Rat g(0);
    for (auto& p : v) {
      Rat c = p.content();
      if (c != 0) g = (g == 0) ? c : rat_gcd(g, c);
    }
    if (g == 0) return;
    int sign = 0;
    for (auto& p : v)
      if (!p.is_zero()) {
        sign = p.lead_sign();
        break;
      }
    Rat scale = Rat(1) / g;
    if (sign < 0) scale = -scale;
    for (auto& p : v) p = p * scale;
  }
};

struct PolyKernelResult {
  std::vector<std::vector<Poly>> basis;
  std::vector<Poly> symbolic_pivots;
  int rank = 0;
};

inline PolyKernelResult nullspace_poly(const PolyMatrix& m) {
  auto r = ring_kernel(PolyOps{}, m.rows, m.cols, m.a);
  return {std::move(r.basis), std::move(r.symbolic_pivots), r.rank};
}

}  // namespace symscan
