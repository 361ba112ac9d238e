#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symscan {

// Exact arbitrary-precision rational. All detection arithmetic runs on this
// type; floating point appears only in the verifier's density evaluations.
using Rat = mpq_class;

inline Rat rat_of(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Accepts integers ("3", "-17"), fractions ("-1/2"), and decimal literals
// ("0.25" becomes 1/4). Returns nullopt on malformed input.
inline std::optional<Rat> rat_parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string s(text);
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (frac_len == 0 || digits.empty()) return std::nullopt;
    for (size_t i = 0; i < digits.size(); ++i) {
      char c = digits[i];
      if (!(std::isdigit(static_cast<unsigned char>(c)) ||
            (i == 0 && (c == '-' || c == '+'))))
        return std::nullopt;
    }
    mpz_class num, den(1);
    if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0)
      return std::nullopt;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    Rat q(num, den);
    q.canonicalize();
    return q;
  }
  mpq_class q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0) return std::nullopt;
  if (q.get_den() == 0) return std::nullopt;
  q.canonicalize();
  return q;
}

// Canonical form: "p" for integers, "p/q" otherwise, q > 0.
inline std::string rat_str(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double rat_double(const Rat& q) { return q.get_d(); }

inline Rat rat_gcd(const Rat& a, const Rat& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), mpz_class(a.get_num() * b.get_den()).get_mpz_t(),
          mpz_class(b.get_num() * a.get_den()).get_mpz_t());
  Rat r(g, a.get_den() * b.get_den());
  r.canonicalize();
  return r;
}

}  // namespace symscan
