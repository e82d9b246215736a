#pragma once

// Exponents on the 1/24 grid. Every q-power the engine meets (eta's 1/24,
// theta's 1/8, half-integer theta_2/theta_3 offsets, and their products) is an
// integer multiple of 1/24; keeping the numerator integral makes exponent
// arithmetic exact and ordering trivial.

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ellgen {

struct Exp24 {
  std::int64_t num = 0;  // exponent value = num / 24

  auto operator<=>(const Exp24&) const = default;
  Exp24 operator+(Exp24 o) const { return {num + o.num}; }
  Exp24 operator-(Exp24 o) const { return {num - o.num}; }
  Exp24 operator-() const { return {-num}; }
  bool integral() const { return num % 24 == 0; }
};

inline constexpr Exp24 EXP24_UNBOUNDED{INT64_MAX};

inline Exp24 q_int(std::int64_t n) { return {24 * n}; }

// n/d as a grid exponent; rejects values off the 1/24 grid.
inline Exp24 q_frac(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("exponent with zero denominator");
  if ((24 * n) % d != 0)
    throw std::domain_error("exponent " + std::to_string(n) + "/" + std::to_string(d) +
                            " is not on the 1/24 grid");
  return {24 * n / d};
}

// Saturating addition for truncation bookkeeping (UNBOUNDED absorbs).
inline Exp24 trunc_add(Exp24 a, Exp24 b) {
  if (a == EXP24_UNBOUNDED || b == EXP24_UNBOUNDED) return EXP24_UNBOUNDED;
  return a + b;
}

inline std::string exp24_str(Exp24 e) {
  if (e == EXP24_UNBOUNDED) return "inf";
  std::int64_t n = e.num, d = 24;
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  n /= g;
  d /= g;
  if (d == 1) return std::to_string(n);
  return std::to_string(n) + "/" + std::to_string(d);
}

}  // namespace ellgen
