#pragma once
// Exact positive-definiteness test for Coxeter Gram matrices
// (diagonal 2, off-diagonal -2cos(pi/m)) with bond orders in {2,3,4,5,6}.
// Arithmetic is in Q(sqrt2, sqrt3, sqrt5); 2cos(pi/m) is 0, 1, sqrt2,
// (1+sqrt5)/2, sqrt3 respectively. Independent of the classification table.

#include <gmpxx.h>

#include <array>
#include <stdexcept>
#include <vector>

#include "coxnorm/diagram.hpp"

namespace oracle {

// Element of Q(sqrt2, sqrt3, sqrt5): coefficient c[mask] multiplies the
// square root of the product of primes selected by mask (bit0=2, bit1=3, bit2=5).
struct Multiquad {
  static constexpr std::array<int, 3> kPrimes{2, 3, 5};
  std::array<mpq_class, 8> c{};

  static Multiquad rational(const mpq_class& q) {
    Multiquad x;
    x.c[0] = q;
    return x;
  }
  bool is_zero(int upto = 8) const {
    for (int m = 0; m < upto; ++m)
      if (c[m] != 0) return false;
    return true;
  }
  friend Multiquad operator+(const Multiquad& a, const Multiquad& b) {
    Multiquad r;
    for (int m = 0; m < 8; ++m) r.c[m] = a.c[m] + b.c[m];
    return r;
  }
  friend Multiquad operator-(const Multiquad& a, const Multiquad& b) {
    Multiquad r;
    for (int m = 0; m < 8; ++m) r.c[m] = a.c[m] - b.c[m];
    return r;
  }
  friend Multiquad operator*(const Multiquad& a, const Multiquad& b) {
    Multiquad r;
    for (int x = 0; x < 8; ++x) {
      if (a.c[x] == 0) continue;
      for (int y = 0; y < 8; ++y) {
        if (b.c[y] == 0) continue;
        mpq_class k = a.c[x] * b.c[y];
        int common = x & y;
        for (int i = 0; i < 3; ++i)
          if (common & (1 << i)) k *= kPrimes[i];
        r.c[x ^ y] += k;
      }
    }
    return r;
  }
  // Flip the sign of every component containing prime index i.
  Multiquad conjugate(int i) const {
    Multiquad r = *this;
    for (int m = 0; m < 8; ++m)
      if (m & (1 << i)) r.c[m] = -r.c[m];
    return r;
  }
  // Sign, using only primes with index < level.
  static int sign_at(const Multiquad& x, int level) {
    if (level == 0) return sgn(x.c[0]);
    const int bit = 1 << (level - 1);
    Multiquad a, b;  // x = a + b sqrt(p)
    for (int m = 0; m < 8; ++m) {
      if (m & bit)
        b.c[m ^ bit] = x.c[m];
      else
        a.c[m] = x.c[m];
    }
    int sa = sign_at(a, level - 1), sb = sign_at(b, level - 1);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    Multiquad d = a * a - Multiquad::rational(kPrimes[level - 1]) * b * b;
    return sa * sign_at(d, level - 1);
  }
  int sign() const { return sign_at(*this, 3); }

  Multiquad inverse() const {
    // Multiply by conjugates until rational.
    Multiquad num = rational(1), den = *this;
    for (int i = 2; i >= 0; --i) {
      Multiquad cj = den.conjugate(i);
      num = num * cj;
      den = den * cj;
    }
    if (den.c[0] == 0) throw std::domain_error("inverse of zero");
    mpq_class inv = 1 / den.c[0];
    for (auto& v : num.c) v *= inv;
    return num;
  }
};

inline Multiquad two_cos_pi_over(int m) {
  Multiquad x;
  switch (m) {
    case 2: break;
    case 3: x.c[0] = 1; break;
    case 4: x.c[1] = 1; break;
    case 5:
      x.c[0] = mpq_class(1, 2);
      x.c[4] = mpq_class(1, 2);
      break;
    case 6: x.c[2] = 1; break;
    default: throw std::invalid_argument("oracle supports bond orders 2..6");
  }
  return x;
}

/// Positive definiteness of the Gram matrix via pivots of symmetric elimination.
inline bool gram_positive_definite(const coxnorm::CoxeterDiagram& d) {
  const std::size_t n = d.size();
  std::vector<std::vector<Multiquad>> g(n, std::vector<Multiquad>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) {
        g[a][b] = Multiquad::rational(2);
      } else {
        int m = d.order(a, b);
        if (m == coxnorm::kInfinity) return false;  // entry -2: never spherical
        g[a][b] = Multiquad::rational(0) - two_cos_pi_over(m);
      }
    }
  for (std::size_t k = 0; k < n; ++k) {
    if (g[k][k].sign() <= 0) return false;
    Multiquad inv = g[k][k].inverse();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (g[i][k].is_zero()) continue;
      Multiquad f = g[i][k] * inv;
      for (std::size_t j = k + 1; j < n; ++j)
        if (!g[k][j].is_zero()) g[i][j] = g[i][j] - f * g[k][j];
    }
  }
  return true;
}

}  // namespace oracle
