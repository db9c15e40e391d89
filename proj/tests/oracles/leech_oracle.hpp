#pragma once
// Independent checks for the Leech lattice: membership through a Hermite basis of the
// lattice spanned by the usual generating vectors, and shell sizes from the theta series
// E_12 - (65520/691) Delta.

#include <gmpxx.h>

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

class HermiteLattice {
 public:
  explicit HermiteLattice(const std::vector<std::array<long, 24>>& gens) {
    for (const auto& g : gens) {
      std::array<mpz_class, 24> v;
      for (int i = 0; i < 24; ++i) v[i] = g[i];
      insert(v);
    }
  }

  bool contains(const std::array<long, 24>& x) const {
    std::array<mpz_class, 24> v;
    for (int i = 0; i < 24; ++i) v[i] = x[i];
    for (int c = 0; c < 24; ++c) {
      if (v[c] == 0) continue;
      if (!rows_[c]) return false;
      const auto& r = *rows_[c];
      if (v[c] % r[c] != 0) return false;
      mpz_class q = v[c] / r[c];
      for (int k = c; k < 24; ++k) v[k] -= q * r[k];
    }
    return true;
  }

  mpz_class determinant() const {
    mpz_class d = 1;
    for (int c = 0; c < 24; ++c) d *= rows_[c] ? (*rows_[c])[c] : mpz_class(0);
    return d;
  }

 private:
  void insert(std::array<mpz_class, 24> v) {
    for (int c = 0; c < 24; ++c) {
      if (v[c] == 0) continue;
      if (!rows_[c]) {
        if (v[c] < 0)
          for (auto& x : v) x = -x;
        rows_[c] = v;
        return;
      }
      auto& r = *rows_[c];
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), r[c].get_mpz_t(), v[c].get_mpz_t());
      mpz_class a = r[c] / g, b = v[c] / g;
      for (int k = c; k < 24; ++k) {
        mpz_class nr = s * r[k] + t * v[k];
        mpz_class nv = a * v[k] - b * r[k];
        r[k] = nr;
        v[k] = nv;
      }
      if (r[c] < 0)
        for (auto& x : r) x = -x;
    }
  }

  std::array<std::optional<std::array<mpz_class, 24>>, 24> rows_;
};

// Generators: 4e_i +- 4e_j, 2 * (octad), and (-3, 1^23).
inline HermiteLattice leech_from_generators(const std::vector<std::uint32_t>& octads) {
  std::vector<std::array<long, 24>> gens;
  for (int i = 0; i < 24; ++i)
    for (int j = i + 1; j < 24; ++j)
      for (int s : {1, -1}) {
        std::array<long, 24> v{};
        v[i] = 4;
        v[j] = 4 * s;
        gens.push_back(v);
      }
  for (auto o : octads) {
    std::array<long, 24> v{};
    for (int i = 0; i < 24; ++i)
      if (o >> i & 1) v[i] = 2;
    gens.push_back(v);
  }
  std::array<long, 24> v;
  v.fill(1);
  v[0] = -3;
  gens.push_back(v);
  return HermiteLattice(gens);
}

// Coefficient of q^n in the Leech theta series (n = half the norm).
inline mpz_class theta_coefficient(int n) {
  // Delta = q prod (1 - q^k)^24 up to q^n.
  std::vector<mpz_class> p(n + 1, 0);
  p[0] = 1;
  for (int k = 1; k <= n; ++k)
    for (int rep = 0; rep < 24; ++rep)
      for (int i = n; i >= k; --i) p[i] -= p[i - k];
  mpz_class tau = n >= 1 ? p[n - 1] : mpz_class(0);
  mpz_class sigma = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) {
      mpz_class x;
      mpz_ui_pow_ui(x.get_mpz_t(), d, 11);
      sigma += x;
    }
  mpz_class num = 65520 * (sigma - tau);
  return num / 691;
}

}  // namespace oracle
