#pragma once
// Enumerations shared by unit and acceptance tests.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "coxnorm/diagram.hpp"

namespace testsupport {

using namespace coxnorm;

inline std::vector<IrreducibleType> irreducibles(int n, int max_dihedral, bool crystallographic) {
  std::vector<IrreducibleType> out{{Family::A, n, 0}};
  if (n >= 2) out.push_back({Family::B, n, 0});
  if (n >= 4) out.push_back({Family::D, n, 0});
  if (n >= 6 && n <= 8) out.push_back({Family::E, n, 0});
  if (n == 4) out.push_back({Family::F, 4, 0});
  if (!crystallographic && (n == 3 || n == 4)) out.push_back({Family::H, n, 0});
  if (n == 2)
    for (int m = 5; m <= max_dihedral; ++m)
      if (!crystallographic || m == 6) out.push_back({Family::I, 2, m});
  return out;
}

// Every spherical type with rank in [1, max_rank].
inline std::vector<SphericalType> spherical_types(int max_rank, int max_dihedral, bool crystallographic) {
  std::vector<IrreducibleType> pool;
  for (int n = 1; n <= max_rank; ++n)
    for (auto t : irreducibles(n, max_dihedral, crystallographic)) pool.push_back(t);
  std::vector<SphericalType> out;
  std::vector<IrreducibleType> pick;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int rank) {
    if (!pick.empty()) out.emplace_back(pick);
    for (std::size_t i = from; i < pool.size(); ++i) {
      if (rank + pool[i].rank > max_rank) continue;
      pick.push_back(pool[i]);
      rec(i, rank + pool[i].rank);
      pick.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

// One representative per isomorphism class of nonempty induced subdiagrams.
inline std::vector<CoxeterDiagram> subdiagram_classes(const CoxeterDiagram& s) {
  std::map<std::string, CoxeterDiagram> seen;
  const std::size_t n = s.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) nodes.push_back(i);
    auto d = s.induced(nodes);
    auto cert = canonical_form(d).certificate;
    if (!seen.count(cert)) seen.emplace(cert, CoxeterDiagram::anonymous(d.size(), d.bonds()));
  }
  std::vector<CoxeterDiagram> out;
  for (auto& [_, d] : seen) out.push_back(std::move(d));
  return out;
}

}  // namespace testsupport
