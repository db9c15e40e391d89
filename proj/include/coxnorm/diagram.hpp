#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coxnorm/permutation.hpp"

namespace coxnorm {

/// Bond order used for m = infinity.
inline constexpr int kInfinity = 0;

struct Bond {
  std::size_t a = 0;
  std::size_t b = 0;
  int order = 3;  // >= 3, or kInfinity
};

class DiagramError : public std::runtime_error {
 public:
  explicit DiagramError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A finite Coxeter diagram: nodes 0..n-1 with names, and symmetric bond
/// orders. Absent pairs have order 2; a node with itself has order 1.
class CoxeterDiagram {
 public:
  CoxeterDiagram() = default;
  CoxeterDiagram(std::vector<std::string> names, std::span<const Bond> bonds);

  /// Nodes named "0", "1", ... .
  static CoxeterDiagram anonymous(std::size_t n, std::span<const Bond> bonds);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// 1 on the diagonal, 2 for absent pairs, kInfinity for infinite bonds.
  int order(std::size_t a, std::size_t b) const {
    return a == b ? 1 : orders_[a * names_.size() + b];
  }
  bool bonded(std::size_t a, std::size_t b) const { return a != b && order(a, b) != 2; }
  std::vector<Bond> bonds() const;

  CoxeterDiagram induced(std::span<const std::size_t> subset) const;
  /// Connected components (under order != 2), each sorted; ordered by smallest node.
  std::vector<std::vector<std::size_t>> components() const;

  bool operator==(const CoxeterDiagram&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<int> orders_;
};

/// Parse the text diagram format (`nodes:` line, `edge a b m` lines, `#` comments).
/// Node names are sorted lexicographically.
CoxeterDiagram parse_diagram(std::string_view text);
/// Inverse of parse_diagram: nodes sorted, edges sorted.
std::string serialize_diagram(const CoxeterDiagram& d);

enum class Family : std::uint8_t { A, B, D, E, F, H, I };

struct IrreducibleType {
  Family family = Family::A;
  int rank = 1;
  int param = 0;  // bond order m for I2(m); 0 otherwise
  auto operator<=>(const IrreducibleType&) const = default;
  std::string to_string() const;
};

/// Multiset of irreducible spherical types, canonically ordered
/// (rank descending, then family, then parameter).
class SphericalType {
 public:
  SphericalType() = default;
  explicit SphericalType(std::vector<IrreducibleType> components);

  /// Parses names such as "A3A1^6", "E6", "I2(5)", "D5" (aliases normalized).
  static SphericalType parse(std::string_view text);

  const std::vector<IrreducibleType>& components() const { return components_; }
  int rank() const;
  std::string to_string() const;
  auto operator<=>(const SphericalType&) const = default;

 private:
  std::vector<IrreducibleType> components_;
};

/// Normalizes low-rank aliases (B1, D2, D3, E3..E5, I2(2..4)) to canonical
/// components. May return several components (D2 = A1^2, E3 = A2A1).
std::vector<IrreducibleType> normalize_irreducible(Family family, int rank, int param);

std::optional<SphericalType> classify_spherical(const CoxeterDiagram& d);
inline bool is_spherical(const CoxeterDiagram& d) { return classify_spherical(d).has_value(); }

/// Standard diagram of an irreducible type with nodes named "0".."n-1".
/// Paths are numbered along the path; branch diagrams put the branch node
/// last-but-arm ordering documented in the source.
CoxeterDiagram standard_diagram(const IrreducibleType& t);
CoxeterDiagram standard_diagram(const SphericalType& t);
/// Disjoint union with node names prefixed "c<k>." when more than one part.
CoxeterDiagram disjoint_union(std::span<const CoxeterDiagram> parts);

/// The diagram automorphism -sigma_S of a spherical diagram.
/// Throws DiagramError if the diagram is not spherical.
Permutation opposition_involution(const CoxeterDiagram& s);

struct DiagramAutomorphismGroup {
  std::vector<Permutation> generators;
  std::uint64_t order = 1;
};

bool is_automorphism(const CoxeterDiagram& d, const Permutation& p);
DiagramAutomorphismGroup automorphism_group(const CoxeterDiagram& d);
/// All label-preserving automorphisms, sorted.
PermutationGroup automorphisms(const CoxeterDiagram& d);

/// Label-preserving injective node map from `source` into `target`.
struct DiagramIsometry {
  std::vector<std::uint32_t> image;
  auto operator<=>(const DiagramIsometry&) const = default;
};

/// Every label-preserving injective map j -> s, sorted lexicographically by image tuple.
std::vector<DiagramIsometry> isometries(const CoxeterDiagram& j, const CoxeterDiagram& s);

/// Node subsets of `pi` containing `containing`, of size <= max_rank, whose
/// induced diagram is spherical. Sorted by (size, lexicographic).
std::vector<std::vector<std::size_t>> spherical_subdiagrams(const CoxeterDiagram& pi,
                                                            std::span<const std::size_t> containing,
                                                            std::size_t max_rank);

struct CanonicalForm {
  /// relabeling[i] is the canonical position of node i.
  Permutation relabeling;
  std::string certificate;
};

CanonicalForm canonical_form(const CoxeterDiagram& d);

}  // namespace coxnorm
