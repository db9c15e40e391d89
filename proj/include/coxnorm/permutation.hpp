#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace coxnorm {

/// A permutation of {0, ..., n-1}; images[i] is the image of i.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> images);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return images_.size(); }
  std::uint32_t operator()(std::size_t i) const { return images_[i]; }
  const std::vector<std::uint32_t>& images() const { return images_; }

  bool is_identity() const;
  Permutation inverse() const;

  /// (a * b)(i) = a(b(i)).
  friend Permutation operator*(const Permutation& a, const Permutation& b);

  auto operator<=>(const Permutation&) const = default;

  std::string to_string() const;

 private:
  std::vector<std::uint32_t> images_;
};

/// Finite permutation group stored as its full, sorted element list.
/// Only meant for the small groups that appear here (diagram automorphism
/// groups of spherical diagrams, finite Gamma_Pi).
class PermutationGroup {
 public:
  PermutationGroup() = default;
  PermutationGroup(std::size_t degree, std::vector<Permutation> generators,
                   std::size_t max_order = 2'000'000);

  static PermutationGroup trivial(std::size_t degree);

  std::size_t degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Permutation>& generators() const { return generators_; }
  const std::vector<Permutation>& elements() const { return elements_; }
  bool contains(const Permutation& p) const;
  bool is_subgroup_of(const PermutationGroup& other) const;
  /// True when g H g^-1 = H for every generator g of `other`.
  bool is_normalized_by(const PermutationGroup& other) const;

 private:
  std::size_t degree_ = 0;
  std::vector<Permutation> generators_;
  std::vector<Permutation> elements_;
};

}  // namespace coxnorm
