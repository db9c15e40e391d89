#include "coxnorm/permutation.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace coxnorm {

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (auto v : images_) {
    if (v >= images_.size() || seen[v]) throw std::invalid_argument("not a permutation");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  std::iota(v.begin(), v.end(), 0u);
  Permutation p;
  p.images_ = std::move(v);
  return p;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) p.images_[images_[i]] = static_cast<std::uint32_t>(i);
  return p;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("permutation degree mismatch");
  Permutation p;
  p.images_.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p.images_[i] = a.images_[b.images_[i]];
  return p;
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < images_.size(); ++i) os << (i ? " " : "") << images_[i];
  os << ']';
  return os.str();
}

PermutationGroup::PermutationGroup(std::size_t degree, std::vector<Permutation> generators,
                                   std::size_t max_order)
    : degree_(degree), generators_(std::move(generators)) {
  for (const auto& g : generators_)
    if (g.size() != degree_) throw std::invalid_argument("generator degree mismatch");
  std::set<Permutation> seen;
  std::deque<Permutation> queue;
  auto id = Permutation::identity(degree_);
  seen.insert(id);
  queue.push_back(id);
  while (!queue.empty()) {
    auto x = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : generators_) {
      auto y = g * x;
      if (seen.insert(y).second) {
        if (seen.size() > max_order) throw std::length_error("permutation group too large to enumerate");
        queue.push_back(std::move(y));
      }
    }
  }
  elements_.assign(seen.begin(), seen.end());
}

PermutationGroup PermutationGroup::trivial(std::size_t degree) { return PermutationGroup(degree, {}); }

bool PermutationGroup::contains(const Permutation& p) const {
  return std::binary_search(elements_.begin(), elements_.end(), p);
}

bool PermutationGroup::is_subgroup_of(const PermutationGroup& other) const {
  return std::all_of(generators_.begin(), generators_.end(),
                     [&](const Permutation& g) { return other.contains(g); });
}

bool PermutationGroup::is_normalized_by(const PermutationGroup& other) const {
  for (const auto& g : other.generators()) {
    auto gi = g.inverse();
    for (const auto& h : generators_)
      if (!contains(g * h * gi)) return false;
  }
  return true;
}

}  // namespace coxnorm
