#pragma once

#include <span>
#include <string>
#include <vector>

#include "mcdp/poset.hpp"

namespace mcdp {

// Indices of the minimal points of `points`. Among equal points the first
// occurrence wins; the result is sorted by element order.
std::vector<std::size_t> pareto_min_indices(std::span<const Element> points, const Poset& poset);

/// Minimal-generator representation of an upper set.
class Antichain {
 public:
  explicit Antichain(Poset poset) : poset_(std::move(poset)) {}
  // Keeps only the minimal points.
  Antichain(Poset poset, std::span<const Element> points);

  const Poset& poset() const { return poset_; }
  const std::vector<Element>& elements() const { return elements_; }
  bool empty() const { return elements_.empty(); }
  std::size_t size() const { return elements_.size(); }

  bool upper_contains(const Element& r) const;
  // Upper-set equality by mutual containment of generators.
  bool same_upper_set(const Antichain& other) const;
  // True when up(other) ⊆ up(*this).
  bool upper_includes(const Antichain& other) const;

  std::string to_string() const;

 private:
  Poset poset_;
  std::vector<Element> elements_;
};

Antichain pareto_min(std::span<const Element> points, const Poset& poset);
bool upper_set_contains(const Antichain& ac, const Element& r);
Antichain antichain_union(const Antichain& a, const Antichain& b);

}  // namespace mcdp
