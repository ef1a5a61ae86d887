#include "mcdp/antichain.hpp"

#include <algorithm>
#include <cmath>

#include "mcdp/errors.hpp"

namespace mcdp {

namespace {

// Posets built from reals, curves and chains embed into R^n with the
// coordinatewise order, which makes dominance checks cheap.
bool flattenable(const Poset& p) {
  switch (p.kind()) {
    case PosetKind::Numeric:
    case PosetKind::Curve:
      return true;
    case PosetKind::Finite:
      return p.is_total();
    case PosetKind::Opposite:
      return flattenable(p.inner());
    case PosetKind::Product:
      return std::all_of(p.factors().begin(), p.factors().end(), flattenable);
  }
  return false;
}

void flatten(const Poset& p, const Element& x, bool flip, std::vector<double>& out) {
  const double sign = flip ? -1.0 : 1.0;
  switch (p.kind()) {
    case PosetKind::Numeric:
      out.push_back(sign * x.scalar());
      return;
    case PosetKind::Curve: {
      const double s = p.order() == CurveOrder::Descending ? -sign : sign;
      for (double v : x.sample_values()) out.push_back(s * v);
      return;
    }
    case PosetKind::Finite: {
      double rank = 0;
      for (const auto& l : p.labels())
        if (p.leq(Element::label(l), x)) ++rank;
      out.push_back(sign * rank);
      return;
    }
    case PosetKind::Opposite:
      flatten(p.inner(), x, !flip, out);
      return;
    case PosetKind::Product: {
      const auto& items = x.items();
      if (items.size() != p.factors().size()) throw StructuralError("tuple arity does not match " + p.signature());
      for (std::size_t i = 0; i < items.size(); ++i) flatten(p.factors()[i], items[i], flip, out);
      return;
    }
  }
}

bool flat_leq(const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = a[i];
    const double y = b[i];
    if (x <= y) continue;
    // approx_equal, inlined: this loop is the solver's hot spot.
    if (std::isinf(x) || std::isinf(y) || x - y > kEps * std::max({1.0, std::fabs(x), std::fabs(y)})) return false;
  }
  return true;
}

template <typename Leq>
std::vector<std::size_t> pareto_min_with(std::size_t count, Leq leq) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < count; ++i) {
    bool dominated = false;
    for (auto k : kept) {
      if (leq(k, i)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    std::erase_if(kept, [&](std::size_t k) { return leq(i, k); });
    kept.push_back(i);
  }
  return kept;
}

}  // namespace

std::vector<std::size_t> pareto_min_indices(std::span<const Element> points, const Poset& poset) {
  std::vector<std::size_t> kept;
  if (!points.empty() && flattenable(poset)) {
    std::vector<double> flat;
    flatten(poset, points[0], false, flat);
    const std::size_t dim = flat.size();
    flat.reserve(dim * points.size());
    for (std::size_t i = 1; i < points.size(); ++i) {
      flatten(poset, points[i], false, flat);
      if (flat.size() != dim * (i + 1)) throw StructuralError("point does not belong to " + poset.signature());
    }
    kept = pareto_min_with(points.size(), [&](std::size_t a, std::size_t b) {
      return flat_leq(flat.data() + a * dim, flat.data() + b * dim, dim);
    });
  } else {
    kept = pareto_min_with(points.size(), [&](std::size_t a, std::size_t b) { return poset.leq(points[a], points[b]); });
  }
  std::sort(kept.begin(), kept.end(),
            [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  return kept;
}

Antichain::Antichain(Poset poset, std::span<const Element> points) : poset_(std::move(poset)) {
  for (const auto& p : points) poset_.check(p);
  for (auto i : pareto_min_indices(points, poset_)) elements_.push_back(points[i]);
}

bool Antichain::upper_contains(const Element& r) const {
  return std::any_of(elements_.begin(), elements_.end(),
                     [&](const Element& a) { return poset_.leq(a, r); });
}

bool Antichain::upper_includes(const Antichain& other) const {
  return std::all_of(other.elements_.begin(), other.elements_.end(),
                     [&](const Element& e) { return upper_contains(e); });
}

bool Antichain::same_upper_set(const Antichain& other) const {
  return upper_includes(other) && other.upper_includes(*this);
}

std::string Antichain::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < elements_.size(); ++i) s += (i ? ", " : "") + elements_[i].to_string();
  return s + "}";
}

Antichain pareto_min(std::span<const Element> points, const Poset& poset) { return Antichain(poset, points); }

bool upper_set_contains(const Antichain& ac, const Element& r) {
  ac.poset().check(r);
  return ac.upper_contains(r);
}

Antichain antichain_union(const Antichain& a, const Antichain& b) {
  if (!a.poset().same_as(b.poset()))
    throw StructuralError("antichain_union over different posets: " + a.poset().signature() + " vs " +
                          b.poset().signature());
  std::vector<Element> all = a.elements();
  all.insert(all.end(), b.elements().begin(), b.elements().end());
  return Antichain(a.poset(), all);
}

}  // namespace mcdp
