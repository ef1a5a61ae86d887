#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mcdp {

// Relative tolerance for numeric equality (dedup, antisymmetry).
inline constexpr double kEps = 1e-9;

bool approx_equal(double a, double b);

/// A value of some poset: a scalar (nonnegative real or +inf), a label of a
/// finite poset, a tuple for product posets, or a sample vector for curves.
class Element {
 public:
  struct Label {
    std::string name;
  };
  struct Samples {
    std::vector<double> values;
  };
  using Tuple = std::vector<Element>;

  Element() : value_(0.0) {}
  Element(double x) : value_(x) {}  // NOLINT(google-explicit-constructor)

  static Element label(std::string name) { return Element(Label{std::move(name)}); }
  static Element tuple(Tuple items) { return Element(std::move(items)); }
  static Element samples(std::vector<double> values) { return Element(Samples{std::move(values)}); }

  bool is_scalar() const { return std::holds_alternative<double>(value_); }
  bool is_label() const { return std::holds_alternative<Label>(value_); }
  bool is_tuple() const { return std::holds_alternative<Tuple>(value_); }
  bool is_samples() const { return std::holds_alternative<Samples>(value_); }

  double scalar() const;
  const std::string& label_name() const;
  const Tuple& items() const;
  const std::vector<double>& sample_values() const;

  // Convenience for tuples.
  const Element& operator[](std::size_t i) const { return items().at(i); }
  std::size_t size() const { return is_tuple() ? items().size() : 1; }

  std::string to_string() const;

  // Exact structural equality and a total order, for containers and caches.
  friend bool operator==(const Element& a, const Element& b);
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }
  friend bool operator<(const Element& a, const Element& b);

 private:
  explicit Element(Label l) : value_(std::move(l)) {}
  explicit Element(Tuple t) : value_(std::move(t)) {}
  explicit Element(Samples s) : value_(std::move(s)) {}

  std::variant<double, Label, Tuple, Samples> value_;
};

enum class PosetKind { Numeric, Finite, Opposite, Product, Curve };
enum class CurveOrder { Ascending, Descending };

/// Immutable, cheaply copyable handle to a partially ordered set.
///
/// Kinds:
///  - numeric: [0, +inf] with the usual order, tagged with a unit string;
///  - finite: explicit labels and Hasse cover edges (lower, upper);
///  - opposite: same elements, reversed order;
///  - product: componentwise order over an ordered list of factors;
///  - curve: sample vectors on a fixed distance grid compared pointwise,
///    ascending (larger values are larger) or descending.
class Poset {
 public:
  static Poset numeric(std::string unit = {});
  static Poset finite(std::vector<std::string> labels,
                      std::vector<std::pair<std::string, std::string>> covers);
  static Poset chain(std::vector<std::string> labels);
  static Poset opposite(Poset inner);
  static Poset product(std::vector<Poset> factors);
  static Poset curve(std::vector<double> grid, CurveOrder order, double lo, double hi,
                     std::string unit = {});

  Poset();  // numeric, unitless

  PosetKind kind() const;
  const std::string& unit() const;
  const Poset& inner() const;
  const std::vector<Poset>& factors() const;
  const std::vector<std::string>& labels() const;
  const std::vector<std::pair<std::string, std::string>>& covers() const;
  const std::vector<double>& grid() const;
  CurveOrder order() const;
  double lo() const;
  double hi() const;

  bool contains(const Element& x) const;
  // Throws StructuralError naming the mismatch.
  void check(const Element& x) const;

  bool leq(const Element& a, const Element& b) const;
  bool equal(const Element& a, const Element& b) const;

  // Minimal elements of up(a) ∩ up(b); a single join on lattices.
  std::vector<Element> min_upper_bounds(const Element& a, const Element& b) const;
  // Maximal elements of down(a) ∩ down(b).
  std::vector<Element> max_lower_bounds(const Element& a, const Element& b) const;

  // Antichains generating the whole poset as an upper / lower set.
  std::vector<Element> minimal_elements() const;
  std::vector<Element> maximal_elements() const;

  // True when every pair of elements is comparable.
  bool is_total() const;

  // Canonical description; two posets with equal signatures are the same.
  const std::string& signature() const;
  bool same_as(const Poset& other) const;

  friend bool operator==(const Poset& a, const Poset& b) { return a.same_as(b); }

 private:
  struct Node;
  explicit Poset(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const { return *node_; }

  std::shared_ptr<const Node> node_;
};

bool leq(const Element& p, const Element& q, const Poset& poset);

// Linear interpolation of a curve sampled on `from` onto `to`; values past
// the ends are held constant.
std::vector<double> resample(const std::vector<double>& from, const std::vector<double>& values,
                             const std::vector<double>& to);

}  // namespace mcdp
