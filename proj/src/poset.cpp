#include "mcdp/poset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "mcdp/errors.hpp"

namespace mcdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

bool num_leq(double a, double b) { return a <= b || approx_equal(a, b); }

std::vector<Element> cartesian(const std::vector<std::vector<Element>>& choices) {
  std::vector<Element::Tuple> acc{{}};
  for (const auto& options : choices) {
    std::vector<Element::Tuple> next;
    next.reserve(acc.size() * options.size());
    for (const auto& prefix : acc) {
      for (const auto& o : options) {
        auto t = prefix;
        t.push_back(o);
        next.push_back(std::move(t));
      }
    }
    acc = std::move(next);
  }
  std::vector<Element> out;
  out.reserve(acc.size());
  for (auto& t : acc) out.push_back(Element::tuple(std::move(t)));
  return out;
}

}  // namespace

bool approx_equal(double a, double b) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= kEps * scale;
}

// ---------------------------------------------------------------- Element

double Element::scalar() const {
  if (const auto* x = std::get_if<double>(&value_)) return *x;
  throw StructuralError("expected a scalar element, got " + to_string());
}

const std::string& Element::label_name() const {
  if (const auto* l = std::get_if<Label>(&value_)) return l->name;
  throw StructuralError("expected a label element, got " + to_string());
}

const Element::Tuple& Element::items() const {
  if (const auto* t = std::get_if<Tuple>(&value_)) return *t;
  throw StructuralError("expected a tuple element, got " + to_string());
}

const std::vector<double>& Element::sample_values() const {
  if (const auto* s = std::get_if<Samples>(&value_)) return s->values;
  throw StructuralError("expected a sample vector, got " + to_string());
}

std::string Element::to_string() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, Label>) {
          return v.name;
        } else if constexpr (std::is_same_v<T, Tuple>) {
          std::string s = "(";
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ", ";
            s += v[i].to_string();
          }
          return s + ")";
        } else {
          std::string s = "[";
          for (std::size_t i = 0; i < v.values.size(); ++i) {
            if (i) s += ";";
            s += format_number(v.values[i]);
          }
          return s + "]";
        }
      },
      value_);
}

bool operator==(const Element& a, const Element& b) {
  if (a.value_.index() != b.value_.index()) return false;
  return std::visit(
      [&](const auto& va) -> bool {
        using T = std::decay_t<decltype(va)>;
        const auto& vb = std::get<T>(b.value_);
        if constexpr (std::is_same_v<T, double>) {
          return va == vb;
        } else if constexpr (std::is_same_v<T, Element::Label>) {
          return va.name == vb.name;
        } else if constexpr (std::is_same_v<T, Element::Tuple>) {
          return va == vb;
        } else {
          return va.values == vb.values;
        }
      },
      a.value_);
}

bool operator<(const Element& a, const Element& b) {
  if (a.value_.index() != b.value_.index()) return a.value_.index() < b.value_.index();
  return std::visit(
      [&](const auto& va) -> bool {
        using T = std::decay_t<decltype(va)>;
        const auto& vb = std::get<T>(b.value_);
        if constexpr (std::is_same_v<T, double>) {
          return va < vb;
        } else if constexpr (std::is_same_v<T, Element::Label>) {
          return va.name < vb.name;
        } else if constexpr (std::is_same_v<T, Element::Tuple>) {
          return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
        } else {
          return va.values < vb.values;
        }
      },
      a.value_);
}

// ---------------------------------------------------------------- Poset

struct Poset::Node {
  PosetKind kind = PosetKind::Numeric;
  std::string unit;
  std::vector<Poset> children;
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<char>> reach;  // reach[i][j]: labels[i] <= labels[j]
  std::vector<std::pair<std::string, std::string>> covers;
  std::vector<double> grid;
  CurveOrder order = CurveOrder::Ascending;
  double lo = 0.0;
  double hi = kInf;
  std::string signature;

  std::size_t label_index(const Element& e) const {
    const auto& name = e.label_name();
    auto it = index.find(name);
    if (it == index.end()) throw StructuralError("label '" + name + "' is not in " + signature);
    return it->second;
  }
};

Poset::Poset() : Poset(numeric()) {}

Poset Poset::numeric(std::string unit) {
  auto n = std::make_shared<Node>();
  n->kind = PosetKind::Numeric;
  n->unit = std::move(unit);
  n->signature = "R[" + n->unit + "]";
  return Poset(std::move(n));
}

Poset Poset::finite(std::vector<std::string> labels,
                    std::vector<std::pair<std::string, std::string>> covers) {
  auto n = std::make_shared<Node>();
  n->kind = PosetKind::Finite;
  n->labels = std::move(labels);
  for (std::size_t i = 0; i < n->labels.size(); ++i) {
    if (!n->index.emplace(n->labels[i], i).second)
      throw StructuralError("duplicate label '" + n->labels[i] + "' in finite poset");
  }
  const std::size_t k = n->labels.size();
  n->reach.assign(k, std::vector<char>(k, 0));
  for (std::size_t i = 0; i < k; ++i) n->reach[i][i] = 1;
  for (const auto& [lower, upper] : covers) {
    auto a = n->index.find(lower);
    auto b = n->index.find(upper);
    if (a == n->index.end() || b == n->index.end())
      throw StructuralError("Hasse edge " + lower + " < " + upper + " names an unknown label");
    n->reach[a->second][b->second] = 1;
  }
  // Transitive closure; finite posets here are small.
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i)
      if (n->reach[i][m])
        for (std::size_t j = 0; j < k; ++j)
          if (n->reach[m][j]) n->reach[i][j] = 1;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (n->reach[i][j] && n->reach[j][i])
        throw StructuralError("Hasse diagram has a cycle through '" + n->labels[i] + "' and '" +
                              n->labels[j] + "'");

  std::sort(covers.begin(), covers.end());
  n->covers = covers;
  std::string sig = "F{";
  for (std::size_t i = 0; i < k; ++i) sig += (i ? "," : "") + n->labels[i];
  sig += "|";
  for (std::size_t i = 0; i < covers.size(); ++i)
    sig += (i ? "," : "") + covers[i].first + "<" + covers[i].second;
  n->signature = sig + "}";
  return Poset(std::move(n));
}

Poset Poset::chain(std::vector<std::string> labels) {
  std::vector<std::pair<std::string, std::string>> covers;
  for (std::size_t i = 1; i < labels.size(); ++i) covers.emplace_back(labels[i - 1], labels[i]);
  return finite(std::move(labels), std::move(covers));
}

Poset Poset::opposite(Poset inner) {
  auto n = std::make_shared<Node>();
  n->kind = PosetKind::Opposite;
  n->signature = "op(" + inner.signature() + ")";
  n->children.push_back(std::move(inner));
  return Poset(std::move(n));
}

Poset Poset::product(std::vector<Poset> factors) {
  auto n = std::make_shared<Node>();
  n->kind = PosetKind::Product;
  std::string sig = "(";
  for (std::size_t i = 0; i < factors.size(); ++i) sig += (i ? " x " : "") + factors[i].signature();
  n->signature = sig + ")";
  n->children = std::move(factors);
  return Poset(std::move(n));
}

Poset Poset::curve(std::vector<double> grid, CurveOrder order, double lo, double hi,
                   std::string unit) {
  if (grid.empty()) throw StructuralError("curve poset needs a non-empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw StructuralError("curve grid must be strictly increasing");
  if (!(lo <= hi)) throw StructuralError("curve value bounds are inverted");
  auto n = std::make_shared<Node>();
  n->kind = PosetKind::Curve;
  n->unit = std::move(unit);
  n->grid = std::move(grid);
  n->order = order;
  n->lo = lo;
  n->hi = hi;
  std::string sig = "curve[" + n->unit + "](" + format_number(lo) + ".." + format_number(hi) + ";";
  for (std::size_t i = 0; i < n->grid.size(); ++i) sig += (i ? "," : "") + format_number(n->grid[i]);
  sig += order == CurveOrder::Ascending ? ")asc" : ")desc";
  n->signature = std::move(sig);
  return Poset(std::move(n));
}

PosetKind Poset::kind() const { return node().kind; }

const std::vector<std::pair<std::string, std::string>>& Poset::covers() const {
  if (kind() != PosetKind::Finite) throw StructuralError(signature() + " is not a finite poset");
  return node().covers;
}
const std::string& Poset::unit() const { return node().unit; }

const Poset& Poset::inner() const {
  if (kind() != PosetKind::Opposite) throw StructuralError(signature() + " is not an opposite poset");
  return node().children.front();
}

const std::vector<Poset>& Poset::factors() const {
  if (kind() != PosetKind::Product) throw StructuralError(signature() + " is not a product poset");
  return node().children;
}

const std::vector<std::string>& Poset::labels() const { return node().labels; }
const std::vector<double>& Poset::grid() const { return node().grid; }
CurveOrder Poset::order() const { return node().order; }
double Poset::lo() const { return node().lo; }
double Poset::hi() const { return node().hi; }
const std::string& Poset::signature() const { return node().signature; }

bool Poset::same_as(const Poset& other) const {
  return node_ == other.node_ || signature() == other.signature();
}

bool Poset::contains(const Element& x) const {
  const Node& n = node();
  switch (n.kind) {
    case PosetKind::Numeric:
      return x.is_scalar() && !std::isnan(x.scalar()) && x.scalar() >= 0.0;
    case PosetKind::Finite:
      return x.is_label() && n.index.count(x.label_name()) > 0;
    case PosetKind::Opposite:
      return n.children.front().contains(x);
    case PosetKind::Product: {
      if (!x.is_tuple() || x.items().size() != n.children.size()) return false;
      for (std::size_t i = 0; i < n.children.size(); ++i)
        if (!n.children[i].contains(x.items()[i])) return false;
      return true;
    }
    case PosetKind::Curve: {
      if (!x.is_samples() || x.sample_values().size() != n.grid.size()) return false;
      for (double v : x.sample_values())
        if (std::isnan(v) || !num_leq(n.lo, v) || !num_leq(v, n.hi)) return false;
      return true;
    }
  }
  return false;
}

void Poset::check(const Element& x) const {
  if (!contains(x)) throw StructuralError("element " + x.to_string() + " does not belong to " + signature());
}

bool Poset::leq(const Element& a, const Element& b) const {
  const Node& n = node();
  switch (n.kind) {
    case PosetKind::Numeric:
      return num_leq(a.scalar(), b.scalar());
    case PosetKind::Finite:
      return n.reach[n.label_index(a)][n.label_index(b)] != 0;
    case PosetKind::Opposite:
      return n.children.front().leq(b, a);
    case PosetKind::Product: {
      const auto& ta = a.items();
      const auto& tb = b.items();
      if (ta.size() != n.children.size() || tb.size() != n.children.size())
        throw StructuralError("tuple arity does not match " + n.signature);
      for (std::size_t i = 0; i < ta.size(); ++i)
        if (!n.children[i].leq(ta[i], tb[i])) return false;
      return true;
    }
    case PosetKind::Curve: {
      const auto& va = a.sample_values();
      const auto& vb = b.sample_values();
      if (va.size() != n.grid.size() || vb.size() != n.grid.size())
        throw StructuralError("sample vector length does not match the grid of " + n.signature);
      for (std::size_t i = 0; i < va.size(); ++i) {
        const bool ok = n.order == CurveOrder::Ascending ? num_leq(va[i], vb[i]) : num_leq(vb[i], va[i]);
        if (!ok) return false;
      }
      return true;
    }
  }
  return false;
}

bool Poset::equal(const Element& a, const Element& b) const { return leq(a, b) && leq(b, a); }

std::vector<Element> Poset::min_upper_bounds(const Element& a, const Element& b) const {
  const Node& n = node();
  switch (n.kind) {
    case PosetKind::Numeric:
      return {Element(std::max(a.scalar(), b.scalar()))};
    case PosetKind::Finite: {
      const auto ia = n.label_index(a);
      const auto ib = n.label_index(b);
      std::vector<std::size_t> ub;
      for (std::size_t z = 0; z < n.labels.size(); ++z)
        if (n.reach[ia][z] && n.reach[ib][z]) ub.push_back(z);
      std::vector<Element> out;
      for (auto z : ub) {
        bool minimal = true;
        for (auto y : ub)
          if (y != z && n.reach[y][z]) minimal = false;
        if (minimal) out.push_back(Element::label(n.labels[z]));
      }
      return out;
    }
    case PosetKind::Opposite:
      return n.children.front().max_lower_bounds(a, b);
    case PosetKind::Product: {
      std::vector<std::vector<Element>> choices;
      for (std::size_t i = 0; i < n.children.size(); ++i)
        choices.push_back(n.children[i].min_upper_bounds(a.items().at(i), b.items().at(i)));
      return cartesian(choices);
    }
    case PosetKind::Curve: {
      const auto& va = a.sample_values();
      const auto& vb = b.sample_values();
      std::vector<double> out(va.size());
      for (std::size_t i = 0; i < va.size(); ++i)
        out[i] = n.order == CurveOrder::Ascending ? std::max(va[i], vb.at(i)) : std::min(va[i], vb.at(i));
      return {Element::samples(std::move(out))};
    }
  }
  return {};
}

std::vector<Element> Poset::max_lower_bounds(const Element& a, const Element& b) const {
  const Node& n = node();
  switch (n.kind) {
    case PosetKind::Numeric:
      return {Element(std::min(a.scalar(), b.scalar()))};
    case PosetKind::Finite: {
      const auto ia = n.label_index(a);
      const auto ib = n.label_index(b);
      std::vector<std::size_t> lb;
      for (std::size_t z = 0; z < n.labels.size(); ++z)
        if (n.reach[z][ia] && n.reach[z][ib]) lb.push_back(z);
      std::vector<Element> out;
      for (auto z : lb) {
        bool maximal = true;
        for (auto y : lb)
          if (y != z && n.reach[z][y]) maximal = false;
        if (maximal) out.push_back(Element::label(n.labels[z]));
      }
      return out;
    }
    case PosetKind::Opposite:
      return n.children.front().min_upper_bounds(a, b);
    case PosetKind::Product: {
      std::vector<std::vector<Element>> choices;
      for (std::size_t i = 0; i < n.children.size(); ++i)
        choices.push_back(n.children[i].max_lower_bounds(a.items().at(i), b.items().at(i)));
      return cartesian(choices);
    }
    case PosetKind::Curve: {
      const auto& va = a.sample_values();
      const auto& vb = b.sample_values();
      std::vector<double> out(va.size());
      for (std::size_t i = 0; i < va.size(); ++i)
        out[i] = n.order == CurveOrder::Ascending ? std::min(va[i], vb.at(i)) : std::max(va[i], vb.at(i));
      return {Element::samples(std::move(out))};
    }
  }
  return {};
}

std::vector<Element> Poset::minimal_elements() const {
  const Node& n = node();
  switch (n.kind) {
    case PosetKind::Numeric:
      return {Element(0.0)};
    case PosetKind::Finite: {
      std::vector<Element> out;
      for (std::size_t z = 0; z < n.labels.size(); ++z) {
        bool minimal = true;
        for (std::size_t y = 0; y < n.labels.size(); ++y)
          if (y != z && n.reach[y][z]) minimal = false;
        if (minimal) out.push_back(Element::label(n.labels[z]));
      }
      return out;
    }
    case PosetKind::Opposite:
      return n.children.front().maximal_elements();
    case PosetKind::Product: {
      std::vector<std::vector<Element>> choices;
      for (const auto& f : n.children) choices.push_back(f.minimal_elements());
      return cartesian(choices);
    }
    case PosetKind::Curve:
      return {Element::samples(std::vector<double>(n.grid.size(), n.order == CurveOrder::Ascending ? n.lo : n.hi))};
  }
  return {};
}

std::vector<Element> Poset::maximal_elements() const {
  const Node& n = node();
  switch (n.kind) {
    case PosetKind::Numeric:
      return {Element(kInf)};
    case PosetKind::Finite: {
      std::vector<Element> out;
      for (std::size_t z = 0; z < n.labels.size(); ++z) {
        bool maximal = true;
        for (std::size_t y = 0; y < n.labels.size(); ++y)
          if (y != z && n.reach[z][y]) maximal = false;
        if (maximal) out.push_back(Element::label(n.labels[z]));
      }
      return out;
    }
    case PosetKind::Opposite:
      return n.children.front().minimal_elements();
    case PosetKind::Product: {
      std::vector<std::vector<Element>> choices;
      for (const auto& f : n.children) choices.push_back(f.maximal_elements());
      return cartesian(choices);
    }
    case PosetKind::Curve:
      return {Element::samples(std::vector<double>(n.grid.size(), n.order == CurveOrder::Ascending ? n.hi : n.lo))};
  }
  return {};
}

bool Poset::is_total() const {
  const Node& n = node();
  switch (n.kind) {
    case PosetKind::Numeric:
      return true;
    case PosetKind::Finite:
      for (std::size_t i = 0; i < n.labels.size(); ++i)
        for (std::size_t j = 0; j < n.labels.size(); ++j)
          if (!n.reach[i][j] && !n.reach[j][i]) return false;
      return true;
    case PosetKind::Opposite:
      return n.children.front().is_total();
    case PosetKind::Product:
      return n.children.empty() || (n.children.size() == 1 && n.children.front().is_total());
    case PosetKind::Curve:
      return n.grid.size() <= 1;
  }
  return false;
}

bool leq(const Element& p, const Element& q, const Poset& poset) {
  if (!poset.contains(p) || !poset.contains(q))
    throw StructuralError("leq: " + p.to_string() + " / " + q.to_string() + " do not belong to " +
                          poset.signature());
  return poset.leq(p, q);
}

std::vector<double> resample(const std::vector<double>& from, const std::vector<double>& values,
                             const std::vector<double>& to) {
  if (from.size() != values.size() || from.empty())
    throw StructuralError("resample: grid and values differ in length");
  std::vector<double> out;
  out.reserve(to.size());
  for (double x : to) {
    if (x <= from.front()) {
      out.push_back(values.front());
    } else if (x >= from.back()) {
      out.push_back(values.back());
    } else {
      auto it = std::upper_bound(from.begin(), from.end(), x);
      const auto j = static_cast<std::size_t>(it - from.begin());
      const double t = (x - from[j - 1]) / (from[j] - from[j - 1]);
      out.push_back(values[j - 1] + t * (values[j] - values[j - 1]));
    }
  }
  return out;
}

}  // namespace mcdp
