#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mcdp/antichain.hpp"
#include "mcdp/poset.hpp"

namespace mcdp {

/// A design choice. Leaf implementations come from catalogue rows; composite
/// ones keep their components as named parts so the chosen design can be
/// printed back.
struct Impl {
  std::string id;
  std::map<std::string, std::string> attrs;
  std::vector<std::pair<std::string, Impl>> parts;

  std::string to_string() const;
  // Depth-first list of (path, leaf) pairs, e.g. ("vehicle", {id: "BEV"}).
  std::vector<std::pair<std::string, const Impl*>> leaves() const;
};

struct ImplRow {
  Impl impl;
  Element prov;  // functionality provided
  Element req;   // resources required
};

/// Antichain answer of a query plus one witness implementation per point.
/// For h the poset is R; for h' it is op(F), so minimality bookkeeping is
/// the same in both directions.
struct Front {
  Poset poset;
  std::vector<Element> points;
  std::vector<Impl> witnesses;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
  Antichain antichain() const { return Antichain(poset, points); }
};

// Pareto-minimal subset of (points, witnesses) under `poset`.
Front make_front(Poset poset, std::vector<Element> points, std::vector<Impl> witnesses);

/// Design problem with implementations: F <-prov- I -req-> R, queried
/// through h (functionality -> minimal resources) and h' (resource ->
/// maximal functionalities). Instances are immutable and shared.
class Dpi {
 public:
  Dpi(Poset fun, Poset res) : fun_(std::move(fun)), res_(std::move(res)) {}
  virtual ~Dpi() = default;

  const Poset& fun() const { return fun_; }
  const Poset& res() const { return res_; }

  Front eval_h(const Element& f) const;
  Front eval_h_prime(const Element& r) const;

  // All implementations with prov/req. Throws UnsupportedError when the set
  // is not finitely enumerable (identity, sum nodes).
  virtual std::vector<ImplRow> implementations() const = 0;
  std::vector<ImplRow> implementations_at(const Element& f, const Element& r) const;

 protected:
  virtual Front h(const Element& f) const = 0;
  virtual Front h_prime(const Element& r) const = 0;

 private:
  Poset fun_;
  Poset res_;
};

using DpiPtr = std::shared_ptr<const Dpi>;

Front eval_h(const Dpi& d, const Element& f);
Front eval_h_prime(const Dpi& d, const Element& r);
std::vector<ImplRow> implementations_at(const Dpi& d, const Element& f, const Element& r);

/// Backing store for catalogue- and simulation-derived design problems.
struct MonotoneTable {
  Poset fun;
  Poset res;
  std::vector<ImplRow> rows;
};

/// Catalogue-backed DPI: h(f) = Min{req(i) : prov(i) >= f}.
class TableDpi final : public Dpi {
 public:
  explicit TableDpi(MonotoneTable table);

  const std::vector<ImplRow>& rows() const { return table_.rows; }
  const MonotoneTable& table() const { return table_; }
  std::vector<ImplRow> implementations() const override { return table_.rows; }

 protected:
  Front h(const Element& f) const override;
  Front h_prime(const Element& r) const override;

 private:
  MonotoneTable table_;
};

DpiPtr make_table_dpi(MonotoneTable table);

/// Materializes upper-set inclusion: for every distinct functionality f in
/// the table, the rows at f become Min{req(i) : prov(i) >= f}. Row order is
/// deterministic (by f, then by resource).
MonotoneTable monotone_closure(const MonotoneTable& table);

}  // namespace mcdp
