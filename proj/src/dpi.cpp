#include "mcdp/dpi.hpp"

#include <algorithm>
#include <set>

#include "mcdp/errors.hpp"

namespace mcdp {

std::string Impl::to_string() const {
  if (parts.empty()) return id;
  std::string s = id + "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ", ";
    s += parts[i].first + "=" + parts[i].second.to_string();
  }
  return s + ")";
}

std::vector<std::pair<std::string, const Impl*>> Impl::leaves() const {
  std::vector<std::pair<std::string, const Impl*>> out;
  if (parts.empty()) {
    out.emplace_back("", this);
    return out;
  }
  for (const auto& [key, part] : parts) {
    for (auto& [path, leaf] : part.leaves()) out.emplace_back(path.empty() ? key : key + "/" + path, leaf);
  }
  return out;
}

Front make_front(Poset poset, std::vector<Element> points, std::vector<Impl> witnesses) {
  Front out{std::move(poset), {}, {}};
  const auto keep = pareto_min_indices(points, out.poset);
  out.points.reserve(keep.size());
  out.witnesses.reserve(keep.size());
  for (auto i : keep) {
    out.points.push_back(std::move(points[i]));
    out.witnesses.push_back(std::move(witnesses[i]));
  }
  return out;
}

Front Dpi::eval_h(const Element& f) const {
  fun_.check(f);
  return h(f);
}

Front Dpi::eval_h_prime(const Element& r) const {
  res_.check(r);
  return h_prime(r);
}

std::vector<ImplRow> Dpi::implementations_at(const Element& f, const Element& r) const {
  fun_.check(f);
  res_.check(r);
  std::vector<ImplRow> out;
  for (auto& row : implementations())
    if (fun_.leq(f, row.prov) && res_.leq(row.req, r)) out.push_back(std::move(row));
  return out;
}

Front eval_h(const Dpi& d, const Element& f) { return d.eval_h(f); }
Front eval_h_prime(const Dpi& d, const Element& r) { return d.eval_h_prime(r); }
std::vector<ImplRow> implementations_at(const Dpi& d, const Element& f, const Element& r) {
  return d.implementations_at(f, r);
}

// ---------------------------------------------------------------- TableDpi

TableDpi::TableDpi(MonotoneTable table) : Dpi(table.fun, table.res), table_(std::move(table)) {
  std::set<std::string> ids;
  for (const auto& row : table_.rows) {
    fun().check(row.prov);
    res().check(row.req);
    if (!ids.insert(row.impl.id).second)
      throw StructuralError("duplicate implementation id '" + row.impl.id + "'");
  }
}

Front TableDpi::h(const Element& f) const {
  std::vector<Element> pts;
  std::vector<Impl> wit;
  for (const auto& row : table_.rows) {
    if (fun().leq(f, row.prov)) {
      pts.push_back(row.req);
      wit.push_back(row.impl);
    }
  }
  return make_front(res(), std::move(pts), std::move(wit));
}

Front TableDpi::h_prime(const Element& r) const {
  std::vector<Element> pts;
  std::vector<Impl> wit;
  for (const auto& row : table_.rows) {
    if (res().leq(row.req, r)) {
      pts.push_back(row.prov);
      wit.push_back(row.impl);
    }
  }
  return make_front(Poset::opposite(fun()), std::move(pts), std::move(wit));
}

DpiPtr make_table_dpi(MonotoneTable table) { return std::make_shared<TableDpi>(std::move(table)); }

MonotoneTable monotone_closure(const MonotoneTable& table) {
  std::vector<Element> funs;
  for (const auto& row : table.rows) funs.push_back(row.prov);
  std::sort(funs.begin(), funs.end());
  funs.erase(std::unique(funs.begin(), funs.end(),
                         [&](const Element& a, const Element& b) { return table.fun.equal(a, b); }),
             funs.end());

  MonotoneTable out{table.fun, table.res, {}};
  std::set<std::string> used;
  for (const auto& f : funs) {
    std::vector<Element> reqs;
    std::vector<const ImplRow*> src;
    for (const auto& row : table.rows) {
      if (table.fun.leq(f, row.prov)) {
        reqs.push_back(row.req);
        src.push_back(&row);
      }
    }
    for (auto i : pareto_min_indices(reqs, table.res)) {
      ImplRow row{src[i]->impl, f, src[i]->req};
      // Rows propagated down from a stronger functionality keep the
      // original design (attrs) under a derived id.
      if (!table.fun.equal(src[i]->prov, f)) row.impl.id += "@" + f.to_string();
      std::string id = row.impl.id;
      for (int k = 2; !used.insert(id).second; ++k) id = row.impl.id + "#" + std::to_string(k);
      row.impl.id = id;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace mcdp
