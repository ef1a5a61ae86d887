#include "mcdp/network.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <queue>

#include "mcdp/errors.hpp"

namespace mcdp {

namespace {

class NetworkDpi final : public Dpi {
 public:
  NetworkDpi(NetworkSpec spec, Poset fun, Poset res) : Dpi(std::move(fun), std::move(res)), spec_(std::move(spec)) {
    const std::size_t n = spec_.nodes.size();
    fun_off_.resize(n + 1, 0);
    res_off_.resize(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      fun_off_[i + 1] = fun_off_[i] + spec_.nodes[i]->fun().factors().size();
      res_off_[i + 1] = res_off_[i] + spec_.nodes[i]->res().factors().size();
    }
    fun_src_.assign(fun_off_[n], Source{});
    res_dst_.assign(res_off_[n], Source{});
    for (std::size_t p = 0; p < spec_.exposed_funs.size(); ++p)
      fun_src_[fslot(spec_.exposed_funs[p])] = Source{true, p};
    for (std::size_t p = 0; p < spec_.exposed_res.size(); ++p)
      res_dst_[rslot(spec_.exposed_res[p])] = Source{true, p};
    for (const auto& l : spec_.links) {
      fun_src_[fslot(l.provider_fun)] = Source{false, rslot(l.consumer_res)};
      res_dst_[rslot(l.consumer_res)] = Source{false, fslot(l.provider_fun)};
    }
    node_of_fslot_.resize(fun_off_[n]);
    node_of_rslot_.resize(res_off_[n]);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto s = fun_off_[i]; s < fun_off_[i + 1]; ++s) node_of_fslot_[s] = i;
      for (auto s = res_off_[i]; s < res_off_[i + 1]; ++s) node_of_rslot_[s] = i;
    }
    order_ = topological_order();
  }

  std::vector<ImplRow> implementations() const override {
    const std::size_t n = spec_.nodes.size();
    std::vector<std::vector<ImplRow>> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = spec_.nodes[i]->implementations();
    std::vector<const ImplRow*> pick(n, nullptr);
    std::vector<ImplRow> out;
    enumerate(0, rows, pick, out);
    return out;
  }

 protected:
  Front h(const Element& f) const override {
    struct State {
      std::vector<Element> slots;  // resource slots
      std::vector<const Impl*> impls;
    };
    const std::size_t n = spec_.nodes.size();
    std::vector<std::map<Element, Front>> cache(n);
    std::vector<State> states{State{std::vector<Element>(res_off_[n]), std::vector<const Impl*>(n, nullptr)}};
    std::vector<char> done(n, 0);

    for (std::size_t node : order_) {
      const auto& d = *spec_.nodes[node];
      std::vector<State> next;
      for (const auto& st : states) {
        Element::Tuple fin;
        for (auto s = fun_off_[node]; s < fun_off_[node + 1]; ++s)
          fin.push_back(fun_src_[s].exposed ? f[fun_src_[s].index] : st.slots[fun_src_[s].index]);
        Element key = Element::tuple(std::move(fin));
        auto it = cache[node].find(key);
        if (it == cache[node].end()) it = cache[node].emplace(key, d.eval_h(key)).first;
        const Front& fr = it->second;
        for (std::size_t j = 0; j < fr.size(); ++j) {
          State ns = st;
          for (std::size_t k = 0; k < res_off_[node + 1] - res_off_[node]; ++k)
            ns.slots[res_off_[node] + k] = fr.points[j][k];
          ns.impls[node] = &fr.witnesses[j];
          next.push_back(std::move(ns));
        }
      }
      done[node] = 1;
      // Resource slots still relevant: exposed ones and those whose
      // provider has not been folded in yet.
      std::vector<std::size_t> live;
      std::vector<Poset> live_posets;
      for (std::size_t s = 0; s < res_off_[n]; ++s) {
        if (!done[node_of_rslot_[s]]) continue;
        const auto& dst = res_dst_[s];
        if (dst.exposed || !done[node_of_fslot_[dst.index]]) {
          live.push_back(s);
          live_posets.push_back(res_poset(s));
        }
      }
      states = prune(std::move(next), live, Poset::product(std::move(live_posets)),
                     [](const State& st, std::size_t s) -> const Element& { return st.slots[s]; });
      if (states.empty()) break;
    }

    std::vector<Element> pts;
    std::vector<Impl> wit;
    for (const auto& st : states) {
      Element::Tuple t;
      for (const auto& port : spec_.exposed_res) t.push_back(st.slots[rslot(port)]);
      pts.push_back(Element::tuple(std::move(t)));
      wit.push_back(assemble(st.impls));
    }
    return make_front(res(), std::move(pts), std::move(wit));
  }

  Front h_prime(const Element& r) const override {
    struct State {
      std::vector<Element> slots;  // functionality slots
      std::vector<const Impl*> impls;
    };
    const std::size_t n = spec_.nodes.size();
    std::vector<std::map<Element, Front>> cache(n);
    std::vector<State> states{State{std::vector<Element>(fun_off_[n]), std::vector<const Impl*>(n, nullptr)}};
    std::vector<char> done(n, 0);

    for (auto it_node = order_.rbegin(); it_node != order_.rend(); ++it_node) {
      const std::size_t node = *it_node;
      const auto& d = *spec_.nodes[node];
      std::vector<State> next;
      for (const auto& st : states) {
        Element::Tuple rin;
        for (auto s = res_off_[node]; s < res_off_[node + 1]; ++s)
          rin.push_back(res_dst_[s].exposed ? r[res_dst_[s].index] : st.slots[res_dst_[s].index]);
        Element key = Element::tuple(std::move(rin));
        auto it = cache[node].find(key);
        if (it == cache[node].end()) it = cache[node].emplace(key, d.eval_h_prime(key)).first;
        const Front& fr = it->second;
        for (std::size_t j = 0; j < fr.size(); ++j) {
          State ns = st;
          for (std::size_t k = 0; k < fun_off_[node + 1] - fun_off_[node]; ++k)
            ns.slots[fun_off_[node] + k] = fr.points[j][k];
          ns.impls[node] = &fr.witnesses[j];
          next.push_back(std::move(ns));
        }
      }
      done[node] = 1;
      std::vector<std::size_t> live;
      std::vector<Poset> live_posets;
      for (std::size_t s = 0; s < fun_off_[n]; ++s) {
        if (!done[node_of_fslot_[s]]) continue;
        const auto& src = fun_src_[s];
        if (src.exposed || !done[node_of_rslot_[src.index]]) {
          live.push_back(s);
          live_posets.push_back(Poset::opposite(fun_poset(s)));
        }
      }
      states = prune(std::move(next), live, Poset::product(std::move(live_posets)),
                     [](const State& st, std::size_t s) -> const Element& { return st.slots[s]; });
      if (states.empty()) break;
    }

    std::vector<Element> pts;
    std::vector<Impl> wit;
    for (const auto& st : states) {
      Element::Tuple t;
      for (const auto& port : spec_.exposed_funs) t.push_back(st.slots[fslot(port)]);
      pts.push_back(Element::tuple(std::move(t)));
      wit.push_back(assemble(st.impls));
    }
    return make_front(Poset::opposite(fun()), std::move(pts), std::move(wit));
  }

 private:
  struct Source {
    bool exposed = false;
    std::size_t index = 0;  // exposed position, or the slot at the other end of the link
  };

  std::size_t fslot(const PortRef& p) const { return fun_off_[p.node] + p.port; }
  std::size_t rslot(const PortRef& p) const { return res_off_[p.node] + p.port; }
  const Poset& fun_poset(std::size_t s) const {
    const auto node = node_of_fslot_[s];
    return spec_.nodes[node]->fun().factors()[s - fun_off_[node]];
  }
  const Poset& res_poset(std::size_t s) const {
    const auto node = node_of_rslot_[s];
    return spec_.nodes[node]->res().factors()[s - res_off_[node]];
  }

  template <typename State, typename Get>
  static std::vector<State> prune(std::vector<State> states, const std::vector<std::size_t>& live,
                                  const Poset& poset, Get get) {
    std::vector<Element> keys;
    keys.reserve(states.size());
    for (const auto& st : states) {
      Element::Tuple t;
      for (auto s : live) t.push_back(get(st, s));
      keys.push_back(Element::tuple(std::move(t)));
    }
    std::vector<State> out;
    for (auto i : pareto_min_indices(keys, poset)) out.push_back(std::move(states[i]));
    return out;
  }

  Impl assemble(const std::vector<const Impl*>& impls) const {
    Impl out;
    out.id = "(";
    for (std::size_t i = 0; i < impls.size(); ++i) {
      const Impl& part = impls[i] ? *impls[i] : Impl{};
      out.id += (i ? ", " : "") + part.id;
      out.parts.emplace_back(spec_.names[i], part);
    }
    out.id += ")";
    return out;
  }

  std::vector<std::size_t> topological_order() const {
    const std::size_t n = spec_.nodes.size();
    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<std::size_t> indeg(n, 0);
    for (const auto& l : spec_.links) {
      succ[l.consumer_res.node].push_back(l.provider_fun.node);
      ++indeg[l.provider_fun.node];
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
      if (indeg[i] == 0) ready.push(i);
    std::vector<std::size_t> order;
    while (!ready.empty()) {
      const auto i = ready.top();
      ready.pop();
      order.push_back(i);
      for (auto j : succ[i])
        if (--indeg[j] == 0) ready.push(j);
    }
    if (order.size() != n) throw CompositionError("network: the links form a cycle; cut it with loop_trace");
    return order;
  }

  void enumerate(std::size_t pos, const std::vector<std::vector<ImplRow>>& rows, std::vector<const ImplRow*>& pick,
                 std::vector<ImplRow>& out) const {
    if (pos == order_.size()) {
      Element::Tuple prov;
      Element::Tuple req;
      for (const auto& p : spec_.exposed_funs) prov.push_back(pick[p.node]->prov[p.port]);
      for (const auto& p : spec_.exposed_res) req.push_back(pick[p.node]->req[p.port]);
      std::vector<const Impl*> impls;
      for (auto* row : pick) impls.push_back(&row->impl);
      out.push_back({assemble(impls), Element::tuple(std::move(prov)), Element::tuple(std::move(req))});
      return;
    }
    const std::size_t node = order_[pos];
    for (const auto& row : rows[node]) {
      bool ok = true;
      for (auto s = fun_off_[node]; s < fun_off_[node + 1] && ok; ++s) {
        const auto& src = fun_src_[s];
        if (src.exposed) continue;
        const auto consumer = node_of_rslot_[src.index];
        const auto& creq = pick[consumer]->req[src.index - res_off_[consumer]];
        ok = fun_poset(s).leq(creq, row.prov[s - fun_off_[node]]);
      }
      if (!ok) continue;
      pick[node] = &row;
      enumerate(pos + 1, rows, pick, out);
      pick[node] = nullptr;
    }
  }

  NetworkSpec spec_;
  std::vector<std::size_t> fun_off_;
  std::vector<std::size_t> res_off_;
  std::vector<Source> fun_src_;
  std::vector<Source> res_dst_;
  std::vector<std::size_t> node_of_fslot_;
  std::vector<std::size_t> node_of_rslot_;
  std::vector<std::size_t> order_;
};

}  // namespace

DpiPtr network(NetworkSpec spec) {
  const std::size_t n = spec.nodes.size();
  if (spec.names.size() != n) throw CompositionError("network: one name per node is required");
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.nodes[i]->fun().kind() != PosetKind::Product || spec.nodes[i]->res().kind() != PosetKind::Product)
      throw CompositionError("network: node '" + spec.names[i] + "' must have product-shaped ports");
  }
  auto port_name = [&](const PortRef& p, bool fun) {
    return spec.names.at(p.node) + (fun ? ".fun[" : ".res[") + std::to_string(p.port) + "]";
  };
  std::vector<std::vector<int>> fun_uses(n);
  std::vector<std::vector<int>> res_uses(n);
  for (std::size_t i = 0; i < n; ++i) {
    fun_uses[i].assign(spec.nodes[i]->fun().factors().size(), 0);
    res_uses[i].assign(spec.nodes[i]->res().factors().size(), 0);
  }
  auto use = [&](const PortRef& p, bool fun) {
    auto& v = fun ? fun_uses.at(p.node) : res_uses.at(p.node);
    if (p.port >= v.size()) throw CompositionError("network: no port " + port_name(p, fun));
    ++v[p.port];
  };
  std::vector<Poset> fun;
  std::vector<Poset> res;
  for (const auto& p : spec.exposed_funs) {
    use(p, true);
    fun.push_back(spec.nodes[p.node]->fun().factors()[p.port]);
  }
  for (const auto& p : spec.exposed_res) {
    use(p, false);
    res.push_back(spec.nodes[p.node]->res().factors()[p.port]);
  }
  for (const auto& l : spec.links) {
    use(l.consumer_res, false);
    use(l.provider_fun, true);
    const auto& a = spec.nodes[l.consumer_res.node]->res().factors()[l.consumer_res.port];
    const auto& b = spec.nodes[l.provider_fun.node]->fun().factors()[l.provider_fun.port];
    if (!a.same_as(b))
      throw CompositionError("network: " + port_name(l.consumer_res, false) + " " + a.signature() +
                             " cannot be provided by " + port_name(l.provider_fun, true) + " " + b.signature());
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < fun_uses[i].size(); ++k)
      if (fun_uses[i][k] != 1)
        throw CompositionError("network: port " + port_name({i, k}, true) + " must be used exactly once");
    for (std::size_t k = 0; k < res_uses[i].size(); ++k)
      if (res_uses[i][k] != 1)
        throw CompositionError("network: port " + port_name({i, k}, false) + " must be used exactly once");
  }
  Poset f = Poset::product(std::move(fun));
  Poset r = Poset::product(std::move(res));
  return std::make_shared<NetworkDpi>(std::move(spec), std::move(f), std::move(r));
}

}  // namespace mcdp
