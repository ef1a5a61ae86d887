#include "mcdp/composition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "mcdp/errors.hpp"

namespace mcdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Impl pair_impl(const Impl& a, const Impl& b) {
  return Impl{"(" + a.id + ", " + b.id + ")", {}, {{"1", a}, {"2", b}}};
}

// ---------------------------------------------------------------- series

class SeriesDpi final : public Dpi {
 public:
  SeriesDpi(DpiPtr d1, DpiPtr d2) : Dpi(d1->fun(), d2->res()), d1_(std::move(d1)), d2_(std::move(d2)) {}

  std::vector<ImplRow> implementations() const override {
    const auto rows1 = d1_->implementations();
    const auto rows2 = d2_->implementations();
    std::vector<ImplRow> out;
    for (const auto& a : rows1)
      for (const auto& b : rows2)
        if (d1_->res().leq(a.req, b.prov)) out.push_back({pair_impl(a.impl, b.impl), a.prov, b.req});
    return out;
  }

 protected:
  Front h(const Element& f) const override {
    std::vector<Element> pts;
    std::vector<Impl> wit;
    const Front first = d1_->eval_h(f);
    for (std::size_t i = 0; i < first.size(); ++i) {
      const Front second = d2_->eval_h(first.points[i]);
      for (std::size_t j = 0; j < second.size(); ++j) {
        pts.push_back(second.points[j]);
        wit.push_back(pair_impl(first.witnesses[i], second.witnesses[j]));
      }
    }
    return make_front(res(), std::move(pts), std::move(wit));
  }

  Front h_prime(const Element& r) const override {
    std::vector<Element> pts;
    std::vector<Impl> wit;
    const Front second = d2_->eval_h_prime(r);
    for (std::size_t j = 0; j < second.size(); ++j) {
      const Front first = d1_->eval_h_prime(second.points[j]);
      for (std::size_t i = 0; i < first.size(); ++i) {
        pts.push_back(first.points[i]);
        wit.push_back(pair_impl(first.witnesses[i], second.witnesses[j]));
      }
    }
    return make_front(Poset::opposite(fun()), std::move(pts), std::move(wit));
  }

 private:
  DpiPtr d1_;
  DpiPtr d2_;
};

// ---------------------------------------------------------------- parallel

class ParallelDpi final : public Dpi {
 public:
  ParallelDpi(DpiPtr d1, DpiPtr d2)
      : Dpi(Poset::product({d1->fun(), d2->fun()}), Poset::product({d1->res(), d2->res()})),
        d1_(std::move(d1)),
        d2_(std::move(d2)) {}

  std::vector<ImplRow> implementations() const override {
    const auto rows1 = d1_->implementations();
    const auto rows2 = d2_->implementations();
    std::vector<ImplRow> out;
    for (const auto& a : rows1)
      for (const auto& b : rows2)
        out.push_back({pair_impl(a.impl, b.impl), Element::tuple({a.prov, b.prov}), Element::tuple({a.req, b.req})});
    return out;
  }

 protected:
  Front h(const Element& f) const override {
    return combine(d1_->eval_h(f[0]), d2_->eval_h(f[1]), res());
  }
  Front h_prime(const Element& r) const override {
    return combine(d1_->eval_h_prime(r[0]), d2_->eval_h_prime(r[1]), Poset::opposite(fun()));
  }

 private:
  static Front combine(const Front& a, const Front& b, Poset poset) {
    std::vector<Element> pts;
    std::vector<Impl> wit;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        pts.push_back(Element::tuple({a.points[i], b.points[j]}));
        wit.push_back(pair_impl(a.witnesses[i], b.witnesses[j]));
      }
    return make_front(std::move(poset), std::move(pts), std::move(wit));
  }

  DpiPtr d1_;
  DpiPtr d2_;
};

// ---------------------------------------------------------------- identity

class IdentityDpi final : public Dpi {
 public:
  explicit IdentityDpi(Poset p) : Dpi(p, p) {}

  std::vector<ImplRow> implementations() const override {
    throw UnsupportedError("the identity design problem has one implementation per element");
  }

 protected:
  Front h(const Element& f) const override { return Front{res(), {f}, {Impl{"id", {}, {}}}}; }
  Front h_prime(const Element& r) const override {
    return Front{Poset::opposite(fun()), {r}, {Impl{"id", {}, {}}}};
  }
};

// ---------------------------------------------------------------- sum node

class SumDpi final : public Dpi {
 public:
  SumDpi(std::size_t n, Poset p, MergeOp op)
      : Dpi(Poset::product(std::vector<Poset>(n, p)), Poset::product({p})), n_(n), p_(std::move(p)), op_(op) {}

  std::vector<ImplRow> implementations() const override {
    throw UnsupportedError("sum nodes have one implementation per input tuple");
  }

 protected:
  Front h(const Element& f) const override {
    Element acc = f[0];
    for (std::size_t i = 1; i < n_; ++i) acc = merge(acc, f[i]);
    return Front{res(), {Element::tuple({acc})}, {impl()}};
  }

  Front h_prime(const Element& r) const override {
    if (op_ == MergeOp::Sum && n_ > 1)
      throw UnsupportedError("h' of a +-sum with several inputs is an infinite antichain");
    return Front{Poset::opposite(fun()), {Element::tuple(Element::Tuple(n_, r[0]))}, {impl()}};
  }

 private:
  Element merge(const Element& a, const Element& b) const {
    if (op_ == MergeOp::Sum) return Element(a.scalar() + b.scalar());
    return p_.leq(a, b) ? b : a;
  }
  Impl impl() const { return Impl{op_ == MergeOp::Sum ? "sum" : "max", {}, {}}; }

  std::size_t n_;
  Poset p_;
  MergeOp op_;
};

// ---------------------------------------------------------------- linear join

class LinearJoinDpi final : public Dpi {
 public:
  LinearJoinDpi(std::vector<double> w, std::vector<Poset> inputs, Poset output)
      : Dpi(Poset::product(std::move(inputs)), Poset::product({std::move(output)})), w_(std::move(w)) {}

  std::vector<ImplRow> implementations() const override {
    throw UnsupportedError("join nodes have one implementation per input tuple");
  }

 protected:
  Front h(const Element& f) const override {
    double acc = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] > 0.0) acc += w_[i] * f[i].scalar();
    return Front{res(), {Element::tuple({Element(acc)})}, {Impl{"join", {}, {}}}};
  }

  Front h_prime(const Element& r) const override {
    const auto positive = std::count_if(w_.begin(), w_.end(), [](double w) { return w > 0.0; });
    if (positive > 1) throw UnsupportedError("h' of a weighted sum with several inputs is an infinite antichain");
    Element::Tuple out;
    for (double w : w_) out.emplace_back(w > 0.0 ? r[0].scalar() / w : kInf);
    return Front{Poset::opposite(fun()), {Element::tuple(std::move(out))}, {Impl{"join", {}, {}}}};
  }

 private:
  std::vector<double> w_;
};

// ---------------------------------------------------------------- limit

class LimitDpi final : public Dpi {
 public:
  LimitDpi(Poset p, double cap) : Dpi(Poset::product({std::move(p)}), Poset::product({})), cap_(cap) {}

  std::vector<ImplRow> implementations() const override {
    return {ImplRow{impl(), Element::tuple({Element(cap_)}), Element::tuple({})}};
  }

 protected:
  Front h(const Element& f) const override {
    if (!fun().leq(f, Element::tuple({Element(cap_)}))) return Front{res(), {}, {}};
    return Front{res(), {Element::tuple({})}, {impl()}};
  }
  Front h_prime(const Element&) const override {
    return Front{Poset::opposite(fun()), {Element::tuple({Element(cap_)})}, {impl()}};
  }

 private:
  Impl impl() const { return Impl{"limit", {{"max", Element(cap_).to_string()}}, {}}; }
  double cap_;
};

// ---------------------------------------------------------------- loop

class LoopDpi final : public Dpi {
 public:
  LoopDpi(DpiPtr body, std::vector<FeedbackPair> fb, std::vector<std::size_t> exp_fun,
          std::vector<std::size_t> exp_res, Poset fun, Poset res, std::size_t max_iter)
      : Dpi(std::move(fun), std::move(res)),
        body_(std::move(body)),
        fb_(std::move(fb)),
        exp_fun_(std::move(exp_fun)),
        exp_res_(std::move(exp_res)),
        max_iter_(max_iter) {}

  KleeneResult fixed_point(const Element& f) const {
    fun().check(f);
    std::map<Element, Front> cache;
    auto query = [&](const Element& s) { return body_->eval_h(assemble(f, s, true)); };
    return iterate(true, body_->res(), query, cache);
  }

  std::vector<ImplRow> implementations() const override {
    const auto& rf = body_->res().factors();
    std::vector<ImplRow> out;
    for (auto& row : body_->implementations()) {
      bool consistent = true;
      for (const auto& p : fb_)
        if (!rf[p.res_index].leq(row.req[p.res_index], row.prov[p.fun_index])) consistent = false;
      if (consistent) out.push_back({row.impl, project(row.prov, exp_fun_), project(row.req, exp_res_)});
    }
    return out;
  }

 protected:
  Front h(const Element& f) const override {
    return solve(
        true, body_->res(), [&](const Element& s) { return body_->eval_h(assemble(f, s, /*primal=*/true)); }, exp_res_,
        res());
  }

  Front h_prime(const Element& r) const override {
    return solve(
        false, Poset::opposite(body_->fun()),
        [&](const Element& s) { return body_->eval_h_prime(assemble(r, s, /*primal=*/false)); }, exp_fun_,
        Poset::opposite(fun()));
  }

 private:
  static Element project(const Element& x, const std::vector<std::size_t>& idx) {
    Element::Tuple t;
    for (auto i : idx) t.push_back(x[i]);
    return Element::tuple(std::move(t));
  }

  // Builds a body query from the exposed part `q` and the iterate `s`.
  // Primal: q ⊂ F, s ∈ body R, result ∈ body F. Dual: the other way round.
  Element assemble(const Element& q, const Element& s, bool primal) const {
    const auto& exposed = primal ? exp_fun_ : exp_res_;
    const std::size_t width = primal ? body_->fun().factors().size() : body_->res().factors().size();
    Element::Tuple t(width);
    for (std::size_t p = 0; p < exposed.size(); ++p) t[exposed[p]] = q[p];
    for (const auto& pair : fb_) {
      if (primal)
        t[pair.fun_index] = s[pair.res_index];
      else
        t[pair.res_index] = s[pair.fun_index];
    }
    return Element::tuple(std::move(t));
  }

  template <typename Query>
  Front solve(bool primal, const Poset& space, Query&& query, const std::vector<std::size_t>& exposed,
              Poset result_poset) const {
    std::map<Element, Front> cache;
    const KleeneResult fixed = iterate(primal, space, query, cache);
    auto cached = [&](const Element& s) -> const Front& { return lookup(primal, s, query, cache); };

    std::vector<Element> pts;
    std::vector<Impl> wit;
    for (const auto& s : fixed.fixed_point.elements()) {
      const Front& q = cached(s);
      std::size_t pick = q.size();
      for (std::size_t i = 0; i < q.size() && pick == q.size(); ++i)
        if (space.leq(q.points[i], s)) pick = i;
      if (pick == q.size()) continue;  // not self-consistent; cannot happen at a fixed point
      pts.push_back(project(s, exposed));
      wit.push_back(q.witnesses[pick]);
    }
    return make_front(std::move(result_poset), std::move(pts), std::move(wit));
  }

  // The body query only depends on the fed-back coordinates of s.
  template <typename Query>
  const Front& lookup(bool primal, const Element& s, Query& query, std::map<Element, Front>& cache) const {
    Element::Tuple key;
    for (const auto& pair : fb_) key.push_back(s[primal ? pair.res_index : pair.fun_index]);
    auto k = Element::tuple(std::move(key));
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(std::move(k), query(s)).first;
    return it->second;
  }

  template <typename Query>
  KleeneResult iterate(bool primal, const Poset& space, Query& query, std::map<Element, Front>& cache) const {
    auto step = [&](const Antichain& current) {
      std::vector<Element> next;
      for (const auto& s : current.elements()) {
        const Front& q = lookup(primal, s, query, cache);
        for (const auto& a : q.points)
          for (auto& u : space.min_upper_bounds(s, a)) next.push_back(std::move(u));
      }
      return Antichain(space, next);
    };
    const auto bottom_points = space.minimal_elements();
    return kleene_lfp(step, Antichain(space, bottom_points), max_iter_);
  }

  DpiPtr body_;
  std::vector<FeedbackPair> fb_;
  std::vector<std::size_t> exp_fun_;
  std::vector<std::size_t> exp_res_;
  std::size_t max_iter_;
};

}  // namespace

KleeneResult trace_fixed_point(const Dpi& loop, const Element& f) {
  const auto* l = dynamic_cast<const LoopDpi*>(&loop);
  if (!l) throw UnsupportedError("trace_fixed_point: not a loop_trace composite");
  return l->fixed_point(f);
}

DpiPtr series(DpiPtr d1, DpiPtr d2) {
  if (!d1->res().same_as(d2->fun()))
    throw CompositionError("series: resource port of the first problem " + d1->res().signature() +
                           " does not match functionality port of the second " + d2->fun().signature());
  return std::make_shared<SeriesDpi>(std::move(d1), std::move(d2));
}

DpiPtr parallel(DpiPtr d1, DpiPtr d2) { return std::make_shared<ParallelDpi>(std::move(d1), std::move(d2)); }

DpiPtr identity_dpi(Poset poset) { return std::make_shared<IdentityDpi>(std::move(poset)); }

DpiPtr sum_node(std::size_t n, Poset poset, MergeOp op) {
  if (n == 0) throw StructuralError("sum node needs at least one input");
  if (op == MergeOp::Sum && poset.kind() != PosetKind::Numeric)
    throw StructuralError("'+' needs a numeric poset, got " + poset.signature());
  if (op == MergeOp::Max && !poset.is_total())
    throw StructuralError("'max' needs a totally ordered poset, got " + poset.signature());
  return std::make_shared<SumDpi>(n, std::move(poset), op);
}

DpiPtr linear_join(std::vector<double> weights, std::vector<Poset> inputs, Poset output) {
  if (weights.size() != inputs.size()) throw StructuralError("join: one weight per input is required");
  for (double w : weights)
    if (!(w >= 0.0) || std::isinf(w)) throw StructuralError("join: weights must be finite and >= 0");
  for (const auto& p : inputs)
    if (p.kind() != PosetKind::Numeric) throw StructuralError("join: inputs must be numeric");
  if (output.kind() != PosetKind::Numeric) throw StructuralError("join: output must be numeric");
  return std::make_shared<LinearJoinDpi>(std::move(weights), std::move(inputs), std::move(output));
}

DpiPtr limit_dpi(Poset poset, double cap) {
  if (poset.kind() != PosetKind::Numeric) throw StructuralError("limit: poset must be numeric");
  if (!(cap >= 0.0)) throw StructuralError("limit: cap must be >= 0");
  return std::make_shared<LimitDpi>(std::move(poset), cap);
}

DpiPtr loop_trace(DpiPtr body, std::vector<FeedbackPair> feedback, std::size_t max_iter) {
  if (body->fun().kind() != PosetKind::Product || body->res().kind() != PosetKind::Product)
    throw CompositionError("loop: body functionality and resources must be product posets");
  const auto& ff = body->fun().factors();
  const auto& rf = body->res().factors();
  std::set<std::size_t> fed_fun;
  std::set<std::size_t> fed_res;
  for (const auto& p : feedback) {
    if (p.res_index >= rf.size() || p.fun_index >= ff.size())
      throw CompositionError("loop: feedback index out of range");
    if (!rf[p.res_index].same_as(ff[p.fun_index]))
      throw CompositionError("loop: resource factor " + std::to_string(p.res_index) + " " +
                             rf[p.res_index].signature() + " cannot feed functionality factor " +
                             std::to_string(p.fun_index) + " " + ff[p.fun_index].signature());
    if (!fed_fun.insert(p.fun_index).second || !fed_res.insert(p.res_index).second)
      throw CompositionError("loop: a factor is used by two feedback wires");
  }
  std::vector<std::size_t> exp_fun;
  std::vector<std::size_t> exp_res;
  std::vector<Poset> fun;
  std::vector<Poset> res;
  for (std::size_t i = 0; i < ff.size(); ++i)
    if (!fed_fun.count(i)) {
      exp_fun.push_back(i);
      fun.push_back(ff[i]);
    }
  for (std::size_t i = 0; i < rf.size(); ++i)
    if (!fed_res.count(i)) {
      exp_res.push_back(i);
      res.push_back(rf[i]);
    }
  return std::make_shared<LoopDpi>(std::move(body), std::move(feedback), std::move(exp_fun), std::move(exp_res),
                                   Poset::product(std::move(fun)), Poset::product(std::move(res)), max_iter);
}

}  // namespace mcdp
