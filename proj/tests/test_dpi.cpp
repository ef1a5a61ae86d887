#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mcdp/composition.hpp"
#include "mcdp/dpi.hpp"
#include "mcdp/errors.hpp"
#include "mcdp/kleene.hpp"
#include "mcdp/network.hpp"
#include "oracles.hpp"

using namespace mcdp;

namespace {

Element t1(double a) { return Element::tuple({a}); }
Element t2(double a, double b) { return Element::tuple({a, b}); }
Poset n1() { return Poset::product({Poset::numeric()}); }
Poset n2() { return Poset::product({Poset::numeric(), Poset::numeric()}); }

ImplRow row(std::string id, Element prov, Element req) { return {Impl{std::move(id), {}, {}}, prov, req}; }

std::vector<Element> points(const Front& fr) { return fr.points; }

}  // namespace

TEST_CASE("single row catalogue") {
  auto d = make_table_dpi({Poset::numeric(), n2(), {row("a", 10.0, t2(5, 2))}});
  CHECK(d->eval_h(10.0).points == std::vector<Element>{t2(5, 2)});
  CHECK(d->eval_h(11.0).empty());
  CHECK(d->eval_h(0.0).size() == 1);
  CHECK(d->eval_h_prime(t2(INFINITY, INFINITY)).points == std::vector<Element>{Element(10.0)});
  CHECK(d->eval_h_prime(t2(0, 0)).empty());
  CHECK(d->implementations_at(0.0, t2(INFINITY, INFINITY)).size() == 1);
  CHECK(d->implementations_at(11.0, t2(INFINITY, INFINITY)).empty());
  CHECK(d->implementations_at(10.0, t2(5, 2)).size() == 1);
  CHECK_THROWS_AS(d->eval_h(Element::label("x")), StructuralError);
}

TEST_CASE("duplicate implementation ids are rejected") {
  CHECK_THROWS_AS(make_table_dpi({Poset::numeric(), Poset::numeric(), {row("a", 1.0, 1.0), row("a", 2.0, 2.0)}}),
                  StructuralError);
}

TEST_CASE("h and h' match direct enumeration on random tables") {
  std::mt19937_64 rng(11);
  const auto F = n2();
  const auto R = n2();
  for (int rep = 0; rep < 30; ++rep) {
    const auto rows = oracle::random_rows(F, R, 20, rng, "i");
    auto d = make_table_dpi({F, R, rows});
    for (int q = 0; q < 10; ++q) {
      const auto f = oracle::random_element(F, rng);
      const auto r = oracle::random_element(R, rng);
      CHECK(oracle::same_set(points(d->eval_h(f)), oracle::h(rows, f, F, R), R));
      CHECK(oracle::same_set(points(d->eval_h_prime(r)), oracle::h_prime(rows, r, F, R), Poset::opposite(F)));
      const bool feasible = oracle::in_upper(d->eval_h(f).points, r, R);
      CHECK(feasible == !d->implementations_at(f, r).empty());
    }
  }
}

TEST_CASE("monotone closure") {
  const auto P = Poset::numeric();
  MonotoneTable t{P, P, {row("x", 1.0, 5.0), row("y", 2.0, 3.0)}};
  auto closed = monotone_closure(t);
  auto d = make_table_dpi(closed);
  CHECK(d->eval_h(1.0).points == std::vector<Element>{Element(3.0)});
  CHECK(d->eval_h(1.0).witnesses[0].id == "y@1");
  MonotoneTable mono{P, P, {row("x", 1.0, 1.0), row("y", 2.0, 3.0)}};
  auto dm = make_table_dpi(monotone_closure(mono));
  auto d0 = make_table_dpi(mono);
  for (double f : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0})
    CHECK(dm->eval_h(f).points == d0->eval_h(f).points);
}

TEST_CASE("series matches pair enumeration") {
  std::mt19937_64 rng(3);
  const auto F = n1();
  const auto M = n2();
  const auto R = n1();
  for (int rep = 0; rep < 20; ++rep) {
    auto a = oracle::random_rows(F, M, 3, rng, "a");
    auto b = oracle::random_rows(M, R, 3, rng, "b");
    auto s = series(make_table_dpi({F, M, a}), make_table_dpi({M, R, b}));
    for (double f : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0})
      CHECK(oracle::same_set(points(s->eval_h(t1(f))), oracle::series_h(a, b, t1(f), F, M, R), R));
  }
}

TEST_CASE("series identity law and mismatch") {
  std::mt19937_64 rng(5);
  const auto rows = oracle::random_rows(n1(), n2(), 8, rng, "a");
  auto d = make_table_dpi({n1(), n2(), rows});
  auto s = series(d, identity_dpi(n2()));
  for (double f : {0.0, 2.0, 4.0}) CHECK(s->eval_h(t1(f)).points == d->eval_h(t1(f)).points);
  CHECK_THROWS_AS(series(d, identity_dpi(n1())), CompositionError);
}

TEST_CASE("parallel matches cartesian enumeration") {
  std::mt19937_64 rng(9);
  const auto P = Poset::numeric();
  for (int rep = 0; rep < 20; ++rep) {
    auto a = oracle::random_rows(P, P, 3, rng, "a");
    auto b = oracle::random_rows(P, P, 3, rng, "b");
    auto p = parallel(make_table_dpi({P, P, a}), make_table_dpi({P, P, b}));
    for (double x : {0.0, 2.0, 4.0})
      for (double y : {0.0, 2.0, 4.0})
        CHECK(oracle::same_set(points(p->eval_h(t2(x, y))), oracle::parallel_h(a, b, t2(x, y), P, P, n2()), n2()));
  }
}

TEST_CASE("sum nodes") {
  const auto P = Poset::numeric("W");
  auto s = sum_node(3, P, MergeOp::Sum);
  CHECK(s->eval_h(Element::tuple({2.0, 3.0, 5.0})).points == std::vector<Element>{t1(10)});
  auto m = sum_node(3, P, MergeOp::Max);
  CHECK(m->eval_h(Element::tuple({2.0, 3.0, 5.0})).points == std::vector<Element>{t1(5)});
  auto one = sum_node(1, P, MergeOp::Sum);
  CHECK(one->eval_h(t1(7)).points == std::vector<Element>{t1(7)});
  CHECK(one->eval_h_prime(t1(7)).points == std::vector<Element>{t1(7)});
  CHECK_THROWS_AS(sum_node(2, oracle::diamond(), MergeOp::Max), StructuralError);
  CHECK_THROWS_AS(sum_node(2, Poset::chain({"a", "b"}), MergeOp::Sum), StructuralError);
  CHECK_NOTHROW(sum_node(2, Poset::chain({"a", "b"}), MergeOp::Max));
}

TEST_CASE("kleene iteration") {
  const auto P = Poset::chain({"0", "1", "2", "3"});
  auto bump = [&](const Antichain& a) {
    std::vector<Element> out;
    for (const auto& e : a.elements()) {
      const int v = std::min(std::stoi(e.label_name()) + 1, 2);
      out.push_back(Element::label(std::to_string(v)));
    }
    return Antichain(P, out);
  };
  std::vector<Element> bot{Element::label("0")};
  auto r = kleene_lfp(bump, Antichain(P, bot));
  CHECK(r.fixed_point.elements() == std::vector<Element>{Element::label("2")});
  CHECK(r.iterations <= 4);
  auto id = kleene_lfp([](const Antichain& a) { return a; }, Antichain(P, bot));
  CHECK(id.iterations == 1);
  CHECK(id.fixed_point.elements() == bot);

  const auto N = Poset::numeric();
  std::vector<Element> zero{Element(0.0)};
  CHECK_THROWS_AS(kleene_lfp(
                      [&](const Antichain& a) {
                        std::vector<Element> out{Element(a.elements()[0].scalar() + 1)};
                        return Antichain(N, out);
                      },
                      Antichain(N, zero), 50),
                  NonConvergenceError);
}

TEST_CASE("loop matches self-consistent enumeration") {
  std::mt19937_64 rng(21);
  const auto F = n2();
  const auto R = n2();
  for (int rep = 0; rep < 40; ++rep) {
    const auto rows = oracle::random_rows(F, R, 8, rng, "i");
    auto body = make_table_dpi({F, R, rows});
    auto l = loop_trace(body, {{1, 1}});
    for (double f : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0})
      CHECK(oracle::same_set(points(l->eval_h(t1(f))), oracle::loop_h(rows, t1(f), F, R, 1, 1), n1()));
  }
}

TEST_CASE("inactive loop equals dropping the factor") {
  const auto F = n2();
  const auto R = n2();
  std::vector<ImplRow> rows{row("a", t2(3, 9), t2(1, 0)), row("b", t2(5, 9), t2(4, 0)), row("c", t2(1, 9), t2(0, 0))};
  auto l = loop_trace(make_table_dpi({F, R, rows}), {{1, 1}});
  CHECK(l->eval_h(t1(2)).points == std::vector<Element>{t1(1)});
  CHECK(l->eval_h(t1(6)).empty());
}

TEST_CASE("loop feedback mismatch") {
  auto body = make_table_dpi({Poset::product({Poset::numeric("W"), Poset::numeric()}), n2(), {}});
  CHECK_THROWS_AS(loop_trace(body, {{0, 0}}), CompositionError);
}

TEST_CASE("network of two nodes equals series") {
  std::mt19937_64 rng(4);
  const auto F = n1();
  const auto M = n2();
  const auto R = n1();
  for (int rep = 0; rep < 10; ++rep) {
    auto a = make_table_dpi({F, M, oracle::random_rows(F, M, 4, rng, "a")});
    auto b = make_table_dpi({M, R, oracle::random_rows(M, R, 4, rng, "b")});
    auto s = series(a, b);
    NetworkSpec spec;
    spec.names = {"first", "second"};
    spec.nodes = {a, b};
    spec.exposed_funs = {{0, 0}};
    spec.exposed_res = {{1, 0}};
    spec.links = {{{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}};
    auto n = network(spec);
    for (double f : {0.0, 2.0, 4.0}) {
      CHECK(oracle::same_set(points(n->eval_h(t1(f))), points(s->eval_h(t1(f))), R));
      CHECK(oracle::same_set(points(n->eval_h_prime(t1(f))), points(s->eval_h_prime(t1(f))), Poset::opposite(F)));
    }
  }
}
