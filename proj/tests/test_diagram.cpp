#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "mcdp/catalogue.hpp"
#include "mcdp/diagram.hpp"

using namespace mcdp;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::filesystem::path kFixtures = MCDP_FIXTURES;
const std::filesystem::path kToy = kFixtures / "toy";

std::vector<std::string> messages(const std::string& text, const std::filesystem::path& base = kToy) {
  std::vector<std::string> out;
  try {
    const auto ast = parse_diagram(text, "t.cdp");
    const auto blocks = resolve_blocks(ast, base);
    for (const auto& d : blocks.diagnostics)
      if (d.severity == Severity::Error) out.push_back(d.to_string());
    for (const auto& d : validate(ast, blocks))
      if (d.severity == Severity::Error) out.push_back(d.to_string());
  } catch (const DiagramError& e) {
    for (const auto& d : e.diagnostics()) out.push_back(d.to_string());
  }
  return out;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto p = s.find(from);
  REQUIRE(p != std::string::npos);
  return s.replace(p, from.size(), to);
}

std::set<std::string> cut_wires(const CanonicalForm& c) {
  std::set<std::string> out;
  for (const auto& fb : c.feedback_pairs)
    out.insert(fb.provider_fun.node + "." + fb.provider_fun.port + " -> " + fb.consumer_res.node + "." + fb.consumer_res.port);
  return out;
}

// Same diagram with its declarations shuffled within each kind.
std::string shuffled(const std::string& text, std::uint64_t seed) {
  std::vector<std::string> nodes, wires, rest;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("node ", 0) == 0)
      nodes.push_back(line);
    else if (line.rfind("wire ", 0) == 0)
      wires.push_back(line);
    else if (line.rfind("expose ", 0) == 0)
      rest.push_back(line);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  std::shuffle(wires.begin(), wires.end(), rng);
  std::string out;
  for (const auto* v : {&wires, &nodes, &rest})
    for (const auto& l : *v) out += l + "\n";
  return out;
}

Front solve(const CompiledDiagram& d, double payload) { return d.dpi->eval_h(Element::tuple({payload})); }

}  // namespace

TEST_CASE("drone diagram solves to the hand-computed costs") {
  const auto d = compile_file(kToy / "drone.cdp");
  REQUIRE(d.funs.size() == 1);
  CHECK(d.funs[0].name == "payload");
  CHECK(d.res[0].name == "cost");
  // A1 + B1 lifts 100 g, of which the battery is 50.
  CHECK(solve(d, 50).points == std::vector<Element>{Element::tuple({15.0})});
  // A2 + B2: 60 + 80 <= 250.
  CHECK(solve(d, 60).points == std::vector<Element>{Element::tuple({40.0})});
  // Only A3 + B3 carries 300 + 200.
  CHECK(solve(d, 300).points == std::vector<Element>{Element::tuple({50.0})});
  CHECK(solve(d, 301).empty());
  const auto front = solve(d, 60);
  const auto& w = front.witnesses.at(0);
  std::map<std::string, std::string> choice;
  for (const auto& [path, leaf] : w.leaves()) choice[path] = leaf->id;
  CHECK(choice["battery"] == "B2");
  CHECK(choice["actuator"] == "A2");
}

TEST_CASE("canonical form of the drone cuts one wire") {
  const auto ast = load_diagram(kToy / "drone.cdp");
  const auto c = canonicalize(ast);
  CHECK(cut_wires(c) == std::set<std::string>{"actuator.lift -> load.out"});
  CHECK(c.loop_free.wires.size() == ast.wires.size() - 1);
  CHECK(c.order.size() == 4);
}

TEST_CASE("a node wired to itself has one feedback pair") {
  const auto ast = parse_diagram("node a = catalogue(\"x.cat\")\nwire a.f -> a.r\n");
  const auto c = canonicalize(ast);
  REQUIRE(c.feedback_pairs.size() == 1);
  CHECK(c.feedback_pairs[0].consumer_res.port == "r");
  CHECK(c.loop_free.wires.empty());
}

TEST_CASE("a diamond without cycles has no feedback pairs") {
  const auto ast = parse_diagram(R"(node top = catalogue("t.cat")
node left = catalogue("l.cat")
node right = catalogue("r.cat")
node bottom = catalogue("b.cat")
wire left.f -> top.r1
wire right.f -> top.r2
wire bottom.f1 -> left.r
wire bottom.f2 -> right.r
)");
  const auto c = canonicalize(ast);
  CHECK(c.feedback_pairs.empty());
  REQUIRE(c.order.size() == 4);
  // Consumers come before their providers.
  const auto pos = [&](const std::string& n) { return std::find(c.order.begin(), c.order.end(), n) - c.order.begin(); };
  CHECK(pos("top") < pos("left"));
  CHECK(pos("top") < pos("right"));
  CHECK(pos("left") < pos("bottom"));
  CHECK(pos("right") < pos("bottom"));
}

TEST_CASE("the AV diagram has exactly five feedback pairs") {
  const auto ast = load_diagram(kFixtures / "av" / "av.cdp");
  const auto c = canonicalize(ast);
  CHECK(c.feedback_pairs.size() == 5);
  CHECK(cut_wires(c) == std::set<std::string>{
                            "mass_sum.in1 -> camera.mass",
                            "vehicle.power -> power_sum.out",
                            "comp_sum.in2 -> lane_detection.computation",
                            "comp_sum.in1 -> lat_impl.computation",
                            "brake.latency -> sensor.latency",
                        });
}

TEST_CASE("canonical form does not depend on declaration order") {
  for (const auto& file : {kToy / "drone.cdp", kFixtures / "av" / "av.cdp"}) {
    const std::string text = read_text_file(file);
    const auto base = canonicalize(parse_diagram(text));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto c = canonicalize(parse_diagram(shuffled(text, seed)));
      CHECK(cut_wires(c) == cut_wires(base));
      CHECK(c.order == base.order);
    }
  }
  // And the compiled drone answers the same queries.
  const std::string text = read_text_file(kToy / "drone.cdp");
  const auto a = compile_file(kToy / "drone.cdp");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto ast = parse_diagram(shuffled(text, seed));
    const auto b = compile(ast, resolve_blocks(ast, kToy));
    for (double p : {0.0, 50.0, 60.0, 250.0, 300.0, 301.0}) CHECK(solve(a, p).points == solve(b, p).points);
  }
}

TEST_CASE("print_diagram round-trips") {
  for (const auto& file : {kToy / "drone.cdp", kFixtures / "av" / "av.cdp"}) {
    const auto ast = load_diagram(file);
    const auto printed = print_diagram(ast);
    const auto again = parse_diagram(printed, "printed.cdp");
    CHECK(same_structure(ast, again));
    CHECK(print_diagram(again) == printed);
  }
}

TEST_CASE("syntax errors are reported per line") {
  const auto m = messages("node a = catalog(\"x\")\nnode b = sum(2, *)\nwire a.f -> \nnode c = builtin(nope)\n");
  REQUIRE(m.size() == 4);
  CHECK_THAT(m[0], ContainsSubstring("t.cdp:1:10: error: expected catalogue(...), builtin(...) or sum(...), found 'catalog'"));
  CHECK_THAT(m[1], ContainsSubstring("t.cdp:2:17: error: expected '+' or 'max', found '*'"));
  CHECK_THAT(m[2], ContainsSubstring("t.cdp:3:"));
  CHECK_THAT(m[3], ContainsSubstring("unknown builtin 'nope' (known: discomfort_join, lateral, limit, sensing)"));
}

TEST_CASE("empty diagram") {
  const auto m = messages("# nothing here\n\n");
  REQUIRE(m.size() == 1);
  CHECK(m[0] == "t.cdp:1:1: error: no nodes declared");
}

TEST_CASE("duplicate declarations") {
  CHECK_THAT(messages("node a = catalogue(\"battery.cat\")\nnode a = catalogue(\"battery.cat\")\n").at(0),
             ContainsSubstring("t.cdp:2:"));
  CHECK_THAT(messages("node a = builtin(limit, max=1, max=2)\n").at(0), ContainsSubstring("max"));
}

TEST_CASE("validation diagnostics") {
  const std::string ok = read_text_file(kToy / "drone.cdp");
  CHECK(messages(ok).empty());

  auto m = messages(replace(ok, "battery.mass[g]", "battery.mass[kg]"));
  REQUIRE(m.size() == 1);
  CHECK_THAT(m[0], ContainsSubstring("unit mismatch on 'battery.mass': written [kg], port has [g]"));

  m = messages(replace(ok, "price.in1 -> actuator.cost", "price.in1 -> actuator.costs"));
  REQUIRE(m.size() == 2);
  CHECK_THAT(m[0], ContainsSubstring("resource 'actuator.cost' is not connected"));
  CHECK_THAT(m[1], ContainsSubstring("node 'actuator' has no resource 'costs' (available: energy, cost)"));

  m = messages(replace(ok, "wire load.in0 -> battery.mass[g]", "wire load.in0 -> batery.mass"));
  CHECK(std::any_of(m.begin(), m.end(), [](const std::string& s) {
    return s.find("unknown node 'batery' (declared: battery, actuator, load, price)") != std::string::npos;
  }));

  m = messages(replace(ok, "wire price.in0 -> battery.cost", "wire price.in1 -> battery.cost"));
  CHECK(std::any_of(m.begin(), m.end(), [](const std::string& s) {
    return s.find("functionality 'price.in1' is used more than once") != std::string::npos;
  }));

  m = messages(replace(ok, "wire battery.energy[J] -> actuator.energy[J]", "wire battery.energy -> actuator.cost"));
  CHECK(std::any_of(m.begin(), m.end(), [](const std::string& s) { return s.find("[J]") != std::string::npos; }));

  m = messages(replace(ok, "catalogue(\"battery.cat\")", "catalogue(\"missing.cat\")"));
  REQUIRE(!m.empty());
  CHECK_THAT(m[0], ContainsSubstring("missing.cat"));
}

TEST_CASE("diagnostics are sorted by position") {
  const std::string ok = read_text_file(kToy / "drone.cdp");
  const auto m = messages(replace(replace(ok, "price.in1 -> actuator.cost", "price.in1 -> actuator.costs"),
                                  "battery.mass[g]", "battery.mass[kg]"));
  REQUIRE(m.size() == 3);
  CHECK(std::is_sorted(m.begin(), m.end(), [](const std::string& a, const std::string& b) {
    auto line = [](const std::string& s) { return std::stoi(s.substr(s.find(':') + 1)); };
    return line(a) < line(b);
  }));
}
