#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "mcdp/catalogue.hpp"
#include "mcdp/cli.hpp"

using namespace mcdp;
using nlohmann::json;

namespace {

const std::filesystem::path kFixtures = MCDP_FIXTURES;
const std::string kDrone = (kFixtures / "toy" / "drone.cdp").string();

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / "mcdp_cli_test") {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "mcdp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

json read_json(const std::string& path) { return json::parse(read_text_file(path)); }

}  // namespace

TEST_CASE("solve writes the antichain and exits by feasibility") {
  TempDir tmp;
  REQUIRE(run({"solve", "--diagram", kDrone, "--fun", "payload=60[g]", "--out", tmp / "a.json"}) == kExitFeasible);
  const auto j = read_json(tmp / "a.json");
  CHECK(j["command"] == "solve");
  CHECK(j["feasible"] == true);
  REQUIRE(j["antichain"].size() == 1);
  CHECK(j["antichain"][0]["resources"][0] == 40.0);
  CHECK(j["antichain"][0]["implementation"]["choices"]["battery"] == "B2");
  CHECK(j["query"]["payload"]["value"] == 60.0);

  CHECK(run({"solve", "--diagram", kDrone, "--fun", "payload=400", "--out", tmp / "b.json"}) == kExitInfeasible);
  CHECK(read_json(tmp / "b.json")["feasible"] == false);
  CHECK(read_json(tmp / "b.json")["antichain"].empty());
}

TEST_CASE("bad queries exit with the error code") {
  TempDir tmp;
  const auto out = tmp / "x.json";
  CHECK(run({"solve", "--diagram", kDrone, "--out", out}) == kExitError);
  CHECK(run({"solve", "--diagram", kDrone, "--fun", "weight=1", "--out", out}) == kExitError);
  CHECK(run({"solve", "--diagram", kDrone, "--fun", "payload=1", "--fun", "payload=2", "--out", out}) == kExitError);
  CHECK(run({"solve", "--diagram", kDrone, "--fun", "payload=1[kg]", "--out", out}) == kExitError);
  CHECK(run({"solve", "--diagram", kDrone, "--fun", "payload=heavy", "--out", out}) == kExitError);
  CHECK(run({"solve", "--diagram", tmp / "missing.cdp", "--fun", "payload=1", "--out", out}) == kExitError);
  CHECK(run({"frobnicate"}) == kExitError);
  CHECK(!std::filesystem::exists(out));
}

TEST_CASE("sweep certifies nested answers") {
  TempDir tmp;
  REQUIRE(run({"sweep", "--diagram", kDrone, "--sweep", "payload=50,60,300", "--out", tmp / "s.json"}) == kExitFeasible);
  const auto j = read_json(tmp / "s.json");
  REQUIRE(j["results"].size() == 3);
  CHECK(j["results"][2]["antichain"][0]["resources"][0] == 50.0);
  REQUIRE(j["certificate"].size() == 2);
  for (const auto& c : j["certificate"]) CHECK(c["status"] == "pass");
  CHECK(j["certificate_status"] == "pass");

  // One infeasible value is reported but does not fail the sweep.
  CHECK(run({"sweep", "--diagram", kDrone, "--sweep", "payload=60,400", "--out", tmp / "t.json"}) == kExitFeasible);
  CHECK(read_json(tmp / "t.json")["results"][1]["feasible"] == false);
  CHECK(run({"sweep", "--diagram", kDrone, "--sweep", "payload=400,500", "--out", tmp / "u.json"}) == kExitInfeasible);
  CHECK(run({"sweep", "--diagram", kDrone, "--sweep", "weight=1,2", "--out", tmp / "v.json"}) == kExitError);
  CHECK(run({"sweep", "--diagram", kDrone, "--sweep", "payload=1,2", "--fun", "payload=3", "--out", tmp / "w.json"}) ==
        kExitError);
}

TEST_CASE("nesting check") {
  const Poset P = Poset::product({Poset::numeric()});
  const Poset F = Poset::product({Poset::numeric()});
  auto front = [&](std::vector<double> xs) {
    std::vector<Element> pts;
    std::vector<Impl> w;
    for (double x : xs) {
      pts.push_back(Element::tuple({x}));
      w.push_back(Impl{"i", {}, {}});
    }
    return make_front(P, pts, w);
  };
  const Element lo = Element::tuple({1.0});
  const Element hi = Element::tuple({2.0});
  CHECK(check_nesting(F, lo, hi, front({3}), front({5})).status == "pass");
  CHECK(check_nesting(F, lo, hi, front({3}), front({})).status == "pass");
  const auto bad = check_nesting(F, lo, hi, front({3}), front({2}));
  CHECK(bad.status == "fail");
  CHECK(bad.violations.size() == 1);
  const Poset F2 = Poset::product({Poset::numeric(), Poset::numeric()});
  CHECK(check_nesting(F2, Element::tuple({1.0, 2.0}), Element::tuple({2.0, 1.0}), front({3}), front({2})).status ==
        "incomparable");
}

TEST_CASE("export round-trips through csv and json") {
  TempDir tmp;
  REQUIRE(run({"sweep", "--diagram", kDrone, "--sweep", "payload=50,60,300", "--out", tmp / "s.json"}) == kExitFeasible);
  REQUIRE(run({"export", "--in", tmp / "s.json", "--format", "json", "--out", tmp / "rows.json"}) == kExitFeasible);
  REQUIRE(run({"export", "--in", tmp / "s.json", "--format", "csv", "--out", tmp / "rows.csv"}) == kExitFeasible);
  const auto rows = read_json(tmp / "rows.json");
  CHECK(rows["rows"].size() == 3);
  CHECK(rows["columns"][0] == "sweep_value");
  CHECK(csv_to_rows(read_text_file(tmp / "rows.csv")) == rows);
  CHECK(rows_to_csv(rows) == read_text_file(tmp / "rows.csv"));
  CHECK(run({"export", "--in", tmp / "s.json", "--format", "xml", "--out", tmp / "r.xml"}) == kExitError);
}

TEST_CASE("simulate output does not depend on --jobs") {
  TempDir tmp;
  json c = json::parse(read_text_file(kFixtures / "av" / "campaign_tiny.json"));
  c["sensors_dir"] = (kFixtures / "av" / "sensors").string();
  c["sensors"] = {"Puck"};
  c["episodes"] = 4;
  c["horizon_s"] = 60;
  write_text_file(tmp / "c.json", c.dump());
  REQUIRE(run({"simulate", "--campaign", tmp / "c.json", "--out", tmp / "one.dpt", "--jobs", "1"}) == kExitFeasible);
  REQUIRE(run({"simulate", "--campaign", tmp / "c.json", "--out", tmp / "three.dpt", "--jobs", "3"}) == kExitFeasible);
  CHECK(read_text_file(tmp / "one.dpt") == read_text_file(tmp / "three.dpt"));
  CHECK_NOTHROW(load_catalogue(tmp / "one.dpt"));
  REQUIRE(run({"simulate", "--campaign", tmp / "c.json", "--out", tmp / "s5.dpt", "--seed", "5"}) == kExitFeasible);
  CHECK(read_text_file(tmp / "one.dpt") != read_text_file(tmp / "s5.dpt"));
  CHECK(run({"simulate", "--campaign", tmp / "c.json", "--out", tmp / "z.dpt", "--jobs", "0"}) == kExitError);
}
