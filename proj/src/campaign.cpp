#include "mcdp/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "mcdp/blocks.hpp"
#include "mcdp/errors.hpp"

namespace mcdp {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

struct GridPoint {
  LongitudinalScenario scenario;
  std::string id;
};

// Canonical description of everything an episode depends on.
std::string scenario_key(const LongitudinalScenario& s, std::size_t episodes) {
  json j;
  j["v"] = 1;
  j["time_of_day"] = to_string(s.time_of_day);
  j["density"] = s.density;
  j["cruise_kmh"] = s.cruise_kmh;
  j["v_max"] = s.v_max;
  j["a_max"] = s.a_max;
  j["a_min"] = s.a_min;
  j["threshold"] = s.threshold;
  j["control_frequency"] = s.control_frequency;
  j["vehicle_mass"] = s.vehicle_mass;
  j["horizon"] = s.horizon;
  j["episodes"] = episodes;
  j["seed"] = s.rng_seed;
  const auto& c = s.sensor.curves(s.time_of_day);
  j["sensor"] = {{"fp", c.fp}, {"fn", c.fn}, {"acc", json::array()}, {"frequency", s.sensor.frequency},
                 {"latency", s.sensor.latency}};
  for (double a : c.acc) j["sensor"]["acc"].push_back(std::isinf(a) ? json("inf") : json(a));
  return j.dump();
}

std::vector<EpisodeOutcome> run_point(const LongitudinalScenario& s, std::size_t episodes) {
  std::vector<EpisodeOutcome> out;
  out.reserve(episodes);
  for (std::size_t e = 0; e < episodes; ++e) out.push_back(simulate_episode(s, episode_seed(s.rng_seed, e)));
  return out;
}

json outcomes_to_json(const std::vector<EpisodeOutcome>& v) {
  json a = json::array();
  for (const auto& o : v)
    a.push_back({o.collided, o.collision_momentum, o.discomfort, o.mean_speed, o.distance_covered});
  return a;
}

std::optional<std::vector<EpisodeOutcome>> outcomes_from_json(const json& a, std::size_t expected) {
  if (!a.is_array() || a.size() != expected) return std::nullopt;
  std::vector<EpisodeOutcome> v;
  for (const auto& e : a) {
    if (!e.is_array() || e.size() != 5) return std::nullopt;
    v.push_back({e[0].get<bool>(), e[1].get<double>(), e[2].get<double>(), e[3].get<double>(), e[4].get<double>()});
  }
  return v;
}

}  // namespace

void Campaign::validate() const {
  if (sensors.empty()) throw ModelError("campaign: no sensors selected");
  if (cruise_kmh.empty() || environments.empty() || control_frequencies.empty() || thresholds.empty() ||
      dynamics.empty())
    throw ModelError("campaign: every grid axis needs at least one value");
  if (episodes == 0) throw ModelError("campaign: episodes must be > 0");
}

Campaign parse_campaign(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("campaign: invalid JSON: ") + e.what());
  }
  static const std::set<std::string> known{"sensors_dir", "sensors", "cruise_speeds_kmh", "environments",
                                           "control_frequencies", "thresholds", "dynamics", "vehicle_mass_kg",
                                           "horizon_s", "episodes", "seed", "budget_episodes"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ModelError("campaign: unknown key '" + it.key() + "'");
  Campaign c;
  try {
    auto dir = std::filesystem::path(j.at("sensors_dir").get<std::string>());
    if (dir.is_relative()) dir = base_dir / dir;
    auto all = load_sensor_dir(dir);
    if (j.contains("sensors")) {
      for (const auto& name : j["sensors"]) {
        auto it = std::find_if(all.begin(), all.end(), [&](const SensorRecord& s) { return s.name == name.get<std::string>(); });
        if (it == all.end()) throw ModelError("campaign: unknown sensor '" + name.get<std::string>() + "'");
        c.sensors.push_back(*it);
      }
    } else {
      c.sensors = std::move(all);
    }
    c.cruise_kmh = j.at("cruise_speeds_kmh").get<std::vector<double>>();
    for (const auto& e : j.at("environments"))
      c.environments.push_back({parse_time_of_day(e.at("time_of_day").get<std::string>()), e.at("density").get<double>()});
    c.control_frequencies = j.at("control_frequencies").get<std::vector<double>>();
    c.thresholds = j.at("thresholds").get<std::vector<double>>();
    for (const auto& d : j.at("dynamics")) c.dynamics.push_back({d.at("a_max").get<double>(), d.at("a_min").get<double>()});
    c.vehicle_mass = j.value("vehicle_mass_kg", c.vehicle_mass);
    c.horizon = j.value("horizon_s", c.horizon);
    const auto episodes = j.at("episodes").get<long long>();
    if (episodes <= 0) throw ModelError("campaign: episodes must be > 0");
    c.episodes = static_cast<std::size_t>(episodes);
    c.seed = j.value("seed", std::uint64_t{0});
    c.budget = j.value("budget_episodes", std::size_t{0});
  } catch (const json::exception& e) {
    throw ModelError(std::string("campaign: ") + e.what());
  }
  c.validate();
  return c;
}

Campaign load_campaign(const std::filesystem::path& path) {
  return parse_campaign(read_text_file(path), path.parent_path());
}

TableHeader longitudinal_header() {
  return {"longitudinal",
          {"cruise_speed", "time_of_day", "density", "latency"},
          {"fp_day", "fn_day", "acc_day", "fp_night", "fn_night", "acc_night", "acq_freq", "ctrl_freq", "v_max", "a_max",
           "a_min", "danger", "discomfort"}};
}

Poset longitudinal_fun_poset() {
  return Poset::product(
      {Poset::numeric("km/h"), time_of_day_poset(), Poset::numeric("obs/km"), Poset::numeric("s")});
}

Poset longitudinal_res_poset() {
  return Poset::product({fp_poset(), fn_poset(), acc_poset(), fp_poset(), fn_poset(), acc_poset(),
                         Poset::numeric("Hz"), Poset::numeric("Hz"), Poset::numeric("m/s"), Poset::numeric("m/s2"),
                         Poset::numeric("m/s2"), Poset::numeric("kg*m/s"), Poset::numeric("m/s")});
}

LongitudinalResult longitudinal_table(const Campaign& c, const SimulationOptions& opt) {
  c.validate();
  std::vector<GridPoint> grid;
  for (double v : c.cruise_kmh)
    for (const auto& env : c.environments)
      for (const auto& sensor : c.sensors)
        for (double fc : c.control_frequencies)
          for (double th : c.thresholds)
            for (const auto& dyn : c.dynamics) {
              LongitudinalScenario s;
              s.time_of_day = env.time_of_day;
              s.density = env.density;
              s.cruise_kmh = v;
              s.v_max = s.cruise_speed();
              s.a_max = dyn.a_max;
              s.a_min = dyn.a_min;
              s.threshold = th;
              s.control_frequency = fc;
              s.sensor = sensor;
              s.vehicle_mass = c.vehicle_mass;
              s.horizon = c.horizon;
              s.episodes = c.episodes;
              s.rng_seed = c.seed;
              s.validate();
              grid.push_back({s, sensor.name + "/v" + fmt(v) + "/" + to_string(env.time_of_day) + fmt(env.density) +
                                     "/fc" + fmt(fc) + "/th" + fmt(th) + "/a" + fmt(dyn.a_max) + "-" + fmt(dyn.a_min)});
            }

  LongitudinalResult result;
  result.grid_points = grid.size();
  std::size_t runnable = grid.size();
  if (c.budget > 0 && c.budget / c.episodes < runnable) {
    runnable = c.budget / c.episodes;
    result.warnings.push_back("simulation budget of " + std::to_string(c.budget) + " episodes covers only " +
                              std::to_string(runnable) + " of " + std::to_string(grid.size()) +
                              " grid points; the table is partial");
  }

  std::vector<std::vector<EpisodeOutcome>> outcomes(runnable);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<std::size_t> hits{0};
  std::mutex progress_mu;
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < runnable; i = next++) {
      try {
        const auto& s = grid[i].scenario;
        std::optional<std::filesystem::path> file;
        if (opt.cache_dir) {
          const std::string key = scenario_key(s, c.episodes);
          char hex[17];
          std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
          file = *opt.cache_dir / (std::string(hex) + ".json");
          if (std::filesystem::exists(*file)) {
            try {
              const json j = json::parse(read_text_file(*file));
              if (j.at("key").get<std::string>() == key) {
                if (auto v = outcomes_from_json(j.at("outcomes"), c.episodes)) {
                  outcomes[i] = std::move(*v);
                  ++hits;
                  file.reset();
                }
              }
            } catch (const std::exception&) {
              // Unreadable cache entries are recomputed.
            }
          }
        }
        if (outcomes[i].empty()) outcomes[i] = run_point(s, c.episodes);
        if (file) {
          json j{{"key", scenario_key(s, c.episodes)}, {"outcomes", outcomes_to_json(outcomes[i])}};
          const auto tmp = file->string() + ".tmp" + std::to_string(i);
          write_text_file(tmp, j.dump());
          std::filesystem::rename(tmp, *file);
        }
        const std::size_t d = ++done;
        if (opt.progress) {
          std::lock_guard lock(progress_mu);
          opt.progress(d, runnable);
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = runnable;
      }
    }
  };
  if (opt.cache_dir) std::filesystem::create_directories(*opt.cache_dir);
  const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, runnable));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  result.cache_hits = hits;
  result.simulated = runnable;

  MonotoneTable raw{longitudinal_fun_poset(), longitudinal_res_poset(), {}};
  const auto n = canonical_grid().size();
  const auto useless = SensorCurves::useless(n);
  for (std::size_t i = 0; i < runnable; ++i) {
    const auto& s = grid[i].scenario;
    const Aggregate agg = aggregate_outcomes(outcomes[i]);
    if (agg.achieved_speed < kFeasibleSpeedRatio * s.cruise_speed()) continue;
    ++result.feasible;
    const bool day = s.time_of_day == TimeOfDay::Day;
    const auto& used = s.sensor.curves(s.time_of_day);
    const auto& d = day ? used : useless;
    const auto& nt = day ? useless : used;
    Impl impl{grid[i].id,
              {{"sensor", s.sensor.name},
               {"control_rate", fmt(s.control_frequency)},
               {"threshold", fmt(s.threshold)},
               {"dynamics", fmt(s.a_max) + "/" + fmt(s.a_min)}},
              {}};
    raw.rows.push_back(
        {impl,
         Element::tuple({s.cruise_kmh, Element::label(to_string(s.time_of_day)), s.density, s.sensor.latency}),
         Element::tuple({Element::samples(d.fp), Element::samples(d.fn), Element::samples(d.acc),
                         Element::samples(nt.fp), Element::samples(nt.fn), Element::samples(nt.acc), s.sensor.frequency,
                         s.control_frequency, s.cruise_speed(), s.a_max, s.a_min, agg.danger, agg.discomfort})});
  }
  result.table = monotone_closure(raw);
  return result;
}

DpiPtr longitudinal_dpi(const Campaign& c, const SimulationOptions& opt) {
  return make_table_dpi(longitudinal_table(c, opt).table);
}

}  // namespace mcdp
