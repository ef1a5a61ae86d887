#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcdp/catalogue.hpp"
#include "mcdp/dpi.hpp"
#include "mcdp/longitudinal.hpp"

namespace mcdp {

struct Environment {
  TimeOfDay time_of_day = TimeOfDay::Day;
  double density = 0;  // obstacles/km
};

struct Dynamics {
  double a_max = 0;
  double a_min = 0;
};

/// Scenario grid of a simulation campaign. Every grid point is simulated on
/// the same `episodes` worlds (episode_seed(seed, i)).
struct Campaign {
  std::vector<SensorRecord> sensors;
  std::vector<double> cruise_kmh;
  std::vector<Environment> environments;
  std::vector<double> control_frequencies;
  std::vector<double> thresholds;
  std::vector<Dynamics> dynamics;
  double vehicle_mass = 1500;
  double horizon = 150;
  std::size_t episodes = 0;
  std::uint64_t seed = 0;
  std::size_t budget = 0;  // max episodes to run, 0 for no limit

  void validate() const;
};

/// JSON campaign file; `sensors_dir` resolves relative to the file and the
/// optional `sensors` list selects sensors by name.
Campaign load_campaign(const std::filesystem::path& path);
Campaign parse_campaign(const std::string& json_text, const std::filesystem::path& base_dir);

struct SimulationOptions {
  std::size_t jobs = 1;
  std::optional<std::filesystem::path> cache_dir;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct LongitudinalResult {
  MonotoneTable table;  // after monotone_closure
  std::size_t grid_points = 0;
  std::size_t simulated = 0;
  std::size_t feasible = 0;
  std::size_t cache_hits = 0;
  std::vector<std::string> warnings;
};

TableHeader longitudinal_header();
Poset longitudinal_fun_poset();
Poset longitudinal_res_poset();

/// Runs every grid point, keeps those whose achieved speed reaches 95% of
/// the cruise speed, and returns the monotone closure of the rows.
LongitudinalResult longitudinal_table(const Campaign& c, const SimulationOptions& opt = {});
DpiPtr longitudinal_dpi(const Campaign& c, const SimulationOptions& opt = {});

}  // namespace mcdp
