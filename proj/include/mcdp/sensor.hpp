#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mcdp/poset.hpp"

namespace mcdp {

enum class TimeOfDay { Day, Night };

TimeOfDay parse_time_of_day(const std::string& s);
std::string to_string(TimeOfDay t);

// Distance grid shared by every sensor curve: 0, 10, ..., 150 m.
const std::vector<double>& canonical_grid();

// Curve posets on the canonical grid. Smaller values are better, so the
// functionality order is descending (a better sensor is a larger element).
Poset fp_poset();
Poset fn_poset();
Poset acc_poset();

struct SensorCurves {
  std::vector<double> fp;   // false-positive probability per reading and cell
  std::vector<double> fn;   // false-negative probability
  std::vector<double> acc;  // range accuracy (std-dev), m

  // The bottom of the descending order: a sensor that sees nothing useful.
  static SensorCurves useless(std::size_t n);
};

struct SensorRecord {
  std::string name;
  SensorCurves day;
  SensorCurves night;
  bool has_night = false;  // without night columns the night curves are useless()
  double frequency = 0;    // Hz
  double latency = 0;      // s
  double cost = 0;         // CHF
  double mass = 0;         // g
  double power = 0;        // W

  const SensorCurves& curves(TimeOfDay t) const { return t == TimeOfDay::Day ? day : night; }
};

/// Loads `<stem>.csv` (columns distance_m, fp, fn, acc_m and optionally
/// fp_night, fn_night, acc_night_m) and the `<stem>.meta` sidecar
/// (`key: value` lines: name, frequency, latency, cost, mass, power).
/// Curves are resampled onto the canonical grid.
SensorRecord load_sensor(const std::filesystem::path& csv_path);

// Every sensor in a directory, sorted by file name.
std::vector<SensorRecord> load_sensor_dir(const std::filesystem::path& dir);

// Piecewise-linear curve value at distance d (held constant past the ends).
double curve_at(const std::vector<double>& grid, const std::vector<double>& values, double d);

}  // namespace mcdp
