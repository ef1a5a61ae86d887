#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mcdp/catalogue.hpp"
#include "mcdp/dpi.hpp"
#include "mcdp/sensor.hpp"

namespace mcdp {

/// A DPI with named ports, ready to be placed in a diagram.
struct Block {
  DpiPtr dpi;
  std::vector<std::string> fun_names;
  std::vector<std::string> res_names;
  std::vector<std::string> warnings;

  const Poset& fun_port(std::size_t i) const { return dpi->fun().factors().at(i); }
  const Poset& res_port(std::size_t i) const { return dpi->res().factors().at(i); }
};

using ParamValue = std::variant<double, std::string, std::vector<double>>;
using BuiltinParams = std::map<std::string, ParamValue>;

// Ports that catalogues of a known block kind must declare (name and
// signature). Unknown kinds are accepted as they are.
void check_block_schema(const CatalogueFile& cat);

Block catalogue_block(const CatalogueFile& cat);

// fun: fp_day, fn_day, acc_day, fp_night, fn_night, acc_night, acq_freq[Hz]
// res: latency[s], cost[CHF], mass[g], power[W]
Block sensing_block(const std::vector<SensorRecord>& sensors);

// fun: (longitudinal[m/s], lateral), res: (discomfort):
// discomfort = w_long * longitudinal + w_lat * lateral.
DpiPtr discomfort_join_dpi(double w_long, double w_lat);

const std::vector<std::string>& builtin_models();

/// Builtin models: lateral, discomfort_join, limit, sensing. Relative paths
/// in parameters resolve against `base_dir`.
Block make_builtin(const std::string& model, const BuiltinParams& params, const std::filesystem::path& base_dir);

// Shared port posets.
Poset time_of_day_poset();  // day < night

}  // namespace mcdp
