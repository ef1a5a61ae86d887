#include "mcdp/blocks.hpp"

#include <algorithm>
#include <set>

#include "mcdp/composition.hpp"
#include "mcdp/errors.hpp"
#include "mcdp/lateral.hpp"

namespace mcdp {

namespace {

struct PortSpec {
  const char* name;
  Poset poset;
};

struct Schema {
  std::vector<PortSpec> fun;
  std::vector<PortSpec> res;
};

Poset num(const char* unit) { return Poset::numeric(unit); }

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> s = [] {
    std::map<std::string, Schema> m;
    m["vehicle"] = {{{"v_max", num("m/s")},
                     {"a_max", num("m/s2")},
                     {"a_min", num("m/s2")},
                     {"power", num("W")},
                     {"carried_mass", num("g")}},
                    {{"cost", num("CHF")}, {"externalities", num("g/km")}, {"system_noise", Poset::numeric()}}};
    m["computer"] = {{{"computation", num("op/s")}}, {{"cost", num("CHF")}, {"mass", num("g")}, {"power", num("W")}}};
    m["camera"] = {{{"resolution", num("px/sr")}, {"frame_rate", num("Hz")}},
                   {{"cost", num("CHF")}, {"mass", num("g")}, {"power", num("W")}}};
    m["lane_detection"] = {{{"obs_precision", Poset::opposite(num("m"))}, {"obs_freq", num("Hz")}},
                           {{"resolution", num("px/sr")}, {"frame_rate", num("Hz")}, {"computation", num("op/s")}}};
    m["algorithm"] = {{{"ctrl_freq", num("Hz")}}, {{"computation", num("op/s")}}};
    m["longitudinal"] = {{{"cruise_speed", num("km/h")},
                          {"time_of_day", time_of_day_poset()},
                          {"density", num("obs/km")},
                          {"latency", num("s")}},
                         {{"fp_day", fp_poset()},
                          {"fn_day", fn_poset()},
                          {"acc_day", acc_poset()},
                          {"fp_night", fp_poset()},
                          {"fn_night", fn_poset()},
                          {"acc_night", acc_poset()},
                          {"acq_freq", num("Hz")},
                          {"ctrl_freq", num("Hz")},
                          {"v_max", num("m/s")},
                          {"a_max", num("m/s2")},
                          {"a_min", num("m/s2")},
                          {"danger", num("kg*m/s")},
                          {"discomfort", num("m/s")}}};
    return m;
  }();
  return s;
}

double get_number(const BuiltinParams& p, const std::string& key, double fallback, bool required = false) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (required) throw CompositionError("missing parameter '" + key + "'");
    return fallback;
  }
  if (const double* d = std::get_if<double>(&it->second)) return *d;
  throw CompositionError("parameter '" + key + "' must be a number");
}

std::vector<double> get_list(const BuiltinParams& p, const std::string& key, std::vector<double> fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  if (const auto* l = std::get_if<std::vector<double>>(&it->second)) return *l;
  if (const double* d = std::get_if<double>(&it->second)) return {*d};
  throw CompositionError("parameter '" + key + "' must be a number or a list of numbers");
}

std::string get_string(const BuiltinParams& p, const std::string& key, std::string fallback, bool required = false) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (required) throw CompositionError("missing parameter '" + key + "'");
    return fallback;
  }
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw CompositionError("parameter '" + key + "' must be a string");
}

void only_keys(const BuiltinParams& p, const std::string& model, std::set<std::string> allowed) {
  for (const auto& [k, v] : p)
    if (!allowed.count(k)) throw CompositionError("builtin '" + model + "' has no parameter '" + k + "'");
}

}  // namespace

Poset time_of_day_poset() { return Poset::chain({"day", "night"}); }

void check_block_schema(const CatalogueFile& cat) {
  auto it = schemas().find(cat.block_kind);
  if (it == schemas().end()) return;
  auto check = [&](const std::vector<PortSpec>& want, const std::vector<PortDecl>& have, const char* side) {
    for (const auto& w : want) {
      auto found = std::find_if(have.begin(), have.end(), [&](const PortDecl& d) { return d.name == w.name; });
      if (found == have.end())
        throw CatalogueError(cat.source + ": " + cat.block_kind + " catalogue is missing " + side + " port '" + w.name +
                             "' " + w.poset.signature());
      if (!found->poset.same_as(w.poset))
        throw CatalogueError(cat.source + ": " + cat.block_kind + " " + side + " port '" + w.name + "' must be " +
                             w.poset.signature() + ", found " + found->poset.signature());
    }
  };
  check(it->second.fun, cat.fun_ports, "functionality");
  check(it->second.res, cat.res_ports, "resource");
}

Block catalogue_block(const CatalogueFile& cat) {
  check_block_schema(cat);
  Block b;
  b.dpi = make_table_dpi(cat.table());
  for (const auto& p : cat.fun_ports) b.fun_names.push_back(p.name);
  for (const auto& p : cat.res_ports) b.res_names.push_back(p.name);
  b.warnings = cat.warnings;
  return b;
}

Block sensing_block(const std::vector<SensorRecord>& sensors) {
  const Poset fun = Poset::product(
      {fp_poset(), fn_poset(), acc_poset(), fp_poset(), fn_poset(), acc_poset(), Poset::numeric("Hz")});
  const Poset res = Poset::product({Poset::numeric("s"), Poset::numeric("CHF"), Poset::numeric("g"), Poset::numeric("W")});
  MonotoneTable t{fun, res, {}};
  for (const auto& s : sensors) {
    Impl impl{s.name, {{"sensor", s.name}}, {}};
    t.rows.push_back({impl,
                      Element::tuple({Element::samples(s.day.fp), Element::samples(s.day.fn), Element::samples(s.day.acc),
                                      Element::samples(s.night.fp), Element::samples(s.night.fn),
                                      Element::samples(s.night.acc), s.frequency}),
                      Element::tuple({s.latency, s.cost, s.mass, s.power})});
  }
  Block b;
  b.dpi = make_table_dpi(std::move(t));
  b.fun_names = {"fp_day", "fn_day", "acc_day", "fp_night", "fn_night", "acc_night", "acq_freq"};
  b.res_names = {"latency", "cost", "mass", "power"};
  if (sensors.empty()) b.warnings.push_back("sensing block has no sensors; every query is infeasible");
  return b;
}

DpiPtr discomfort_join_dpi(double w_long, double w_lat) {
  return linear_join({w_long, w_lat}, {Poset::numeric("m/s"), Poset::numeric()}, Poset::numeric("m/s"));
}

const std::vector<std::string>& builtin_models() {
  static const std::vector<std::string> m{"discomfort_join", "lateral", "limit", "sensing"};
  return m;
}

Block make_builtin(const std::string& model, const BuiltinParams& params, const std::filesystem::path& base_dir) {
  Block b;
  if (model == "discomfort_join") {
    only_keys(params, model, {"w_long", "w_lat"});
    b.dpi = discomfort_join_dpi(get_number(params, "w_long", 1.0), get_number(params, "w_lat", 1.0));
    b.fun_names = {"longitudinal", "lateral"};
    b.res_names = {"discomfort"};
  } else if (model == "limit") {
    only_keys(params, model, {"max", "unit"});
    b.dpi = limit_dpi(Poset::numeric(get_string(params, "unit", "")), get_number(params, "max", 0, true));
    b.fun_names = {"value"};
  } else if (model == "sensing") {
    only_keys(params, model, {"dir"});
    auto dir = std::filesystem::path(get_string(params, "dir", "", true));
    if (dir.is_relative()) dir = base_dir / dir;
    b = sensing_block(load_sensor_dir(dir));
  } else if (model == "lateral") {
    only_keys(params, model,
              {"speed", "gain", "w_theta", "w_y", "q_theta", "q_y", "r0", "angle_ratio", "alpha", "precision",
               "obs_freq", "ctrl_freq", "noise"});
    LateralParams base;
    base.speed = get_number(params, "speed", base.speed);
    base.gain = get_number(params, "gain", base.gain);
    base.w_theta = get_number(params, "w_theta", base.w_theta);
    base.w_y = get_number(params, "w_y", base.w_y);
    base.q0 = Eigen::Vector2d(get_number(params, "q_theta", 1.0), get_number(params, "q_y", 1.0)).asDiagonal();
    base.r0 = get_number(params, "r0", base.r0);
    base.angle_ratio = get_number(params, "angle_ratio", base.angle_ratio);
    LateralGrid grid;
    grid.alpha = get_list(params, "alpha", {1.0});
    grid.obs_precision = get_list(params, "precision", {base.obs_precision});
    grid.obs_frequency = get_list(params, "obs_freq", {base.obs_frequency});
    grid.ctrl_frequency = get_list(params, "ctrl_freq", {base.ctrl_frequency});
    grid.noise = get_list(params, "noise", {1.0});
    LateralReport report;
    b.dpi = lateral_control_dpi(grid, base, &report);
    for (const auto& d : report.dropped) b.warnings.push_back("lateral grid point dropped: " + d);
    b.fun_names = {"system_noise"};
    b.res_names = {"obs_precision", "obs_freq", "ctrl_freq", "J_track", "J_eff"};
  } else {
    throw CompositionError("unknown builtin model '" + model + "'");
  }
  return b;
}

}  // namespace mcdp
