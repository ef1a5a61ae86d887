#include "mcdp/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <set>

#include "mcdp/campaign.hpp"
#include "mcdp/catalogue.hpp"

namespace mcdp {

using nlohmann::json;

namespace {

std::string number_text(double x) {
  if (std::isinf(x)) return "inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::optional<double> parse_number(std::string_view s) {
  if (s == "inf") return INFINITY;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::pair<std::string, std::string> split_assignment(std::string_view arg) {
  const auto eq = arg.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw Error("malformed assignment '" + std::string(arg) + "', expected PORT=VALUE");
  return {trim(arg.substr(0, eq)), trim(arg.substr(eq + 1))};
}

std::string exposed_list(const std::vector<ExposedPort>& ports) {
  std::string s;
  for (const auto& p : ports) s += (s.empty() ? "" : ", ") + p.name;
  return s;
}

json impl_to_json(const Impl& impl) {
  json choices = json::object();
  json attrs = json::object();
  for (const auto& [path, leaf] : impl.leaves()) {
    const std::string key = path.empty() ? "design" : path;
    choices[key] = leaf->id;
    for (const auto& [k, v] : leaf->attrs) attrs[key + "." + k] = v;
  }
  return {{"id", impl.to_string()}, {"choices", choices}, {"attrs", attrs}};
}

void write_output(const std::string& out, const std::string& text) {
  if (out == "-")
    std::cout << text;
  else
    write_text_file(out, text);
}

void print_warnings(const CompiledDiagram& d) {
  for (const auto& w : d.warnings) std::cerr << w.to_string() << "\n";
}

json scalar_cell(const json& v) {
  if (v.is_string() || v.is_number()) return v;
  return v.dump();
}

std::string csv_field(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.is_number() ? number_text(v.get<double>()) : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos && s == trim(s)) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

json element_to_json(const Element& e) {
  if (e.is_scalar()) {
    const double x = e.scalar();
    return std::isinf(x) ? json("inf") : json(x);
  }
  if (e.is_label()) return e.label_name();
  json arr = json::array();
  if (e.is_tuple()) {
    for (const auto& item : e.items()) arr.push_back(element_to_json(item));
  } else {
    for (double v : e.sample_values()) arr.push_back(std::isinf(v) ? json("inf") : json(v));
  }
  return arr;
}

Element parse_fun_value(const ExposedPort& port, std::string_view text) {
  std::string value = trim(text);
  std::optional<std::string> unit;
  if (!value.empty() && value.back() == ']') {
    const auto open = value.rfind('[');
    if (open == std::string::npos) throw Error("'" + port.name + "': unbalanced unit brackets in '" + value + "'");
    unit = value.substr(open + 1, value.size() - open - 2);
    value = trim(value.substr(0, open));
  }
  const Poset& p = port.poset;
  if (p.kind() == PosetKind::Finite) {
    if (unit && !unit->empty()) throw Error("'" + port.name + "' takes a label, not a unit");
    for (const auto& l : p.labels())
      if (l == value) return Element::label(value);
    std::string known;
    for (const auto& l : p.labels()) known += (known.empty() ? "" : ", ") + l;
    throw Error("'" + port.name + "': unknown value '" + value + "' (expected one of: " + known + ")");
  }
  if (p.kind() == PosetKind::Numeric || (p.kind() == PosetKind::Opposite && p.inner().kind() == PosetKind::Numeric)) {
    auto x = parse_number(value);
    if (!x || *x < 0 || std::isnan(*x))
      throw Error("'" + port.name + "': expected a nonnegative number, found '" + value + "'");
    if (unit && *unit != port_unit(p))
      throw Error("'" + port.name + "': unit [" + *unit + "] does not match the port unit [" + port_unit(p) + "]");
    return *x;
  }
  throw UnsupportedError("'" + port.name + "': cannot assign a value to a port of type " + p.signature());
}

Element build_query(const CompiledDiagram& d, const std::vector<std::string>& assignments, json* echo) {
  std::vector<std::optional<Element>> values(d.funs.size());
  json q = json::object();
  for (const auto& a : assignments) {
    auto [name, text] = split_assignment(a);
    auto i = d.fun_index(name);
    if (!i) throw Error("unknown functionality '" + name + "' (exposed: " + exposed_list(d.funs) + ")");
    if (values[*i]) throw Error("functionality '" + name + "' assigned twice");
    values[*i] = parse_fun_value(d.funs[*i], text);
    q[name] = {{"value", element_to_json(*values[*i])}, {"unit", port_unit(d.funs[*i].poset)}};
  }
  Element::Tuple items;
  std::string missing;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) missing += (missing.empty() ? "" : ", ") + d.funs[i].name;
    else items.push_back(*values[i]);
  }
  if (!missing.empty()) throw Error("missing assignment for: " + missing);
  if (echo) *echo = q;
  return Element::tuple(std::move(items));
}

json front_to_json(const Front& front) {
  json arr = json::array();
  for (std::size_t i = 0; i < front.size(); ++i)
    arr.push_back({{"resources", element_to_json(front.points[i])}, {"implementation", impl_to_json(front.witnesses[i])}});
  return arr;
}

json resource_header(const CompiledDiagram& d) {
  json arr = json::array();
  for (const auto& r : d.res) arr.push_back({{"name", r.name}, {"unit", port_unit(r.poset)}});
  return arr;
}

NestingCheck check_nesting(const Poset& fun, const Element& f_lo, const Element& f_hi, const Front& lo,
                           const Front& hi) {
  NestingCheck out;
  const Front* outer = nullptr;  // answer whose upper set must contain the other
  const Front* inner = nullptr;
  if (fun.leq(f_lo, f_hi)) {
    outer = &lo;
    inner = &hi;
  } else if (fun.leq(f_hi, f_lo)) {
    outer = &hi;
    inner = &lo;
  } else {
    out.status = "incomparable";
    return out;
  }
  const Antichain a = outer->antichain();
  for (const auto& p : inner->points)
    if (!a.upper_contains(p)) out.violations.push_back(p.to_string());
  out.status = out.violations.empty() ? "pass" : "fail";
  return out;
}

json export_rows(const json& solution) {
  if (!solution.is_object() || !solution.contains("resources") || !solution["resources"].is_array())
    throw Error("not a solution file: missing 'resources'");
  std::vector<std::string> res_names;
  for (const auto& r : solution["resources"]) res_names.push_back(r.at("name").get<std::string>());

  struct Block {
    std::optional<json> value;
    const json* antichain;
  };
  std::vector<Block> blocks;
  const bool sweep = solution.contains("results");
  if (sweep) {
    for (const auto& r : solution.at("results")) blocks.push_back({r.at("value"), &r.at("antichain")});
  } else {
    blocks.push_back({std::nullopt, &solution.at("antichain")});
  }

  std::set<std::string> choice_keys;
  for (const auto& b : blocks)
    for (const auto& p : *b.antichain)
      for (const auto& [k, v] : p.at("implementation").at("choices").items()) choice_keys.insert(k);

  json columns = json::array();
  if (sweep) columns.push_back("sweep_value");
  columns.push_back("point");
  for (const auto& n : res_names) columns.push_back(n);
  columns.push_back("implementation");
  for (const auto& k : choice_keys) columns.push_back(k);

  json rows = json::array();
  for (const auto& b : blocks) {
    std::size_t idx = 0;
    for (const auto& p : *b.antichain) {
      json row = json::array();
      if (sweep) row.push_back(scalar_cell(*b.value));
      row.push_back(idx++);
      const auto& r = p.at("resources");
      if (!r.is_array() || r.size() != res_names.size()) throw Error("resource tuple does not match the header");
      for (const auto& v : r) row.push_back(scalar_cell(v));
      const auto& impl = p.at("implementation");
      row.push_back(impl.at("id"));
      for (const auto& k : choice_keys) row.push_back(impl.at("choices").value(k, std::string()));
      rows.push_back(row);
    }
  }
  return {{"columns", columns}, {"rows", rows}};
}

std::string rows_to_csv(const json& table) {
  std::string s;
  auto line = [&](const json& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + csv_field(cells[i]);
    s += "\n";
  };
  line(table.at("columns"));
  for (const auto& r : table.at("rows")) line(r);
  return s;
}

json csv_to_rows(std::string_view csv) {
  json columns = json::array();
  json rows = json::array();
  bool header = true;
  std::size_t start = 0;
  while (start < csv.size()) {
    auto end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    const auto line = csv.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (header) {
      for (auto& c : cells) columns.push_back(c);
      header = false;
      continue;
    }
    json row = json::array();
    for (auto& c : cells) {
      auto x = parse_number(c);
      if (x && c != "inf") {
        if (*x == std::floor(*x) && c.find_first_of(".eE") == std::string::npos)
          row.push_back(static_cast<std::int64_t>(*x));
        else
          row.push_back(*x);
      } else {
        row.push_back(c);
      }
    }
    rows.push_back(row);
  }
  return {{"columns", columns}, {"rows", rows}};
}

namespace {

struct Common {
  std::string diagram;
  std::vector<std::string> funs;
  std::string out;
};

int cmd_solve(const Common& c) {
  const auto d = compile_file(c.diagram);
  print_warnings(d);
  json query;
  const Element f = build_query(d, c.funs, &query);
  const Front front = d.dpi->eval_h(f);
  json doc = {{"command", "solve"},    {"diagram", c.diagram},      {"query", query},
              {"resources", resource_header(d)}, {"feasible", !front.empty()}, {"antichain", front_to_json(front)}};
  write_output(c.out, doc.dump(2) + "\n");
  std::cerr << (front.empty() ? "infeasible" : "feasible: " + std::to_string(front.size()) + " minimal designs")
            << "\n";
  return front.empty() ? kExitInfeasible : kExitFeasible;
}

int cmd_sweep(const Common& c, const std::string& sweep) {
  const auto d = compile_file(c.diagram);
  print_warnings(d);
  auto [port, list] = split_assignment(sweep);
  const auto idx = d.fun_index(port);
  if (!idx) throw Error("unknown sweep functionality '" + port + "' (exposed: " + exposed_list(d.funs) + ")");
  std::vector<std::string> values;
  for (std::size_t s = 0; s <= list.size();) {
    auto e = list.find(',', s);
    if (e == std::string::npos) e = list.size();
    values.push_back(trim(std::string_view(list).substr(s, e - s)));
    s = e + 1;
  }
  if (values.empty() || values.front().empty()) throw Error("empty sweep list for '" + port + "'");

  std::vector<Element> queries;
  std::vector<Front> fronts;
  json base;
  json results = json::array();
  for (const auto& v : values) {
    auto args = c.funs;
    args.push_back(port + "=" + v);
    queries.push_back(build_query(d, args, &base));
    fronts.push_back(d.dpi->eval_h(queries.back()));
    results.push_back({{"value", element_to_json(queries.back()[*idx])},
                       {"feasible", !fronts.back().empty()},
                       {"antichain", front_to_json(fronts.back())}});
    std::cerr << port << "=" << v << ": "
              << (fronts.back().empty() ? "infeasible" : std::to_string(fronts.back().size()) + " minimal designs")
              << "\n";
  }
  base.erase(port);

  json cert = json::array();
  bool all_pass = true;
  for (std::size_t i = 0; i + 1 < fronts.size(); ++i) {
    auto chk = check_nesting(d.dpi->fun(), queries[i], queries[i + 1], fronts[i], fronts[i + 1]);
    all_pass = all_pass && chk.status != "fail";
    cert.push_back({{"from", results[i]["value"]}, {"to", results[i + 1]["value"]}, {"status", chk.status},
                    {"violations", chk.violations}});
    std::cerr << "nesting " << values[i] << " -> " << values[i + 1] << ": " << chk.status << "\n";
  }
  json doc = {{"command", "sweep"},
              {"diagram", c.diagram},
              {"query", base},
              {"sweep", port},
              {"resources", resource_header(d)},
              {"results", results},
              {"certificate", cert},
              {"certificate_status", all_pass ? "pass" : "fail"}};
  write_output(c.out, doc.dump(2) + "\n");
  bool any = false;
  for (const auto& f : fronts) any = any || !f.empty();
  return any ? kExitFeasible : kExitInfeasible;
}

int cmd_simulate(const std::string& campaign_path, const std::string& out, std::size_t jobs,
                 std::optional<std::uint64_t> seed) {
  Campaign c = load_campaign(campaign_path);
  if (seed) c.seed = *seed;
  SimulationOptions opt;
  opt.jobs = jobs;
  if (const char* dir = std::getenv("MCD_CACHE_DIR"); dir && *dir) opt.cache_dir = std::filesystem::path(dir);
  opt.progress = [](std::size_t done, std::size_t total) {
    std::cerr << "\rsimulated " << done << "/" << total << " grid points" << (done == total ? "\n" : "") << std::flush;
  };
  const auto r = longitudinal_table(c, opt);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << r.feasible << " of " << r.grid_points << " grid points feasible, " << r.table.rows.size()
            << " rows, " << r.cache_hits << " cache hits\n";
  const auto cat = table_to_catalogue(r.table, longitudinal_header());
  write_output(out, render_catalogue(cat));
  return kExitFeasible;
}

int cmd_export(const std::string& in, const std::string& format, const std::string& out) {
  json solution;
  try {
    solution = json::parse(read_text_file(in));
  } catch (const json::exception& e) {
    throw Error(in + ": malformed solution file: " + e.what());
  }
  json table;
  try {
    table = export_rows(solution);
  } catch (const json::exception& e) {
    throw Error(in + ": malformed solution file: " + e.what());
  }
  write_output(out, format == "csv" ? rows_to_csv(table) : table.dump(2) + "\n");
  return kExitFeasible;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Monotone co-design solver"};
  app.require_subcommand(1);

  Common common;
  auto* solve = app.add_subcommand("solve", "minimal resources for fixed functionality");
  auto* sweep = app.add_subcommand("sweep", "solve along a list of values of one functionality");
  for (auto* sub : {solve, sweep}) {
    sub->add_option("--diagram", common.diagram, "diagram file (.cdp)")->required();
    sub->add_option("--fun", common.funs, "functionality assignment PORT=VALUE[unit]");
    sub->add_option("--out", common.out, "output JSON file, '-' for stdout")->required();
  }
  std::string sweep_spec;
  sweep->add_option("--sweep", sweep_spec, "PORT=V1,V2,...")->required();

  std::string campaign, sim_out;
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
  auto* simulate = app.add_subcommand("simulate", "run a simulation campaign and write a .dpt table");
  simulate->add_option("--campaign", campaign, "campaign JSON")->required();
  simulate->add_option("--out", sim_out, "output table, '-' for stdout")->required();
  simulate->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "override the campaign seed");

  std::string in, format, export_out = "-";
  auto* exp = app.add_subcommand("export", "flatten a solve/sweep output");
  exp->add_option("--in", in, "solution JSON")->required();
  exp->add_option("--format", format, "csv or json")->required()->check(CLI::IsMember({"csv", "json"}));
  exp->add_option("--out", export_out, "output file, '-' for stdout (default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*solve) return cmd_solve(common);
    if (*sweep) return cmd_sweep(common, sweep_spec);
    if (*simulate) return cmd_simulate(campaign, sim_out, jobs, seed);
    return cmd_export(in, format, export_out);
  } catch (const DiagramError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << d.to_string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace mcdp
