#include "mcdp/sensor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "mcdp/catalogue.hpp"
#include "mcdp/errors.hpp"

namespace mcdp {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double number(const std::string& s, const std::string& where) {
  const std::string t = trim(s);
  double v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t == "inf") return INFINITY;
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) throw CatalogueError(where + ": malformed number '" + s + "'");
  return v;
}

}  // namespace

TimeOfDay parse_time_of_day(const std::string& s) {
  if (s == "day") return TimeOfDay::Day;
  if (s == "night") return TimeOfDay::Night;
  throw ModelError("unknown time of day '" + s + "' (expected day or night)");
}

std::string to_string(TimeOfDay t) { return t == TimeOfDay::Day ? "day" : "night"; }

const std::vector<double>& canonical_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    for (int d = 0; d <= 150; d += 10) g.push_back(d);
    return g;
  }();
  return grid;
}

Poset fp_poset() { return Poset::curve(canonical_grid(), CurveOrder::Descending, 0, 1); }
Poset fn_poset() { return Poset::curve(canonical_grid(), CurveOrder::Descending, 0, 1); }
Poset acc_poset() { return Poset::curve(canonical_grid(), CurveOrder::Descending, 0, INFINITY, "m"); }

SensorCurves SensorCurves::useless(std::size_t n) {
  return {std::vector<double>(n, 1.0), std::vector<double>(n, 1.0), std::vector<double>(n, INFINITY)};
}

double curve_at(const std::vector<double>& grid, const std::vector<double>& values, double d) {
  if (d <= grid.front()) return values.front();
  if (d >= grid.back()) return values.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), d);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin());
  const double t = (d - grid[i - 1]) / (grid[i] - grid[i - 1]);
  if (std::isinf(values[i - 1]) || std::isinf(values[i])) return INFINITY;
  return values[i - 1] + t * (values[i] - values[i - 1]);
}

SensorRecord load_sensor(const std::filesystem::path& csv_path) {
  const std::string src = csv_path.string();
  const std::string text = read_text_file(csv_path);
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (header.empty()) {
      header = cells;
      continue;
    }
    if (cells.size() != header.size())
      throw CatalogueError(src + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                           " fields, got " + std::to_string(cells.size()));
    rows.push_back(std::move(cells));
  }
  auto col = [&](const std::string& name, bool required) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) throw CatalogueError(src + ": missing column '" + name + "'");
      return -1;
    }
    return static_cast<int>(it - header.begin());
  };
  const int cd = col("distance_m", true);
  const int cfp = col("fp", true);
  const int cfn = col("fn", true);
  const int cacc = col("acc_m", true);
  const int nfp = col("fp_night", false);
  const int nfn = col("fn_night", false);
  const int nacc = col("acc_night_m", false);
  const bool night = nfp >= 0 || nfn >= 0 || nacc >= 0;
  if (night && (nfp < 0 || nfn < 0 || nacc < 0))
    throw CatalogueError(src + ": night columns must be given together (fp_night, fn_night, acc_night_m)");
  if (rows.empty()) throw CatalogueError(src + ": no curve samples");

  std::vector<double> dist;
  std::vector<double> fp, fn, acc, fpn, fnn, accn;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string where = src + ": row " + std::to_string(r + 1);
    auto get = [&](int c) { return number(rows[r][static_cast<std::size_t>(c)], where + ", column '" + header[static_cast<std::size_t>(c)] + "'"); };
    dist.push_back(get(cd));
    if (r && !(dist[r] > dist[r - 1])) throw CatalogueError(where + ": distances must be strictly increasing");
    fp.push_back(get(cfp));
    fn.push_back(get(cfn));
    acc.push_back(get(cacc));
    if (night) {
      fpn.push_back(get(nfp));
      fnn.push_back(get(nfn));
      accn.push_back(get(nacc));
    }
  }
  auto check_prob = [&](const std::vector<double>& v, const char* what) {
    for (double x : v)
      if (!(x >= 0 && x <= 1)) throw CatalogueError(src + ": " + what + " value " + std::to_string(x) + " outside [0, 1]");
  };
  check_prob(fp, "fp");
  check_prob(fn, "fn");
  check_prob(fpn, "fp_night");
  check_prob(fnn, "fn_night");
  for (double x : acc)
    if (!(x >= 0)) throw CatalogueError(src + ": negative accuracy");
  for (double x : accn)
    if (!(x >= 0)) throw CatalogueError(src + ": negative accuracy");

  const auto& g = canonical_grid();
  SensorRecord s;
  s.day = {resample(dist, fp, g), resample(dist, fn, g), resample(dist, acc, g)};
  s.has_night = night;
  s.night = night ? SensorCurves{resample(dist, fpn, g), resample(dist, fnn, g), resample(dist, accn, g)}
                  : SensorCurves::useless(g.size());

  auto meta_path = csv_path;
  meta_path.replace_extension(".meta");
  const std::string meta = read_text_file(meta_path);
  std::map<std::string, std::string> kv;
  start = 0;
  line_no = 0;
  while (start <= meta.size()) {
    auto end = meta.find('\n', start);
    if (end == std::string::npos) end = meta.size();
    std::string line = trim(meta.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw CatalogueError(meta_path.string() + ":" + std::to_string(line_no) + ": expected 'key: value'");
    kv[trim(line.substr(0, colon))] = trim(line.substr(colon + 1));
  }
  auto meta_num = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw CatalogueError(meta_path.string() + ": missing key '" + key + "'");
    const double v = number(it->second, meta_path.string() + ": key '" + key + "'");
    if (!(v >= 0)) throw CatalogueError(meta_path.string() + ": key '" + key + "' must be >= 0");
    return v;
  };
  s.name = kv.count("name") ? kv["name"] : csv_path.stem().string();
  s.frequency = meta_num("frequency");
  s.latency = meta_num("latency");
  s.cost = meta_num("cost");
  s.mass = meta_num("mass");
  s.power = meta_num("power");
  if (!(s.frequency > 0)) throw CatalogueError(meta_path.string() + ": frequency must be > 0");
  return s;
}

std::vector<SensorRecord> load_sensor_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw CatalogueError(dir.string() + ": not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<SensorRecord> out;
  for (const auto& f : files) out.push_back(load_sensor(f));
  return out;
}

}  // namespace mcdp
