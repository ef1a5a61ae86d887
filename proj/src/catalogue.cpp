#include "mcdp/catalogue.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "mcdp/errors.hpp"

namespace mcdp {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Shortest representation that reads back to the same double.
std::string exact(double x) {
  if (std::isinf(x)) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view s) {
  const std::string t = trim(s);
  if (t == "inf" || t == "+inf" || t == "Inf") return INFINITY;
  double v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || std::isnan(v)) return std::nullopt;
  return v;
}

struct Located {
  std::string source;
  std::size_t line = 0;
  [[noreturn]] void fail(const std::string& msg) const {
    throw CatalogueError(source + ":" + std::to_string(line) + ": " + msg);
  }
};

Poset parse_finite(const std::string& body, const Located& at) {
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::string>> covers;
  auto add_label = [&](const std::string& l) {
    if (l.empty()) at.fail("empty label in finite poset");
    if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
  };
  auto add_chains = [&](const std::string& text, bool declare) {
    for (const auto& item : split(text, ',')) {
      if (item.empty()) continue;
      auto parts = split(item, '<');
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (declare) add_label(parts[i]);
        if (i) covers.emplace_back(parts[i - 1], parts[i]);
      }
    }
  };
  const auto bar = body.find('|');
  if (bar == std::string::npos) {
    add_chains(body, true);
  } else {
    for (const auto& l : split(std::string_view(body).substr(0, bar), ',')) add_label(l);
    add_chains(body.substr(bar + 1), false);
  }
  try {
    return Poset::finite(labels, covers);
  } catch (const StructuralError& e) {
    at.fail(e.what());
  }
}

std::string render_finite(const Poset& p) {
  const auto& labels = p.labels();
  const auto& covers = p.covers();
  bool is_chain = covers.size() + 1 == labels.size();
  for (std::size_t i = 1; i < labels.size() && is_chain; ++i)
    is_chain = std::find(covers.begin(), covers.end(), std::make_pair(labels[i - 1], labels[i])) != covers.end();
  std::string s = "{";
  if (is_chain) {
    for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? "<" : "") + labels[i];
    return s + "}";
  }
  for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? "," : "") + labels[i];
  s += "|";
  for (std::size_t i = 0; i < covers.size(); ++i) s += (i ? "," : "") + covers[i].first + "<" + covers[i].second;
  return s + "}";
}

// `- name <type> asc|desc`
PortDecl parse_port(const std::string& line, const std::optional<std::vector<double>>& grid, const Located& at) {
  static const std::regex re(R"(^-\s*([A-Za-z_][A-Za-z0-9_]*)\s*(.*?)\s+(asc|desc)\s*$)");
  std::smatch m;
  if (!std::regex_match(line, m, re)) at.fail("malformed port declaration '" + line + "', expected '- name [unit] asc|desc'");
  const std::string name = m[1];
  const std::string type = trim(m[2].str());
  const bool desc = m[3] == "desc";
  static const std::regex unit_re(R"(^\[([^\]]*)\]$)");
  static const std::regex curve_re(R"(^curve(?:\[([^\]]*)\])?\(\s*([^,]+)\s*,\s*([^)]+)\s*\)$)");
  std::smatch u;
  if (type.empty() || std::regex_match(type, u, unit_re)) {
    Poset p = Poset::numeric(type.empty() ? std::string() : u[1].str());
    return {name, desc ? Poset::opposite(p) : p};
  }
  if (type.front() == '{' && type.back() == '}') {
    Poset p = parse_finite(type.substr(1, type.size() - 2), at);
    return {name, desc ? Poset::opposite(p) : p};
  }
  if (std::regex_match(type, u, curve_re)) {
    if (!grid) at.fail("curve port '" + name + "' needs a curve_grid header line");
    auto lo = parse_number(u[2].str());
    auto hi = parse_number(u[3].str());
    if (!lo || !hi) at.fail("malformed curve bounds in port '" + name + "'");
    try {
      return {name, Poset::curve(*grid, desc ? CurveOrder::Descending : CurveOrder::Ascending, *lo, *hi, u[1].str())};
    } catch (const StructuralError& e) {
      at.fail(e.what());
    }
  }
  at.fail("unknown port type '" + type + "' for port '" + name + "'");
}

std::string render_port(const PortDecl& port) {
  const Poset& p = port.poset;
  auto numeric_type = [](const Poset& q) { return q.unit().empty() ? std::string() : " [" + q.unit() + "]"; };
  switch (p.kind()) {
    case PosetKind::Numeric:
      return "- " + port.name + numeric_type(p) + " asc";
    case PosetKind::Finite:
      return "- " + port.name + " " + render_finite(p) + " asc";
    case PosetKind::Curve: {
      std::string s = "- " + port.name + " curve";
      if (!p.unit().empty()) s += "[" + p.unit() + "]";
      s += "(" + exact(p.lo()) + "," + exact(p.hi()) + ")";
      return s + (p.order() == CurveOrder::Ascending ? " asc" : " desc");
    }
    case PosetKind::Opposite: {
      const Poset& in = p.inner();
      if (in.kind() == PosetKind::Numeric) return "- " + port.name + numeric_type(in) + " desc";
      if (in.kind() == PosetKind::Finite) return "- " + port.name + " " + render_finite(in) + " desc";
      break;
    }
    case PosetKind::Product:
      break;
  }
  throw CatalogueError("port '" + port.name + "' has a poset that cannot be stored: " + p.signature());
}

Element parse_cell(const std::string& cell, const PortDecl& port, const Located& at, const std::string& col) {
  const Poset& p = port.poset.kind() == PosetKind::Opposite ? port.poset.inner() : port.poset;
  switch (p.kind()) {
    case PosetKind::Numeric: {
      auto v = parse_number(cell);
      if (!v) at.fail("column '" + col + "': malformed number '" + cell + "'");
      if (*v < 0) at.fail("column '" + col + "': negative value " + cell);
      return Element(*v);
    }
    case PosetKind::Finite: {
      Element e = Element::label(cell);
      if (!p.contains(e)) at.fail("column '" + col + "': unknown label '" + cell + "'");
      return e;
    }
    case PosetKind::Curve: {
      std::vector<double> vals;
      for (const auto& part : split(cell, ';')) {
        auto v = parse_number(part);
        if (!v) at.fail("column '" + col + "': malformed curve sample '" + part + "'");
        vals.push_back(*v);
      }
      Element e = Element::samples(std::move(vals));
      if (e.sample_values().size() != p.grid().size())
        at.fail("column '" + col + "': curve has " + std::to_string(e.sample_values().size()) + " samples, grid has " +
                std::to_string(p.grid().size()));
      if (!p.contains(e)) at.fail("column '" + col + "': curve sample outside [" + exact(p.lo()) + ", " + exact(p.hi()) + "]");
      return e;
    }
    default:
      break;
  }
  at.fail("column '" + col + "': unsupported port poset");
}

std::string render_cell(const Element& e) {
  if (e.is_scalar()) return exact(e.scalar());
  if (e.is_label()) return e.label_name();
  if (e.is_samples()) {
    std::string s;
    const auto& v = e.sample_values();
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + exact(v[i]);
    return s;
  }
  throw CatalogueError("cannot store element " + e.to_string());
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos && trim(s) == s) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string PortDecl::column() const {
  const Poset& p = poset.kind() == PosetKind::Opposite ? poset.inner() : poset;
  if ((p.kind() == PosetKind::Numeric || p.kind() == PosetKind::Curve) && !p.unit().empty())
    return name + "[" + p.unit() + "]";
  return name;
}

Poset CatalogueFile::fun_poset() const {
  std::vector<Poset> f;
  for (const auto& p : fun_ports) f.push_back(p.poset);
  return Poset::product(std::move(f));
}

Poset CatalogueFile::res_poset() const {
  std::vector<Poset> r;
  for (const auto& p : res_ports) r.push_back(p.poset);
  return Poset::product(std::move(r));
}

MonotoneTable CatalogueFile::table() const { return {fun_poset(), res_poset(), rows}; }

const PortDecl* CatalogueFile::find_fun(std::string_view name) const {
  for (const auto& p : fun_ports)
    if (p.name == name) return &p;
  return nullptr;
}

const PortDecl* CatalogueFile::find_res(std::string_view name) const {
  for (const auto& p : res_ports)
    if (p.name == name) return &p;
  return nullptr;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"' && trim(cur).empty()) {
      quoted = was_quoted = true;
      cur.clear();
    } else if (was_quoted && c != ',') {
      // Only blanks may follow a closing quote.
      if (c != ' ' && c != '\t' && c != '\r') throw CatalogueError("unexpected text after a quoted field");
    } else if (c == ',') {
      out.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw CatalogueError("unterminated quoted field");
  out.push_back(was_quoted ? cur : trim(cur));
  return out;
}

CatalogueFile parse_catalogue(std::string_view text, const std::string& source, bool require_checksum) {
  CatalogueFile cat;
  cat.source = source;

  // Split lines keeping offsets for the checksum.
  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::size_t start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines.emplace_back(start, std::string(text.substr(start, end - start)));
      start = end + 1;
    }
  }
  std::size_t last = lines.size();
  while (last > 0 && trim(lines[last - 1].second).empty()) --last;
  bool has_checksum = false;
  if (last > 0 && trim(lines[last - 1].second).rfind("checksum:", 0) == 0) {
    has_checksum = true;
    const Located at{source, last};
    const std::string value = trim(trim(lines[last - 1].second).substr(9));
    if (value.rfind("fnv1a64:", 0) != 0) at.fail("unsupported checksum '" + value + "'");
    const std::string expect = hex64(fnv1a64(text.substr(0, lines[last - 1].first)));
    if (value.substr(8) != expect)
      at.fail("checksum mismatch (file says " + value.substr(8) + ", content hashes to " + expect + ")");
    --last;
  }
  if (require_checksum && !has_checksum) throw CatalogueError(source + ": missing checksum line");

  std::size_t i = 0;
  std::map<std::string, std::string> header;
  std::vector<std::pair<std::size_t, std::string>> fun_lines;
  std::vector<std::pair<std::size_t, std::string>> res_lines;
  std::vector<std::pair<std::size_t, std::string>>* section = nullptr;
  bool separator = false;
  for (; i < last; ++i) {
    const std::string line = trim(lines[i].second);
    const Located at{source, i + 1};
    if (line.empty() || line[0] == '#') continue;
    if (line == "---") {
      separator = true;
      ++i;
      break;
    }
    if (line[0] == '-') {
      if (!section) at.fail("port declaration outside fun_ports/res_ports");
      section->emplace_back(i + 1, line);
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) at.fail("expected 'key: value' in header, got '" + line + "'");
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    if (key == "fun_ports") {
      section = &fun_lines;
    } else if (key == "res_ports") {
      section = &res_lines;
    } else if (key == "schema_version" || key == "block_kind" || key == "curve_grid" || key == "attributes") {
      section = nullptr;
      if (header.count(key)) at.fail("duplicate header key '" + key + "'");
      header[key] = value;
    } else {
      at.fail("unknown header key '" + key + "'");
    }
    if ((key == "fun_ports" || key == "res_ports") && !value.empty())
      at.fail("port declarations go on the following lines, one per '- ' item");
  }
  if (!separator) throw CatalogueError(source + ": missing '---' line between header and rows");

  if (!header.count("schema_version")) throw CatalogueError(source + ": missing schema_version");
  auto sv = parse_number(header["schema_version"]);
  if (!sv || *sv != 1) throw CatalogueError(source + ": unsupported schema_version '" + header["schema_version"] + "'");
  if (!header.count("block_kind") || header["block_kind"].empty()) throw CatalogueError(source + ": missing block_kind");
  cat.block_kind = header["block_kind"];
  if (header.count("curve_grid")) {
    std::string g = header["curve_grid"];
    if (!g.empty() && g.front() == '[' && g.back() == ']') g = g.substr(1, g.size() - 2);
    std::vector<double> grid;
    for (const auto& part : split(g, ',')) {
      auto v = parse_number(part);
      if (!v) throw CatalogueError(source + ": malformed curve_grid value '" + part + "'");
      grid.push_back(*v);
    }
    cat.curve_grid = std::move(grid);
  }
  if (header.count("attributes")) {
    std::string a = header["attributes"];
    if (!a.empty() && a.front() == '[' && a.back() == ']') a = a.substr(1, a.size() - 2);
    for (const auto& part : split(a, ','))
      if (!part.empty()) cat.attributes.push_back(part);
  }
  std::set<std::string> names{"id"};
  auto add_ports = [&](const auto& src, std::vector<PortDecl>& dst) {
    for (const auto& [ln, text] : src) {
      const Located at{source, ln};
      auto port = parse_port(text, cat.curve_grid, at);
      if (!names.insert(port.name).second) at.fail("duplicate port or column name '" + port.name + "'");
      dst.push_back(std::move(port));
    }
  };
  add_ports(fun_lines, cat.fun_ports);
  add_ports(res_lines, cat.res_ports);
  for (const auto& a : cat.attributes)
    if (!names.insert(a).second) throw CatalogueError(source + ": attribute '" + a + "' clashes with a port name");

  // CSV body.
  while (i < last && (trim(lines[i].second).empty() || trim(lines[i].second)[0] == '#')) ++i;
  if (i >= last) throw CatalogueError(source + ": missing CSV column header after '---'");
  const Located header_at{source, i + 1};
  std::vector<std::string> cols;
  try {
    cols = split_csv_line(lines[i].second);
  } catch (const CatalogueError& e) {
    header_at.fail(e.what());
  }
  ++i;

  // Map each expected column to its position.
  std::map<std::string, std::size_t> pos;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (!pos.emplace(cols[c], c).second) header_at.fail("duplicate column '" + cols[c] + "'");
  }
  auto locate = [&](const std::string& column, const std::string& name) -> std::size_t {
    auto it = pos.find(column);
    if (it != pos.end()) return it->second;
    // Same name, different unit: report a unit mismatch rather than a missing column.
    for (const auto& [c, idx] : pos) {
      const auto b = c.find('[');
      if (c.substr(0, b) == name)
        header_at.fail("unit mismatch: column '" + c + "' does not match port declaration '" + column + "'");
    }
    header_at.fail("missing column '" + column + "'");
  };
  const std::size_t id_col = locate("id", "id");
  std::vector<std::size_t> fun_cols;
  std::vector<std::size_t> res_cols;
  std::vector<std::size_t> attr_cols;
  for (const auto& p : cat.fun_ports) fun_cols.push_back(locate(p.column(), p.name));
  for (const auto& p : cat.res_ports) res_cols.push_back(locate(p.column(), p.name));
  for (const auto& a : cat.attributes) attr_cols.push_back(locate(a, a));
  if (pos.size() != 1 + fun_cols.size() + res_cols.size() + attr_cols.size()) {
    std::set<std::size_t> used(fun_cols.begin(), fun_cols.end());
    used.insert(res_cols.begin(), res_cols.end());
    used.insert(attr_cols.begin(), attr_cols.end());
    used.insert(id_col);
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (!used.count(c)) header_at.fail("undeclared column '" + cols[c] + "'");
  }

  std::set<std::string> ids;
  std::size_t row_no = 0;
  for (; i < last; ++i) {
    const std::string line = trim(lines[i].second);
    if (line.empty() || line[0] == '#') continue;
    ++row_no;
    const Located at{source, i + 1};
    std::vector<std::string> cells;
    try {
      cells = split_csv_line(lines[i].second);
    } catch (const CatalogueError& e) {
      at.fail("row " + std::to_string(row_no) + ": " + e.what());
    }
    auto cell = [&](std::size_t c) -> const std::string& {
      if (c >= cells.size() || cells[c].empty())
        at.fail("row " + std::to_string(row_no) + ": missing value for column '" + cols[c] + "'");
      return cells[c];
    };
    if (cells.size() > cols.size())
      at.fail("row " + std::to_string(row_no) + ": " + std::to_string(cells.size()) + " fields, header has " +
              std::to_string(cols.size()));
    ImplRow row;
    row.impl.id = cell(id_col);
    if (!ids.insert(row.impl.id).second)
      at.fail("row " + std::to_string(row_no) + ": duplicate id '" + row.impl.id + "'");
    auto parse = [&](const PortDecl& p, std::size_t c) {
      try {
        return parse_cell(cell(c), p, at, cols[c]);
      } catch (const CatalogueError& e) {
        // Prefix the row number to the located message.
        const std::string msg = e.what();
        const std::string prefix = source + ":" + std::to_string(i + 1) + ": ";
        throw CatalogueError(prefix + "row " + std::to_string(row_no) + ", " + msg.substr(prefix.size()));
      }
    };
    Element::Tuple prov;
    Element::Tuple req;
    for (std::size_t k = 0; k < cat.fun_ports.size(); ++k) prov.push_back(parse(cat.fun_ports[k], fun_cols[k]));
    for (std::size_t k = 0; k < cat.res_ports.size(); ++k) req.push_back(parse(cat.res_ports[k], res_cols[k]));
    for (std::size_t k = 0; k < cat.attributes.size(); ++k)
      if (attr_cols[k] < cells.size() && !cells[attr_cols[k]].empty())
        row.impl.attrs[cat.attributes[k]] = cells[attr_cols[k]];
    row.prov = Element::tuple(std::move(prov));
    row.req = Element::tuple(std::move(req));
    cat.rows.push_back(std::move(row));
  }
  if (cat.rows.empty()) cat.warnings.push_back(source + ": catalogue has no rows; every query is infeasible");
  return cat;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogueError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CatalogueError(path.string() + ": cannot open file for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw CatalogueError(path.string() + ": write failed");
}

CatalogueFile load_catalogue(const std::filesystem::path& path) {
  return parse_catalogue(read_text_file(path), path.string(), path.extension() == ".dpt");
}

std::string render_catalogue(const CatalogueFile& cat) {
  std::string s = "schema_version: 1\nblock_kind: " + cat.block_kind + "\n";
  if (cat.curve_grid) {
    s += "curve_grid: [";
    for (std::size_t i = 0; i < cat.curve_grid->size(); ++i) s += (i ? ", " : "") + exact((*cat.curve_grid)[i]);
    s += "]\n";
  }
  s += "fun_ports:\n";
  for (const auto& p : cat.fun_ports) s += "  " + render_port(p) + "\n";
  s += "res_ports:\n";
  for (const auto& p : cat.res_ports) s += "  " + render_port(p) + "\n";
  if (!cat.attributes.empty()) {
    s += "attributes: [";
    for (std::size_t i = 0; i < cat.attributes.size(); ++i) s += (i ? ", " : "") + cat.attributes[i];
    s += "]\n";
  }
  s += "---\nid";
  for (const auto& p : cat.fun_ports) s += "," + quote(p.column());
  for (const auto& p : cat.res_ports) s += "," + quote(p.column());
  for (const auto& a : cat.attributes) s += "," + quote(a);
  s += "\n";
  for (const auto& row : cat.rows) {
    s += quote(row.impl.id);
    for (const auto& e : row.prov.items()) s += "," + quote(render_cell(e));
    for (const auto& e : row.req.items()) s += "," + quote(render_cell(e));
    for (const auto& a : cat.attributes) {
      auto it = row.impl.attrs.find(a);
      s += "," + (it == row.impl.attrs.end() ? std::string() : quote(it->second));
    }
    s += "\n";
  }
  s += "checksum: fnv1a64:" + hex64(fnv1a64(s)) + "\n";
  return s;
}

CatalogueFile table_to_catalogue(const MonotoneTable& table, const TableHeader& header) {
  if (table.fun.kind() != PosetKind::Product || table.res.kind() != PosetKind::Product)
    throw CatalogueError("save_table: functionality and resource posets must be products");
  CatalogueFile cat;
  cat.block_kind = header.block_kind;
  auto ports = [&](const Poset& p, const std::vector<std::string>& names, const char* prefix) {
    std::vector<PortDecl> out;
    const auto& f = p.factors();
    if (!names.empty() && names.size() != f.size())
      throw CatalogueError(std::string("save_table: wrong number of ") + prefix + " port names");
    for (std::size_t k = 0; k < f.size(); ++k) {
      out.push_back({names.empty() ? prefix + std::to_string(k) : names[k], f[k]});
      if (f[k].kind() == PosetKind::Curve) {
        if (cat.curve_grid && *cat.curve_grid != f[k].grid())
          throw CatalogueError("save_table: curve ports must share one grid");
        cat.curve_grid = f[k].grid();
      }
    }
    return out;
  };
  cat.fun_ports = ports(table.fun, header.fun_names, "f");
  cat.res_ports = ports(table.res, header.res_names, "r");
  std::set<std::string> attrs;
  for (const auto& row : table.rows)
    for (const auto& [k, v] : row.impl.attrs) attrs.insert(k);
  cat.attributes.assign(attrs.begin(), attrs.end());
  for (const auto& row : table.rows) {
    if (!row.impl.parts.empty())
      throw CatalogueError("save_table: composite implementation '" + row.impl.id + "' cannot be stored as a row");
    cat.rows.push_back(row);
  }
  return cat;
}

void save_catalogue(const CatalogueFile& cat, const std::filesystem::path& path) {
  write_text_file(path, render_catalogue(cat));
}

void save_table(const MonotoneTable& table, const std::filesystem::path& path, const TableHeader& header) {
  save_catalogue(table_to_catalogue(table, header), path);
}

}  // namespace mcdp
