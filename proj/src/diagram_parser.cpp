#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "mcdp/catalogue.hpp"
#include "mcdp/diagram.hpp"

namespace mcdp {

namespace {

struct SyntaxError {
  int col;
  std::string message;
};

// Character cursor over one line.
class Cursor {
 public:
  Cursor(std::string_view line) : s_(line) {}

  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\r')) ++i_;
  }
  bool at_end() {
    skip_ws();
    return i_ >= s_.size() || s_[i_] == '#';
  }
  int col() const { return static_cast<int>(i_) + 1; }
  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  std::string found() {
    skip_ws();
    if (i_ >= s_.size() || s_[i_] == '#') return "end of line";
    std::size_t j = i_;
    if (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_') {
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
    } else {
      ++j;
    }
    return "'" + std::string(s_.substr(i_, j - i_)) + "'";
  }
  [[noreturn]] void fail(const std::string& expected) {
    skip_ws();
    throw SyntaxError{col(), "expected " + expected + ", found " + found()};
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (s_.substr(i_, tok.size()) == tok) {
      i_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok, const std::string& what = {}) {
    if (!accept(tok)) fail(what.empty() ? "'" + std::string(tok) + "'" : what);
  }

  std::optional<std::string> ident() {
    skip_ws();
    if (i_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) return std::nullopt;
    std::size_t j = i_;
    while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
    std::string out(s_.substr(i_, j - i_));
    i_ = j;
    return out;
  }
  std::string expect_ident(const std::string& what) {
    auto id = ident();
    if (!id) fail(what);
    return *id;
  }

  std::optional<double> number() {
    skip_ws();
    std::size_t j = i_;
    if (s_.substr(j, 3) == "inf") {
      i_ = j + 3;
      return INFINITY;
    }
    if (j < s_.size() && (s_[j] == '-' || s_[j] == '+')) ++j;
    if (j >= s_.size() || !(std::isdigit(static_cast<unsigned char>(s_[j])) || s_[j] == '.')) return std::nullopt;
    double v = 0;
    const char* b = s_.data() + i_ + (s_[i_] == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(b, s_.data() + s_.size(), v);
    if (ec != std::errc()) return std::nullopt;
    i_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  std::optional<std::string> string_lit() {
    skip_ws();
    if (i_ >= s_.size() || s_[i_] != '"') return std::nullopt;
    const int start = col();
    std::string out;
    for (std::size_t j = i_ + 1; j < s_.size(); ++j) {
      if (s_[j] == '\\' && j + 1 < s_.size()) {
        out += s_[++j];
      } else if (s_[j] == '"') {
        i_ = j + 1;
        return out;
      } else {
        out += s_[j];
      }
    }
    throw SyntaxError{start, "unterminated string literal"};
  }

  // `[ ... ]` raw text (units).
  std::optional<std::string> bracket_raw() {
    skip_ws();
    if (i_ >= s_.size() || s_[i_] != '[') return std::nullopt;
    const auto close = s_.find(']', i_);
    if (close == std::string_view::npos) throw SyntaxError{col(), "unterminated unit, expected ']'"};
    std::string out(s_.substr(i_ + 1, close - i_ - 1));
    i_ = close + 1;
    return out;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

PortName parse_port(Cursor& c, const std::string& file, int line) {
  PortName p;
  p.loc = {file, line, c.col()};
  c.skip_ws();
  p.loc.col = c.col();
  p.node = c.expect_ident("node name");
  c.expect(".", "'.' between node and port");
  p.port = c.expect_ident("port name");
  if (auto u = c.bracket_raw()) p.unit = *u;
  return p;
}

ParamValue parse_value(Cursor& c) {
  if (auto n = c.number()) return *n;
  if (auto s = c.string_lit()) return *s;
  if (c.accept("[")) {
    std::vector<double> list;
    if (!c.accept("]")) {
      do {
        auto n = c.number();
        if (!n) c.fail("number in list");
        list.push_back(*n);
      } while (c.accept(","));
      c.expect("]", "',' or ']'");
    }
    return list;
  }
  if (auto id = c.ident()) return *id;
  c.fail("number, string, identifier or list");
}

std::string format_number(double x) {
  if (std::isinf(x)) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string print_port(const PortName& p) {
  std::string s = p.node + "." + p.port;
  if (p.unit) s += "[" + *p.unit + "]";
  return s;
}

std::string print_value(const ParamValue& v) {
  if (const double* d = std::get_if<double>(&v)) return format_number(*d);
  if (const auto* s = std::get_if<std::string>(&v)) return quote(*s);
  const auto& l = std::get<std::vector<double>>(v);
  std::string out = "[";
  for (std::size_t i = 0; i < l.size(); ++i) out += (i ? ", " : "") + format_number(l[i]);
  return out + "]";
}

bool same_port(const PortName& a, const PortName& b) {
  return a.node == b.node && a.port == b.port && a.unit == b.unit;
}

}  // namespace

std::string Diagnostic::to_string() const {
  // Whole-file problems carry no position.
  const std::string where =
      loc.line > 0 ? loc.file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.col) : loc.file;
  return where + ": " + (severity == Severity::Error ? "error" : "warning") + ": " + message;
}

static std::string join_diags(const std::vector<Diagnostic>& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "\n" : "") + d[i].to_string();
  return s;
}

DiagramError::DiagramError(std::vector<Diagnostic> diags) : Error(join_diags(diags)), diags_(std::move(diags)) {}

const NodeDecl* DiagramAst::find_node(std::string_view name) const {
  for (const auto& n : nodes)
    if (n.name == name) return &n;
  return nullptr;
}

bool same_structure(const DiagramAst& a, const DiagramAst& b) {
  if (a.nodes.size() != b.nodes.size() || a.wires.size() != b.wires.size() || a.exposes.size() != b.exposes.size())
    return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const auto& x = a.nodes[i];
    const auto& y = b.nodes[i];
    if (x.name != y.name || x.kind != y.kind || x.path != y.path || x.model != y.model || x.params != y.params ||
        x.sum_inputs != y.sum_inputs || x.sum_op != y.sum_op || x.sum_unit != y.sum_unit)
      return false;
  }
  for (std::size_t i = 0; i < a.wires.size(); ++i)
    if (!same_port(a.wires[i].provider, b.wires[i].provider) || !same_port(a.wires[i].consumer, b.wires[i].consumer))
      return false;
  for (std::size_t i = 0; i < a.exposes.size(); ++i)
    if (a.exposes[i].functionality != b.exposes[i].functionality || !same_port(a.exposes[i].port, b.exposes[i].port) ||
        a.exposes[i].as != b.exposes[i].as)
      return false;
  return true;
}

DiagramAst parse_diagram(std::string_view text, const std::string& file) {
  DiagramAst ast;
  ast.file = file;
  std::vector<Diagnostic> diags;
  std::set<std::string> names;
  const auto& models = builtin_models();

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    Cursor c(line);
    if (c.at_end()) continue;
    const int kw_col = c.col();
    try {
      const auto kw = c.ident();
      const SourceLoc loc{file, line_no, kw_col};
      if (kw == "node") {
        NodeDecl n;
        n.loc = loc;
        c.skip_ws();
        const int name_col = c.col();
        n.name = c.expect_ident("node name");
        c.expect("=", "'=' after node name");
        c.skip_ws();
        const int kind_col = c.col();
        const auto kind = c.ident();
        if (kind == "catalogue") {
          n.kind = NodeKind::Catalogue;
          c.expect("(");
          auto path = c.string_lit();
          if (!path) c.fail("quoted catalogue path");
          n.path = *path;
          c.expect(")");
        } else if (kind == "builtin") {
          n.kind = NodeKind::Builtin;
          c.expect("(");
          c.skip_ws();
          const int model_col = c.col();
          n.model = c.expect_ident("builtin model name");
          if (std::find(models.begin(), models.end(), n.model) == models.end()) {
            std::string known;
            for (const auto& m : models) known += (known.empty() ? "" : ", ") + m;
            throw SyntaxError{model_col, "unknown builtin '" + n.model + "' (known: " + known + ")"};
          }
          std::set<std::string> keys;
          while (c.accept(",")) {
            c.skip_ws();
            const int key_col = c.col();
            auto key = c.expect_ident("parameter name");
            if (!keys.insert(key).second) throw SyntaxError{key_col, "duplicate parameter '" + key + "'"};
            c.expect("=", "'=' after parameter name");
            n.params.emplace_back(key, parse_value(c));
          }
          c.expect(")", "',' or ')'");
        } else if (kind == "sum") {
          n.kind = NodeKind::Sum;
          c.expect("(");
          c.skip_ws();
          const int count_col = c.col();
          auto count = c.number();
          if (!count) c.fail("number of inputs");
          if (*count < 1 || *count != std::floor(*count))
            throw SyntaxError{count_col, "number of inputs must be a positive integer"};
          n.sum_inputs = static_cast<std::size_t>(*count);
          c.expect(",", "',' after number of inputs");
          if (c.accept("+")) {
            n.sum_op = MergeOp::Sum;
          } else if (c.accept("max")) {
            n.sum_op = MergeOp::Max;
          } else {
            c.fail("'+' or 'max'");
          }
          if (c.accept(",")) {
            auto unit = c.bracket_raw();
            if (!unit) c.fail("unit in brackets, e.g. [W]");
            n.sum_unit = *unit;
          }
          c.expect(")", "',' or ')'");
        } else {
          throw SyntaxError{kind_col, "expected catalogue(...), builtin(...) or sum(...), found " +
                                          (kind ? "'" + *kind + "'" : std::string("something else"))};
        }
        if (!c.at_end()) c.fail("end of line");
        if (!names.insert(n.name).second) {
          diags.push_back({{file, line_no, name_col}, Severity::Error, "duplicate node name '" + n.name + "'"});
          continue;
        }
        ast.nodes.push_back(std::move(n));
      } else if (kw == "wire") {
        WireDecl w;
        w.loc = loc;
        w.provider = parse_port(c, file, line_no);
        c.expect("->", "'->'");
        w.consumer = parse_port(c, file, line_no);
        if (!c.at_end()) c.fail("end of line");
        ast.wires.push_back(std::move(w));
      } else if (kw == "expose") {
        ExposeDecl e;
        e.loc = loc;
        const auto side = c.ident();
        if (side == "fun")
          e.functionality = true;
        else if (side == "res")
          e.functionality = false;
        else
          throw SyntaxError{kw_col + 7, "expected 'fun' or 'res' after expose"};
        e.port = parse_port(c, file, line_no);
        if (!c.accept("as")) c.fail("'as'");
        e.as = c.expect_ident("exposed name");
        if (!c.at_end()) c.fail("end of line");
        ast.exposes.push_back(std::move(e));
      } else {
        throw SyntaxError{kw_col, "expected 'node', 'wire' or 'expose' at start of declaration"};
      }
    } catch (const SyntaxError& e) {
      diags.push_back({{file, line_no, e.col}, Severity::Error, e.message});
    }
    if (end == text.size()) break;
  }
  if (diags.empty() && ast.nodes.empty()) diags.push_back({{file, 1, 1}, Severity::Error, "no nodes declared"});
  if (!diags.empty()) throw DiagramError(std::move(diags));
  return ast;
}

DiagramAst load_diagram(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw DiagramError({{{path.string(), 0, 0}, Severity::Error, "cannot read diagram file"}});
  }
  return parse_diagram(text, path.string());
}

std::string print_diagram(const DiagramAst& ast) {
  std::string s;
  for (const auto& n : ast.nodes) {
    s += "node " + n.name + " = ";
    switch (n.kind) {
      case NodeKind::Catalogue:
        s += "catalogue(" + quote(n.path) + ")";
        break;
      case NodeKind::Builtin:
        s += "builtin(" + n.model;
        for (const auto& [k, v] : n.params) s += ", " + k + "=" + print_value(v);
        s += ")";
        break;
      case NodeKind::Sum:
        s += "sum(" + std::to_string(n.sum_inputs) + ", " + (n.sum_op == MergeOp::Sum ? "+" : "max");
        if (n.sum_unit) s += ", [" + *n.sum_unit + "]";
        s += ")";
        break;
    }
    s += "\n";
  }
  for (const auto& w : ast.wires) s += "wire " + print_port(w.provider) + " -> " + print_port(w.consumer) + "\n";
  for (const auto& e : ast.exposes)
    s += std::string("expose ") + (e.functionality ? "fun " : "res ") + print_port(e.port) + " as " + e.as + "\n";
  return s;
}

}  // namespace mcdp
