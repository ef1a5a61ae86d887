#include "mcdp/diagram.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "mcdp/catalogue.hpp"
#include "mcdp/network.hpp"

namespace mcdp {

namespace {

std::string list_names(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
  return s.empty() ? "none" : s;
}

std::optional<std::size_t> index_of(const std::vector<std::string>& names, const std::string& n) {
  auto it = std::find(names.begin(), names.end(), n);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

Diagnostic error_at(const SourceLoc& loc, std::string msg) { return {loc, Severity::Error, std::move(msg)}; }

std::string loc_line(const SourceLoc& loc) { return "line " + std::to_string(loc.line); }

}  // namespace

std::string port_unit(const Poset& p) {
  switch (p.kind()) {
    case PosetKind::Numeric:
    case PosetKind::Curve:
      return p.unit();
    case PosetKind::Opposite:
      return port_unit(p.inner());
    default:
      return "";
  }
}

std::optional<std::size_t> CompiledDiagram::fun_index(std::string_view name) const {
  for (std::size_t i = 0; i < funs.size(); ++i)
    if (funs[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> CompiledDiagram::res_index(std::string_view name) const {
  for (std::size_t i = 0; i < res.size(); ++i)
    if (res[i].name == name) return i;
  return std::nullopt;
}

ResolvedBlocks resolve_blocks(const DiagramAst& ast, const std::filesystem::path& base_dir) {
  ResolvedBlocks out;
  std::vector<const NodeDecl*> sums;
  for (const auto& n : ast.nodes) {
    try {
      Block b;
      if (n.kind == NodeKind::Catalogue) {
        auto path = std::filesystem::path(n.path);
        if (path.is_relative()) path = base_dir / path;
        b = catalogue_block(load_catalogue(path));
      } else if (n.kind == NodeKind::Builtin) {
        BuiltinParams params(n.params.begin(), n.params.end());
        b = make_builtin(n.model, params, base_dir);
      } else {
        sums.push_back(&n);
        continue;
      }
      for (const auto& w : b.warnings) out.diagnostics.push_back({n.loc, Severity::Warning, n.name + ": " + w});
      out.blocks.emplace(n.name, std::move(b));
    } catch (const Error& e) {
      out.diagnostics.push_back(error_at(n.loc, "node '" + n.name + "': " + e.what()));
    }
  }

  // Sum nodes take the poset of whatever they are wired to; chains of sums
  // are resolved by repeating until nothing changes.
  std::map<std::string, Poset> sum_poset;
  for (const auto* n : sums)
    if (n->sum_unit) sum_poset.emplace(n->name, Poset::numeric(*n->sum_unit));
  auto partner = [&](const PortName& p, bool fun_side) -> std::optional<Poset> {
    if (auto it = sum_poset.find(p.node); it != sum_poset.end()) return it->second;
    auto b = out.blocks.find(p.node);
    if (b == out.blocks.end()) return std::nullopt;
    const auto& names = fun_side ? b->second.fun_names : b->second.res_names;
    auto i = index_of(names, p.port);
    if (!i) return std::nullopt;
    return fun_side ? b->second.fun_port(*i) : b->second.res_port(*i);
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto* n : sums) {
      if (sum_poset.count(n->name)) continue;
      for (const auto& w : ast.wires) {
        std::optional<Poset> p;
        if (w.provider.node == n->name && w.consumer.node != n->name) p = partner(w.consumer, false);
        if (w.consumer.node == n->name && w.provider.node != n->name) p = partner(w.provider, true);
        if (p) {
          sum_poset.emplace(n->name, *p);
          changed = true;
          break;
        }
      }
    }
  }
  for (const auto* n : sums) {
    auto it = sum_poset.find(n->name);
    if (it == sum_poset.end()) {
      out.diagnostics.push_back(
          error_at(n->loc, "cannot infer the unit of sum node '" + n->name + "'; declare it, e.g. sum(2, +, [W])"));
      continue;
    }
    try {
      Block b;
      b.dpi = sum_node(n->sum_inputs, it->second, n->sum_op);
      for (std::size_t i = 0; i < n->sum_inputs; ++i) b.fun_names.push_back("in" + std::to_string(i));
      b.res_names = {"out"};
      out.blocks.emplace(n->name, std::move(b));
    } catch (const Error& e) {
      out.diagnostics.push_back(error_at(n->loc, "node '" + n->name + "': " + e.what()));
    }
  }
  return out;
}

std::vector<Diagnostic> validate(const DiagramAst& ast, const ResolvedBlocks& blocks) {
  std::vector<Diagnostic> diags;
  for (const auto& d : blocks.diagnostics)
    if (d.severity == Severity::Error) diags.push_back(d);

  // Resolves a port reference; reports and returns nullopt on failure.
  auto lookup = [&](const PortName& p, bool fun_side) -> std::optional<Poset> {
    const NodeDecl* decl = ast.find_node(p.node);
    if (!decl) {
      std::vector<std::string> known;
      for (const auto& n : ast.nodes) known.push_back(n.name);
      diags.push_back(error_at(p.loc, "unknown node '" + p.node + "' (declared: " + list_names(known) + ")"));
      return std::nullopt;
    }
    auto b = blocks.blocks.find(p.node);
    if (b == blocks.blocks.end()) return std::nullopt;  // load failure already reported
    const auto& names = fun_side ? b->second.fun_names : b->second.res_names;
    auto i = index_of(names, p.port);
    if (!i) {
      diags.push_back(error_at(p.loc, "node '" + p.node + "' has no " + (fun_side ? "functionality" : "resource") +
                                          " '" + p.port + "' (available: " + list_names(names) + ")"));
      return std::nullopt;
    }
    Poset poset = fun_side ? b->second.fun_port(*i) : b->second.res_port(*i);
    if (p.unit && *p.unit != port_unit(poset))
      diags.push_back(error_at(p.loc, "unit mismatch on '" + p.node + "." + p.port + "': written [" + *p.unit +
                                          "], port has [" + port_unit(poset) + "]"));
    return poset;
  };

  std::map<std::string, SourceLoc> fun_use, res_use;
  auto use = [&](std::map<std::string, SourceLoc>& uses, const PortName& p, const char* what) {
    const auto key = p.node + "." + p.port;
    auto [it, fresh] = uses.emplace(key, p.loc);
    if (!fresh)
      diags.push_back(error_at(p.loc, std::string(what) + " '" + key + "' is used more than once (first at " +
                                          loc_line(it->second) + ")"));
  };

  for (const auto& w : ast.wires) {
    auto pf = lookup(w.provider, true);
    auto pr = lookup(w.consumer, false);
    if (pf) use(fun_use, w.provider, "functionality");
    if (pr) use(res_use, w.consumer, "resource");
    if (pf && pr && !pf->same_as(*pr))
      diags.push_back(error_at(w.loc, "cannot wire " + w.provider.node + "." + w.provider.port + " to " +
                                          w.consumer.node + "." + w.consumer.port + ": functionality is " +
                                          pf->signature() + " but resource is " + pr->signature()));
  }
  std::map<std::string, SourceLoc> exposed_names;
  for (const auto& e : ast.exposes) {
    if (lookup(e.port, e.functionality)) use(e.functionality ? fun_use : res_use, e.port, e.functionality ? "functionality" : "resource");
    auto key = std::string(e.functionality ? "fun " : "res ") + e.as;
    auto [it, fresh] = exposed_names.emplace(key, e.loc);
    if (!fresh)
      diags.push_back(error_at(e.loc, "exposed name '" + e.as + "' already used at " + loc_line(it->second)));
  }

  for (const auto& n : ast.nodes) {
    auto b = blocks.blocks.find(n.name);
    if (b == blocks.blocks.end()) continue;
    for (const auto& f : b->second.fun_names)
      if (!fun_use.count(n.name + "." + f))
        diags.push_back(error_at(n.loc, "functionality '" + n.name + "." + f +
                                            "' is not connected; wire it to a resource or expose it"));
    for (const auto& r : b->second.res_names)
      if (!res_use.count(n.name + "." + r))
        diags.push_back(error_at(n.loc, "resource '" + n.name + "." + r +
                                            "' is not connected; wire it to a functionality or expose it"));
  }
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.loc.line, a.loc.col) < std::tie(b.loc.line, b.loc.col);
  });
  return diags;
}

CanonicalForm canonicalize(const DiagramAst& ast) {
  std::set<std::string> names;
  for (const auto& n : ast.nodes) names.insert(n.name);
  std::map<std::string, std::set<std::string>> succ;  // consumer -> providers
  for (const auto& w : ast.wires) succ[w.consumer.node].insert(w.provider.node);

  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark> mark;
  std::set<std::pair<std::string, std::string>> back;
  std::function<void(const std::string&)> dfs = [&](const std::string& u) {
    mark[u] = Mark::Grey;
    for (const auto& v : succ[u]) {
      if (mark[v] == Mark::Grey)
        back.insert({u, v});
      else if (mark[v] == Mark::White)
        dfs(v);
    }
    mark[u] = Mark::Black;
  };
  for (const auto& n : names)
    if (mark[n] == Mark::White) dfs(n);

  CanonicalForm out;
  out.loop_free = ast;
  out.loop_free.wires.clear();
  for (std::size_t i = 0; i < ast.wires.size(); ++i) {
    const auto& w = ast.wires[i];
    if (back.count({w.consumer.node, w.provider.node}))
      out.feedback_pairs.push_back({i, w.consumer, w.provider});
    else
      out.loop_free.wires.push_back(w);
  }

  // Kahn's algorithm, smallest name first.
  std::map<std::string, int> indeg;
  std::map<std::string, std::set<std::string>> edges;
  for (const auto& n : names) indeg[n] = 0;
  for (const auto& w : out.loop_free.wires)
    if (edges[w.consumer.node].insert(w.provider.node).second) ++indeg[w.provider.node];
  std::set<std::string> ready;
  for (const auto& [n, d] : indeg)
    if (d == 0) ready.insert(n);
  while (!ready.empty()) {
    auto u = *ready.begin();
    ready.erase(ready.begin());
    out.order.push_back(u);
    for (const auto& v : edges[u])
      if (--indeg[v] == 0) ready.insert(v);
  }
  return out;
}

CompiledDiagram compile(const DiagramAst& ast, const ResolvedBlocks& blocks) {
  if (auto errs = validate(ast, blocks); !errs.empty()) throw DiagramError(std::move(errs));

  CompiledDiagram out;
  out.canonical = canonicalize(ast);
  for (const auto& d : blocks.diagnostics)
    if (d.severity == Severity::Warning) out.warnings.push_back(d);

  NetworkSpec spec;
  std::map<std::string, std::size_t> node_index;
  for (const auto& n : ast.nodes) {
    node_index[n.name] = spec.names.size();
    spec.names.push_back(n.name);
    spec.nodes.push_back(blocks.blocks.at(n.name).dpi);
  }
  auto ref = [&](const PortName& p, bool fun_side) {
    const auto& b = blocks.blocks.at(p.node);
    return PortRef{node_index.at(p.node), *index_of(fun_side ? b.fun_names : b.res_names, p.port)};
  };
  auto poset_of = [&](const PortName& p, bool fun_side) {
    const auto& b = blocks.blocks.at(p.node);
    const auto i = *index_of(fun_side ? b.fun_names : b.res_names, p.port);
    return fun_side ? b.fun_port(i) : b.res_port(i);
  };

  for (const auto& e : ast.exposes) {
    if (e.functionality) {
      spec.exposed_funs.push_back(ref(e.port, true));
      out.funs.push_back({e.as, poset_of(e.port, true)});
    } else {
      spec.exposed_res.push_back(ref(e.port, false));
      out.res.push_back({e.as, poset_of(e.port, false)});
    }
  }
  const std::size_t n_fun = spec.exposed_funs.size();
  const std::size_t n_res = spec.exposed_res.size();
  std::vector<FeedbackPair> pairs;
  for (std::size_t i = 0; i < out.canonical.feedback_pairs.size(); ++i) {
    const auto& fb = out.canonical.feedback_pairs[i];
    spec.exposed_funs.push_back(ref(fb.provider_fun, true));
    spec.exposed_res.push_back(ref(fb.consumer_res, false));
    pairs.push_back({n_res + i, n_fun + i});
  }
  for (const auto& w : out.canonical.loop_free.wires)
    spec.links.push_back({ref(w.consumer, false), ref(w.provider, true)});

  DpiPtr body = network(std::move(spec));
  out.dpi = pairs.empty() ? body : loop_trace(body, std::move(pairs));
  return out;
}

CompiledDiagram compile_file(const std::filesystem::path& path) {
  const DiagramAst ast = load_diagram(path);
  const ResolvedBlocks blocks = resolve_blocks(ast, path.parent_path());
  return compile(ast, blocks);
}

}  // namespace mcdp
