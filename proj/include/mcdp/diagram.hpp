#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcdp/blocks.hpp"
#include "mcdp/composition.hpp"
#include "mcdp/errors.hpp"

namespace mcdp {

struct SourceLoc {
  std::string file;
  int line = 0;
  int col = 0;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  SourceLoc loc;
  Severity severity = Severity::Error;
  std::string message;

  // file:line:col: severity: message (file: severity: message without a line)
  std::string to_string() const;
};

class DiagramError : public Error {
 public:
  explicit DiagramError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

struct PortName {
  std::string node;
  std::string port;
  std::optional<std::string> unit;  // optional `[unit]` suffix, checked when present
  SourceLoc loc;
};

enum class NodeKind { Catalogue, Builtin, Sum };

struct NodeDecl {
  std::string name;
  NodeKind kind = NodeKind::Catalogue;
  std::string path;                                     // catalogue
  std::string model;                                    // builtin
  std::vector<std::pair<std::string, ParamValue>> params;  // builtin, in source order
  std::size_t sum_inputs = 0;                           // sum
  MergeOp sum_op = MergeOp::Sum;                        // sum
  std::optional<std::string> sum_unit;                  // sum
  SourceLoc loc;
};

// `wire provider.fun -> consumer.res`: the consumer's resource is provided
// by the provider's functionality.
struct WireDecl {
  PortName provider;
  PortName consumer;
  SourceLoc loc;
};

struct ExposeDecl {
  bool functionality = true;
  PortName port;
  std::string as;
  SourceLoc loc;
};

struct DiagramAst {
  std::string file;
  std::vector<NodeDecl> nodes;
  std::vector<WireDecl> wires;
  std::vector<ExposeDecl> exposes;

  const NodeDecl* find_node(std::string_view name) const;
};

// Structural equality ignoring source locations.
bool same_structure(const DiagramAst& a, const DiagramAst& b);

/// Parses a `.cdp` diagram. Throws DiagramError carrying every syntax error
/// found (one per line at most).
DiagramAst parse_diagram(std::string_view text, const std::string& file = "<input>");
DiagramAst load_diagram(const std::filesystem::path& path);

std::string print_diagram(const DiagramAst& ast);

/// Loaded blocks for each node (catalogues, builtins, sums). Sum nodes take
/// their unit from the declaration or from the ports wired to them.
struct ResolvedBlocks {
  std::map<std::string, Block> blocks;
  std::vector<Diagnostic> diagnostics;  // load failures and warnings
};

ResolvedBlocks resolve_blocks(const DiagramAst& ast, const std::filesystem::path& base_dir);

// Empty (of errors) iff the diagram can be compiled.
std::vector<Diagnostic> validate(const DiagramAst& ast, const ResolvedBlocks& blocks);

struct FeedbackWire {
  std::size_t wire = 0;  // index into ast.wires
  PortName consumer_res;
  PortName provider_fun;
};

struct CanonicalForm {
  DiagramAst loop_free;  // wires minus the cut ones
  std::vector<FeedbackWire> feedback_pairs;
  std::vector<std::string> order;  // topological order of loop_free, consumers first
};

/// Cuts the back edges of a depth-first search over consumer -> provider
/// edges, visiting nodes and successors in lexicographic order.
CanonicalForm canonicalize(const DiagramAst& ast);

struct ExposedPort {
  std::string name;
  Poset poset;
};

struct CompiledDiagram {
  DpiPtr dpi;
  std::vector<ExposedPort> funs;  // factor order of dpi->fun()
  std::vector<ExposedPort> res;   // factor order of dpi->res()
  CanonicalForm canonical;
  std::vector<Diagnostic> warnings;

  std::optional<std::size_t> fun_index(std::string_view name) const;
  std::optional<std::size_t> res_index(std::string_view name) const;
};

CompiledDiagram compile(const DiagramAst& ast, const ResolvedBlocks& blocks);

// load + resolve + validate + compile; throws DiagramError on any error.
CompiledDiagram compile_file(const std::filesystem::path& path);

// Human-readable unit of a port poset ("" when unitless).
std::string port_unit(const Poset& p);

}  // namespace mcdp
