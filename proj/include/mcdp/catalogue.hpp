#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcdp/dpi.hpp"

namespace mcdp {

/// One declared port of a catalogue. The poset is the order used by the DPI
/// (a descending numeric port is stored as opposite(numeric)).
struct PortDecl {
  std::string name;
  Poset poset;

  // Column header used in the CSV body: `name[unit]` for numeric and curve
  // ports with a unit, `name` otherwise.
  std::string column() const;
};

struct CatalogueFile {
  std::string source;  // path or label used in messages
  int schema_version = 1;
  std::string block_kind;
  std::optional<std::vector<double>> curve_grid;
  std::vector<PortDecl> fun_ports;
  std::vector<PortDecl> res_ports;
  std::vector<std::string> attributes;
  std::vector<ImplRow> rows;
  std::vector<std::string> warnings;

  Poset fun_poset() const;
  Poset res_poset() const;
  MonotoneTable table() const;
  const PortDecl* find_fun(std::string_view name) const;
  const PortDecl* find_res(std::string_view name) const;
};

std::uint64_t fnv1a64(std::string_view bytes);

// `.dpt` files must carry a checksum line; `.cat` files may.
CatalogueFile parse_catalogue(std::string_view text, const std::string& source, bool require_checksum);
CatalogueFile load_catalogue(const std::filesystem::path& path);

std::string render_catalogue(const CatalogueFile& cat);

struct TableHeader {
  std::string block_kind = "table";
  std::vector<std::string> fun_names;  // default f0, f1, ...
  std::vector<std::string> res_names;  // default r0, r1, ...
};

/// Writes a table (with a checksum) so that load_catalogue reproduces the
/// same DPI. F and R must be product posets of numeric, opposite-numeric,
/// finite, opposite-finite or curve factors; curves must share one grid.
CatalogueFile table_to_catalogue(const MonotoneTable& table, const TableHeader& header = {});
void save_table(const MonotoneTable& table, const std::filesystem::path& path, const TableHeader& header = {});
void save_catalogue(const CatalogueFile& cat, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Comma-separated fields with optional double quotes; surrounding
// whitespace is trimmed.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace mcdp
