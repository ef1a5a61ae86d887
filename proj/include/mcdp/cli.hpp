#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mcdp/diagram.hpp"

namespace mcdp {

// Exit codes.
inline constexpr int kExitFeasible = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

nlohmann::json element_to_json(const Element& e);

// `value[unit]` for a numeric port, a label for a finite one.
Element parse_fun_value(const ExposedPort& port, std::string_view text);

/// Builds the functionality tuple from `K=V` assignments; every exposed
/// functionality must be assigned exactly once. `echo` receives the parsed
/// query for the output file.
Element build_query(const CompiledDiagram& d, const std::vector<std::string>& assignments,
                    nlohmann::json* echo = nullptr);

// Antichain points with resources and implementation call-outs.
nlohmann::json front_to_json(const Front& front);
nlohmann::json resource_header(const CompiledDiagram& d);

struct NestingCheck {
  std::string status;  // pass, fail, or incomparable
  std::vector<std::string> violations;
};

/// Upper-set nesting between the answers at `f_lo` and `f_hi`: when
/// f_lo <= f_hi every generator of `hi` must lie in the upper set of `lo`.
NestingCheck check_nesting(const Poset& fun, const Element& f_lo, const Element& f_hi, const Front& lo,
                           const Front& hi);

/// Flat rows (one per antichain point per sweep value) of a solve or sweep
/// output file.
nlohmann::json export_rows(const nlohmann::json& solution);
std::string rows_to_csv(const nlohmann::json& rows);
nlohmann::json csv_to_rows(std::string_view csv);

int run_cli(int argc, const char* const* argv);

}  // namespace mcdp
