#pragma once

#include "kfp/search.hpp"
#include "kfp/solver.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kfp::io {

inline constexpr const char* tool_version = "kfp 0.1.0";

/// Unreadable or malformed input (distinct from domain failures like metric
/// violations, which carry their own report).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Space documents: {"labels": [...], "dist": [[...]], "provenance"?: ...}.
// Distance entries are rational strings ("7/2", "0.25") or integer literals;
// non-integral numeric literals are rejected rather than parsed inexactly.
struct ParsedSpace {
    std::vector<std::string> labels;
    RatMatrix dist;
    Provenance provenance = Provenance::Explicit;
};
ParsedSpace parse_space_raw(const std::string& text);
SpacePtr parse_space(const std::string& text);
SpacePtr load_space(const std::string& path);
std::string space_to_text(const FiniteMetricSpace& s);

// Map documents: {"table": {label: label, ...}} or
// {"piecewise": {"domain": [lo, hi], "segments": [{"upto","slope","intercept"}]}}.
struct ParsedMap {
    std::vector<std::pair<std::string, std::string>> table;  // when a table map
    bool is_table = false;
    std::optional<PiecewiseLinearMap> piecewise;
};
ParsedMap parse_map(const std::string& text);
ParsedMap load_map(const std::string& path);
TableMap bind_table(const ParsedMap& m, SpacePtr space);
std::string table_to_text(const TableMap& map);
std::string piecewise_to_text(const PiecewiseLinearMap& map);

std::string validation_to_text(const ValidationReport& r,
                               const std::vector<std::string>& labels, bool structured);
std::string report_to_text(const ContractionReport& r, const FiniteMetricSpace& s,
                           bool structured);
std::string sampled_to_text(const SampledReport& r, const PiecewiseLinearMap& map,
                            bool structured);
std::string solve_to_text(const SolveResult& res, const FiniteMetricSpace& s, bool structured);
std::string all_starts_to_text(const AllStartsResult& res, const FiniteMetricSpace& s,
                               bool structured);

std::string witness_to_text(const WitnessRecord& rec);
WitnessRecord parse_witness(const std::string& text);
/// Writes dir/<kind>_<seed>.json, suffixing a counter instead of clobbering
/// an existing record with different content. Returns the path written.
std::string write_witness(const WitnessRecord& rec, const std::string& dir);

struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::uint64_t seed = 0;
    std::string tool_version_string = tool_version;
    std::string output_digest;
};
std::uint64_t fnv1a(std::string_view bytes);
std::string digest_string(std::string_view bytes);  // "fnv1a64:<16 hex digits>"
std::string manifest_to_text(const RunManifest& m);

}  // namespace kfp::io
