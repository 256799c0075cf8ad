#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "quartosc/time_series.hpp"
#include "quartosc/wigner.hpp"

// Deterministic file output: FNV-1a digests for run manifests, atomic
// writes (temp file + rename, so failures never leave partial outputs), and
// the CSV formats shared by the CLI and the test fixtures. All floating
// point is printed with "%.17g" so files round-trip bit-exactly.

namespace quartosc {

std::uint64_t fnv1a64(std::string_view data);
std::string digest_hex(std::uint64_t digest);

// Shortest exact decimal form of v ("%.17g" trimmed by round-trip checks is
// not worth the complexity; plain "%.17g" is already bit-faithful).
std::string format_double(double v);

// Writes content to path via a temporary sibling file and rename.
void write_atomic(const std::string& path, const std::string& content);

// CSV layout: "# key=value" metadata lines (method first), then the column
// header "t,x_mean", then one row per sample.
std::string series_csv_text(
    const TimeSeries& series,
    const std::vector<std::pair<std::string, std::string>>& metadata);
void write_series_csv(
    const std::string& path, const TimeSeries& series,
    const std::vector<std::pair<std::string, std::string>>& metadata);

// Parses the layout above. Metadata (if requested) receives every "# k=v"
// line. Throws BadSeriesFile on malformed content or unreadable paths.
TimeSeries read_series_csv(const std::string& path,
                           std::map<std::string, std::string>* metadata =
                               nullptr);

// Multi-column comparison: "t,<name_1>,...,<name_k>" plus metadata.
std::string compare_csv_text(
    const std::vector<double>& times,
    const std::vector<TimeSeries>& columns,
    const std::vector<std::pair<std::string, std::string>>& metadata);

// Phase-space grid as "x,p,w" rows.
std::string grid_rows_csv_text(
    const PhaseSpaceGrid& grid,
    const std::vector<std::pair<std::string, std::string>>& metadata);

// Phase-space grid as a dense matrix: header row carries the p axis, each
// data row starts with its x value.
std::string grid_matrix_text(
    const PhaseSpaceGrid& grid,
    const std::vector<std::pair<std::string, std::string>>& metadata);

}  // namespace quartosc
