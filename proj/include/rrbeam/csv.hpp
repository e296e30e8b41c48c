#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rrbeam/experiment.hpp"

namespace rrbeam {

/// Renders traces as `snapshot,algorithm,mean_sinr_db,std_sinr_db,runs,seed`
/// rows sorted by algorithm then snapshot, six decimals, '\n' line endings.
std::string format_csv(const std::vector<SinrTrace>& traces);

/// Writes format_csv(traces) to path. Throws before touching the file when
/// traces is empty or ragged.
void emit_csv(const std::vector<SinrTrace>& traces, const std::filesystem::path& path);

struct CsvRow {
    int snapshot = 0;
    std::string algorithm;
    double mean_sinr_db = 0.0;
    double std_sinr_db = 0.0;
    int runs = 0;
    std::uint64_t seed = 0;
};

std::vector<CsvRow> parse_csv(const std::string& text);

}  // namespace rrbeam
