#include "rrbeam/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rrbeam {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string format_csv(const std::vector<SinrTrace>& traces) {
    if (traces.empty()) throw std::invalid_argument("emit_csv: no traces");
    const auto n = traces.front().per_snapshot_sinr_db.size();
    for (const auto& t : traces) {
        if (t.per_snapshot_sinr_db.size() != n || t.per_snapshot_std_db.size() != n) {
            throw std::invalid_argument("emit_csv: traces disagree on snapshot count");
        }
    }
    std::vector<const SinrTrace*> order;
    for (const auto& t : traces) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](const SinrTrace* a, const SinrTrace* b) {
        return to_string(a->algorithm) < to_string(b->algorithm);
    });

    std::string out = "snapshot,algorithm,mean_sinr_db,std_sinr_db,runs,seed\n";
    for (const SinrTrace* t : order) {
        for (std::size_t i = 0; i < n; ++i) {
            out += std::to_string(i + 1);
            out += ',';
            out += to_string(t->algorithm);
            out += ',';
            out += fixed6(t->per_snapshot_sinr_db[i]);
            out += ',';
            out += fixed6(t->per_snapshot_std_db[i]);
            out += ',';
            out += std::to_string(t->runs);
            out += ',';
            out += std::to_string(t->seed);
            out += '\n';
        }
    }
    return out;
}

void emit_csv(const std::vector<SinrTrace>& traces, const std::filesystem::path& path) {
    const std::string text = format_csv(traces);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("emit_csv: cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("emit_csv: write to '" + path.string() + "' failed");
}

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "snapshot,algorithm,mean_sinr_db,std_sinr_db,runs,seed") {
        throw std::runtime_error("parse_csv: unexpected header");
    }
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell[6];
        for (auto& c : cell) {
            if (!std::getline(fields, c, ',')) throw std::runtime_error("parse_csv: short row");
        }
        rows.push_back(CsvRow{
            .snapshot = std::stoi(cell[0]),
            .algorithm = cell[1],
            .mean_sinr_db = std::stod(cell[2]),
            .std_sinr_db = std::stod(cell[3]),
            .runs = std::stoi(cell[4]),
            .seed = std::stoull(cell[5]),
        });
    }
    return rows;
}

}  // namespace rrbeam
