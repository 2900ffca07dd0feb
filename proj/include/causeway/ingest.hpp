#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <string>
#include <vector>

#include "causeway/dataset.hpp"
#include "causeway/detail/text.hpp"
#include "causeway/error.hpp"

namespace causeway {

struct IngestOptions {
    char delimiter = '\0';  // '\0': tab if the header contains one, else comma
    // a numeric all-distinct column is treated as an identifier only when
    // its lowercased name contains one of these
    std::vector<std::string> id_name_patterns{"id", "key", "serial", "uuid"};
};

namespace detail {

inline bool parses_as_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b != e && (*b == ' ' || *b == '\t')) ++b;
    const char* tail = e;
    while (tail != b && (*(tail - 1) == ' ' || *(tail - 1) == '\r')) --tail;
    if (b == tail) return false;
    const auto [ptr, ec] = std::from_chars(b, tail, out);
    return ec == std::errc() && ptr == tail;
}

}  // namespace detail

// Reads a delimited text file with a header row, drops unique-key and
// zero-variance columns, standardizes the rest to mean 0 / variance 1, and
// records every decision in the provenance log.
inline Dataset ingest_stream(std::istream& in, const std::string& source,
                             const IngestOptions& opt = {}) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source + ": empty input");
    line = detail::strip_cr(line);
    const char delim = opt.delimiter ? opt.delimiter
                                     : (line.find('\t') != std::string::npos ? '\t' : ',');
    const std::vector<std::string> header = detail::split(line, delim);
    const std::size_t d = header.size();
    if (d == 0) throw ParseError(source + ": no columns in header");

    std::vector<std::vector<std::string>> cells(d);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        ++row;
        const auto fields = detail::split(line, delim);
        if (fields.size() != d)
            throw ParseError(source + ": row " + std::to_string(row) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(d));
        for (std::size_t c = 0; c < d; ++c) cells[c].push_back(fields[c]);
    }
    if (row == 0) throw ParseError(source + ": no data rows");

    Dataset out;
    out.provenance().source = source;

    auto name_matches_id = [&](const std::string& name) {
        const std::string lower = detail::to_lower(name);
        for (const auto& pat : opt.id_name_patterns)
            if (lower.find(pat) != std::string::npos) return true;
        return false;
    };

    for (std::size_t c = 0; c < d; ++c) {
        std::vector<double> values(row);
        bool numeric = true;
        std::size_t bad_row = 0;
        for (std::size_t r = 0; r < row; ++r) {
            if (!detail::parses_as_double(cells[c][r], values[r])) {
                numeric = false;
                bad_row = r + 1;
                break;
            }
        }

        if (!numeric) {
            const std::set<std::string> distinct(cells[c].begin(), cells[c].end());
            if (distinct.size() == cells[c].size()) {
                out.provenance().note("dropped '" + header[c] + "': unique key");
                continue;
            }
            throw ParseError(source + ": unparseable cell at row " + std::to_string(bad_row) +
                             ", column '" + header[c] + "'");
        }

        const std::set<double> distinct(values.begin(), values.end());
        if (distinct.size() == values.size() && name_matches_id(header[c])) {
            out.provenance().note("dropped '" + header[c] + "': unique key");
            continue;
        }

        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(row);
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        if (ss <= 0.0) {
            out.provenance().note("dropped '" + header[c] + "': zero variance");
            continue;
        }

        out.append_column(header[c], std::move(values));
        out.provenance().note("kept '" + header[c] + "'");
    }

    if (out.col_count() == 0)
        throw ValidationError(source + ": no columns left after filtering");
    out.standardize();
    out.provenance().note("standardized " + std::to_string(out.col_count()) +
                          " columns to mean 0, variance 1");
    return out;
}

inline Dataset ingest(const std::string& path, const IngestOptions& opt = {}) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file: " + path);
    return ingest_stream(in, path, opt);
}

// Tier file: two tab-separated columns (column name, tier rank). Unlisted
// columns stay unconstrained; names absent from the dataset (e.g. dropped
// at ingest) are noted and skipped.
inline void apply_tier_file(Dataset& data, std::istream& in, const std::string& source) {
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        line = detail::strip_cr(line);
        ++row;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = detail::split(line, '\t');
        if (fields.size() != 2)
            throw ParseError(source + ": tier file row " + std::to_string(row) +
                             ": expected 2 tab-separated fields");
        const int tier = static_cast<int>(detail::parse_double(fields[1]));
        if (tier < 0)
            throw ValidationError(source + ": negative tier rank for '" + fields[0] + "'");
        const int col = data.column_index(fields[0]);
        if (col < 0) {
            data.provenance().note("tier entry for absent column '" + fields[0] + "' ignored");
            continue;
        }
        data.set_tier(static_cast<std::size_t>(col), tier);
    }
}

inline void apply_tier_file(Dataset& data, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open tier file: " + path);
    apply_tier_file(data, in, path);
}

}  // namespace causeway
