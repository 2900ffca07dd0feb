#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "causeway/detail/text.hpp"
#include "causeway/error.hpp"

namespace causeway {

constexpr int kNoTier = -1;

// What happened to the input on its way in: every column is accounted for,
// either kept or dropped with a reason.
struct Provenance {
    std::string source;
    std::vector<std::string> log;

    void note(const std::string& entry) { log.push_back(entry); }

    std::string to_text() const {
        std::string out;
        for (const auto& line : log) {
            out += line;
            out += '\n';
        }
        return out;
    }
};

// Column-named numeric matrix with optional per-column tier ranks.
// Columns are stored contiguously; all row-level access goes through them.
class Dataset {
public:
    Dataset() = default;

    Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns)
        : names_(std::move(names)), cols_(std::move(columns)) {
        validate_shape();
        tiers_.assign(names_.size(), kNoTier);
    }

    std::size_t col_count() const { return cols_.size(); }
    std::size_t row_count() const { return cols_.empty() ? 0 : cols_[0].size(); }

    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t c) const { return names_.at(c); }
    const std::vector<double>& column(std::size_t c) const { return cols_.at(c); }

    int tier(std::size_t c) const { return tiers_.at(c); }
    const std::vector<int>& tiers() const { return tiers_; }
    void set_tier(std::size_t c, int rank) { tiers_.at(c) = rank; }
    bool has_tiers() const {
        for (int t : tiers_)
            if (t != kNoTier) return true;
        return false;
    }

    Provenance& provenance() { return prov_; }
    const Provenance& provenance() const { return prov_; }

    int column_index(const std::string& name) const {
        for (std::size_t c = 0; c < names_.size(); ++c)
            if (names_[c] == name) return static_cast<int>(c);
        return -1;
    }

    void append_column(std::string name, std::vector<double> values, int tier = kNoTier) {
        if (!cols_.empty() && values.size() != row_count())
            throw ValidationError("append_column: row count mismatch for " + name);
        names_.push_back(std::move(name));
        cols_.push_back(std::move(values));
        tiers_.push_back(tier);
    }

    // Restricts to the given column indices, keeping names and tiers.
    Dataset select_columns(const std::vector<int>& indices) const {
        Dataset out;
        out.prov_ = prov_;
        for (int c : indices) {
            if (c < 0 || static_cast<std::size_t>(c) >= col_count())
                throw IndexError("select_columns: index out of range");
            out.append_column(names_[c], cols_[c], tiers_[c]);
        }
        return out;
    }

    double mean(std::size_t c) const {
        const auto& col = column(c);
        double s = 0.0;
        for (double v : col) s += v;
        return col.empty() ? 0.0 : s / static_cast<double>(col.size());
    }

    // Sample variance (n-1 denominator).
    double variance(std::size_t c) const {
        const auto& col = column(c);
        if (col.size() < 2) return 0.0;
        const double m = mean(c);
        double s = 0.0;
        for (double v : col) s += (v - m) * (v - m);
        return s / static_cast<double>(col.size() - 1);
    }

    // Rescales every column to mean 0, sample variance 1.
    void standardize() {
        for (std::size_t c = 0; c < col_count(); ++c) {
            const double var = variance(c);
            if (var <= 0.0) throw DegenerateColumnError(names_[c]);
            const double m = mean(c);
            const double inv_sd = 1.0 / std::sqrt(var);
            for (double& v : cols_[c]) v = (v - m) * inv_sd;
        }
    }

    void write_delimited(std::ostream& os, char delim = '\t') const {
        for (std::size_t c = 0; c < col_count(); ++c) {
            if (c) os << delim;
            os << names_[c];
        }
        os << '\n';
        const std::size_t n = row_count();
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < col_count(); ++c) {
                if (c) os << delim;
                os << detail::format_double(cols_[c][r]);
            }
            os << '\n';
        }
    }

private:
    void validate_shape() const {
        std::unordered_set<std::string> seen;
        for (const auto& n : names_)
            if (!seen.insert(n).second) throw ValidationError("duplicated column name: " + n);
        if (names_.size() != cols_.size())
            throw ValidationError("dataset: name/column count mismatch");
        for (const auto& col : cols_)
            if (col.size() != cols_[0].size())
                throw ValidationError("dataset: ragged columns");
    }

    std::vector<std::string> names_;
    std::vector<std::vector<double>> cols_;
    std::vector<int> tiers_;
    Provenance prov_;
};

}  // namespace causeway
