#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "causeway/dataset.hpp"
#include "causeway/detail/linalg.hpp"
#include "causeway/detail/rng.hpp"
#include "causeway/detail/text.hpp"
#include "causeway/graph.hpp"

namespace causeway {

// Linear-Gaussian Bayesian network: a DAG plus, per node, parent
// coefficients, an intercept, and a noise standard deviation.
struct GaussianBN {
    struct Node {
        std::vector<int> parents;       // ascending
        std::vector<double> coefficients;  // aligned with parents
        double intercept = 0.0;
        double noise_std = 0.0;
    };

    PartialDag dag;
    std::vector<Node> nodes;

    int node_count() const { return dag.node_count(); }

    void validate() const {
        if (!dag.fully_directed() || !dag.directed_acyclic())
            throw ValidationError("gaussian bn: structure must be a fully directed DAG");
        if (static_cast<int>(nodes.size()) != dag.node_count())
            throw ValidationError("gaussian bn: node/parameter count mismatch");
        for (int v = 0; v < dag.node_count(); ++v) {
            const auto& node = nodes[v];
            if (node.parents.size() != node.coefficients.size())
                throw ValidationError("gaussian bn: coefficient count mismatch at " +
                                      dag.label(v));
            if (node.noise_std < 0.0)
                throw ValidationError("gaussian bn: negative noise std at " + dag.label(v));
            std::vector<int> expected(dag.parents(v).begin(), dag.parents(v).end());
            if (node.parents != expected)
                throw ValidationError("gaussian bn: parent list disagrees with dag at " +
                                      dag.label(v));
        }
    }
};

// Ordinary least squares of every column on its parents' columns; the noise
// std is the residual standard deviation with n - #parents - 1 degrees of
// freedom (a parentless node gets its column mean and sample std).
inline GaussianBN fit_gaussian_bn(const PartialDag& dag, const Dataset& data) {
    if (!dag.fully_directed() || !dag.directed_acyclic())
        throw ValidationError("fit_gaussian_bn: structure must be a fully directed DAG");
    if (dag.node_count() != static_cast<int>(data.col_count()))
        throw ValidationError("fit_gaussian_bn: node set does not match dataset columns");
    const std::size_t n = data.row_count();

    GaussianBN bn;
    bn.dag = dag;
    bn.nodes.resize(dag.node_count());
    for (int v = 0; v < dag.node_count(); ++v) {
        GaussianBN::Node& node = bn.nodes[v];
        node.parents.assign(dag.parents(v).begin(), dag.parents(v).end());
        const std::size_t p = node.parents.size();
        if (n < p + 2)
            throw ValidationError("fit_gaussian_bn: need more rows than parents at " +
                                  dag.label(v));
        const auto& y = data.column(v);

        // normal equations over [1, parents...]
        detail::Matrix xtx(p + 1, p + 1);
        std::vector<double> xty(p + 1, 0.0);
        xtx.at(0, 0) = static_cast<double>(n);
        for (std::size_t a = 0; a < p; ++a) {
            const auto& xa = data.column(node.parents[a]);
            double s = 0.0, sy = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                s += xa[r];
                sy += xa[r] * y[r];
            }
            xtx.at(0, a + 1) = xtx.at(a + 1, 0) = s;
            xty[a + 1] = sy;
            for (std::size_t b = a; b < p; ++b) {
                const auto& xb = data.column(node.parents[b]);
                double cross = 0.0;
                for (std::size_t r = 0; r < n; ++r) cross += xa[r] * xb[r];
                xtx.at(a + 1, b + 1) = xtx.at(b + 1, a + 1) = cross;
            }
        }
        double sy = 0.0;
        for (std::size_t r = 0; r < n; ++r) sy += y[r];
        xty[0] = sy;

        std::vector<double> beta;
        try {
            beta = detail::solve(std::move(xtx), std::move(xty));
        } catch (const SingularityError&) {
            throw FittingError(dag.label(v));
        }
        node.intercept = beta[0];
        node.coefficients.assign(beta.begin() + 1, beta.end());

        double ssr = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double pred = node.intercept;
            for (std::size_t a = 0; a < p; ++a)
                pred += node.coefficients[a] * data.column(node.parents[a])[r];
            const double e = y[r] - pred;
            ssr += e * e;
        }
        const double dof = static_cast<double>(n) - static_cast<double>(p) - 1.0;
        node.noise_std = std::sqrt(ssr / dof);
    }
    return bn;
}

// Draws n i.i.d. rows in topological order. The noise draw for (node v,
// row r) comes from counter v*n + r of the seed's stream, so the result is
// identical whatever topological order is chosen, per seed, on every
// platform.
inline Dataset sample(const GaussianBN& bn, std::size_t n, std::uint64_t seed) {
    bn.validate();
    if (n < 1) throw ValidationError("sample: n must be >= 1");
    const int d = bn.node_count();
    const detail::CounterRng rng(seed);

    std::vector<std::vector<double>> cols(d);
    for (int v : bn.dag.topological_order()) {
        const auto& node = bn.nodes[v];
        auto& col = cols[v];
        col.resize(n);
        const std::uint64_t base = static_cast<std::uint64_t>(v) * n;
        for (std::size_t r = 0; r < n; ++r) {
            double value = node.intercept;
            for (std::size_t a = 0; a < node.parents.size(); ++a)
                value += node.coefficients[a] * cols[node.parents[a]][r];
            if (node.noise_std > 0.0) value += node.noise_std * rng.normal(base + r);
            col[r] = value;
        }
    }
    Dataset out(bn.dag.labels(), std::move(cols));
    out.provenance().source = "sampled";
    out.provenance().note("sampled " + std::to_string(n) + " rows, seed " + std::to_string(seed));
    return out;
}

// Model-implied covariance: with B the child-by-parent coefficient matrix
// and D the diagonal of noise variances, Cov = (I-B)^-1 D (I-B)^-T.
inline detail::Matrix implied_covariance(const GaussianBN& bn) {
    bn.validate();
    const int d = bn.node_count();
    detail::Matrix i_minus_b = detail::Matrix::identity(d);
    for (int v = 0; v < d; ++v)
        for (std::size_t a = 0; a < bn.nodes[v].parents.size(); ++a)
            i_minus_b.at(v, bn.nodes[v].parents[a]) = -bn.nodes[v].coefficients[a];
    const detail::Matrix m = detail::invert(std::move(i_minus_b));  // (I-B)^-1
    detail::Matrix md(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double noise = bn.nodes[j].noise_std;
            md.at(i, j) = m.at(i, j) * noise * noise;
        }
    return md.multiply(m.transposed());
}

struct ColumnMoments {
    std::string name;
    double skewness = 0.0;
    double kurtosis = 0.0;  // excess by default; see NormalityReport
    bool within_range = false;
};

// Skewness/kurtosis per column from the uncorrected moment estimators
// (m3 / m2^1.5 and m4 / m2^2), with the conventional [-2, +2] normality
// screen applied to both.
struct NormalityReport {
    std::vector<ColumnMoments> columns;
    double fraction_within_range = 0.0;
    bool raw_kurtosis = false;  // false: excess (normal -> 0); true: raw (normal -> 3)
    std::string estimator = "uncorrected-moment";

    std::string to_text() const {
        std::string out = "column\tskewness\tkurtosis(" +
                          std::string(raw_kurtosis ? "raw" : "excess") + ")\twithin[-2,2]\n";
        for (const auto& c : columns)
            out += c.name + "\t" + detail::format_double(c.skewness) + "\t" +
                   detail::format_double(c.kurtosis) + "\t" + (c.within_range ? "yes" : "no") +
                   "\n";
        out += "# fraction within range: " + detail::format_double(fraction_within_range) + "\n";
        return out;
    }
};

inline NormalityReport moment_stats(const Dataset& data, bool raw_kurtosis = false) {
    const std::size_t n = data.row_count();
    if (n < 4) throw ValidationError("moment_stats: need at least 4 rows");
    NormalityReport report;
    report.raw_kurtosis = raw_kurtosis;
    std::size_t within = 0;
    for (std::size_t c = 0; c < data.col_count(); ++c) {
        const auto& col = data.column(c);
        const double mean = data.mean(c);
        double m2 = 0.0, m3 = 0.0, m4 = 0.0;
        for (double v : col) {
            const double e = v - mean;
            m2 += e * e;
            m3 += e * e * e;
            m4 += e * e * e * e;
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        m2 *= inv_n;
        m3 *= inv_n;
        m4 *= inv_n;
        if (m2 <= 0.0) throw DegenerateColumnError(data.name(c));
        ColumnMoments cm;
        cm.name = data.name(c);
        cm.skewness = m3 / std::pow(m2, 1.5);
        cm.kurtosis = m4 / (m2 * m2) - (raw_kurtosis ? 0.0 : 3.0);
        cm.within_range = std::fabs(cm.skewness) <= 2.0 && std::fabs(cm.kurtosis) <= 2.0;
        if (cm.within_range) ++within;
        report.columns.push_back(std::move(cm));
    }
    report.fraction_within_range =
        data.col_count() ? static_cast<double>(within) / static_cast<double>(data.col_count())
                         : 0.0;
    return report;
}

// Text format, one line per node:
//   name <TAB> parent,parent,... <TAB> coeff,coeff,... <TAB> intercept <TAB> noise_std
// Doubles are printed with 17 significant digits, so the round-trip is exact.
inline std::string gaussian_bn_to_text(const GaussianBN& bn) {
    bn.validate();
    std::string out = "#causeway-gbn\t1\t" + std::to_string(bn.node_count()) + "\n";
    for (int v = 0; v < bn.node_count(); ++v) {
        const auto& node = bn.nodes[v];
        out += bn.dag.label(v);
        out += '\t';
        for (std::size_t a = 0; a < node.parents.size(); ++a) {
            if (a) out += ',';
            out += bn.dag.label(node.parents[a]);
        }
        out += '\t';
        for (std::size_t a = 0; a < node.coefficients.size(); ++a) {
            if (a) out += ',';
            out += detail::format_double(node.coefficients[a]);
        }
        out += '\t';
        out += detail::format_double(node.intercept);
        out += '\t';
        out += detail::format_double(node.noise_std);
        out += '\n';
    }
    return out;
}

inline GaussianBN gaussian_bn_from_text(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("gaussian bn: empty input");
    auto header = detail::split(detail::strip_cr(line), '\t');
    if (header.size() != 3 || header[0] != "#causeway-gbn" || header[1] != "1")
        throw ParseError("gaussian bn: bad header");
    const int n = static_cast<int>(detail::parse_double(header[2]));
    if (n <= 0) throw ParseError("gaussian bn: bad node count");

    std::vector<std::string> names;
    std::vector<std::vector<std::string>> parent_names(n);
    std::vector<GaussianBN::Node> nodes(n);
    for (int v = 0; v < n; ++v) {
        if (!std::getline(in, line)) throw ParseError("gaussian bn: truncated at node line " +
                                                      std::to_string(v + 1));
        const auto f = detail::split(detail::strip_cr(line), '\t');
        if (f.size() != 5)
            throw ParseError("gaussian bn: expected 5 fields on line " + std::to_string(v + 2));
        names.push_back(f[0]);
        if (!f[1].empty()) parent_names[v] = detail::split(f[1], ',');
        if (!f[2].empty())
            for (const auto& c : detail::split(f[2], ',')) nodes[v].coefficients.push_back(detail::parse_double(c));
        nodes[v].intercept = detail::parse_double(f[3]);
        nodes[v].noise_std = detail::parse_double(f[4]);
    }

    GaussianBN bn;
    bn.dag = PartialDag(n, names);
    for (int v = 0; v < n; ++v) {
        for (const auto& pname : parent_names[v]) {
            int p = -1;
            for (int u = 0; u < n; ++u)
                if (names[u] == pname) p = u;
            if (p < 0) throw ParseError("gaussian bn: unknown parent '" + pname + "'");
            bn.dag.add_directed(p, v);
            nodes[v].parents.push_back(p);
        }
        // dag stores parents ascending; realign coefficients to match
        std::vector<std::pair<int, double>> paired;
        for (std::size_t a = 0; a < nodes[v].parents.size(); ++a)
            paired.emplace_back(nodes[v].parents[a], nodes[v].coefficients[a]);
        std::sort(paired.begin(), paired.end());
        for (std::size_t a = 0; a < paired.size(); ++a) {
            nodes[v].parents[a] = paired[a].first;
            nodes[v].coefficients[a] = paired[a].second;
        }
    }
    bn.nodes = std::move(nodes);
    bn.validate();
    return bn;
}

inline GaussianBN gaussian_bn_from_text(const std::string& text) {
    std::istringstream in(text);
    return gaussian_bn_from_text(in);
}

}  // namespace causeway
