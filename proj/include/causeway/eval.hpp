#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causeway/citest.hpp"
#include "causeway/detail/parallel.hpp"
#include "causeway/detail/text.hpp"
#include "causeway/graph.hpp"
#include "causeway/pc.hpp"
#include "causeway/synth.hpp"

namespace causeway {

// Precision/recall of a learned mixed graph against a ground-truth pattern.
// Undirected metrics compare skeletons; directed metrics count a learned
// directed edge as true iff the truth directs the same pair the same way.
// A zero denominator leaves the ratio undefined.
struct EvalReport {
    std::size_t learned_edges = 0;
    std::size_t true_edges = 0;
    std::size_t learned_oriented = 0;
    std::size_t true_oriented = 0;
    std::size_t matched_undirected = 0;
    std::size_t matched_oriented = 0;

    std::optional<double> undirected_precision;
    std::optional<double> undirected_recall;
    std::optional<double> directed_precision;
    std::optional<double> directed_recall;
};

inline EvalReport score_graphs(const PartialDag& learned, const PartialDag& truth) {
    if (learned.node_count() != truth.node_count())
        throw ValidationError("score_graphs: node sets differ");

    EvalReport r;
    r.true_edges = truth.edge_count();
    r.true_oriented = truth.directed_edge_count();
    r.learned_edges = learned.edge_count();
    r.learned_oriented = learned.directed_edge_count();

    for (const Edge& e : learned.edges()) {
        if (truth.adjacent(e.a, e.b)) ++r.matched_undirected;
        if (e.directed && truth.has_directed(e.a, e.b)) ++r.matched_oriented;
    }

    auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    r.undirected_precision = ratio(r.matched_undirected, r.learned_edges);
    r.undirected_recall = ratio(r.matched_undirected, r.true_edges);
    r.directed_precision = ratio(r.matched_oriented, r.learned_oriented);
    r.directed_recall = ratio(r.matched_oriented, r.true_oriented);
    return r;
}

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;
    int defined = 0;  // replicates with a defined value; undefined ones are excluded
};

inline MetricAggregate aggregate_metric(const std::vector<std::optional<double>>& values) {
    MetricAggregate agg;
    double sum = 0.0;
    for (const auto& v : values)
        if (v) {
            sum += *v;
            ++agg.defined;
        }
    if (agg.defined == 0) return agg;
    agg.mean = sum / agg.defined;
    if (agg.defined > 1) {
        double ss = 0.0;
        for (const auto& v : values)
            if (v) ss += (*v - agg.mean) * (*v - agg.mean);
        agg.stddev = std::sqrt(ss / (agg.defined - 1));
    }
    return agg;
}

struct SweepCell {
    double alpha = 0.0;
    double soe = 0.0;
    MetricAggregate undirected_precision, undirected_recall;
    MetricAggregate directed_precision, directed_recall;
    double mean_learned_edges = 0.0;
    std::vector<EvalReport> replicate_reports;
};

struct SweepOptions {
    int replicates = 10;
    std::size_t sample_size = 50000;
    std::vector<double> alphas{0.001, 0.01, 0.05, 0.1};
    std::vector<double> soes{0.0, 0.05, 0.1};
    std::uint64_t base_seed = 1;
    PcConfig pc;  // alpha/soe are overridden per grid cell
    int threads = 0;
};

struct SweepResult {
    std::vector<SweepCell> cells;  // alpha-major, then soe

    const SweepCell& cell(double alpha, double soe) const {
        for (const auto& c : cells)
            if (c.alpha == alpha && c.soe == soe) return c;
        throw ValidationError("sweep: no such grid cell");
    }

    // long-format table: alpha, soe, metric, mean, stddev, replicatesDefined
    std::string to_tsv() const {
        std::string out = "alpha\tsoe\tmetric\tmean\tstddev\treplicatesDefined\n";
        auto row = [&](const SweepCell& c, const char* metric, const MetricAggregate& a) {
            out += detail::format_double(c.alpha) + "\t" + detail::format_double(c.soe) + "\t" +
                   metric + "\t" + (a.defined ? detail::format_double(a.mean) : "NA") + "\t" +
                   (a.defined ? detail::format_double(a.stddev) : "NA") + "\t" +
                   std::to_string(a.defined) + "\n";
        };
        for (const auto& c : cells) {
            row(c, "undirectedPrecision", c.undirected_precision);
            row(c, "undirectedRecall", c.undirected_recall);
            row(c, "directedPrecision", c.directed_precision);
            row(c, "directedRecall", c.directed_recall);
        }
        return out;
    }
};

// For each replicate seed: sample a dataset from the generating network,
// run the search at every (alpha, soe), and score against the truth
// pattern. One dataset (and one correlation matrix) is shared by all grid
// cells of a replicate; metrics are averaged over replicates per cell with
// undefined values excluded.
inline SweepResult sweep(const GaussianBN& bn, const PartialDag& truth_pattern,
                         const SweepOptions& opt, const PriorKnowledge& k = {}) {
    if (opt.replicates < 1) throw ValidationError("sweep: replicates must be >= 1");
    if (opt.alphas.empty() || opt.soes.empty())
        throw ValidationError("sweep: empty parameter grid");
    bn.validate();
    if (truth_pattern.node_count() != bn.node_count())
        throw ValidationError("sweep: truth pattern node set mismatch");

    const std::size_t cell_count = opt.alphas.size() * opt.soes.size();
    std::vector<std::vector<EvalReport>> by_cell(cell_count);
    for (auto& v : by_cell) v.resize(opt.replicates);

    detail::parallel_for(opt.replicates, opt.threads, [&](std::size_t rep) {
        const Dataset data = sample(bn, opt.sample_size, opt.base_seed + rep);
        const CorrelationMatrix corr = correlation_matrix(data);
        std::size_t cell = 0;
        for (double alpha : opt.alphas) {
            for (double soe : opt.soes) {
                PcConfig cfg = opt.pc;
                cfg.alpha = alpha;
                cfg.soe = soe;
                cfg.threads = 1;  // parallelism is spent on replicates
                const PcResult res = pc(corr, cfg, k, data.names());
                by_cell[cell][rep] = score_graphs(res.graph, truth_pattern);
                ++cell;
            }
        }
    });

    SweepResult out;
    std::size_t cell = 0;
    for (double alpha : opt.alphas) {
        for (double soe : opt.soes) {
            SweepCell c;
            c.alpha = alpha;
            c.soe = soe;
            c.replicate_reports = std::move(by_cell[cell]);
            auto collect = [&](auto member) {
                std::vector<std::optional<double>> vals;
                vals.reserve(c.replicate_reports.size());
                for (const auto& r : c.replicate_reports) vals.push_back(r.*member);
                return aggregate_metric(vals);
            };
            c.undirected_precision = collect(&EvalReport::undirected_precision);
            c.undirected_recall = collect(&EvalReport::undirected_recall);
            c.directed_precision = collect(&EvalReport::directed_precision);
            c.directed_recall = collect(&EvalReport::directed_recall);
            double edges = 0.0;
            for (const auto& r : c.replicate_reports) edges += static_cast<double>(r.learned_edges);
            c.mean_learned_edges = edges / static_cast<double>(c.replicate_reports.size());
            out.cells.push_back(std::move(c));
            ++cell;
        }
    }
    return out;
}

}  // namespace causeway
