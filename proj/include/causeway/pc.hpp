#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causeway/citest.hpp"
#include "causeway/dataset.hpp"
#include "causeway/detail/parallel.hpp"
#include "causeway/graph.hpp"
#include "causeway/orientation_log.hpp"

namespace causeway {

constexpr int kUnboundedDepth = std::numeric_limits<int>::max();

// Temporal (or expert) constraints: per-node tier ranks plus explicit
// required/forbidden directed pairs. Edges never point from a higher tier
// to a lower one.
class PriorKnowledge {
public:
    PriorKnowledge() = default;

    static PriorKnowledge from_tiers(const std::vector<int>& tiers) {
        PriorKnowledge k;
        for (std::size_t v = 0; v < tiers.size(); ++v)
            if (tiers[v] != kNoTier) k.set_tier(static_cast<int>(v), tiers[v]);
        return k;
    }

    void set_tier(int node, int rank) {
        if (rank < 0) throw ValidationError("tier rank must be non-negative");
        tiers_[node] = rank;
    }

    std::optional<int> tier_of(int node) const {
        const auto it = tiers_.find(node);
        return it == tiers_.end() ? std::nullopt : std::optional<int>(it->second);
    }

    void require(int x, int y) { required_.insert({x, y}); }
    void forbid(int x, int y) { forbidden_.insert({x, y}); }

    const std::set<std::pair<int, int>>& required() const { return required_; }
    const std::set<std::pair<int, int>>& forbidden() const { return forbidden_; }

    bool empty() const { return tiers_.empty() && required_.empty() && forbidden_.empty(); }

    // May an edge be oriented x -> y without contradicting the knowledge?
    bool allows(int x, int y) const {
        if (forbidden_.count({x, y})) return false;
        if (required_.count({y, x})) return false;
        const auto tx = tier_of(x), ty = tier_of(y);
        if (tx && ty && *tx > *ty) return false;
        return true;
    }

    void validate() const {
        for (const auto& p : required_) {
            if (forbidden_.count(p))
                throw KnowledgeConflictError("pair both required and forbidden: " +
                                             std::to_string(p.first) + "->" +
                                             std::to_string(p.second));
            const auto tx = tier_of(p.first), ty = tier_of(p.second);
            if (tx && ty && *tx > *ty)
                throw KnowledgeConflictError("required edge points from a later tier: " +
                                             std::to_string(p.first) + "->" +
                                             std::to_string(p.second));
        }
    }

private:
    std::map<int, int> tiers_;
    std::set<std::pair<int, int>> required_, forbidden_;
};

inline PriorKnowledge knowledge_from_tiers(const Dataset& data) {
    return PriorKnowledge::from_tiers(data.tiers());
}

struct PcConfig {
    double alpha = 0.05;
    double soe = 0.0;
    // maximum conditioning-set size; kUnboundedDepth = limited only by
    // neighbor counts
    int max_depth = kUnboundedDepth;
    // draw candidate conditioning sets from one endpoint's neighborhood
    // only (the larger-index endpoint), instead of both sides
    bool single_sided = false;
    // evaluate each level's tests against the start-of-level graph and
    // apply removals afterwards; output may differ from sequential mode
    // but is deterministic for fixed inputs and any thread count
    bool level_parallel = false;
    int threads = 0;  // 0: CAUSEWAY_THREADS or 1

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must be in (0,1)");
        if (soe < 0.0) throw ValidationError("soe must be >= 0");
        if (max_depth < 0) throw ValidationError("depth must be >= 0");
    }
};

// Perfect conditional-independence oracle backed by d-separation in a known
// DAG. Stands in for a statistical test when the generating structure is
// available.
class DSeparationOracle final : public IndependenceTest {
public:
    explicit DSeparationOracle(PartialDag dag) : dag_(std::move(dag)) {
        if (!dag_.fully_directed() || !dag_.directed_acyclic())
            throw ValidationError("DSeparationOracle: needs a fully directed acyclic graph");
    }

    int variable_count() const override { return dag_.node_count(); }

    CiDecision test(int i, int j, const std::vector<int>& s) const override {
        CiDecision d;
        d.independent = d_separated(dag_, i, j, s);
        d.p_value = d.independent ? 1.0 : 0.0;
        return d;
    }

private:
    PartialDag dag_;
};

struct SkeletonResult {
    PartialDag graph;
    SepsetMap sepsets;
};

namespace detail {

// Lexicographic size-k subsets of `pool` (pool ascending). Calls fn(subset);
// stops early when fn returns true.
template <typename Fn>
bool for_each_subset(const std::vector<int>& pool, int k, Fn&& fn) {
    const int n = static_cast<int>(pool.size());
    if (k > n) return false;
    std::vector<int> pick(k);
    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
        for (int i = 0; i < k; ++i) subset[i] = pool[pick[i]];
        if (fn(subset)) return true;
        int i = k - 1;
        while (i >= 0 && pick[i] == n - k + i) --i;
        if (i < 0) return false;
        ++pick[i];
        for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

inline std::vector<int> pool_without(const PartialDag& g, int of, int excluding) {
    std::vector<int> pool = g.neighbors(of);
    pool.erase(std::remove(pool.begin(), pool.end(), excluding), pool.end());
    return pool;
}

struct EdgeSearchOutcome {
    bool removed = false;
    std::vector<int> sepset;
    std::vector<OrientationRecord> notes;
};

// First independence wins: scans size-d conditioning sets for edge (x, y)
// against the supplied adjacency snapshot. Test errors are noted and the
// test treated as "dependent".
inline EdgeSearchOutcome search_edge(const PartialDag& adjacency, const IndependenceTest& test,
                                     int x, int y, int d, bool single_sided) {
    EdgeSearchOutcome out;
    std::vector<std::vector<int>> pools;
    if (single_sided) {
        pools.push_back(pool_without(adjacency, y, x));
    } else {
        pools.push_back(pool_without(adjacency, x, y));
        pools.push_back(pool_without(adjacency, y, x));
    }
    for (const auto& pool : pools) {
        if (static_cast<int>(pool.size()) < d) continue;
        const bool found = for_each_subset(pool, d, [&](const std::vector<int>& s) {
            CiDecision decision;
            try {
                decision = test.test(x, y, s);
            } catch (const std::exception& e) {
                out.notes.push_back({"test-error", false, {x, y},
                                     std::string("treated dependent: ") + e.what()});
                return false;
            }
            if (decision.flagged)
                out.notes.push_back(
                    {"test-error", false, {x, y}, "singular submatrix; treated dependent"});
            if (decision.independent) {
                out.removed = true;
                out.sepset = s;
                return true;
            }
            return false;
        });
        if (found) return out;
    }
    return out;
}

}  // namespace detail

// Phase I: from the complete undirected graph, tests every remaining edge
// against conditioning sets of growing size drawn from current neighbors,
// removing the edge and recording the separating set on the first
// independence found.
inline SkeletonResult learn_skeleton(const IndependenceTest& test, const PcConfig& cfg,
                                     OrientationLog* log = nullptr,
                                     std::vector<std::string> labels = {}) {
    cfg.validate();
    const int p = test.variable_count();
    if (p < 2) throw ValidationError("learn_skeleton: need at least 2 variables");

    SkeletonResult res{PartialDag::complete_undirected(p, std::move(labels)), {}};
    PartialDag& g = res.graph;

    for (int d = 0; d <= cfg.max_depth; ++d) {
        std::vector<Edge> level_edges = g.edges();

        if (!cfg.level_parallel) {
            for (const Edge& e : level_edges) {
                const auto out = detail::search_edge(g, test, e.a, e.b, d, cfg.single_sided);
                if (log)
                    for (const auto& n : out.notes) log->add(n.rule, n.applied, n.nodes, n.detail);
                if (out.removed) {
                    g.remove_edge(e.a, e.b);
                    res.sepsets.record(e.a, e.b, out.sepset);
                }
            }
        } else {
            // all tests of this level run against the start-of-level graph
            const PartialDag snapshot = g;
            std::vector<detail::EdgeSearchOutcome> outcomes(level_edges.size());
            detail::parallel_for(level_edges.size(), cfg.threads, [&](std::size_t i) {
                outcomes[i] = detail::search_edge(snapshot, test, level_edges[i].a,
                                                  level_edges[i].b, d, cfg.single_sided);
            });
            for (std::size_t i = 0; i < level_edges.size(); ++i) {
                if (log)
                    for (const auto& n : outcomes[i].notes)
                        log->add(n.rule, n.applied, n.nodes, n.detail);
                if (outcomes[i].removed) {
                    g.remove_edge(level_edges[i].a, level_edges[i].b);
                    res.sepsets.record(level_edges[i].a, level_edges[i].b, outcomes[i].sepset);
                }
            }
        }

        // next level is worth running only if some edge still has a big
        // enough candidate pool
        bool more = false;
        for (const Edge& e : g.edges()) {
            const int sx = static_cast<int>(g.degree(e.a)) - 1;
            const int sy = static_cast<int>(g.degree(e.b)) - 1;
            if ((cfg.single_sided ? sy : std::max(sx, sy)) >= d + 1) {
                more = true;
                break;
            }
        }
        if (!more) break;
    }
    return res;
}

// Orients every undirected edge between different tiers from the earlier
// tier to the later one and enforces required pairs. Fails on an existing
// directed edge that contradicts the knowledge.
inline PartialDag apply_tiers(PartialDag g, const PriorKnowledge& k,
                              OrientationLog* log = nullptr) {
    k.validate();
    if (k.empty()) return g;

    for (const Edge& e : g.edges()) {
        if (e.directed && !k.allows(e.a, e.b))
            throw KnowledgeConflictError("directed edge " + std::to_string(e.a) + "->" +
                                         std::to_string(e.b) + " contradicts prior knowledge");
    }

    for (const Edge& e : g.edges()) {
        if (e.directed) continue;
        int from = e.a, to = e.b;
        const auto ta = k.tier_of(e.a), tb = k.tier_of(e.b);
        bool orient = false;
        std::string rule = "tier";
        if (k.required().count({e.a, e.b})) {
            orient = true;
            rule = "required";
        } else if (k.required().count({e.b, e.a})) {
            from = e.b;
            to = e.a;
            orient = true;
            rule = "required";
        } else if (ta && tb && *ta != *tb) {
            if (*ta > *tb) std::swap(from, to);
            orient = true;
        }
        if (!orient) continue;
        if (!k.allows(from, to)) {
            if (log) log->add(rule, false, {from, to}, "blocked by forbidden pair");
            continue;
        }
        detail::try_orient(g, from, to, rule.c_str(), nullptr, log);
    }
    return g;
}

// For every unshielded triple (x, z, y) with z outside the recorded
// separating set of {x, y}, orients x -> z <- y. A collider whose arm would
// reverse an existing directed edge or violate the knowledge is skipped and
// logged; first feasible triple in lexicographic order wins.
inline PartialDag orient_colliders(PartialDag g, const SepsetMap& sepsets,
                                   const PriorKnowledge& k = {}, OrientationLog* log = nullptr) {
    for (const auto& [x, z, y] : g.unshielded_triples()) {
        if (!sepsets.contains(x, y)) continue;  // pair was never separated by a test
        if (sepsets.separator_contains(x, y, z)) continue;

        auto arm_feasible = [&](int a) {
            if (g.has_directed(a, z)) return true;  // already points at z
            if (!g.has_undirected(a, z)) return false;
            return k.allows(a, z) && !g.directed_path(z, a);
        };
        if (arm_feasible(x) && arm_feasible(y)) {
            if (g.has_undirected(x, z)) g.orient(x, z);
            if (g.has_undirected(y, z)) g.orient(y, z);
            if (log) log->add("collider", true, {x, z, y});
        } else if (log) {
            log->add("collider", false, {x, z, y},
                     "arm already oriented away or blocked by prior knowledge");
        }
    }
    return g;
}

// Closes the graph under the four orientation rules, never contradicting
// the prior knowledge.
inline PartialDag apply_orientation_rules(PartialDag g, const PriorKnowledge& k = {},
                                          OrientationLog* log = nullptr) {
    if (k.empty()) {
        meek_closure(g, nullptr, log);
        return g;
    }
    const OrientationGate gate = [&k](int a, int b, const char*) { return k.allows(a, b); };
    meek_closure(g, &gate, log);
    return g;
}

struct PcResult {
    PartialDag graph;
    SepsetMap sepsets;
    OrientationLog log;
};

// The full constraint-based search: skeleton, temporal orientation,
// collider detection, rule closure. Deterministic for fixed inputs.
inline PcResult pc(const IndependenceTest& test, const PcConfig& cfg,
                   const PriorKnowledge& k = {}, std::vector<std::string> labels = {}) {
    PcResult res;
    SkeletonResult skel = learn_skeleton(test, cfg, &res.log, std::move(labels));
    res.sepsets = std::move(skel.sepsets);
    PartialDag g = apply_tiers(std::move(skel.graph), k, &res.log);
    g = orient_colliders(std::move(g), res.sepsets, k, &res.log);
    res.graph = apply_orientation_rules(std::move(g), k, &res.log);
    return res;
}

inline PcResult pc(const CorrelationMatrix& corr, const PcConfig& cfg,
                   const PriorKnowledge& k = {}, std::vector<std::string> labels = {}) {
    return pc(FisherZTest(corr, cfg.alpha, cfg.soe), cfg, k, std::move(labels));
}

inline PcResult pc(const Dataset& data, const PcConfig& cfg, const PriorKnowledge& k = {}) {
    return pc(correlation_matrix(data), cfg, k, data.names());
}

// Maximally oriented pattern of a DAG under optional knowledge: skeleton
// plus the DAG's own colliders, temporal orientations, and rule closure.
inline PartialDag maximal_pattern(const PartialDag& dag, const PriorKnowledge& k = {}) {
    if (!dag.fully_directed() || !dag.directed_acyclic())
        throw ValidationError("maximal_pattern: needs a fully directed acyclic graph");
    PartialDag pat = dag.skeleton();
    for (const auto& [x, z, y] : dag.unshielded_colliders()) {
        if (pat.has_undirected(x, z)) pat.orient(x, z);
        if (pat.has_undirected(y, z)) pat.orient(y, z);
    }
    pat = apply_tiers(std::move(pat), k);
    return apply_orientation_rules(std::move(pat), k);
}

}  // namespace causeway
