#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causeway/detail/rng.hpp"
#include "causeway/error.hpp"
#include "causeway/orientation_log.hpp"

namespace causeway {

struct Edge {
    int a;
    int b;  // directed: a -> b; undirected: a < b
    bool directed;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Mixed graph over node indices: every unordered pair carries at most one
// edge, undirected or directed. Node identity is the column index; labels
// ride along for export only.
class PartialDag {
public:
    PartialDag() = default;

    explicit PartialDag(int n, std::vector<std::string> labels = {})
        : n_(n), labels_(std::move(labels)), parents_(n), children_(n), undirected_(n) {
        if (n < 0) throw ValidationError("graph: negative node count");
        if (labels_.empty()) {
            labels_.reserve(n);
            for (int i = 0; i < n; ++i) labels_.push_back("v" + std::to_string(i));
        }
        if (static_cast<int>(labels_.size()) != n)
            throw ValidationError("graph: label count != node count");
    }

    static PartialDag complete_undirected(int n, std::vector<std::string> labels = {}) {
        PartialDag g(n, std::move(labels));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) g.add_undirected(i, j);
        return g;
    }

    int node_count() const { return n_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int v) const {
        check(v);
        return labels_[v];
    }

    std::size_t directed_edge_count() const { return directed_count_; }
    std::size_t undirected_edge_count() const { return undirected_count_; }
    std::size_t edge_count() const { return directed_count_ + undirected_count_; }

    bool has_directed(int x, int y) const {
        check(x);
        check(y);
        return children_[x].count(y) > 0;
    }
    bool has_undirected(int x, int y) const {
        check(x);
        check(y);
        return undirected_[x].count(y) > 0;
    }
    bool adjacent(int x, int y) const {
        return has_undirected(x, y) || has_directed(x, y) || has_directed(y, x);
    }

    const std::set<int>& parents(int v) const {
        check(v);
        return parents_[v];
    }
    const std::set<int>& children(int v) const {
        check(v);
        return children_[v];
    }
    const std::set<int>& undirected_neighbors(int v) const {
        check(v);
        return undirected_[v];
    }

    // All nodes connected to v by any edge, ascending.
    std::vector<int> neighbors(int v) const {
        check(v);
        std::set<int> all(undirected_[v].begin(), undirected_[v].end());
        all.insert(parents_[v].begin(), parents_[v].end());
        all.insert(children_[v].begin(), children_[v].end());
        return {all.begin(), all.end()};
    }

    std::size_t degree(int v) const {
        check(v);
        return undirected_[v].size() + parents_[v].size() + children_[v].size();
    }

    void add_undirected(int x, int y) {
        check_new_edge(x, y);
        undirected_[x].insert(y);
        undirected_[y].insert(x);
        ++undirected_count_;
    }

    void add_directed(int x, int y) {
        check_new_edge(x, y);
        children_[x].insert(y);
        parents_[y].insert(x);
        ++directed_count_;
    }

    void remove_edge(int x, int y) {
        check(x);
        check(y);
        if (undirected_[x].erase(y)) {
            undirected_[y].erase(x);
            --undirected_count_;
        } else if (children_[x].erase(y)) {
            parents_[y].erase(x);
            --directed_count_;
        } else if (children_[y].erase(x)) {
            parents_[x].erase(y);
            --directed_count_;
        } else {
            throw ValidationError("remove_edge: no such edge");
        }
    }

    // Turns the undirected edge x - y into x -> y.
    void orient(int x, int y) {
        check(x);
        check(y);
        if (!has_undirected(x, y)) throw ValidationError("orient: edge not undirected");
        undirected_[x].erase(y);
        undirected_[y].erase(x);
        --undirected_count_;
        children_[x].insert(y);
        parents_[y].insert(x);
        ++directed_count_;
    }

    bool fully_directed() const { return undirected_count_ == 0; }

    // Would adding x -> y close a directed cycle?
    bool directed_path(int from, int to) const {
        check(from);
        check(to);
        std::vector<char> seen(n_, 0);
        std::vector<int> stack{from};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            if (v == to) return true;
            if (seen[v]) continue;
            seen[v] = 1;
            for (int c : children_[v]) stack.push_back(c);
        }
        return false;
    }

    bool directed_acyclic() const {
        std::vector<int> indeg(n_, 0);
        for (int v = 0; v < n_; ++v) indeg[v] = static_cast<int>(parents_[v].size());
        std::vector<int> ready;
        for (int v = 0; v < n_; ++v)
            if (indeg[v] == 0) ready.push_back(v);
        int seen = 0;
        while (!ready.empty()) {
            const int v = ready.back();
            ready.pop_back();
            ++seen;
            for (int c : children_[v])
                if (--indeg[c] == 0) ready.push_back(c);
        }
        return seen == n_;
    }

    // Kahn order with smallest-index tie break; requires a DAG over the
    // directed edges (undirected edges are ignored).
    std::vector<int> topological_order() const {
        std::vector<int> indeg(n_, 0);
        for (int v = 0; v < n_; ++v) indeg[v] = static_cast<int>(parents_[v].size());
        std::set<int> ready;
        for (int v = 0; v < n_; ++v)
            if (indeg[v] == 0) ready.insert(v);
        std::vector<int> order;
        order.reserve(n_);
        while (!ready.empty()) {
            const int v = *ready.begin();
            ready.erase(ready.begin());
            order.push_back(v);
            for (int c : children_[v])
                if (--indeg[c] == 0) ready.insert(c);
        }
        if (static_cast<int>(order.size()) != n_)
            throw ValidationError("topological_order: directed subgraph has a cycle");
        return order;
    }

    // Canonical listing: ascending by unordered pair.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edge_count());
        for (int i = 0; i < n_; ++i) {
            for (int j : undirected_[i])
                if (i < j) out.push_back({i, j, false});
            for (int j : children_[i]) out.push_back({i, j, true});
        }
        std::sort(out.begin(), out.end(), [](const Edge& l, const Edge& r) {
            const auto lk = std::minmax(l.a, l.b);
            const auto rk = std::minmax(r.a, r.b);
            return lk < rk;
        });
        return out;
    }

    PartialDag skeleton() const {
        PartialDag g(n_, labels_);
        for (const Edge& e : edges()) g.add_undirected(std::min(e.a, e.b), std::max(e.a, e.b));
        return g;
    }

    // All (x, z, y) with x - z - y adjacent, x and y not adjacent, x < y.
    std::vector<std::array<int, 3>> unshielded_triples() const {
        std::vector<std::array<int, 3>> out;
        for (int z = 0; z < n_; ++z) {
            const std::vector<int> nb = neighbors(z);
            for (std::size_t i = 0; i < nb.size(); ++i)
                for (std::size_t j = i + 1; j < nb.size(); ++j)
                    if (!adjacent(nb[i], nb[j])) out.push_back({nb[i], z, nb[j]});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Unshielded x -> z <- y with x < y.
    std::vector<std::array<int, 3>> unshielded_colliders() const {
        std::vector<std::array<int, 3>> out;
        for (const auto& [x, z, y] : unshielded_triples())
            if (has_directed(x, z) && has_directed(y, z)) out.push_back({x, z, y});
        return out;
    }

    bool same_skeleton(const PartialDag& o) const {
        if (n_ != o.n_) return false;
        for (int v = 0; v < n_; ++v)
            if (neighbors(v) != o.neighbors(v)) return false;
        return true;
    }

    // Structural equality over node indices; labels are not compared.
    friend bool operator==(const PartialDag& l, const PartialDag& r) {
        return l.n_ == r.n_ && l.parents_ == r.parents_ && l.children_ == r.children_ &&
               l.undirected_ == r.undirected_;
    }

private:
    void check(int v) const {
        if (v < 0 || v >= n_) throw IndexError("node index out of range: " + std::to_string(v));
    }

    void check_new_edge(int x, int y) {
        check(x);
        check(y);
        if (x == y) throw ValidationError("self-loops are not allowed");
        if (adjacent(x, y)) throw ValidationError("pair already has an edge");
    }

    int n_ = 0;
    std::vector<std::string> labels_;
    std::vector<std::set<int>> parents_, children_, undirected_;
    std::size_t directed_count_ = 0, undirected_count_ = 0;
};

// Separating sets recorded during skeleton search, keyed by unordered pair.
class SepsetMap {
public:
    bool contains(int x, int y) const { return m_.count(key(x, y)) > 0; }

    const std::vector<int>* find(int x, int y) const {
        const auto it = m_.find(key(x, y));
        return it == m_.end() ? nullptr : &it->second;
    }

    void record(int x, int y, std::vector<int> sepset) {
        for (int v : sepset)
            if (v == x || v == y)
                throw ValidationError("sepset must not contain its own endpoints");
        std::sort(sepset.begin(), sepset.end());
        m_[key(x, y)] = std::move(sepset);
    }

    bool separator_contains(int x, int y, int z) const {
        const auto* s = find(x, y);
        if (!s) return false;
        return std::binary_search(s->begin(), s->end(), z);
    }

    std::size_t size() const { return m_.size(); }
    auto begin() const { return m_.begin(); }
    auto end() const { return m_.end(); }

private:
    static std::pair<int, int> key(int x, int y) { return {std::min(x, y), std::max(x, y)}; }

    std::map<std::pair<int, int>, std::vector<int>> m_;
};

// True iff no d-connecting path exists between x and y given z. Requires a
// fully directed graph; runs the two-phase reachability scheme (ancestors
// of z, then a BFS over (node, arrival-direction) states).
inline bool d_separated(const PartialDag& g, int x, int y, const std::vector<int>& z) {
    if (!g.fully_directed())
        throw ValidationError("d_separated: graph contains undirected edges");
    if (x == y) throw ValidationError("d_separated: x == y");
    const int n = g.node_count();
    std::vector<char> in_z(n, 0);
    for (int v : z) {
        if (v == x || v == y) throw ValidationError("d_separated: x or y inside z");
        in_z.at(v) = 1;
    }

    // ancestors of z, z included
    std::vector<char> anc(n, 0);
    std::vector<int> stack(z.begin(), z.end());
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (anc[v]) continue;
        anc[v] = 1;
        for (int p : g.parents(v)) stack.push_back(p);
    }

    // state: node + how the trail arrived (kUp: from a child, kDown: from a parent)
    constexpr int kUp = 0, kDown = 1;
    std::vector<std::array<char, 2>> visited(n, {0, 0});
    std::vector<std::pair<int, int>> todo{{x, kUp}};
    while (!todo.empty()) {
        const auto [v, dir] = todo.back();
        todo.pop_back();
        if (visited[v][dir]) continue;
        visited[v][dir] = 1;
        if (!in_z[v] && v == y) return false;
        if (dir == kUp && !in_z[v]) {
            for (int p : g.parents(v)) todo.push_back({p, kUp});
            for (int c : g.children(v)) todo.push_back({c, kDown});
        } else if (dir == kDown) {
            if (!in_z[v])
                for (int c : g.children(v)) todo.push_back({c, kDown});
            if (anc[v])
                for (int p : g.parents(v)) todo.push_back({p, kUp});
        }
    }
    return true;
}

// Orientation gate: may rule `rule` orient a -> b right now?
using OrientationGate = std::function<bool(int a, int b, const char* rule)>;

namespace detail {

inline bool try_orient(PartialDag& g, int a, int b, const char* rule, const OrientationGate* gate,
                       OrientationLog* log) {
    if (!g.has_undirected(a, b)) return false;
    if (gate && !(*gate)(a, b, rule)) {
        if (log) log->add(rule, false, {a, b}, "blocked by prior knowledge");
        return false;
    }
    if (g.directed_path(b, a)) {
        if (log) log->add(rule, false, {a, b}, "would close a directed cycle");
        return false;
    }
    g.orient(a, b);
    if (log) log->add(rule, true, {a, b});
    return true;
}

}  // namespace detail

// One full pass of the four orientation rules (known-non-colliders, cycle
// avoidance, Meek's rules 3 and 4) in lexicographic scan order. Returns
// whether anything was oriented.
inline bool meek_pass(PartialDag& g, const OrientationGate* gate, OrientationLog* log) {
    const int n = g.node_count();
    bool changed = false;

    // R1: a -> b - c, a and c non-adjacent  =>  b -> c
    for (int b = 0; b < n; ++b) {
        for (int a : std::vector<int>(g.parents(b).begin(), g.parents(b).end())) {
            for (int c : std::vector<int>(g.undirected_neighbors(b).begin(),
                                          g.undirected_neighbors(b).end())) {
                if (c == a || g.adjacent(a, c)) continue;
                changed |= detail::try_orient(g, b, c, "R1", gate, log);
            }
        }
    }

    // R2: a -> b -> c with a - c  =>  a -> c
    for (int a = 0; a < n; ++a) {
        for (int c : std::vector<int>(g.undirected_neighbors(a).begin(),
                                      g.undirected_neighbors(a).end())) {
            bool fire = false;
            for (int b : g.children(a)) {
                if (g.has_directed(b, c)) {
                    fire = true;
                    break;
                }
            }
            if (fire) changed |= detail::try_orient(g, a, c, "R2", gate, log);
        }
    }

    // R3: a - b, a - c, a - d, c -> b, d -> b, c and d non-adjacent  =>  a -> b
    for (int a = 0; a < n; ++a) {
        for (int b : std::vector<int>(g.undirected_neighbors(a).begin(),
                                      g.undirected_neighbors(a).end())) {
            std::vector<int> into_b;
            for (int c : g.undirected_neighbors(a))
                if (c != b && g.has_directed(c, b)) into_b.push_back(c);
            bool fire = false;
            for (std::size_t i = 0; i < into_b.size() && !fire; ++i)
                for (std::size_t j = i + 1; j < into_b.size() && !fire; ++j)
                    if (!g.adjacent(into_b[i], into_b[j])) fire = true;
            if (fire) changed |= detail::try_orient(g, a, b, "R3", gate, log);
        }
    }

    // R4: a - b, c -> d -> b, a adjacent to both c and d, b and c
    // non-adjacent  =>  a -> b
    for (int a = 0; a < n; ++a) {
        for (int b : std::vector<int>(g.undirected_neighbors(a).begin(),
                                      g.undirected_neighbors(a).end())) {
            bool fire = false;
            for (int d : g.parents(b)) {
                if (d == a || !g.adjacent(a, d)) continue;
                for (int c : g.parents(d)) {
                    if (c == a || c == b) continue;
                    if (g.adjacent(a, c) && !g.adjacent(b, c)) {
                        fire = true;
                        break;
                    }
                }
                if (fire) break;
            }
            if (fire) changed |= detail::try_orient(g, a, b, "R4", gate, log);
        }
    }

    return changed;
}

inline void meek_closure(PartialDag& g, const OrientationGate* gate = nullptr,
                         OrientationLog* log = nullptr) {
    while (meek_pass(g, gate, log)) {
    }
}

// Fully directed member of g's equivalence class: same skeleton, superset
// of directed edges, identical unshielded colliders, acyclic. One undirected
// edge at a time is oriented by a seeded uniform pick and the result closed
// under the orientation rules; the draw is deterministic per seed but not
// uniform over the class.
inline PartialDag random_consistent_extension(const PartialDag& g, std::uint64_t seed) {
    if (!g.directed_acyclic())
        throw ExtensionError("input's directed subgraph already has a cycle");
    const auto colliders0 = g.unshielded_colliders();
    detail::SequentialRng rng(seed);

    auto valid = [&](const PartialDag& h) {
        return h.directed_acyclic() && h.unshielded_colliders() == colliders0;
    };

    PartialDag h = g;
    while (h.undirected_edge_count() > 0) {
        std::vector<Edge> undirected;
        for (const Edge& e : h.edges())
            if (!e.directed) undirected.push_back(e);
        const Edge pick = undirected[rng.below(undirected.size())];
        int from = pick.a, to = pick.b;
        if (rng.coin()) std::swap(from, to);

        bool placed = false;
        for (int attempt = 0; attempt < 2 && !placed; ++attempt) {
            PartialDag trial = h;
            trial.orient(from, to);
            meek_closure(trial);
            if (valid(trial)) {
                h = std::move(trial);
                placed = true;
            } else {
                std::swap(from, to);
            }
        }
        if (!placed)
            throw ExtensionError("no acyclic, collider-preserving orientation exists for edge " +
                                 std::to_string(pick.a) + "-" + std::to_string(pick.b));
    }
    return h;
}

}  // namespace causeway
