#pragma once

// Test-only oracles and generators. Everything here is intentionally
// independent of the library implementation paths it is used to check:
// brute-force enumeration, textbook formulas, and a separate linear solver.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "causeway/causeway.hpp"

namespace testutil {

using causeway::Dataset;
using causeway::GaussianBN;
using causeway::PartialDag;
using causeway::PriorKnowledge;

// ---------------------------------------------------------------- pearson

inline double oracle_pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// --------------------------------------------------- cholesky least squares

// Solves (X'X) beta = X'y via Cholesky; design matrix is [1, cols...].
inline std::vector<double> oracle_ols(const std::vector<const std::vector<double>*>& cols,
                                      const std::vector<double>& y) {
    const std::size_t p = cols.size() + 1;
    const std::size_t n = y.size();
    std::vector<std::vector<double>> xtx(p, std::vector<double>(p, 0.0));
    std::vector<double> xty(p, 0.0);
    auto xat = [&](std::size_t r, std::size_t c) -> double {
        return c == 0 ? 1.0 : (*cols[c - 1])[r];
    };
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < p; ++i) {
            xty[i] += xat(r, i) * y[r];
            for (std::size_t j = i; j < p; ++j) xtx[i][j] += xat(r, i) * xat(r, j);
        }
    }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < i; ++j) xtx[i][j] = xtx[j][i];

    // Cholesky factorization xtx = L L'
    std::vector<std::vector<double>> l(p, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = xtx[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j)
                l[i][i] = std::sqrt(s);
            else
                l[i][j] = s / l[j][j];
        }
    }
    // forward then backward substitution
    std::vector<double> z(p, 0.0), beta(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        double s = xty[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i][k] * z[k];
        z[i] = s / l[i][i];
    }
    for (std::size_t i = p; i-- > 0;) {
        double s = z[i];
        for (std::size_t k = i + 1; k < p; ++k) s -= l[k][i] * beta[k];
        beta[i] = s / l[i][i];
    }
    return beta;
}

inline std::vector<double> oracle_residuals(const Dataset& data, int target,
                                            const std::vector<int>& regressors) {
    std::vector<const std::vector<double>*> cols;
    for (int r : regressors) cols.push_back(&data.column(r));
    const auto& y = data.column(target);
    const auto beta = oracle_ols(cols, y);
    std::vector<double> res(y.size());
    for (std::size_t r = 0; r < y.size(); ++r) {
        double pred = beta[0];
        for (std::size_t c = 0; c < cols.size(); ++c) pred += beta[c + 1] * (*cols[c])[r];
        res[r] = y[r] - pred;
    }
    return res;
}

// Partial correlation as the correlation of regression residuals.
inline double oracle_partial_correlation(const Dataset& data, int i, int j,
                                         const std::vector<int>& s) {
    if (s.empty()) return oracle_pearson(data.column(i), data.column(j));
    return oracle_pearson(oracle_residuals(data, i, s), oracle_residuals(data, j, s));
}

// ------------------------------------------------------------ path oracle

// d-connection by exhaustive enumeration of simple undirected paths:
// a path connects given z iff every collider on it is in z or has a
// descendant in z, and no non-collider is in z.
inline bool oracle_d_connected(const PartialDag& g, int x, int y, const std::vector<int>& z) {
    const int n = g.node_count();
    std::vector<char> in_z(n, 0);
    for (int v : z) in_z[v] = 1;

    std::vector<std::set<int>> descendants(n);
    for (int v = 0; v < n; ++v) {
        std::vector<int> stack{v};
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            if (!descendants[v].insert(u).second) continue;
            for (int c : g.children(u)) stack.push_back(c);
        }
    }
    auto has_descendant_in_z = [&](int v) {
        for (int d : descendants[v])
            if (in_z[d]) return true;
        return false;
    };

    std::vector<int> path{x};
    std::vector<char> used(n, 0);
    used[x] = 1;

    std::function<bool()> extend = [&]() -> bool {
        const int tail = path.back();
        if (tail == y) {
            for (std::size_t k = 1; k + 1 < path.size(); ++k) {
                const int prev = path[k - 1], v = path[k], next = path[k + 1];
                const bool collider = g.has_directed(prev, v) && g.has_directed(next, v);
                if (collider) {
                    if (!in_z[v] && !has_descendant_in_z(v)) return false;
                } else {
                    if (in_z[v]) return false;
                }
            }
            return true;
        }
        for (int nb : g.neighbors(tail)) {
            if (used[nb]) continue;
            used[nb] = 1;
            path.push_back(nb);
            if (extend()) {
                path.pop_back();
                used[nb] = 0;
                return true;
            }
            path.pop_back();
            used[nb] = 0;
        }
        return false;
    };
    return extend();
}

// ------------------------------------------------- extension enumeration

// All fully directed graphs with g's skeleton that keep g's directed edges,
// create no new unshielded collider, respect the optional knowledge, and
// are acyclic.
inline std::vector<PartialDag> oracle_consistent_extensions(const PartialDag& g,
                                                            const PriorKnowledge* k = nullptr) {
    std::vector<causeway::Edge> undirected;
    for (const auto& e : g.edges())
        if (!e.directed) undirected.push_back(e);
    const auto colliders0 = g.unshielded_colliders();

    std::vector<PartialDag> out;
    const std::size_t m = undirected.size();
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        PartialDag h = g;
        for (std::size_t i = 0; i < m; ++i) {
            int from = undirected[i].a, to = undirected[i].b;
            if (mask & (1ull << i)) std::swap(from, to);
            h.orient(from, to);
        }
        if (!h.directed_acyclic()) continue;
        if (h.unshielded_colliders() != colliders0) continue;
        if (k) {
            bool ok = true;
            for (const auto& e : h.edges())
                if (!k->allows(e.a, e.b)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
        }
        out.push_back(std::move(h));
    }
    return out;
}

// Maximally oriented pattern of a DAG by brute force: intersect edge
// directions over every acyclic orientation of the skeleton that has the
// same unshielded colliders (and satisfies the knowledge, when given).
inline PartialDag oracle_pattern(const PartialDag& dag, const PriorKnowledge* k = nullptr) {
    PartialDag skel = dag.skeleton();
    // transplant the collider set of the dag onto the skeleton enumeration
    std::vector<PartialDag> members;
    {
        std::vector<causeway::Edge> edges = skel.edges();
        const auto colliders0 = dag.unshielded_colliders();
        const std::size_t m = edges.size();
        for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
            PartialDag h = skel;
            for (std::size_t i = 0; i < m; ++i) {
                int from = edges[i].a, to = edges[i].b;
                if (mask & (1ull << i)) std::swap(from, to);
                h.orient(from, to);
            }
            if (!h.directed_acyclic()) continue;
            if (h.unshielded_colliders() != colliders0) continue;
            if (k) {
                bool ok = true;
                for (const auto& e : h.edges())
                    if (!k->allows(e.a, e.b)) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
            }
            members.push_back(std::move(h));
        }
    }
    PartialDag pattern = skel;
    for (const auto& e : skel.edges()) {
        bool all_fwd = true, all_bwd = true;
        for (const auto& mbr : members) {
            if (mbr.has_directed(e.a, e.b)) all_bwd = false;
            if (mbr.has_directed(e.b, e.a)) all_fwd = false;
        }
        if (all_fwd && !all_bwd)
            pattern.orient(e.a, e.b);
        else if (all_bwd && !all_fwd)
            pattern.orient(e.b, e.a);
    }
    return pattern;
}

// ----------------------------------------------------------- score oracle

struct OracleScore {
    std::size_t matched_undirected = 0;
    std::size_t matched_oriented = 0;
};

// Counts by scanning every node pair against the definitional predicates.
inline OracleScore oracle_score(const PartialDag& learned, const PartialDag& truth) {
    OracleScore s;
    const int n = learned.node_count();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i < j && learned.adjacent(i, j) && truth.adjacent(i, j)) ++s.matched_undirected;
            if (i != j && learned.has_directed(i, j) && truth.has_directed(i, j))
                ++s.matched_oriented;
        }
    return s;
}

// --------------------------------------------------------------- generators

// Random DAG: edges only from lower to higher rank in a shuffled node
// order, so acyclicity is free.
inline PartialDag random_dag(int n, double edge_prob, std::mt19937_64& rng) {
    PartialDag g(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < edge_prob) g.add_directed(order[i], order[j]);
    return g;
}

// Random DAG whose edges respect a tier layout: within-tier edges follow
// index order, cross-tier edges point from earlier to later tiers.
inline PartialDag random_tiered_dag(const std::vector<int>& tiers, double edge_prob,
                                    std::mt19937_64& rng) {
    const int n = static_cast<int>(tiers.size());
    PartialDag g(n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const bool forward = tiers[i] < tiers[j] || (tiers[i] == tiers[j] && i < j);
            if (!forward) continue;
            if (u(rng) < edge_prob) g.add_directed(i, j);
        }
    return g;
}

inline GaussianBN random_gaussian_bn(const PartialDag& dag, double coeff_lo, double coeff_hi,
                                     double noise_lo, double noise_hi, std::mt19937_64& rng) {
    GaussianBN bn;
    bn.dag = dag;
    bn.nodes.resize(dag.node_count());
    std::uniform_real_distribution<double> coeff(coeff_lo, coeff_hi);
    std::uniform_real_distribution<double> noise(noise_lo, noise_hi);
    std::bernoulli_distribution sign(0.5);
    for (int v = 0; v < dag.node_count(); ++v) {
        auto& node = bn.nodes[v];
        node.parents.assign(dag.parents(v).begin(), dag.parents(v).end());
        for (std::size_t a = 0; a < node.parents.size(); ++a)
            node.coefficients.push_back((sign(rng) ? 1.0 : -1.0) * coeff(rng));
        node.intercept = 0.0;
        node.noise_std = noise(rng);
    }
    return bn;
}

inline Dataset random_dataset(std::size_t rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<std::vector<double>> data(cols);
    std::vector<std::string> names;
    for (int c = 0; c < cols; ++c) {
        names.push_back("f" + std::to_string(c));
        data[c].resize(rows);
        for (std::size_t r = 0; r < rows; ++r) data[c][r] = n01(rng);
    }
    return Dataset(names, data);
}

// Dataset with linear structure among columns, for well-behaved partial
// correlation instances.
inline Dataset random_linear_dataset(std::size_t rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> coeff(0.2, 0.9);
    std::bernoulli_distribution pick(0.4), sign(0.5);
    std::vector<std::vector<double>> data(cols);
    std::vector<std::string> names;
    for (int c = 0; c < cols; ++c) {
        names.push_back("f" + std::to_string(c));
        data[c].resize(rows);
        for (std::size_t r = 0; r < rows; ++r) data[c][r] = n01(rng);
        for (int p = 0; p < c; ++p) {
            if (!pick(rng)) continue;
            const double b = (sign(rng) ? 1.0 : -1.0) * coeff(rng);
            for (std::size_t r = 0; r < rows; ++r) data[c][r] += b * data[p][r];
        }
    }
    return Dataset(names, data);
}

inline int count_all_dags(int n) {
    // reference counts for labeled DAGs; used as a sanity check in tests
    static const int counts[] = {1, 1, 3, 25, 543, 29281};
    return counts[n];
}

// Enumerates every labeled DAG on n nodes (n <= 5 is practical) and calls
// fn on each.
template <typename Fn>
void for_each_dag(int n, Fn&& fn) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    const std::size_t m = pairs.size();
    std::vector<int> state(m, 0);  // 0: none, 1: i->j, 2: j->i
    for (;;) {
        PartialDag g(n);
        for (std::size_t e = 0; e < m; ++e) {
            if (state[e] == 1) g.add_directed(pairs[e].first, pairs[e].second);
            if (state[e] == 2) g.add_directed(pairs[e].second, pairs[e].first);
        }
        if (g.directed_acyclic()) fn(g);
        std::size_t e = 0;
        while (e < m && state[e] == 2) state[e++] = 0;
        if (e == m) break;
        ++state[e];
    }
}

}  // namespace testutil
