#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "causeway/citest.hpp"
#include "causeway/dataset.hpp"
#include "causeway/error.hpp"

namespace causeway {

// Symmetric dissimilarity matrix with zero diagonal.
class DistanceMatrix {
public:
    explicit DistanceMatrix(int dim) : dim_(dim), v_(static_cast<std::size_t>(dim) * dim, 0.0) {
        if (dim <= 0) throw ValidationError("distance matrix: dim must be positive");
    }

    static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        const int n = static_cast<int>(rows.size());
        DistanceMatrix d(n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n)
                throw ValidationError("distance matrix: not square");
            for (int j = 0; j < n; ++j) d.v_[static_cast<std::size_t>(i) * n + j] = rows[i][j];
        }
        d.validate();
        return d;
    }

    int dim() const { return dim_; }

    double at(int i, int j) const { return v_[static_cast<std::size_t>(i) * dim_ + j]; }

    void set(int i, int j, double d) {
        v_[static_cast<std::size_t>(i) * dim_ + j] = d;
        v_[static_cast<std::size_t>(j) * dim_ + i] = d;
    }

    void validate() const {
        for (int i = 0; i < dim_; ++i) {
            if (at(i, i) != 0.0) throw ValidationError("distance matrix: nonzero diagonal");
            for (int j = i + 1; j < dim_; ++j) {
                if (at(i, j) != at(j, i)) throw ValidationError("distance matrix: not symmetric");
                if (at(i, j) < 0.0) throw ValidationError("distance matrix: negative entry");
            }
        }
    }

private:
    int dim_;
    std::vector<double> v_;
};

// d(X, Y) = 1 - |correlation(X, Y)|
inline DistanceMatrix correlation_distance(const CorrelationMatrix& c) {
    DistanceMatrix d(c.dim());
    for (int i = 0; i < c.dim(); ++i)
        for (int j = i + 1; j < c.dim(); ++j) d.set(i, j, 1.0 - std::fabs(c.at(i, j)));
    return d;
}

enum class Linkage { Complete, Average, Median, Centroid, Ward };

inline Linkage linkage_from_name(const std::string& name) {
    if (name == "complete" || name == "maximum") return Linkage::Complete;
    if (name == "average") return Linkage::Average;
    if (name == "median") return Linkage::Median;
    if (name == "centroid") return Linkage::Centroid;
    if (name == "ward") return Linkage::Ward;
    throw ValidationError("unknown linkage: " + name);
}

inline const char* linkage_name(Linkage l) {
    switch (l) {
        case Linkage::Complete: return "complete";
        case Linkage::Average: return "average";
        case Linkage::Median: return "median";
        case Linkage::Centroid: return "centroid";
        case Linkage::Ward: return "ward";
    }
    return "?";
}

struct Merge {
    int a;  // cluster ids: leaves 0..n-1, merge i creates cluster n+i
    int b;
    double height;
};

struct Dendrogram {
    int leaf_count = 0;
    std::vector<Merge> merges;      // length leaf_count - 1
    std::vector<int> leaf_order;    // left-to-right traversal of the tree
};

// Agglomerative clustering via the Lance-Williams update. Complete
// (maximum) linkage is the default throughout the toolkit; median,
// centroid and ward apply the textbook recurrences to the dissimilarities
// as given, which for those three conventionally means squared distances.
inline Dendrogram hierarchical_cluster(const DistanceMatrix& input,
                                       Linkage linkage = Linkage::Complete) {
    input.validate();
    const int n = input.dim();
    Dendrogram out;
    out.leaf_count = n;
    if (n == 1) {
        out.leaf_order = {0};
        return out;
    }

    // working copy; `size` and `id` track active clusters
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = input.at(i, j);
    std::vector<double> size(n, 1.0);
    std::vector<int> id(n);
    std::vector<char> active(n, 1);
    for (int i = 0; i < n; ++i) id[i] = i;

    std::vector<std::vector<int>> children(n);  // per slot, for leaf order

    for (int step = 0; step < n - 1; ++step) {
        int bi = -1, bj = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                const double dij = d[i][j];
                if (bi < 0 || dij < best ||
                    (dij == best && std::minmax(id[i], id[j]) < std::minmax(id[bi], id[bj]))) {
                    best = dij;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi < 0) throw ValidationError("hierarchical_cluster: no mergeable pair");

        const double ni = size[bi], nj = size[bj], dij = d[bi][bj];
        for (int k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            const double dki = d[k][bi], dkj = d[k][bj], nk = size[k];
            double nd = 0.0;
            switch (linkage) {
                case Linkage::Complete: nd = std::max(dki, dkj); break;
                case Linkage::Average: nd = (ni * dki + nj * dkj) / (ni + nj); break;
                case Linkage::Median: nd = 0.5 * dki + 0.5 * dkj - 0.25 * dij; break;
                case Linkage::Centroid:
                    nd = (ni * dki + nj * dkj) / (ni + nj) - ni * nj * dij / ((ni + nj) * (ni + nj));
                    break;
                case Linkage::Ward:
                    nd = ((nk + ni) * dki + (nk + nj) * dkj - nk * dij) / (ni + nj + nk);
                    break;
            }
            d[k][bi] = d[bi][k] = nd;
        }

        out.merges.push_back({std::min(id[bi], id[bj]), std::max(id[bi], id[bj]), dij});
        // merged cluster lives on in slot bi
        auto order_of = [&](int slot) {
            return children[slot].empty() ? std::vector<int>{slot} : children[slot];
        };
        std::vector<int> merged_order = order_of(bi);
        const auto right = order_of(bj);
        merged_order.insert(merged_order.end(), right.begin(), right.end());
        children[bi] = std::move(merged_order);

        size[bi] = ni + nj;
        id[bi] = n + step;
        active[bj] = 0;
    }

    for (int i = 0; i < n; ++i)
        if (active[i]) out.leaf_order = children[i].empty() ? std::vector<int>{i} : children[i];
    return out;
}

// Cluster assignment plus (optionally) the representative feature per
// cluster. Cluster ids are dense, ordered by smallest member index.
struct Clustering {
    std::vector<int> assignment;  // node index -> cluster id
    std::vector<int> medoids;     // cluster id -> node index; empty until selected

    int cluster_count() const {
        int k = 0;
        for (int c : assignment) k = std::max(k, c + 1);
        return k;
    }

    std::vector<std::vector<int>> members() const {
        std::vector<std::vector<int>> m(cluster_count());
        for (std::size_t v = 0; v < assignment.size(); ++v) m[assignment[v]].push_back(static_cast<int>(v));
        return m;
    }
};

// Exactly k clusters obtained by undoing the last k-1 merges.
inline Clustering cut_tree(const Dendrogram& t, int k) {
    const int n = t.leaf_count;
    if (k < 1 || k > n) throw ValidationError("cut_tree: k out of range [1, " +
                                              std::to_string(n) + "]");
    // union-find over the first n-k merges
    std::vector<int> parent(n + t.merges.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (int step = 0; step < n - k; ++step) {
        const Merge& m = t.merges[step];
        const int target = n + step;
        parent[find(m.a)] = target;
        parent[find(m.b)] = target;
    }

    // dense ids ordered by smallest member
    std::vector<int> root_to_id(parent.size(), -1);
    Clustering cl;
    cl.assignment.assign(n, -1);
    int next = 0;
    for (int v = 0; v < n; ++v) {
        const int r = find(v);
        if (root_to_id[r] < 0) root_to_id[r] = next++;
        cl.assignment[v] = root_to_id[r];
    }
    return cl;
}

// Medoid of a cluster: the member with maximum mean |correlation| to all
// other members; ties go to the smallest index, singletons to themselves.
inline Clustering select_medoids(Clustering cl, const CorrelationMatrix& c) {
    const auto groups = cl.members();
    cl.medoids.assign(groups.size(), -1);
    for (std::size_t cid = 0; cid < groups.size(); ++cid) {
        const auto& g = groups[cid];
        if (g.empty()) throw ValidationError("select_medoids: empty cluster");
        int best = g[0];
        double best_score = -1.0;
        for (int v : g) {
            double s = 0.0;
            for (int w : g)
                if (w != v) s += std::fabs(c.at(v, w));
            const double score = g.size() > 1 ? s / static_cast<double>(g.size() - 1) : 1.0;
            if (score > best_score) {
                best_score = score;
                best = v;
            }
        }
        cl.medoids[cid] = best;
    }
    return cl;
}

struct ClusterDiagnostics {
    int cluster_count = 0;
    // mean pairwise |correlation| inside each cluster; a singleton counts 1.0
    double min_within_correlation = 0.0;
    double max_within_correlation = 0.0;
    double mean_within_correlation = 0.0;
    std::size_t min_size = 0;
    std::size_t max_size = 0;
    double mean_size = 0.0;
};

inline ClusterDiagnostics cluster_diagnostics(const Clustering& cl, const CorrelationMatrix& c) {
    const auto groups = cl.members();
    if (groups.empty()) throw ValidationError("cluster_diagnostics: empty clustering");
    ClusterDiagnostics out;
    out.cluster_count = static_cast<int>(groups.size());
    out.min_within_correlation = std::numeric_limits<double>::infinity();
    out.min_size = std::numeric_limits<std::size_t>::max();
    double corr_sum = 0.0;
    std::size_t size_sum = 0;
    for (const auto& g : groups) {
        double within = 1.0;
        if (g.size() > 1) {
            double s = 0.0;
            std::size_t pairs = 0;
            for (std::size_t i = 0; i < g.size(); ++i)
                for (std::size_t j = i + 1; j < g.size(); ++j) {
                    s += std::fabs(c.at(g[i], g[j]));
                    ++pairs;
                }
            within = s / static_cast<double>(pairs);
        }
        corr_sum += within;
        size_sum += g.size();
        out.min_within_correlation = std::min(out.min_within_correlation, within);
        out.max_within_correlation = std::max(out.max_within_correlation, within);
        out.min_size = std::min(out.min_size, g.size());
        out.max_size = std::max(out.max_size, g.size());
    }
    out.mean_within_correlation = corr_sum / static_cast<double>(groups.size());
    out.mean_size = static_cast<double>(size_sum) / static_cast<double>(groups.size());
    return out;
}

// Restricts the dataset to medoid columns (ascending by column index),
// keeping names and tiers.
inline Dataset reduce_dataset(const Dataset& data, const Clustering& cl) {
    if (cl.medoids.empty()) throw ValidationError("reduce_dataset: medoids not selected");
    if (cl.assignment.size() != data.col_count())
        throw ValidationError("reduce_dataset: clustering does not match dataset");
    std::vector<int> keep = cl.medoids;
    std::sort(keep.begin(), keep.end());
    Dataset out = data.select_columns(keep);
    out.provenance().note("reduced to " + std::to_string(keep.size()) + " medoid columns of " +
                          std::to_string(data.col_count()));
    return out;
}

// Two-column table (feature name, cluster id) followed by nothing else;
// medoid list is a separate one-column-per-line export.
inline std::string cluster_table(const Clustering& cl, const std::vector<std::string>& names) {
    if (names.size() != cl.assignment.size())
        throw ValidationError("cluster_table: name count mismatch");
    std::string out = "feature\tcluster\n";
    for (std::size_t v = 0; v < names.size(); ++v)
        out += names[v] + "\t" + std::to_string(cl.assignment[v]) + "\n";
    return out;
}

inline std::string medoid_list(const Clustering& cl, const std::vector<std::string>& names) {
    std::string out;
    for (int m : cl.medoids) out += names.at(m) + "\n";
    return out;
}

}  // namespace causeway
