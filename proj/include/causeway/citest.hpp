#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "causeway/dataset.hpp"
#include "causeway/detail/linalg.hpp"
#include "causeway/detail/special_functions.hpp"
#include "causeway/error.hpp"

namespace causeway {

// |r| at or beyond this is clamped before the z-transform; duplicated
// features otherwise send the statistic to infinity.
constexpr double kCorrelationClamp = 1.0 - 1e-12;

// Pivot floor for the conditioning-submatrix inverse.
constexpr double kSingularityPivot = 1e-12;

// Symmetric matrix of pairwise Pearson correlations plus the sample size
// the estimates came from. Immutable after construction.
class CorrelationMatrix {
public:
    CorrelationMatrix(int dim, long sample_size)
        : dim_(dim), n_(sample_size), v_(static_cast<std::size_t>(dim) * dim, 0.0) {
        if (dim <= 0) throw ValidationError("correlation matrix: dim must be positive");
        if (sample_size < 2) throw ValidationError("correlation matrix: sample size must be >= 2");
        for (int i = 0; i < dim; ++i) set(i, i, 1.0);
    }

    int dim() const { return dim_; }
    long sample_size() const { return n_; }

    double at(int i, int j) const {
        check_index(i);
        check_index(j);
        return v_[static_cast<std::size_t>(i) * dim_ + j];
    }

    void set(int i, int j, double r) {
        check_index(i);
        check_index(j);
        v_[static_cast<std::size_t>(i) * dim_ + j] = r;
        v_[static_cast<std::size_t>(j) * dim_ + i] = r;
    }

private:
    void check_index(int i) const {
        if (i < 0 || i >= dim_) throw IndexError("correlation matrix index out of range");
    }

    int dim_;
    long n_;
    std::vector<double> v_;
};

// Sample Pearson correlations of all column pairs, two-pass (means first,
// then centered cross-products). Throws DegenerateColumnError on a
// zero-variance column.
inline CorrelationMatrix correlation_matrix(const Dataset& data) {
    const std::size_t d = data.col_count();
    const std::size_t n = data.row_count();
    if (n < 2) throw ValidationError("correlation_matrix: need at least 2 rows");
    if (d == 0) throw ValidationError("correlation_matrix: empty dataset");

    std::vector<double> means(d);
    for (std::size_t c = 0; c < d; ++c) means[c] = data.mean(c);

    std::vector<double> ss(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        const auto& col = data.column(c);
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double e = col[r] - means[c];
            s += e * e;
        }
        if (s <= 0.0) throw DegenerateColumnError(data.name(c));
        ss[c] = std::sqrt(s);
    }

    CorrelationMatrix out(static_cast<int>(d), static_cast<long>(n));
    for (std::size_t i = 0; i < d; ++i) {
        const auto& ci = data.column(i);
        for (std::size_t j = i + 1; j < d; ++j) {
            const auto& cj = data.column(j);
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += (ci[r] - means[i]) * (cj[r] - means[j]);
            double r = s / (ss[i] * ss[j]);
            r = std::clamp(r, -1.0, 1.0);
            out.set(static_cast<int>(i), static_cast<int>(j), r);
        }
    }
    return out;
}

// Partial correlation of i and j given s, from the inverse of the
// correlation submatrix over {i, j} ∪ s. Empty s returns the plain entry.
// Throws SingularityError when the submatrix inverse hits a tiny pivot.
inline double partial_correlation(const CorrelationMatrix& c, int i, int j,
                               const std::vector<int>& s) {
    if (i == j) throw ValidationError("partial_correlation: i == j");
    for (int v : s)
        if (v == i || v == j) throw ValidationError("partial_correlation: i or j in conditioning set");
    if (static_cast<int>(s.size()) > c.dim() - 2)
        throw ValidationError("partial_correlation: conditioning set too large");
    if (s.empty()) return c.at(i, j);

    std::vector<int> idx;
    idx.reserve(s.size() + 2);
    idx.push_back(i);
    idx.push_back(j);
    std::vector<int> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    idx.insert(idx.end(), sorted.begin(), sorted.end());

    const std::size_t m = idx.size();
    detail::Matrix sub(m, m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) sub.at(a, b) = c.at(idx[a], idx[b]);

    const detail::Matrix p = detail::invert(std::move(sub), kSingularityPivot);
    const double r = -p.at(0, 1) / std::sqrt(p.at(0, 0) * p.at(1, 1));
    return std::clamp(r, -1.0, 1.0);
}

struct FisherZResult {
    bool independent;
    double p_value;
    double statistic;
};

// Fisher z-test of a (partial) correlation r on n samples with |s| = cond_size:
//   z = atanh(r), t = sqrt(n - cond_size - 3) * |z|, p = 2*(1 - Phi(t)).
// Independent iff p > alpha.
inline FisherZResult fisher_z_test(double r, long n, int cond_size, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("fisher_z_test: alpha must be in (0,1)");
    const double dof = static_cast<double>(n) - cond_size - 3.0;
    if (dof <= 0.0)
        throw InsufficientSampleError("fisher_z_test: need n - |S| - 3 > 0, got n = " +
                                      std::to_string(n) + ", |S| = " + std::to_string(cond_size));
    const double rc = std::clamp(r, -kCorrelationClamp, kCorrelationClamp);
    const double z = 0.5 * std::log((1.0 + rc) / (1.0 - rc));
    const double t = std::sqrt(dof) * std::fabs(z);
    const double p = detail::two_sided_normal_p(t);
    return {p > alpha, p, t};
}

// Outcome of one conditional-independence decision.
struct CiDecision {
    bool independent = false;
    double partial_correlation = 0.0;
    double p_value = 1.0;
    bool filtered_by_soe = false;
    // Set when the submatrix inverse failed; the pair is then reported
    // dependent so numerical trouble never deletes an edge.
    bool flagged = false;
};

// Full decision: strength-of-effect cutoff first (r^2 < soe forces
// independence), otherwise the Fisher z verdict. soe = 0 reproduces the
// plain test bit-for-bit.
inline CiDecision cond_independent(const CorrelationMatrix& c, int i, int j,
                                   const std::vector<int>& s, double alpha, double soe) {
    if (soe < 0.0) throw ValidationError("cond_independent: soe must be >= 0");
    CiDecision d;
    d.partial_correlation = partial_correlation(c, i, j, s);
    const bool weak = d.partial_correlation * d.partial_correlation < soe;
    if (weak) {
        d.independent = true;
        d.filtered_by_soe = true;
        const double dof = static_cast<double>(c.sample_size()) - s.size() - 3.0;
        if (dof > 0.0) {
            d.p_value =
                fisher_z_test(d.partial_correlation, c.sample_size(), static_cast<int>(s.size()), alpha)
                    .p_value;
        }
        return d;
    }
    const FisherZResult f =
        fisher_z_test(d.partial_correlation, c.sample_size(), static_cast<int>(s.size()), alpha);
    d.independent = f.independent;
    d.p_value = f.p_value;
    return d;
}

// What the PC search consumes: any oracle or statistical test deciding
// X ⫫ Y | S over variables 0..variable_count()-1. Implementations must be
// safe to call concurrently.
class IndependenceTest {
public:
    virtual ~IndependenceTest() = default;
    virtual int variable_count() const = 0;
    virtual CiDecision test(int i, int j, const std::vector<int>& s) const = 0;
};

// Fisher z-test with strength-of-effect cutoff over a fixed correlation
// matrix. Singular submatrices are reported dependent and flagged rather
// than thrown, per the conservative keep-the-edge policy.
class FisherZTest final : public IndependenceTest {
public:
    FisherZTest(CorrelationMatrix corr, double alpha, double soe)
        : corr_(std::move(corr)), alpha_(alpha), soe_(soe) {
        if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("FisherZTest: alpha must be in (0,1)");
        if (soe < 0.0) throw ValidationError("FisherZTest: soe must be >= 0");
    }

    int variable_count() const override { return corr_.dim(); }

    double alpha() const { return alpha_; }
    double soe() const { return soe_; }

    CiDecision test(int i, int j, const std::vector<int>& s) const override {
        try {
            return cond_independent(corr_, i, j, s, alpha_, soe_);
        } catch (const SingularityError&) {
            CiDecision d;
            d.independent = false;
            d.p_value = 0.0;
            d.flagged = true;
            return d;
        }
    }

private:
    CorrelationMatrix corr_;
    double alpha_;
    double soe_;
};

}  // namespace causeway
