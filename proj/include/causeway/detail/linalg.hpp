#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "causeway/error.hpp"

namespace causeway::detail {

// Dense row-major square/rectangular matrix, just enough for the solvers here.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }

    Matrix multiply(const Matrix& o) const {
        Matrix out(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const double a = at(i, k);
                if (a == 0.0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) out.at(i, j) += a * o.at(k, j);
            }
        return out;
    }

    Matrix transposed() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
        return out;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> v_;
};

// Gauss-Jordan inverse with partial pivoting. A pivot below `pivot_floor`
// raises SingularityError.
inline Matrix invert(Matrix m, double pivot_floor = 1e-12) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw ValidationError("invert: matrix not square");
    Matrix inv = Matrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(m.at(r, col)) > std::fabs(m.at(pivot, col))) pivot = r;
        if (std::fabs(m.at(pivot, col)) < pivot_floor)
            throw SingularityError("matrix numerically singular");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(m.at(pivot, c), m.at(col, c));
                std::swap(inv.at(pivot, c), inv.at(col, c));
            }
        }
        const double scale = 1.0 / m.at(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            m.at(col, c) *= scale;
            inv.at(col, c) *= scale;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = m.at(r, col);
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                m.at(r, c) -= factor * m.at(col, c);
                inv.at(r, c) -= factor * inv.at(col, c);
            }
        }
    }
    return inv;
}

// Solve A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Matrix a, std::vector<double> b, double pivot_floor = 1e-12) {
    const std::size_t n = a.rows();
    if (n != a.cols() || n != b.size()) throw ValidationError("solve: shape mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a.at(r, col)) > std::fabs(a.at(pivot, col))) pivot = r;
        if (std::fabs(a.at(pivot, col)) < pivot_floor)
            throw SingularityError("linear system numerically singular");
        if (pivot != col) {
            for (std::size_t c = col; c < n; ++c) std::swap(a.at(pivot, c), a.at(col, c));
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a.at(r, col) / a.at(col, col);
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a.at(r, c) -= factor * a.at(col, c);
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a.at(i, j) * x[j];
        x[i] = acc / a.at(i, i);
    }
    return x;
}

}  // namespace causeway::detail
