#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace airnet {

// Dense row-major matrix. Building networks stay small (a handful of zones),
// so no sparsity machinery.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double operator()(int i, int j) const { return a_[index(i, j)]; }
    double& operator()(int i, int j) { return a_[index(i, j)]; }

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * cols_ + j;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

struct SingularMatrixError : std::runtime_error {
    int pivot_index;

    explicit SingularMatrixError(int index)
        : std::runtime_error("singular matrix: zero pivot at index " + std::to_string(index)),
          pivot_index(index) {}
};

// Solve A x = b by in-place LU factorization with partial (row) pivoting.
// A pivot below 1e-14 in magnitude is treated as singular.
inline std::vector<double> lu_solve(Matrix a, std::vector<double> b) {
    const int n = a.rows();
    if (a.cols() != n || static_cast<int>(b.size()) != n) {
        throw std::invalid_argument("lu_solve: dimension mismatch");
    }

    for (int k = 0; k < n; ++k) {
        int pivot_row = k;
        double pivot = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > pivot) {
                pivot = std::abs(a(i, k));
                pivot_row = i;
            }
        }
        if (!(pivot >= 1e-14)) throw SingularMatrixError(k);
        if (pivot_row != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(pivot_row, j));
            std::swap(b[k], b[pivot_row]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double m = a(i, k) / a(k, k);
            if (m == 0.0) continue;
            a(i, k) = m;
            for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
            b[i] -= m * b[k];
        }
    }

    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

} // namespace airnet
