#pragma once

#include <cstddef>
#include <optional>
#include <vector>

// Row-major dense double matrix, sized for this project's workloads
// (thousands of rows, view dimensions in the hundreds). The hot products go
// through the runtime-dispatched kernels.

namespace medsev {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    const std::vector<double>& values() const { return data_; }

    Matrix transposed() const;

    // Frobenius norm squared.
    double frob_sq() const;

    // Largest absolute entry (0 for an empty matrix).
    double max_abs() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);

// C = A^T * B
Matrix matmul_at_b(const Matrix& a, const Matrix& b);

// X^T X accumulated by rank-1 row updates.
Matrix gram(const Matrix& x);

// Lower Cholesky factor of a symmetric positive definite matrix, or nullopt
// if a pivot drops below a tiny positive floor.
std::optional<Matrix> cholesky(const Matrix& spd);

// Solve L y = b in place (L lower triangular).
void solve_lower(const Matrix& l, double* b);

// Solve L^T x = b in place.
void solve_lower_t(const Matrix& l, double* b);

// Solve (L L^T) X = B column-by-column; B is overwritten with the solution.
void cholesky_solve_in_place(const Matrix& l, Matrix& b);

} // namespace medsev
