#include "medsev/matrix.hpp"

#include <cmath>

#include "medsev/error.hpp"
#include "medsev/kernels.hpp"

namespace medsev {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::frob_sq() const { return kernels::sumsq(data_.data(), data_.size()); }

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw Error("matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row(i);
        const double* ai = a.row(i);
        for (std::size_t l = 0; l < a.cols(); ++l)
            kernels::axpy(ai[l], b.row(l), ci, b.cols());
    }
    return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw Error("matmul_at_b: row counts differ");
    Matrix c(a.cols(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double* ar = a.row(r);
        const double* br = b.row(r);
        for (std::size_t i = 0; i < a.cols(); ++i)
            kernels::axpy(ar[i], br, c.row(i), b.cols());
    }
    return c;
}

Matrix gram(const Matrix& x) {
    Matrix g(x.cols(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const double* xr = x.row(r);
        for (std::size_t i = 0; i < x.cols(); ++i)
            kernels::axpy(xr[i], xr, g.row(i), x.cols());
    }
    // symmetrize away accumulation noise
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = i + 1; j < g.cols(); ++j) {
            const double v = 0.5 * (g(i, j) + g(j, i));
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

std::optional<Matrix> cholesky(const Matrix& spd) {
    if (spd.rows() != spd.cols()) throw Error("cholesky: matrix not square");
    const std::size_t n = spd.rows();
    Matrix l(n, n);
    const double floor = 1e-300;
    for (std::size_t j = 0; j < n; ++j) {
        double d = spd(j, j) - kernels::dot(l.row(j), l.row(j), j);
        if (!(d > floor)) return std::nullopt;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            const double v = spd(i, j) - kernels::dot(l.row(i), l.row(j), j);
            l(i, j) = v / ljj;
        }
    }
    return l;
}

void solve_lower(const Matrix& l, double* b) {
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = b[i] - kernels::dot(l.row(i), b, i);
        b[i] = v / l(i, i);
    }
}

void solve_lower_t(const Matrix& l, double* b) {
    const std::size_t n = l.rows();
    for (std::size_t ii = n; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) v -= l(j, ii) * b[j];
        b[ii] = v / l(ii, ii);
    }
}

void cholesky_solve_in_place(const Matrix& l, Matrix& b) {
    if (l.rows() != b.rows()) throw Error("cholesky_solve: shape mismatch");
    const std::size_t n = l.rows();
    std::vector<double> col(n);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
        solve_lower(l, col.data());
        solve_lower_t(l, col.data());
        for (std::size_t i = 0; i < n; ++i) b(i, j) = col[i];
    }
}

} // namespace medsev
