#include "medsev/eigen_sym.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "medsev/error.hpp"
#include "medsev/kernels.hpp"

namespace medsev {

namespace {

double offdiag_frob_sq(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return s;
}

} // namespace

EigResult symmetric_eig_topk(const Matrix& m, int k) {
    if (m.rows() != m.cols()) throw Error("symmetric_eig_topk: matrix not square");
    const std::size_t n = m.rows();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw Error("symmetric_eig_topk: k out of range [1, " + std::to_string(n) + "]");

    const double scale = std::max(1.0, m.max_abs());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-9 * scale)
                throw Error("symmetric_eig_topk: input not symmetric");

    // Work on the symmetrized copy; vt holds eigenvector candidates as rows
    // so the Jacobi right-multiplications become contiguous row rotations.
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
    Matrix vt = Matrix::identity(n);

    const double total_frob = std::sqrt(a.frob_sq());
    const double stop = std::max(1e-28, 1e-13 * total_frob);
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (std::sqrt(offdiag_frob_sq(a)) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                kernels::rot(a.row(p), a.row(q), c, s, n);
                // Mirror the rotated rows into the columns and close the
                // 2x2 pivot block exactly.
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    a(r, p) = a(p, r);
                    a(r, q) = a(q, r);
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                kernels::rot(vt.row(p), vt.row(q), c, s, n);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigResult result;
    result.values.resize(static_cast<std::size_t>(k));
    result.vectors = Matrix(n, static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        const std::size_t src = order[static_cast<std::size_t>(j)];
        result.values[static_cast<std::size_t>(j)] = a(src, src);
        const double* vec = vt.row(src);
        std::size_t max_idx = 0;
        double max_abs = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(vec[i]) > max_abs) {
                max_abs = std::abs(vec[i]);
                max_idx = i;
            }
        }
        const double flip = vec[max_idx] < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i)
            result.vectors(i, static_cast<std::size_t>(j)) = flip * vec[i];
    }
    return result;
}

} // namespace medsev
