#include "medsev/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "medsev/eigen_sym.hpp"
#include "medsev/error.hpp"
#include "medsev/kernels.hpp"

namespace medsev {

namespace {

void check_aligned(const std::vector<ViewMatrix>& views) {
    if (views.empty()) throw Error("fit_wgcca: no views");
    for (std::size_t i = 1; i < views.size(); ++i) {
        if (views[i].ids != views[0].ids)
            throw Error("fit_wgcca: views not aligned (run align_views first)");
    }
}

// B = X L^{-T}, i.e. every row of X forward-substituted through L.
Matrix whiten_rows(const Matrix& x, const Matrix& chol_lower) {
    Matrix b = x;
    for (std::size_t r = 0; r < b.rows(); ++r) solve_lower(chol_lower, b.row(r));
    return b;
}

void apply_sign_convention(Matrix& g) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
        std::size_t max_idx = 0;
        double max_abs = -1.0;
        for (std::size_t i = 0; i < g.rows(); ++i) {
            if (std::abs(g(i, j)) > max_abs) {
                max_abs = std::abs(g(i, j));
                max_idx = i;
            }
        }
        if (g(max_idx, j) < 0.0)
            for (std::size_t i = 0; i < g.rows(); ++i) g(i, j) = -g(i, j);
    }
}

} // namespace

int default_latent_dim(const std::vector<ViewMatrix>& views, const std::vector<double>& weights) {
    if (views.empty()) throw Error("default_latent_dim: no views");
    std::size_t min_d = 0;
    bool any = false;
    for (std::size_t i = 0; i < views.size(); ++i) {
        if (i < weights.size() && weights[i] <= 0.0) continue;
        min_d = any ? std::min(min_d, views[i].dim()) : views[i].dim();
        any = true;
    }
    if (!any) throw Error("default_latent_dim: no positive-weight view");
    const std::size_t m = views[0].size();
    const std::size_t k = std::min<std::size_t>({64, min_d, m > 1 ? m - 1 : 1});
    return static_cast<int>(std::max<std::size_t>(k, 1));
}

double default_ridge(const std::vector<ViewMatrix>& views) {
    if (views.empty()) throw Error("default_ridge: no views");
    double acc = 0.0;
    for (const ViewMatrix& v : views)
        acc += v.data.frob_sq() / static_cast<double>(std::max<std::size_t>(v.dim(), 1));
    return 1e-6 * acc / static_cast<double>(views.size());
}

WgccaFit fit_wgcca(const std::vector<ViewMatrix>& views, const std::vector<double>& weights,
                   int latent_dim, double ridge, const std::vector<ScalingParams>& scalings) {
    check_aligned(views);
    if (weights.size() != views.size())
        throw Error("fit_wgcca: weight count does not match view count");
    if (!scalings.empty() && scalings.size() != views.size())
        throw Error("fit_wgcca: scaling count does not match view count");
    if (ridge < 0.0) throw Error("fit_wgcca: ridge must be >= 0");

    const std::size_t m = views[0].size();
    if (m < 2) throw Error("fit_wgcca: need at least 2 rows");
    if (latent_dim < 1 || static_cast<std::size_t>(latent_dim) > m)
        throw Error("latent dimension exceeds sample count (k=" + std::to_string(latent_dim) +
                    ", m=" + std::to_string(m) + ")");

    double weight_sum = 0.0;
    for (std::size_t i = 0; i < views.size(); ++i) {
        if (weights[i] < 0.0) throw Error("fit_wgcca: negative view weight");
        weight_sum += weights[i];
    }
    if (weight_sum <= 0.0) throw Error("fit_wgcca: all view weights are zero");

    const std::size_t k = static_cast<std::size_t>(latent_dim);

    // Per-view Cholesky of X'X + ridge I, plus whitened rows for the
    // positive-weight views.
    std::vector<Matrix> chols(views.size());
    std::vector<Matrix> whitened(views.size());
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < views.size(); ++i) {
        Matrix g = gram(views[i].data);
        for (std::size_t j = 0; j < g.rows(); ++j) g(j, j) += ridge;
        auto chol = cholesky(g);
        if (!chol)
            throw Error("fit_wgcca: Gram matrix of view \"" + views[i].name +
                        "\" is not invertible at ridge=" + std::to_string(ridge) +
                        "; raise the ridge (--ridge)");
        chols[i] = std::move(*chol);
        if (weights[i] > 0.0) {
            whitened[i] = whiten_rows(views[i].data, chols[i]);
            active.push_back(i);
        }
    }

    std::size_t total_dim = 0;
    for (std::size_t i : active) total_dim += views[i].dim();

    // C = [sqrt(w_i) B_i] stacked column-blockwise; P = C C'.
    Matrix c(m, total_dim);
    std::size_t offset = 0;
    for (std::size_t i : active) {
        const double root_w = std::sqrt(weights[i]);
        const std::size_t d = views[i].dim();
        for (std::size_t r = 0; r < m; ++r) {
            const double* src = whitened[i].row(r);
            double* dst = c.row(r) + offset;
            for (std::size_t j = 0; j < d; ++j) dst[j] = root_w * src[j];
        }
        offset += d;
    }

    Matrix g_mat;
    std::vector<double> eigenvalues;
    bool solved = false;
    if (total_dim < m) {
        // Eigenpairs of P through the small C'C problem: P(Cv) = mu (Cv).
        const Matrix s = gram(c);
        const EigResult eig = symmetric_eig_topk(s, static_cast<int>(total_dim));
        const double tol = std::max(eig.values.empty() ? 0.0 : eig.values[0], 1.0) * 1e-12;
        std::size_t positive = 0;
        while (positive < eig.values.size() && eig.values[positive] > tol) ++positive;
        if (positive >= k) {
            g_mat = Matrix(m, k);
            for (std::size_t j = 0; j < k; ++j) {
                const double inv_root = 1.0 / std::sqrt(eig.values[j]);
                for (std::size_t r = 0; r < m; ++r) {
                    double acc = 0.0;
                    const double* cr = c.row(r);
                    for (std::size_t l = 0; l < total_dim; ++l) acc += cr[l] * eig.vectors(l, j);
                    g_mat(r, j) = acc * inv_root;
                }
            }
            apply_sign_convention(g_mat);
            eigenvalues.assign(eig.values.begin(), eig.values.begin() + static_cast<long>(k));
            solved = true;
        }
    }
    if (!solved) {
        // Assemble P = C C' and solve it directly.
        const Matrix ct = c.transposed();
        const Matrix p = gram(ct);
        EigResult eig = symmetric_eig_topk(p, static_cast<int>(k));
        g_mat = std::move(eig.vectors);
        eigenvalues = std::move(eig.values);
        // P is positive semidefinite; zero out roundoff-negative eigenvalues
        for (double& v : eigenvalues)
            if (v < 0.0 && v > -1e-9) v = 0.0;
    }

    WgccaFit fit;
    fit.model.latent_dim = latent_dim;
    fit.model.ridge = ridge;
    fit.model.eigenvalues = std::move(eigenvalues);
    fit.model.views.reserve(views.size());
    for (std::size_t i = 0; i < views.size(); ++i) {
        WgccaView mv;
        mv.name = views[i].name;
        mv.weight = weights[i];
        mv.scaling = scalings.empty() ? ScalingParams::identity(views[i].dim()) : scalings[i];
        Matrix u = matmul_at_b(views[i].data, g_mat); // d_i × k
        cholesky_solve_in_place(chols[i], u);
        mv.u = std::move(u);
        fit.model.views.push_back(std::move(mv));
    }
    fit.fused.ids = views[0].ids;
    fit.fused.g = std::move(g_mat);
    return fit;
}

double wgcca_objective(const Matrix& g, const std::vector<ViewMatrix>& views,
                       const std::vector<Matrix>& u_list, const std::vector<double>& weights) {
    if (views.size() != u_list.size() || views.size() != weights.size())
        throw Error("wgcca_objective: view/U/weight counts differ");
    double total = 0.0;
    for (std::size_t i = 0; i < views.size(); ++i) {
        const Matrix& x = views[i].data;
        const Matrix& u = u_list[i];
        if (x.rows() != g.rows() || u.rows() != x.cols() || u.cols() != g.cols())
            throw Error("wgcca_objective: shape mismatch for view \"" + views[i].name + "\"");
        if (weights[i] == 0.0) continue;
        const Matrix xu = matmul(x, u);
        double resid = 0.0;
        for (std::size_t r = 0; r < g.rows(); ++r)
            for (std::size_t j = 0; j < g.cols(); ++j) {
                const double d = g(r, j) - xu(r, j);
                resid += d * d;
            }
        total += weights[i] * resid;
    }
    return total;
}

std::vector<double> project(const WgccaModel& model,
                            const std::map<std::string, std::vector<double>>& features) {
    const std::size_t k = static_cast<std::size_t>(model.latent_dim);
    std::vector<double> g(k, 0.0);
    double weight_sum = 0.0;
    for (const WgccaView& view : model.views) {
        if (view.weight <= 0.0) continue;
        auto it = features.find(view.name);
        if (it == features.end())
            throw Error("project: missing features for view \"" + view.name + "\"");
        if (it->second.size() != view.u.rows())
            throw Error("project: view \"" + view.name + "\" expects dimension " +
                        std::to_string(view.u.rows()) + ", got " +
                        std::to_string(it->second.size()));
        std::vector<double> x = it->second;
        apply_scaling(view.scaling, x.data(), x.size());
        for (std::size_t r = 0; r < x.size(); ++r)
            kernels::axpy(view.weight * x[r], view.u.row(r), g.data(), k);
        weight_sum += view.weight;
    }
    if (weight_sum <= 0.0) throw Error("project: model has no positive-weight view");
    kernels::scale(g.data(), 1.0 / weight_sum, k);
    return g;
}

} // namespace medsev
