#pragma once

#include <map>
#include <string>
#include <vector>

#include "medsev/matrix.hpp"
#include "medsev/view_ingest.hpp"

// Weighted generalized CCA: fit the shared representation G (orthonormal
// columns, top eigenvectors of sum_i w_i X_i (X_i'X_i + ridge I)^{-1} X_i'),
// the per-view maps U_i = (X_i'X_i + ridge I)^{-1} X_i' G, and the
// out-of-sample projection rule.

namespace medsev {

struct WgccaView {
    std::string name;
    double weight = 1.0;
    Matrix u; // d_i × k
    ScalingParams scaling;
};

struct WgccaModel {
    int latent_dim = 0;
    double ridge = 0.0;
    std::vector<WgccaView> views;
    std::vector<double> eigenvalues; // descending, one per latent dimension
};

struct FusedMatrix {
    std::vector<std::string> ids;
    Matrix g; // m × k, orthonormal columns
};

struct WgccaFit {
    WgccaModel model;
    FusedMatrix fused;
};

// Default latent dimension: min(64, min_i d_i over positive-weight views,
// m - 1).
int default_latent_dim(const std::vector<ViewMatrix>& views, const std::vector<double>& weights);

// Default ridge: 1e-6 * mean_i(trace(X_i'X_i)/d_i). For standardized views
// this is 1e-6 * m for every view.
double default_ridge(const std::vector<ViewMatrix>& views);

// Fit on aligned (identical id order) and already-standardized views.
// `scalings` records how each view was standardized and is stored in the
// model for projection; pass identity params when standardization is off.
// Throws when all weights are zero, k is out of range, or a Gram matrix is
// singular at ridge = 0 (the message says to raise the ridge).
WgccaFit fit_wgcca(const std::vector<ViewMatrix>& views, const std::vector<double>& weights,
                   int latent_dim, double ridge, const std::vector<ScalingParams>& scalings);

// sum_i w_i * ||G - X_i U_i||_F^2
double wgcca_objective(const Matrix& g, const std::vector<ViewMatrix>& views,
                       const std::vector<Matrix>& u_list, const std::vector<double>& weights);

// Project one post into the latent space: raw per-view features are
// standardized with the stored params, then
// g = (sum_i w_i U_i' x_i) / (sum_i w_i). Views with weight 0 are ignored;
// every positive-weight view must be present.
std::vector<double> project(const WgccaModel& model,
                            const std::map<std::string, std::vector<double>>& features);

} // namespace medsev
