#pragma once

#include <vector>

#include "medsev/matrix.hpp"

namespace medsev {

struct EigResult {
    std::vector<double> values; // descending
    Matrix vectors;             // n×k, column j pairs with values[j]
};

// Top-k eigenpairs of a symmetric matrix by cyclic Jacobi rotations.
// Input must be symmetric within 1e-9 (relative to the largest entry) and
// 1 <= k <= n. Eigenvalues are sorted by a stable sort on (-value, index);
// each eigenvector is flipped so its largest-magnitude entry is positive
// (ties: first such index).
EigResult symmetric_eig_topk(const Matrix& m, int k);

} // namespace medsev
