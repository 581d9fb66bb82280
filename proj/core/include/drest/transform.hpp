#pragma once

#include "drest/types.hpp"

namespace drest {

/// Entry-wise hard thresholding: zeroes entries with |x| strictly below eta,
/// keeps everything else unchanged (|x| == eta survives).
/// Throws std::invalid_argument for negative eta.
Eigen::MatrixXd hard_threshold(const Eigen::MatrixXd& m, double eta);

/// Optimal coefficients for one layer with the transform fixed:
/// Z = H_eta(omega * patches). Minimizes ||omega*P - Z||_F^2 + eta^2 ||Z||_0.
CoefficientMaps sparse_code_layer(const UnitaryTransform& omega, const PatchMatrix& patches,
                                  double eta);

/// Optimal unitary transform with the coefficients fixed: V U^T, where
/// U S V^T is the full SVD of patches * coeffs^T. Minimizes ||omega*P - Z||_F
/// over unitary omega.
UnitaryTransform procrustes_update(const PatchMatrix& patches, const CoefficientMaps& coeffs);

/// Single-layer objective ||omega*P - Z||_F^2 + eta^2 ||Z||_0.
double layer_cost(const UnitaryTransform& omega, const PatchMatrix& patches,
                  const CoefficientMaps& coeffs, double eta);

/// Number of exactly nonzero entries.
std::int64_t nnz(const Eigen::MatrixXd& m);

/// Orthonormal 2D DCT-II for a x b patches, ordered to match the frozen
/// patch vectorization (patch row-major): the Kronecker product of the
/// length-a and length-b orthonormal 1D DCT-II matrices.
UnitaryTransform dct2_init(int a, int b);

/// Orthonormal 1D DCT-II: row k scaled by sqrt(1/n) for k = 0 and sqrt(2/n)
/// otherwise.
Eigen::MatrixXd dct1d(int n);

/// Frobenius norm of omega^T omega - I; the unitarity contract is < 1e-10.
double unitarity_error(const Eigen::MatrixXd& omega);

}  // namespace drest
