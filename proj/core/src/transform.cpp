#include "drest/transform.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drest {

Eigen::MatrixXd hard_threshold(const Eigen::MatrixXd& m, double eta) {
  if (eta < 0.0) throw std::invalid_argument("hard_threshold: negative eta");
  return (m.array().abs() < eta).select(0.0, m);
}

CoefficientMaps sparse_code_layer(const UnitaryTransform& omega, const PatchMatrix& patches,
                                  double eta) {
  if (omega.rows() != omega.cols() || omega.cols() != patches.rows())
    throw std::invalid_argument("sparse_code_layer: dimension mismatch");
  return hard_threshold(omega * patches, eta);
}

UnitaryTransform procrustes_update(const PatchMatrix& patches, const CoefficientMaps& coeffs) {
  if (patches.rows() != coeffs.rows() || patches.cols() != coeffs.cols())
    throw std::invalid_argument("procrustes_update: dimension mismatch");
  const Eigen::MatrixXd a = patches * coeffs.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixV() * svd.matrixU().transpose();
}

std::int64_t nnz(const Eigen::MatrixXd& m) {
  return (m.array() != 0.0).count();
}

double layer_cost(const UnitaryTransform& omega, const PatchMatrix& patches,
                  const CoefficientMaps& coeffs, double eta) {
  return (omega * patches - coeffs).squaredNorm() +
         eta * eta * static_cast<double>(nnz(coeffs));
}

Eigen::MatrixXd dct1d(int n) {
  if (n < 1) throw std::invalid_argument("dct1d: n must be positive");
  Eigen::MatrixXd d(n, n);
  for (int k = 0; k < n; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
    for (int j = 0; j < n; ++j)
      d(k, j) = scale * std::cos(std::numbers::pi * (j + 0.5) * k / n);
  }
  return d;
}

UnitaryTransform dct2_init(int a, int b) {
  if (a < 1 || b < 1) throw std::invalid_argument("dct2_init: sizes must be positive");
  const Eigen::MatrixXd da = dct1d(a);
  const Eigen::MatrixXd db = dct1d(b);
  // kron(da, db): patch entries are vectorized row-major, index i*b + j
  UnitaryTransform d(a * b, a * b);
  for (int u = 0; u < a; ++u)
    for (int v = 0; v < b; ++v)
      for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j)
          d(u * b + v, i * b + j) = da(u, i) * db(v, j);
  return d;
}

double unitarity_error(const Eigen::MatrixXd& omega) {
  const Eigen::Index m = omega.cols();
  return (omega.transpose() * omega - Eigen::MatrixXd::Identity(m, m)).norm();
}

}  // namespace drest
