#include "jacobi/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace jacobi::linalg {

Matrix symplectic_unit(int m) {
  Matrix j = Matrix::Zero(2 * m, 2 * m);
  j.topRightCorner(m, m).setIdentity();
  j.bottomLeftCorner(m, m) = -Matrix::Identity(m, m);
  return j;
}

Matrix omega_gram(const Matrix& frame) {
  const int m = int(frame.rows()) / 2;
  // x^T J y = <x_v, y_d> - <x_d, y_v>
  const auto v = frame.topRows(m);
  const auto d = frame.bottomRows(m);
  return v.transpose() * d - d.transpose() * v;
}

Matrix orthonormal_basis(const Matrix& a, double rel_tol) {
  if (a.cols() == 0 || a.rows() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  const double cut = rel_tol * (s.size() ? s(0) : 0.0);
  while (r < s.size() && s(r) > cut && s(r) > 0.0) ++r;
  return svd.matrixU().leftCols(r);
}

Matrix orthogonal_complement(const Matrix& q) {
  const int n = int(q.rows());
  const int k = int(q.cols());
  if (k == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(q);
  Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  return full.rightCols(n - k);
}

int numerical_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  const double cut = rel_tol * s(0);
  int r = 0;
  while (r < s.size() && s(r) > cut && s(r) > 0.0) ++r;
  return r;
}

Matrix polar_factor(const Matrix& a) {
  if (a.cols() == 0) return a;
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

double grassmann_distance(const Matrix& a, const Matrix& b) {
  const Matrix qa = orthonormal_basis(a, 1e-12);
  const Matrix qb = orthonormal_basis(b, 1e-12);
  const Matrix diff = qa * qa.transpose() - qb * qb.transpose();
  if (diff.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(diff);
  return svd.singularValues()(0);
}

double isotropy_defect(const Matrix& frame) {
  const Matrix g = omega_gram(frame);
  double worst = 0.0;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = i + 1; j < g.cols(); ++j) {
      const double scale = frame.col(i).norm() * frame.col(j).norm();
      if (scale > 0.0) worst = std::max(worst, std::abs(g(i, j)) / scale);
    }
  }
  return worst;
}

}  // namespace jacobi::linalg
