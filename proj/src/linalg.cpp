#include "hamred/linalg.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace hamred {

Mat identity(int n) { return Mat::Identity(n, n); }

Mat diag(const Vec& d) { return d.cast<cplx>().asDiagonal(); }

Mat idiag(const Vec& d) { return (kI * d.cast<cplx>()).asDiagonal(); }

Mat hermitian_part(const Mat& M) { return 0.5 * (M + M.adjoint()); }

Mat exp_skew(const Mat& Z) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(-kI * Z));
  const Vec& lam = es.eigenvalues();
  Eigen::VectorXcd e(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) e(k) = std::exp(kI * lam(k));
  return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
}

Mat exp_herm(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(H));
  Vec e = es.eigenvalues().array().exp();
  return es.eigenvectors() * e.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Mat expm(const Mat& Z) { return Z.exp(); }

Mat log_posdef(const Mat& P) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(P));
  Vec e = es.eigenvalues().array().log();
  return es.eigenvectors() * e.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Mat su_projection(const Mat& M) {
  Mat A = 0.5 * (M - M.adjoint());
  const int n = static_cast<int>(M.rows());
  A -= (A.trace() / static_cast<double>(n)) * identity(n);
  return A;
}

Mat group_commutator(const Mat& A, const Mat& B) {
  return A * B * A.inverse() * B.inverse();
}

Mat lie_bracket(const Mat& X, const Mat& Y) { return X * Y - Y * X; }

Mat conj_by(const Mat& eta, const Mat& X) { return eta * X * eta.adjoint(); }

double unitarity_defect(const Mat& U) {
  return (U.adjoint() * U - identity(static_cast<int>(U.rows()))).norm();
}

double anti_hermitian_defect(const Mat& Z) { return (Z + Z.adjoint()).norm(); }

Mat polar_unitary(const Mat& U) {
  Eigen::JacobiSVD<Mat> svd(U, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat W = svd.matrixU() * svd.matrixV().adjoint();
  const cplx d = W.determinant();
  const double n = static_cast<double>(U.rows());
  return W * std::exp(-kI * std::arg(d) / n);
}

double dist(const Mat& A, const Mat& B) { return (A - B).norm(); }

double rel_dist(const Mat& A, const Mat& B) {
  return (A - B).norm() / std::max(1.0, B.norm());
}

Mat random_algebra(int n, Rng& rng, double scale) {
  std::normal_distribution<double> N(0.0, scale);
  Mat M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = cplx(N(rng), N(rng));
  return su_projection(M);
}

Mat random_group(int n, Rng& rng, double scale) {
  return exp_skew(random_algebra(n, rng, scale));
}

Mat random_complex_group(int n, Rng& rng, double scale) {
  std::normal_distribution<double> N(0.0, scale);
  Mat M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = cplx(N(rng), N(rng));
  M -= (M.trace() / static_cast<double>(n)) * identity(n);
  return expm(M);
}

Mat random_borel(int n, Rng& rng, double scale) {
  std::normal_distribution<double> N(0.0, scale);
  Mat b = Mat::Zero(n, n);
  Vec d(n);
  for (int i = 0; i < n; ++i) d(i) = N(rng);
  d.array() -= d.mean();
  for (int i = 0; i < n; ++i) {
    b(i, i) = std::exp(d(i));
    for (int j = i + 1; j < n; ++j) b(i, j) = cplx(N(rng), N(rng));
  }
  return b;
}

}  // namespace hamred
