#include "hamred/lie_core.hpp"

#include <cmath>
#include <numeric>

namespace hamred {

bool is_group_element(const Mat& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) return false;
  return unitarity_defect(m) <= tol * std::max<double>(1.0, m.rows()) &&
         std::abs(m.determinant() - 1.0) <= tol * std::max<double>(1.0, m.rows());
}

bool is_algebra_element(const Mat& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) return false;
  const double scale = std::max(1.0, m.norm());
  return anti_hermitian_defect(m) <= tol * scale && std::abs(m.trace()) <= tol * scale;
}

GroupElement::GroupElement(Mat m, double tol) : m_(std::move(m)) {
  if (!is_group_element(m_, tol)) throw InvalidElement("matrix is not in SU(n)");
}

AlgebraElement::AlgebraElement(Mat m, double tol) : m_(std::move(m)) {
  if (!is_algebra_element(m_, tol)) throw InvalidElement("matrix is not in su(n)");
}

ComplexGroupElement::ComplexGroupElement(Mat m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || std::abs(m_.determinant() - 1.0) > tol * std::max(1.0, m_.norm()))
    throw InvalidElement("matrix is not in SL(n,C)");
}

RMat RootDatum::q_double() const {
  RMat q(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) q(i, j) = boost::rational_cast<double>(q_matrix[i][j]);
  return q;
}

RationalMatrix rational_inverse(const RationalMatrix& M) {
  const std::size_t n = M.size();
  RationalMatrix a = M;
  RationalMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == Rational(0)) ++piv;
    if (piv == n) throw SingularMatrix("rational matrix is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == Rational(0)) continue;
      const Rational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

RationalMatrix rational_product(const RationalMatrix& A, const RationalMatrix& B) {
  const std::size_t n = A.size(), m = B.front().size(), k = B.size();
  RationalMatrix C(n, std::vector<Rational>(m, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < k; ++l) C[i][j] += A[i][l] * B[l][j];
  return C;
}

RootDatum build_root_datum(int n) {
  if (n < 2) throw InvalidRank("n must be at least 2, got " + std::to_string(n));
  RootDatum rd;
  rd.n = n;
  rd.rank = n - 1;
  const int l = rd.rank;
  for (int j = 0; j < l; ++j) {
    Vec h = Vec::Zero(n);
    h(j) = 1.0;
    h(j + 1) = -1.0;
    rd.coroots.push_back(h);
    // First j+1 entries (n−j−1)/n, the rest −(j+1)/n.
    Vec w(n);
    for (int k = 0; k < n; ++k)
      w(k) = k <= j ? static_cast<double>(n - j - 1) / n : -static_cast<double>(j + 1) / n;
    rd.coweights.push_back(w);
  }
  rd.cartan.assign(l, std::vector<int>(l, 0));
  for (int j = 0; j < l; ++j)
    for (int k = 0; k < l; ++k)
      rd.cartan[j][k] = static_cast<int>(std::lround(rd.simple_root(j, rd.coroots[k])));
  RationalMatrix ct(l, std::vector<Rational>(l));
  for (int j = 0; j < l; ++j)
    for (int k = 0; k < l; ++k) ct[j][k] = rd.cartan[k][j];
  rd.q_matrix = rational_inverse(ct);
  return rd;
}

double pair(const Mat& X, const Mat& Y, const Pairing& p) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols() || X.rows() != X.cols())
    throw ShapeError("pairing needs square matrices of equal size");
  const cplx t = (X.transpose().array() * Y.array()).sum();  // tr(XY)
  return p.c * (p.kind == PairingKind::TraceForm ? t.real() : t.imag());
}

std::vector<Mat> dual_basis(const std::vector<Mat>& basis, const Pairing& p) {
  const int d = static_cast<int>(basis.size());
  RMat G(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) G(a, b) = pair(basis[a], basis[b], p);
  Eigen::FullPivLU<RMat> lu(G);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw DegenerateBasis("Gram matrix is singular");
  const RMat Gi = lu.inverse();
  std::vector<Mat> dual;
  dual.reserve(d);
  for (int a = 0; a < d; ++a) {
    Mat e = Mat::Zero(basis[a].rows(), basis[a].cols());
    for (int b = 0; b < d; ++b) e += Gi(a, b) * basis[b];
    dual.push_back(std::move(e));
  }
  return dual;
}

std::vector<Mat> su_basis(int n) {
  std::vector<Mat> out;
  const double r2 = std::sqrt(2.0);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Mat E = Mat::Zero(n, n);
      E(j, k) = 1.0 / r2;
      E(k, j) = -1.0 / r2;
      out.push_back(E);
      Mat F = Mat::Zero(n, n);
      F(j, k) = kI / r2;
      F(k, j) = kI / r2;
      out.push_back(F);
    }
  for (int d = 1; d < n; ++d) {
    Vec v = Vec::Zero(n);
    v.head(d).setOnes();
    v(d) = -d;
    out.push_back(idiag(v / v.norm()));
  }
  return out;
}

std::vector<Mat> realified_sl_basis(int n) {
  std::vector<Mat> out = su_basis(n);
  const std::size_t d = out.size();
  for (std::size_t a = 0; a < d; ++a) out.push_back(kI * out[a]);
  return out;
}

Vec SpecialElements::coxeter_act(const Vec& d) const {
  return (coxeter_rep * diag(d) * coxeter_rep.adjoint()).diagonal().real();
}

SpecialElements special_elements(int n) {
  if (n < 2) throw InvalidRank("n must be at least 2");
  SpecialElements s;
  s.n = n;
  s.coxeter_number = n;

  Mat P = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) P((k + 1) % n, k) = 1.0;
  if (std::abs(P.determinant() - 1.0) > 1e-12) P(0, n - 1) = -1.0;
  s.coxeter_rep = P;

  s.rho_vee = Vec(n);
  for (int k = 0; k < n; ++k) s.rho_vee(k) = 0.5 * (n - 1) - k;
  s.principal = exp_skew(idiag(2.0 * kPi * s.rho_vee / n));

  Mat F(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      F(j, k) = std::exp(2.0 * kPi * kI * static_cast<double>(j * k) / static_cast<double>(n)) /
                std::sqrt(static_cast<double>(n));
  F *= std::exp(-kI * std::arg(F.determinant()) / static_cast<double>(n));
  s.apposition = F;

  for (int k = 0; k < n; ++k)
    s.center.push_back(std::exp(2.0 * kPi * kI * static_cast<double>(k) / static_cast<double>(n)) *
                       identity(n));
  return s;
}

Vec coroot_combination(const RootDatum& rd, const Vec& tau) {
  Vec d = Vec::Zero(rd.n);
  for (int j = 0; j < rd.rank; ++j) d += tau(j) * rd.coroots[j];
  return d;
}

Vec coweight_combination(const RootDatum& rd, const Vec& tau) {
  Vec d = Vec::Zero(rd.n);
  for (int j = 0; j < rd.rank; ++j) d += tau(j) * rd.coweights[j];
  return d;
}

Mat torus_T(const RootDatum& rd, const Vec& tau) {
  const Vec d = coroot_combination(rd, tau);
  Eigen::VectorXcd e(rd.n);
  for (int k = 0; k < rd.n; ++k) e(k) = std::exp(-kI * d(k));
  return e.asDiagonal();
}

Mat torus_T_omega(const RootDatum& rd, const Vec& tau) {
  const Vec d = coweight_combination(rd, tau);
  Eigen::VectorXcd e(rd.n);
  for (int k = 0; k < rd.n; ++k) e(k) = std::exp(-kI * d(k));
  return e.asDiagonal();
}

double distance_to_center(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const cplx w = std::exp(2.0 * kPi * kI * static_cast<double>(k) / static_cast<double>(n));
    best = std::min(best, (g - w * identity(n)).norm());
  }
  return best;
}

}  // namespace hamred
