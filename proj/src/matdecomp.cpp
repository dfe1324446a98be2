#include "hamred/matdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hamred {
namespace {

// Rows of Γ are conjugated eigenvectors. Each eigenvector is rotated so its
// largest-magnitude entry is positive real, then the first row absorbs the
// determinant phase.
Mat diagonalizer_from_columns(const Mat& V, const std::vector<int>& order) {
  const int n = static_cast<int>(V.rows());
  Mat G(n, n);
  for (int r = 0; r < n; ++r) {
    Eigen::VectorXcd v = V.col(order[r]);
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    v *= std::conj(v(k)) / std::abs(v(k));
    G.row(r) = v.adjoint();
  }
  const cplx d = G.determinant();
  G.row(0) *= std::exp(-kI * std::arg(d));
  return G;
}

void require_square(const Mat& M, const char* what) {
  if (M.rows() != M.cols() || M.rows() < 2)
    throw ShapeError(std::string(what) + " must be a square matrix of size >= 2");
}

}  // namespace

ChamberData chamber_diagonalize(const Mat& J, double eps_reg) {
  require_square(J, "J");
  const int n = static_cast<int>(J.rows());
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(-kI * J));
  const Vec& lam = es.eigenvalues();  // increasing
  std::vector<int> order(n);
  for (int k = 0; k < n; ++k) order[k] = n - 1 - k;
  ChamberData out;
  out.xi = Vec(n);
  for (int k = 0; k < n; ++k) out.xi(k) = lam(order[k]);
  out.xi.array() -= out.xi.mean();
  for (int k = 0; k + 1 < n; ++k)
    if (out.xi(k) - out.xi(k + 1) < eps_reg) {
      std::ostringstream os;
      os << "chamber gap " << out.xi(k) - out.xi(k + 1) << " below " << eps_reg;
      throw RegularityViolation(os.str());
    }
  out.gamma = diagonalizer_from_columns(es.eigenvectors(), order);
  return out;
}

AlcoveData alcove_diagonalize(const Mat& g, double eps_reg) {
  require_square(g, "g");
  const int n = static_cast<int>(g.rows());
  Eigen::ComplexSchur<Mat> schur(g);
  const Mat& T = schur.matrixT();
  std::vector<double> theta(n);
  for (int k = 0; k < n; ++k) {
    double t = std::arg(T(k, k));
    if (t < 0) t += 2.0 * kPi;
    if (t >= 2.0 * kPi) t -= 2.0 * kPi;
    theta[k] = t;
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return theta[a] > theta[b]; });
  const double total = std::accumulate(theta.begin(), theta.end(), 0.0);
  const int s = static_cast<int>(std::lround(total / (2.0 * kPi)));
  if (s < 0 || s > n) throw RegularityViolation("eigenphase sum inconsistent with det = 1");

  // After lowering the s largest phases by 2π the decreasing order starts at
  // position s of the sorted list and wraps around.
  std::vector<int> order(n);
  AlcoveData out;
  out.xi = Vec(n);
  for (int k = 0; k < n; ++k) {
    const int src = (s + k) % n;
    order[k] = idx[src];
    out.xi(k) = theta[idx[src]] - (src < s ? 2.0 * kPi : 0.0);
  }
  out.xi.array() -= out.xi.mean();
  double min_gap = 2.0 * kPi - (out.xi(0) - out.xi(n - 1));
  for (int k = 0; k + 1 < n; ++k) min_gap = std::min(min_gap, out.xi(k) - out.xi(k + 1));
  if (min_gap < eps_reg) {
    std::ostringstream os;
    os << "alcove margin " << min_gap << " below " << eps_reg;
    throw RegularityViolation(os.str());
  }
  out.gamma = diagonalizer_from_columns(schur.matrixU(), order);
  return out;
}

Vec action_variables(const Mat& x, ActionFamily family, double eps_reg) {
  const int n = static_cast<int>(x.rows());
  const RootDatum rd = build_root_datum(n);
  Vec out(n - 1);
  switch (family) {
    case ActionFamily::Chi: {
      const Vec xi = alcove_diagonalize(x, eps_reg).xi;
      for (int j = 0; j < n - 1; ++j) out(j) = xi(j) - xi(j + 1);
      break;
    }
    case ActionFamily::Xi: {
      const Vec xi = alcove_diagonalize(x, eps_reg).xi;
      for (int j = 0; j < n - 1; ++j) out(j) = rd.coweights[j].dot(xi);
      break;
    }
    case ActionFamily::Phi: {
      const Vec xi = chamber_diagonalize(x, eps_reg).xi;
      for (int j = 0; j < n - 1; ++j) out(j) = xi(j) - xi(j + 1);
      break;
    }
    case ActionFamily::PhiBorel: {
      const Vec xi = chamber_diagonalize(kI * log_posdef(posdef_map(x)), eps_reg).xi;
      for (int j = 0; j < n - 1; ++j) out(j) = 0.5 * (xi(j) - xi(j + 1));
      break;
    }
  }
  return out;
}

Mat gradient_action_variable(const Mat& x, ActionFamily family, int j, double eps_reg) {
  const int n = static_cast<int>(x.rows());
  if (j < 0 || j >= n - 1) throw ShapeError("action-variable index out of range");
  const RootDatum rd = build_root_datum(n);
  switch (family) {
    case ActionFamily::Chi: {
      const Mat G = alcove_diagonalize(x, eps_reg).gamma;
      return -G.adjoint() * idiag(rd.coroots[j]) * G;
    }
    case ActionFamily::Xi: {
      const Mat G = alcove_diagonalize(x, eps_reg).gamma;
      return -G.adjoint() * idiag(rd.coweights[j]) * G;
    }
    case ActionFamily::Phi: {
      const Mat G = chamber_diagonalize(x, eps_reg).gamma;
      return -G.adjoint() * idiag(rd.coroots[j]) * G;
    }
    case ActionFamily::PhiBorel: {
      const Mat G = chamber_diagonalize(kI * log_posdef(posdef_map(x)), eps_reg).gamma;
      return G.adjoint() * idiag(rd.coroots[j]) * G;
    }
  }
  throw Unsupported("unknown action family");
}

std::pair<Mat, Mat> qr_positive(const Mat& X) {
  require_square(X, "X");
  const int n = static_cast<int>(X.rows());
  Eigen::HouseholderQR<Mat> qr(X);
  Mat Q = qr.householderQ() * identity(n);
  Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double a = std::abs(R(k, k));
    if (a < 1e-300) throw SingularMatrix("matrix is not invertible");
    const cplx ph = R(k, k) / a;
    Q.col(k) *= ph;
    R.row(k) *= std::conj(ph);
    R(k, k) = a;
  }
  return {Q, R};
}

namespace {
Mat upper_inverse(const Mat& R) {
  const int n = static_cast<int>(R.rows());
  return R.triangularView<Eigen::Upper>().solve(identity(n));
}
}  // namespace

IwasawaFactors iwasawa_decompose(const Mat& X) {
  require_square(X, "X");
  const double scale = std::max(1.0, X.norm());
  if (std::abs(X.determinant()) < 1e-12 * std::pow(scale, X.rows()))
    throw SingularMatrix("X is (numerically) singular");
  IwasawaFactors f;
  auto [Q, R] = qr_positive(X);
  f.g_L = Q;
  f.b_R = upper_inverse(R);
  const Mat Xi = X.inverse();
  auto [Q2, R2] = qr_positive(Xi);
  f.g_R = Q2;
  f.b_L = upper_inverse(R2);
  return f;
}

Mat iwasawa_lambda_L(const Mat& X) {
  auto [Q, R] = qr_positive(X.inverse());
  return upper_inverse(R);
}

Mat iwasawa_xi_R(const Mat& X) { return qr_positive(X.inverse()).first; }

bool is_borel_element(const Mat& b, double tol) {
  if (b.rows() != b.cols()) return false;
  const int n = static_cast<int>(b.rows());
  for (int i = 0; i < n; ++i) {
    if (std::abs(b(i, i).imag()) > tol || b(i, i).real() <= 0) return false;
    for (int j = 0; j < i; ++j)
      if (std::abs(b(i, j)) > tol) return false;
  }
  return std::abs(b.determinant() - 1.0) <= tol * std::max(1.0, b.norm());
}

Mat dressing_action(const Mat& eta, const Mat& b) { return iwasawa_lambda_L(eta * b); }

Mat posdef_map(const Mat& b) { return b * b.adjoint(); }

Mat posdef_unmap(const Mat& p) {
  require_square(p, "p");
  const int n = static_cast<int>(p.rows());
  if ((p - p.adjoint()).norm() > 1e-10 * std::max(1.0, p.norm()))
    throw NotPositiveDefinite("matrix is not Hermitian");
  // Cholesky of the index-reversed matrix gives the upper-triangular factor.
  Mat rev(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rev(i, j) = p(n - 1 - i, n - 1 - j);
  Eigen::LLT<Mat> llt(hermitian_part(rev));
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky factorization failed");
  const Mat L = llt.matrixL();
  Mat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = L(n - 1 - i, n - 1 - j);
  return b;
}

Mat heisenberg_from_right_factors(const Mat& g_R, const Mat& b_R) {
  const Mat bp = iwasawa_lambda_L(g_R.adjoint() * b_R);
  return upper_inverse(bp) * g_R.adjoint();
}

}  // namespace hamred
