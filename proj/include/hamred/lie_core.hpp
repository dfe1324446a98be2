#pragma once

#include <functional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "hamred/errors.hpp"
#include "hamred/linalg.hpp"

namespace hamred {

inline constexpr double kTolUnit = 1e-10;

// Validated wrappers. The numerical kernels work on raw `Mat`; these types
// exist for API boundaries where a caller hands in data of unknown quality.
class GroupElement {
 public:
  explicit GroupElement(Mat m, double tol = kTolUnit);
  const Mat& matrix() const { return m_; }
  operator const Mat&() const { return m_; }
  int n() const { return static_cast<int>(m_.rows()); }

 private:
  Mat m_;
};

class AlgebraElement {
 public:
  explicit AlgebraElement(Mat m, double tol = kTolUnit);
  const Mat& matrix() const { return m_; }
  operator const Mat&() const { return m_; }
  int n() const { return static_cast<int>(m_.rows()); }

 private:
  Mat m_;
};

class ComplexGroupElement {
 public:
  explicit ComplexGroupElement(Mat m, double tol = kTolUnit);
  const Mat& matrix() const { return m_; }
  operator const Mat&() const { return m_; }
  int n() const { return static_cast<int>(m_.rows()); }

 private:
  Mat m_;
};

bool is_group_element(const Mat& m, double tol = kTolUnit);
bool is_algebra_element(const Mat& m, double tol = kTolUnit);

using Rational = boost::rational<long long>;
using RationalMatrix = std::vector<std::vector<Rational>>;

struct RootDatum {
  int n = 0;
  int rank = 0;
  std::vector<Vec> coroots;    // diagonal entries of h_{α_j}
  std::vector<Vec> coweights;  // diagonal entries of ω_j^∨
  std::vector<std::vector<int>> cartan;
  RationalMatrix q_matrix;  // ω_j^∨ = Σ_k Q_jk h_{α_k}

  Mat coroot(int j) const { return diag(coroots.at(j)); }
  Mat coweight(int j) const { return diag(coweights.at(j)); }
  RMat q_double() const;
  // θ(X) for a diagonal matrix, θ the highest root.
  double highest_root(const Vec& d) const { return d(0) - d(n - 1); }
  // α_j applied to a diagonal element.
  double simple_root(int j, const Vec& d) const { return d(j) - d(j + 1); }
};

RootDatum build_root_datum(int n);

RationalMatrix rational_inverse(const RationalMatrix& M);
RationalMatrix rational_product(const RationalMatrix& A, const RationalMatrix& B);

enum class PairingKind { TraceForm, ImaginaryForm };

struct Pairing {
  PairingKind kind = PairingKind::TraceForm;
  double c = 1.0;
};

double pair(const Mat& X, const Mat& Y, const Pairing& p = {});
inline double pair_I(const Mat& X, const Mat& Y) {
  return pair(X, Y, {PairingKind::ImaginaryForm, 1.0});
}

std::vector<Mat> dual_basis(const std::vector<Mat>& basis, const Pairing& p = {});

// Basis of su(n) with Gram matrix −I under the trace form.
std::vector<Mat> su_basis(int n);
// Real basis of sl(n,ℂ): su_basis followed by i·su_basis.
std::vector<Mat> realified_sl_basis(int n);

struct SpecialElements {
  int n = 0;
  Mat coxeter_rep;
  Mat principal;
  int coxeter_number = 0;
  Vec rho_vee;
  Mat apposition;  // F with 𝕋' = F 𝕋 F⁻¹
  std::vector<Mat> center;

  // Action of the Coxeter representative on diagonal entries.
  Vec coxeter_act(const Vec& d) const;
};

SpecialElements special_elements(int n);

// T(τ) = exp(−i Σ τ_j h_{α_j}) and T_ω(τ) = exp(−i Σ τ_j ω_j^∨).
Mat torus_T(const RootDatum& rd, const Vec& tau);
Mat torus_T_omega(const RootDatum& rd, const Vec& tau);
// Σ τ_j h_{α_j} as diagonal entries.
Vec coroot_combination(const RootDatum& rd, const Vec& tau);
Vec coweight_combination(const RootDatum& rd, const Vec& tau);

// Distance from a diagonal-torus element to the nearest center element.
double distance_to_center(const Mat& g);

}  // namespace hamred
