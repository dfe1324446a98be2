#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace hamred {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

Mat identity(int n);
Mat diag(const Vec& d);
Mat idiag(const Vec& d);  // i·diag(d)

// Exponentials of normal matrices go through the Hermitian eigensolver; expm
// handles the general case with Padé scaling-and-squaring.
Mat exp_skew(const Mat& Z);
Mat exp_herm(const Mat& H);
Mat expm(const Mat& Z);
Mat log_posdef(const Mat& P);

Mat hermitian_part(const Mat& M);
// Orthogonal projection onto su(n) with respect to Re tr.
Mat su_projection(const Mat& M);

Mat group_commutator(const Mat& A, const Mat& B);
Mat lie_bracket(const Mat& X, const Mat& Y);
Mat conj_by(const Mat& eta, const Mat& X);  // η X η⁻¹ for unitary η

double unitarity_defect(const Mat& U);
double anti_hermitian_defect(const Mat& Z);
// Nearest unitary matrix (polar factor), rescaled to det 1.
Mat polar_unitary(const Mat& U);

double dist(const Mat& A, const Mat& B);  // Frobenius distance
double rel_dist(const Mat& A, const Mat& B);

Mat random_algebra(int n, Rng& rng, double scale = 1.0);
Mat random_group(int n, Rng& rng, double scale = 1.0);
// Random element of SL(n,ℂ): exp of a Gaussian traceless matrix.
Mat random_complex_group(int n, Rng& rng, double scale = 0.5);
Mat random_borel(int n, Rng& rng, double scale = 0.5);

}  // namespace hamred
