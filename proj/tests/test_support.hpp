#pragma once

// Oracles used by the tests. They deliberately avoid the library's frames
// and closed forms: matrix exponentials come from Eigen's Padé routine and
// derivatives from plain central differences.

#include <functional>

#include <unsupported/Eigen/MatrixFunctions>

#include "hamred/linalg.hpp"

namespace oracle {

using hamred::cplx;
using hamred::Mat;

inline Mat expm(const Mat& Z) { return Z.exp(); }

inline double d4(const std::function<double(double)>& f, double h = 1e-3) {
  return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
}

inline double re_tr(const Mat& X, const Mat& Y) { return (X * Y).trace().real(); }

inline Mat random_su(int n, hamred::Rng& rng, double s = 1.0) {
  std::normal_distribution<double> N(0.0, s);
  Mat M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = cplx(N(rng), N(rng));
  Mat A = 0.5 * (M - M.adjoint());
  A -= (A.trace() / double(n)) * Mat::Identity(n, n);
  return A;
}

inline Mat random_SU(int n, hamred::Rng& rng, double s = 1.0) { return expm(random_su(n, rng, s)); }

}  // namespace oracle
