#pragma once

#include "hamred/lie_core.hpp"

namespace hamred {

inline constexpr double kEpsReg = 1e-8;

struct ChamberData {
  Vec xi;     // strictly decreasing, sums to zero
  Mat gamma;  // Γ₁ with Γ₁ J Γ₁⁻¹ = i·diag(ξ)
};

struct AlcoveData {
  Vec xi;     // strictly decreasing, sums to zero, ξ₁ − ξ_n < 2π
  Mat gamma;  // Γ₂ with Γ₂ g Γ₂⁻¹ = exp(i·diag(ξ))
};

ChamberData chamber_diagonalize(const Mat& J, double eps_reg = kEpsReg);
AlcoveData alcove_diagonalize(const Mat& g, double eps_reg = kEpsReg);

enum class ActionFamily {
  Chi,       // χ_j(g) = ξ_j − ξ_{j+1} on the alcove
  Xi,        // Ξ_j(g) = ⟨ω_j^∨, ξ⟩ on the alcove
  Phi,       // φ_j(J) = ξ_j − ξ_{j+1} on the chamber
  PhiBorel,  // φ_j(b) = ½ φ_j(i log bb†)
};

Vec action_variables(const Mat& x, ActionFamily family, double eps_reg = kEpsReg);
// j is 0-based. Chi/Xi return ∇ (left-multiplication gradient on K), Phi
// returns dφ, PhiBorel returns Dφ with respect to the Im-form.
Mat gradient_action_variable(const Mat& x, ActionFamily family, int j,
                             double eps_reg = kEpsReg);

struct IwasawaFactors {
  Mat g_L, g_R, b_L, b_R;  // X = g_L b_R⁻¹ = b_L g_R⁻¹
};

// Q R with R upper triangular with positive real diagonal.
std::pair<Mat, Mat> qr_positive(const Mat& X);
IwasawaFactors iwasawa_decompose(const Mat& X);
Mat iwasawa_lambda_L(const Mat& X);
Mat iwasawa_xi_R(const Mat& X);

bool is_borel_element(const Mat& b, double tol = kTolUnit);

Mat dressing_action(const Mat& eta, const Mat& b);
Mat posdef_map(const Mat& b);
Mat posdef_unmap(const Mat& p);

// X ∈ SL(n,ℂ) with prescribed Ξ_R(X) = g_R and Λ_R(X) = b_R.
Mat heisenberg_from_right_factors(const Mat& g_R, const Mat& b_R);

}  // namespace hamred
