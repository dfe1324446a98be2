#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hamred/brackets.hpp"

namespace hamred {

inline constexpr double kTauDrift = 1e-9;

struct DriftLog {
  std::vector<std::string> events;
};

// Hamiltonians with closed-form flows on T*K, the Heisenberg double and D(K).
struct HamiltonianSpec {
  enum class Family {
    CotangentPhi,    // φ ∘ p_𝔨
    CotangentChi,    // χ ∘ p_K
    HeisenbergPhi,   // φ ∘ Λ_R
    HeisenbergChi,   // χ ∘ Ξ_R
    DoubleP1,        // χ(A)
    DoubleP2,        // χ(B)
    DoubleMomentum,  // χ([A,B])
  };
  Family family = Family::CotangentChi;
  InvariantFunction phi{};
  ClassFunction chi{};

  static HamiltonianSpec cotangent_phi(InvariantFunction f) { return {Family::CotangentPhi, f, {}}; }
  static HamiltonianSpec cotangent_chi(ClassFunction c) { return {Family::CotangentChi, {}, c}; }
  static HamiltonianSpec heisenberg_phi(InvariantFunction f) { return {Family::HeisenbergPhi, f, {}}; }
  static HamiltonianSpec heisenberg_chi(ClassFunction c) { return {Family::HeisenbergChi, {}, c}; }
  static HamiltonianSpec double_p1(ClassFunction c) { return {Family::DoubleP1, {}, c}; }
  static HamiltonianSpec double_p2(ClassFunction c) { return {Family::DoubleP2, {}, c}; }
  static HamiltonianSpec double_momentum(ClassFunction c) { return {Family::DoubleMomentum, {}, c}; }

  ScalarObservable observable() const;
  std::string name() const;
  bool admissible_for(const PhasePoint& x) const;
};

PhasePoint flow(const PhasePoint& x, const HamiltonianSpec& h, double tau, DriftLog* log = nullptr);

enum class TorusActionSpec {
  CotangentTorus,   // (Γ₁(J)⁻¹ T(τ) Γ₁(J) g, J)
  CotangentVector,  // (g, J − Γ₂(g)⁻¹ 𝒯(τ) Γ₂(g))
  HeisenbergTorus,  // X Γ₁⁻¹ T(τ) Γ₁ with Γ₁ = Γ₁(i log b_R b_R†)
  HeisenbergVector, // X β(τ, g_R)
  DoubleP1Torus,    // (A, B Γ₂(A)⁻¹ T(−τ) Γ₂(A))
  DoubleP2Torus,    // (A Γ₂(B)⁻¹ T(τ) Γ₂(B), B)
  DoubleAdjoint,    // Ad_{g_τ} on (A, B), g_τ = Γ₂([A,B])⁻¹ T_ω(τ) Γ₂([A,B])
};

PhasePoint torus_action(const PhasePoint& x, const Vec& tau, TorusActionSpec action, DriftLog* log = nullptr);
bool torus_is_compact(TorusActionSpec action);
// The ℓ single-variable Hamiltonians whose joint flow is the given action.
std::vector<HamiltonianSpec> torus_generators(TorusActionSpec action, int n);

// B-factor β of the Iwasawa split Y = β γ (β ∈ B, γ ∈ K).
Mat borel_factor(const Mat& Y);

std::pair<Mat, Mat> s_transform(const Mat& A, const Mat& B);

double periodicity_residual(const PhasePoint& x, const HamiltonianSpec& h);

// K-actions: conjugation on T*K and fused spaces, quasi-adjoint on SL(n,ℂ).
Mat quasi_adjoint_action(const Mat& eta, const Mat& X);
PhasePoint k_action(const Mat& eta, const PhasePoint& x);

// Re-projects drifted K-valued slots onto SU(n).
void maintain_unitarity(PhasePoint& x, DriftLog* log, double tol = kTauDrift);

struct NamedQuantity {
  std::string name;
  std::function<Mat(const PhasePoint&)> eval;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  std::map<std::string, double> conserved;  // name -> max deviation from t0
  DriftLog drift;
};

Trajectory integrate_trajectory(const PhasePoint& x0, const std::function<PhasePoint(const PhasePoint&, double)>& phi,
                                const std::vector<double>& times, const std::vector<NamedQuantity>& conserved);

}  // namespace hamred
