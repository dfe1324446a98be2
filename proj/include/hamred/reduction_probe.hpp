#pragma once

#include <string>
#include <vector>

#include "hamred/moduli.hpp"

namespace hamred {

inline constexpr double kSvdThreshold = 1e-7;

// K × G² acting on a phase point. G² is one of the closed-form tori/vector
// groups of the flows module, or the product of the block tori of a moduli
// family (𝕋 for single-A blocks, 𝕋^ad for conjugation blocks).
struct ActionSpec {
  enum class Second { None, Closed, Moduli };
  bool with_k = true;
  Second second = Second::None;
  TorusActionSpec torus = TorusActionSpec::CotangentTorus;
  std::vector<FamilyBlock> blocks;

  static ActionSpec k_only() { return {}; }
  static ActionSpec closed(TorusActionSpec t, bool with_k = true) { return {with_k, Second::Closed, t, {}}; }
  static ActionSpec moduli(std::vector<FamilyBlock> b, bool with_k = true) {
    return {with_k, Second::Moduli, TorusActionSpec::CotangentTorus, std::move(b)};
  }

  int second_dim(int n) const;
  int group_dim(int n) const { return (with_k ? n * n - 1 : 0) + second_dim(n); }
  // Whether G² is compact; its period lattice is then 2πℤ^dim.
  bool second_compact() const;
  PhasePoint act_second(const PhasePoint& x, const Vec& tau) const;
  // Hamiltonians whose joint flow is the G² action.
  std::vector<ScalarObservable> second_generators(int n) const;
  std::string name() const;
};

// Columns are generating vectors (in flatten coordinates) of a Lie algebra
// basis: su(n) first when the K factor is present, then the G² directions.
RMat generator_matrix(const PhasePoint& x, const ActionSpec& a, bool second_only = false);

struct StabilizerReport {
  std::string point_id;
  int infinitesimal_dim = 0;
  int group_dim = 0;
  bool center_fixes = false;
  double center_residual = 0;
  Vec singular_values;
};

StabilizerReport stabilizer_dimension(const PhasePoint& x, const ActionSpec& a, double threshold = kSvdThreshold,
                                      std::string point_id = "");

// Generic element of the open alcove, different for each salt.
Vec generic_alcove_vector(int n, int salt = 0);
// Regular elements of 𝕋' = F𝕋F⁻¹ and of its Lie algebra.
Mat apposition_torus_element(int n, int salt = 0);
Mat apposition_algebra_element(int n, int salt = 0);

// (w_*−id)⁻¹ on traceless diagonal vectors, w_* the action of the Coxeter representative.
Mat coxeter_minus_id_inverse(int n);

// ‖g_* e^{iy} g_*⁻¹ e^{−iy} − e^{ih}‖ with y = (w_*−id)⁻¹h.
double commutator_identity_check(const Vec& h);

struct CommutatorSolution {
  Mat A, B;
  double residual = 0;
};
// A = g_*, B = exp(i(w_*−id)⁻¹ξ), so [A,B] = exp(iξ). ξ must lie in the closed alcove.
CommutatorSolution commutator_solve(const Vec& xi);

// Crafted points from the isotropy arguments. Each case carries the action
// whose stabilizer it certifies.
struct PrincipalCase {
  std::string id;
  std::string description;
  PhasePoint point;
  ActionSpec action;
};

std::vector<std::string> supported_lemma_ids();
PrincipalCase principal_case(const std::string& lemma_id, int n);
PhasePoint principal_test_point(const std::string& lemma_id, int n);

// Crafted point for an interval family built only from I, Î and J, following
// the inductive construction over handles.
ModuliPoint principal_family_point(const IntervalFamily& f, int n);

struct RankReport {
  int generator_rank = 0, expected_generator_rank = 0;
  int action_rank = 0, expected_action_rank = 0;
  int dim_Y = 0;
  int k_orbit_dim = 0;
  int invariant_probe_rank = 0, probe_count = 0;
  Vec generator_singular_values, action_singular_values;
};

// (a) rank of the G² generating vectors, (b) rank of the differentials of the
// action variables, (c) K-orbit dimension and rank of a finite family of
// K-invariant probes. Item (c) is informational.
RankReport ieq_rank_check(const PhasePoint& x, const ActionSpec& a, double threshold = kSvdThreshold);

// Smallest displacement of x under G² over sampled parameters at distance
// ≥ 0.1 from the period lattice.
double torus_freeness_margin(const PhasePoint& x, const ActionSpec& a, Rng& rng, int samples = 64);

}  // namespace hamred
