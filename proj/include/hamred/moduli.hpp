#pragma once

#include <string>
#include <vector>

#include "hamred/flows.hpp"

namespace hamred {

// Momentum map of the canonical M_{m,n}: [A₁,B₁]⋯[A_m,B_m]C₁⋯C_n.
ModuliPoint build_moduli_point(int m, int n, std::vector<Mat> comps);
Mat moduli_momentum(const ModuliPoint& x);
// dim is the matrix size of K = SU(dim).
ModuliPoint random_moduli_point(int m, int n, int dim, Rng& rng, double scale = 1.0);

// (u, Φ(u)⁻¹): lands on the level set Φ = e of the space with one more K factor.
ModuliPoint embed_shift(const ModuliPoint& u);

struct Interval {
  int lo = 1, hi = 1;  // closed, 1-based
  bool contains(int k) const { return lo <= k && k <= hi; }
};

// Data selecting an Abelian family on M_{m,n}. Indices are 1-based.
struct IntervalFamily {
  int m = 0, n = 0;
  std::vector<int> I, I_hat;
  std::vector<Interval> J;
  std::vector<std::vector<Interval>> nested;  // J⁽¹⁾, J⁽²⁾, …
  std::vector<Interval> commutator_blocks;    // [k₁,k₂]: χ([A_{k₁},B_{k₁}]⋯[A_{k₂},B_{k₂}])
  struct Tail {
    int k = 1, kappa = 0;  // χ([A_k,B_k]⋯[A_m,B_m] C₁⋯C_κ)
  };
  std::vector<Tail> tails;

  static IntervalFamily sphere() { return {0, 3, {}, {}, {{1, 2}}, {}, {}, {}}; }
};

// Throws AssumptionViolation naming the first violated clause.
void validate(const IntervalFamily& f);

// A block is either a single handle letter A_i or a contiguous range of fused
// factors whose partial momentum is fed to the class function. Factor indices
// are 0-based positions in the point's layout.
struct WordHamiltonian {
  enum class Block { SingleA, FactorRange };
  Block block = Block::FactorRange;
  int first = 0, last = 0;
  ClassFunction chi{};
  std::string label;

  static WordHamiltonian single_a(int handle, ClassFunction chi);  // handle is 1-based
  static WordHamiltonian commutator(int handle, ClassFunction chi);
  static WordHamiltonian c_interval(int m, Interval iv, ClassFunction chi);
  static WordHamiltonian factor_range(int first, int last, ClassFunction chi, std::string label = "");

  Mat argument(const ModuliPoint& x) const;
  double value(const ModuliPoint& x) const { return chi.value(argument(x)); }
  ScalarObservable observable() const;
  std::string name() const;
  // Generator uses a coroot-type torus (translation of B_i) rather than conjugation.
  bool translation_type() const { return block == Block::SingleA; }
};

// Blocks in the order I, Î, J, nested levels, commutator blocks, tails.
struct FamilyBlock {
  WordHamiltonian::Block block;
  int first, last;
  std::string label;
};
std::vector<FamilyBlock> family_blocks(const IntervalFamily& f);

// One generator per (block, class function).
std::vector<WordHamiltonian> hamiltonian_family(const IntervalFamily& f, const std::vector<ClassFunction>& chis);
// The action variables: χ_j on single-A blocks, Ξ_j on every conjugation block.
std::vector<WordHamiltonian> action_hamiltonians(const IntervalFamily& f, int dim);
std::vector<WordHamiltonian> action_hamiltonians(const std::vector<FamilyBlock>& blocks, int n);

ModuliPoint moduli_flow(const ModuliPoint& x, const WordHamiltonian& h, double tau, DriftLog* log = nullptr);

// τ⃗ has ℓ entries per block, blocks in family_blocks order.
ModuliPoint moduli_torus_action(const ModuliPoint& x, const Vec& tau, const std::vector<FamilyBlock>& blocks,
                                DriftLog* log = nullptr);
ModuliPoint moduli_torus_action(const ModuliPoint& x, const Vec& tau, const IntervalFamily& f, DriftLog* log = nullptr);

// The combined family generated by χ([A₁,B₁]), χ(A₂) and χ([A₂,B₂]) on M_{2,0}.
// No freeness is claimed for its joint torus action.
std::vector<FamilyBlock> joint_genus_two_blocks();

// Adjacent transpositions ψ_j of fused factors, j 1-based.
struct PermutationPlan {
  std::vector<int> steps;
};

ModuliPoint permutation_pushforward(const ModuliPoint& x, const PermutationPlan& plan);
// F ↦ F∘ψ for an observable on the permuted space.
ScalarObservable pullback_hamiltonian(const ScalarObservable& F, const PermutationPlan& plan);
ScalarObservable pullback_hamiltonian(const WordHamiltonian& h, const PermutationPlan& plan);

// Ψ₁,₂ and Ψ₍₁₂₎,₃ invariants on M_{0,3}.
struct NamedValue {
  std::string name;
  double value;
};
std::vector<NamedValue> sphere_constants_of_motion(const ModuliPoint& x);

}  // namespace hamred
