#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hamred/lie_core.hpp"
#include "hamred/matdecomp.hpp"
#include "hamred/phase_point.hpp"

namespace hamred {

// Real class function χ on K together with its 𝔨-valued derivative ∇χ,
// ⟨Z, ∇χ(g)⟩ = d/dt χ(e^{tZ} g).
struct ClassFunction {
  enum class Kind { RePowerTrace, ImPowerTrace, Chi, Xi };
  Kind kind = Kind::RePowerTrace;
  int index = 1;  // power k >= 1, or 0-based alcove index j

  static ClassFunction re_power(int k) { return {Kind::RePowerTrace, k}; }
  static ClassFunction im_power(int k) { return {Kind::ImPowerTrace, k}; }
  static ClassFunction chi(int j) { return {Kind::Chi, j}; }
  static ClassFunction xi(int j) { return {Kind::Xi, j}; }

  double value(const Mat& g) const;
  Mat gradient(const Mat& g) const;
  bool is_alcove() const { return kind == Kind::Chi || kind == Kind::Xi; }
  std::string name() const;
};

// Ad-invariant function φ on 𝔨, reused as a dressing-invariant function on B
// through b ↦ bb†.
struct InvariantFunction {
  enum class Kind { PowerTrace, Phi };
  Kind kind = Kind::PowerTrace;
  int index = 2;

  static InvariantFunction power(int k) { return {Kind::PowerTrace, k}; }
  static InvariantFunction phi(int j) { return {Kind::Phi, j}; }

  double value_algebra(const Mat& J) const;  // tr((−iJ)^k) or φ_j(J)
  Mat gradient_algebra(const Mat& J) const;  // dφ(J)
  double value_borel(const Mat& b) const;    // tr((bb†)^k) or φ_j(b)
  Mat gradient_borel(const Mat& b) const;    // Dφ(b) w.r.t. the Im-form
  std::string name() const;
};

struct Letter {
  enum class Op { Plain, Inverse, Adjoint };
  int slot = 0;
  Op op = Op::Plain;
};

enum class TracePart { Real, Imag };

class ScalarObservable {
 public:
  using Fn = std::function<double(const PhasePoint&)>;

  ScalarObservable() = default;
  ScalarObservable(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  double operator()(const PhasePoint& x) const { return fn_(x); }
  const std::string& name() const { return name_; }
  // Present when the observable is a class function of one K-valued slot.
  const std::optional<ClassFunction>& class_function() const { return cf_; }

  static ScalarObservable on_slot(const ClassFunction& cf, int slot);
  static ScalarObservable word_trace(std::vector<Letter> word, TracePart part = TracePart::Real);
  static ScalarObservable constant(double c);

  friend ScalarObservable operator+(const ScalarObservable& a, const ScalarObservable& b);
  friend ScalarObservable operator*(const ScalarObservable& a, const ScalarObservable& b);
  friend ScalarObservable operator*(double s, const ScalarObservable& a);

 private:
  std::string name_;
  Fn fn_;
  std::optional<ClassFunction> cf_;
};

struct DiffConfig {
  enum class Scheme { Central2, Central4 };
  double h = 1e-3;
  Scheme scheme = Scheme::Central4;
  bool richardson = false;
};

// Derivative at 0 of a scalar function of one real variable.
double fd_derivative(const std::function<double(double)>& f, const DiffConfig& cfg = {});

// Per-slot derivatives of an observable:
//  Group:  left: ⟨Z,left⟩ = d/dt F(..e^{tZ}c..), right: F(..c e^{tZ}..)  (trace form)
//  Algebra: left: ⟨Z,left⟩ = d/dt F(..J+tZ..)
//  Complex: left = DF, right = D'F  (Im-form)
struct SlotGradient {
  SlotKind kind = SlotKind::Group;
  Mat left;
  Mat right;
};
using PointGradient = std::vector<SlotGradient>;

PointGradient point_gradient(const ScalarObservable& F, const PhasePoint& x, const DiffConfig& cfg = {});

Mat nabla_class_function(const ScalarObservable& chi, const Mat& g);
// FD version of ∇ for an arbitrary function on K (no class-function structure).
Mat nabla_fd(const std::function<double(const Mat&)>& f, const Mat& g, const DiffConfig& cfg = {});

std::pair<Mat, Mat> heisenberg_derivatives(const ScalarObservable& F, const Mat& X, const DiffConfig& cfg = {});

Mat pi_borel(const Mat& Z);
Mat pi_compact(const Mat& Z);
Mat varrho(const Mat& Z);

enum class SpaceKind { Cotangent, Heisenberg, QuasiPoisson };
struct SpaceSpec {
  SpaceKind kind = SpaceKind::QuasiPoisson;
};
SpaceSpec space_of(const PhasePoint& x);

double bracket_from_gradients(const PhasePoint& x, SpaceSpec space, const PointGradient& dF,
                              const PointGradient& dH);
double poisson_bracket(const ScalarObservable& F, const ScalarObservable& H, const PhasePoint& x,
                       SpaceSpec space, const DiffConfig& cfg = {});

using GroupFunction = std::function<double(const Mat&)>;
double momentum_condition_residual(const ScalarObservable& f, const GroupFunction& F, const PhasePoint& x,
                                   SpaceSpec space, const DiffConfig& cfg = {});

}  // namespace hamred
