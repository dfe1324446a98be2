#include "hamred/brackets.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

namespace hamred {

// ---------------------------------------------------------------- class functions

double ClassFunction::value(const Mat& g) const {
  switch (kind) {
    case Kind::RePowerTrace: {
      Mat p = g;
      for (int i = 1; i < index; ++i) p = p * g;
      return p.trace().real();
    }
    case Kind::ImPowerTrace: {
      Mat p = g;
      for (int i = 1; i < index; ++i) p = p * g;
      return p.trace().imag();
    }
    case Kind::Chi: return action_variables(g, ActionFamily::Chi)(index);
    case Kind::Xi: return action_variables(g, ActionFamily::Xi)(index);
  }
  return 0.0;
}

Mat ClassFunction::gradient(const Mat& g) const {
  switch (kind) {
    case Kind::RePowerTrace:
    case Kind::ImPowerTrace: {
      Mat p = g;
      for (int i = 1; i < index; ++i) p = p * g;
      if (kind == Kind::ImPowerTrace) p *= -kI;
      return static_cast<double>(index) * su_projection(p);
    }
    case Kind::Chi: return gradient_action_variable(g, ActionFamily::Chi, index);
    case Kind::Xi: return gradient_action_variable(g, ActionFamily::Xi, index);
  }
  return Mat();
}

std::string ClassFunction::name() const {
  switch (kind) {
    case Kind::RePowerTrace: return "retr^" + std::to_string(index);
    case Kind::ImPowerTrace: return "imtr^" + std::to_string(index);
    case Kind::Chi: return "chi_" + std::to_string(index + 1);
    case Kind::Xi: return "Xi_" + std::to_string(index + 1);
  }
  return "?";
}

double InvariantFunction::value_algebra(const Mat& J) const {
  if (kind == Kind::Phi) return action_variables(J, ActionFamily::Phi)(index);
  const Mat H = -kI * J;
  Mat p = H;
  for (int i = 1; i < index; ++i) p = p * H;
  return p.trace().real();
}

Mat InvariantFunction::gradient_algebra(const Mat& J) const {
  if (kind == Kind::Phi) return gradient_action_variable(J, ActionFamily::Phi, index);
  const int n = static_cast<int>(J.rows());
  const Mat H = -kI * J;
  Mat p = identity(n);
  for (int i = 1; i < index; ++i) p = p * H;
  return su_projection(-kI * static_cast<double>(index) * p);
}

double InvariantFunction::value_borel(const Mat& b) const {
  if (kind == Kind::Phi) return action_variables(b, ActionFamily::PhiBorel)(index);
  const Mat P = posdef_map(b);
  Mat p = P;
  for (int i = 1; i < index; ++i) p = p * P;
  return p.trace().real();
}

Mat InvariantFunction::gradient_borel(const Mat& b) const {
  if (kind == Kind::Phi) return gradient_action_variable(b, ActionFamily::PhiBorel, index);
  const int n = static_cast<int>(b.rows());
  const Mat P = posdef_map(b);
  Mat p = P;
  for (int i = 1; i < index; ++i) p = p * P;
  p = hermitian_part(p);
  p -= (p.trace() / static_cast<double>(n)) * identity(n);
  return kI * (2.0 * index) * p;
}

std::string InvariantFunction::name() const {
  return kind == Kind::Phi ? "phi_" + std::to_string(index + 1) : "ptr^" + std::to_string(index);
}

// ---------------------------------------------------------------- observables

ScalarObservable ScalarObservable::on_slot(const ClassFunction& cf, int s) {
  ScalarObservable o(cf.name() + "(#" + std::to_string(s) + ")",
                     [cf, s](const PhasePoint& x) { return cf.value(slot(x, s)); });
  o.cf_ = cf;
  return o;
}

ScalarObservable ScalarObservable::word_trace(std::vector<Letter> word, TracePart part) {
  if (word.empty()) throw UnsupportedWord("empty word");
  std::ostringstream os;
  os << (part == TracePart::Real ? "Re" : "Im") << " tr(";
  for (const auto& l : word)
    os << "#" << l.slot << (l.op == Letter::Op::Inverse ? "^-1" : l.op == Letter::Op::Adjoint ? "^*" : "") << " ";
  os << ")";
  return ScalarObservable(os.str(), [word = std::move(word), part](const PhasePoint& x) {
    Mat p;
    for (const auto& l : word) {
      const Mat& m = slot(x, l.slot);
      Mat f;
      switch (l.op) {
        case Letter::Op::Plain: f = m; break;
        case Letter::Op::Adjoint: f = m.adjoint(); break;
        case Letter::Op::Inverse:
          f = slot_kind(x, l.slot) == SlotKind::Group ? Mat(m.adjoint()) : Mat(m.inverse());
          break;
      }
      p = p.size() == 0 ? f : Mat(p * f);
    }
    const cplx t = p.trace();
    return part == TracePart::Real ? t.real() : t.imag();
  });
}

ScalarObservable ScalarObservable::constant(double c) {
  return ScalarObservable("const(" + std::to_string(c) + ")", [c](const PhasePoint&) { return c; });
}

ScalarObservable operator+(const ScalarObservable& a, const ScalarObservable& b) {
  return ScalarObservable("(" + a.name() + " + " + b.name() + ")",
                          [fa = a.fn_, fb = b.fn_](const PhasePoint& x) { return fa(x) + fb(x); });
}

ScalarObservable operator*(const ScalarObservable& a, const ScalarObservable& b) {
  return ScalarObservable("(" + a.name() + " * " + b.name() + ")",
                          [fa = a.fn_, fb = b.fn_](const PhasePoint& x) { return fa(x) * fb(x); });
}

ScalarObservable operator*(double s, const ScalarObservable& a) {
  return ScalarObservable(std::to_string(s) + "*" + a.name(),
                          [s, fa = a.fn_](const PhasePoint& x) { return s * fa(x); });
}

// ---------------------------------------------------------------- finite differences

namespace {

constexpr double kOffsets[4] = {-2.0, -1.0, 1.0, 2.0};

double stencil(DiffConfig::Scheme s, const double f[4], double h) {
  if (s == DiffConfig::Scheme::Central2) return (f[2] - f[1]) / (2.0 * h);
  return (f[0] - 8.0 * f[1] + 8.0 * f[2] - f[3]) / (12.0 * h);
}

int scheme_order(DiffConfig::Scheme s) { return s == DiffConfig::Scheme::Central2 ? 2 : 4; }

struct Frame {
  std::vector<Mat> su, su_dual, sl, sl_dual;
  std::vector<std::array<Mat, 4>> su_exp, sl_exp;
};

const Frame& frame(int n, double h) {
  thread_local std::map<std::pair<int, double>, std::unique_ptr<Frame>> cache;
  auto& entry = cache[{n, h}];
  if (!entry) {
    auto f = std::make_unique<Frame>();
    f->su = su_basis(n);
    f->su_dual = dual_basis(f->su);
    f->sl = realified_sl_basis(n);
    f->sl_dual = dual_basis(f->sl, {PairingKind::ImaginaryForm, 1.0});
    for (const auto& E : f->su) {
      std::array<Mat, 4> e;
      for (int k = 0; k < 4; ++k) e[k] = exp_skew(kOffsets[k] * h * E);
      f->su_exp.push_back(std::move(e));
    }
    for (std::size_t a = 0; a < f->sl.size(); ++a) {
      std::array<Mat, 4> e;
      const bool compact = a < f->su.size();
      for (int k = 0; k < 4; ++k)
        e[k] = compact ? exp_skew(kOffsets[k] * h * f->sl[a]) : exp_herm(kOffsets[k] * h * f->sl[a]);
      f->sl_exp.push_back(std::move(e));
    }
    entry = std::move(f);
  }
  return *entry;
}

PointGradient gradient_at_step(const ScalarObservable& F, const PhasePoint& x, const DiffConfig& cfg,
                               double h) {
  const int n = point_dim(x);
  const Frame& fr = frame(n, h);
  PhasePoint w = x;
  PointGradient out;
  double vals[4];
  for (int i = 0; i < slot_count(x); ++i) {
    const Mat c = slot(x, i);
    Mat& target = slot_mut(w, i);
    SlotGradient g;
    g.kind = slot_kind(x, i);
    switch (g.kind) {
      case SlotKind::Group: {
        g.left = Mat::Zero(n, n);
        for (std::size_t a = 0; a < fr.su.size(); ++a) {
          for (int k = 0; k < 4; ++k) {
            target = fr.su_exp[a][k] * c;
            vals[k] = F(w);
          }
          g.left += stencil(cfg.scheme, vals, h) * fr.su_dual[a];
        }
        g.right = c.adjoint() * g.left * c;
        break;
      }
      case SlotKind::Algebra: {
        const double hs = h * std::max(1.0, c.norm() / std::sqrt(static_cast<double>(n)));
        g.left = Mat::Zero(n, n);
        for (std::size_t a = 0; a < fr.su.size(); ++a) {
          for (int k = 0; k < 4; ++k) {
            target = c + (kOffsets[k] * hs) * fr.su[a];
            vals[k] = F(w);
          }
          g.left += stencil(cfg.scheme, vals, hs) * fr.su_dual[a];
        }
        break;
      }
      case SlotKind::Complex: {
        g.left = Mat::Zero(n, n);
        g.right = Mat::Zero(n, n);
        for (std::size_t a = 0; a < fr.sl.size(); ++a) {
          for (int k = 0; k < 4; ++k) {
            target = fr.sl_exp[a][k] * c;
            vals[k] = F(w);
          }
          g.left += stencil(cfg.scheme, vals, h) * fr.sl_dual[a];
          for (int k = 0; k < 4; ++k) {
            target = c * fr.sl_exp[a][k];
            vals[k] = F(w);
          }
          g.right += stencil(cfg.scheme, vals, h) * fr.sl_dual[a];
        }
        break;
      }
    }
    target = c;
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

double fd_derivative(const std::function<double(double)>& f, const DiffConfig& cfg) {
  auto at = [&](double h) {
    double v[4];
    for (int k = 0; k < 4; ++k)
      v[k] = (cfg.scheme == DiffConfig::Scheme::Central2 && (k == 0 || k == 3)) ? 0.0 : f(kOffsets[k] * h);
    return stencil(cfg.scheme, v, h);
  };
  const double d1 = at(cfg.h);
  if (!cfg.richardson) return d1;
  const double p = std::pow(2.0, scheme_order(cfg.scheme));
  return (p * at(0.5 * cfg.h) - d1) / (p - 1.0);
}

PointGradient point_gradient(const ScalarObservable& F, const PhasePoint& x, const DiffConfig& cfg) {
  if (!(cfg.h > 0)) throw ShapeError("DiffConfig.h must be positive");
  PointGradient g1 = gradient_at_step(F, x, cfg, cfg.h);
  if (!cfg.richardson) return g1;
  const PointGradient g2 = gradient_at_step(F, x, cfg, 0.5 * cfg.h);
  const double p = std::pow(2.0, scheme_order(cfg.scheme));
  for (std::size_t i = 0; i < g1.size(); ++i) {
    g1[i].left = (p * g2[i].left - g1[i].left) / (p - 1.0);
    if (g1[i].right.size()) g1[i].right = (p * g2[i].right - g1[i].right) / (p - 1.0);
  }
  return g1;
}

Mat nabla_class_function(const ScalarObservable& chi, const Mat& g) {
  if (!chi.class_function()) throw NotClassFunction(chi.name() + " carries no class-function structure");
  return chi.class_function()->gradient(g);
}

Mat nabla_fd(const std::function<double(const Mat&)>& f, const Mat& g, const DiffConfig& cfg) {
  ScalarObservable F("f", [&f](const PhasePoint& x) { return f(slot(x, 0)); });
  const PhasePoint x = ModuliPoint::canonical(0, 1, {g});
  return point_gradient(F, x, cfg).front().left;
}

std::pair<Mat, Mat> heisenberg_derivatives(const ScalarObservable& F, const Mat& X, const DiffConfig& cfg) {
  const PointGradient g = point_gradient(F, HeisenbergPoint{X}, cfg);
  return {g[0].left, g[0].right};
}

// ---------------------------------------------------------------- brackets

Mat pi_borel(const Mat& Z) {
  const int n = static_cast<int>(Z.rows());
  Mat B = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    B(i, i) = Z(i, i).real();
    for (int j = i + 1; j < n; ++j) B(i, j) = Z(i, j) + std::conj(Z(j, i));
  }
  return B;
}

Mat pi_compact(const Mat& Z) { return Z - pi_borel(Z); }

Mat varrho(const Mat& Z) {
  const Mat b = pi_borel(Z);
  return 0.5 * ((Z - b) - b);
}

SpaceSpec space_of(const PhasePoint& x) {
  switch (x.index()) {
    case 0: return {SpaceKind::Cotangent};
    case 1: return {SpaceKind::Heisenberg};
    default: return {SpaceKind::QuasiPoisson};
  }
}

namespace {

double wedge(const Mat& xF, const Mat& yF, const Mat& xH, const Mat& yH) {
  return pair(xF, yH) - pair(yF, xH);
}

double qp_bracket(const ModuliPoint& p, const PointGradient& F, const PointGradient& H) {
  // Left-multiplication gradients pair with right-invariant fields E^R,
  // right-multiplication gradients with left-invariant fields E^L.
  double s = 0.0;
  const auto off = p.factor_offsets();
  const int nf = static_cast<int>(p.layout.size());
  std::vector<Mat> VF(nf), VH(nf);
  for (int f = 0; f < nf; ++f) {
    const int i = off[f];
    if (p.layout[f] == FactorKind::K) {
      s += 0.5 * wedge(F[i].left, F[i].right, H[i].left, H[i].right);
      VF[f] = F[i].left - F[i].right;
      VH[f] = H[i].left - H[i].right;
    } else {
      const int j = i + 1;
      const auto &R1F = F[i].left, &L1F = F[i].right, &R2F = F[j].left, &L2F = F[j].right;
      const auto &R1H = H[i].left, &L1H = H[i].right, &R2H = H[j].left, &L2H = H[j].right;
      s += 0.5 * (wedge(R1F, L1F, R1H, L1H) - wedge(R2F, L2F, R2H, L2H) +
                  wedge(L1F, L2F + R2F, L1H, L2H + R2H) + wedge(R1F, L2F - R2F, R1H, L2H - R2H));
      VF[f] = R1F - L1F + R2F - L2F;
      VH[f] = R1H - L1H + R2H - L2H;
    }
  }
  // Fusion terms −½ E^a_{M_a} ∧ E_a^{M_b} for every ordered pair of factors.
  for (int a = 0; a < nf; ++a)
    for (int b = a + 1; b < nf; ++b) s -= 0.5 * wedge(VF[a], VF[b], VH[a], VH[b]);
  return s;
}

void check_space(const PhasePoint& x, SpaceSpec space) {
  if (space_of(x).kind != space.kind)
    throw UnsupportedBracket("point of kind " + point_kind_name(x) + " does not match the requested space");
}

}  // namespace

double bracket_from_gradients(const PhasePoint& x, SpaceSpec space, const PointGradient& dF,
                              const PointGradient& dH) {
  check_space(x, space);
  switch (space.kind) {
    case SpaceKind::Cotangent: {
      const Mat& J = std::get<CotangentPoint>(x).J;
      return pair(dF[0].left, dH[1].left) - pair(dH[0].left, dF[1].left) +
             pair(J, lie_bracket(dF[1].left, dH[1].left));
    }
    case SpaceKind::Heisenberg:
      return pair_I(dF[0].left, varrho(dH[0].left)) + pair_I(dF[0].right, varrho(dH[0].right));
    case SpaceKind::QuasiPoisson: return qp_bracket(std::get<ModuliPoint>(x), dF, dH);
  }
  throw UnsupportedBracket("unknown space");
}

double poisson_bracket(const ScalarObservable& F, const ScalarObservable& H, const PhasePoint& x,
                       SpaceSpec space, const DiffConfig& cfg) {
  check_space(x, space);
  return bracket_from_gradients(x, space, point_gradient(F, x, cfg), point_gradient(H, x, cfg));
}

double momentum_condition_residual(const ScalarObservable& f, const GroupFunction& F, const PhasePoint& x,
                                   SpaceSpec space, const DiffConfig& cfg) {
  check_space(x, space);
  if (space.kind != SpaceKind::QuasiPoisson)
    throw UnsupportedBracket("momentum condition applies to quasi-Poisson spaces");
  const auto& p = std::get<ModuliPoint>(x);
  ScalarObservable FPhi("F∘Φ", [F](const PhasePoint& y) { return F(std::get<ModuliPoint>(y).momentum()); });
  const PointGradient gf = point_gradient(f, x, cfg);
  const double lhs = bracket_from_gradients(x, space, gf, point_gradient(FPhi, x, cfg));

  const Mat phi = p.momentum();
  const Mat gl = nabla_fd(F, phi, cfg);
  const Mat gr = phi.adjoint() * gl * phi;
  Mat V = Mat::Zero(p.dim(), p.dim());
  for (const auto& s : gf) V += s.left - s.right;
  const double rhs = 0.5 * pair(V, gl + gr);
  return std::abs(lhs - rhs);
}

}  // namespace hamred
