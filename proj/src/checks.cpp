#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "space_model.hpp"

namespace hamred::detail {

namespace {

using HS = HamiltonianSpec;

constexpr double kFlowStep = 1e-4;
// Gradient oracles sample this far from the walls, where χ_j is smooth on the FD scale.
constexpr double kOracleMargin = 1e-2;
constexpr double kGradStep = 1e-4;

double d4(const std::function<double(double)>& f, double h) {
  return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
}

double rel_gap(double d, double b) { return std::abs(d - b) / (1 + std::abs(b)); }

template <class... Args>
std::string str(const Args&... a) {
  std::ostringstream os;
  os.precision(3);
  (os << ... << a);
  return os.str();
}

bool moduli(const SpaceModel& m) { return m.is_moduli(); }
bool always(const SpaceModel&) { return true; }
auto only(SpaceType t) {
  return [t](const SpaceModel& m) { return m.type() == t; };
}

Mat regular_group(int n, Rng& rng) {
  for (;;) {
    const Mat g = random_group(n, rng);
    try {
      alcove_diagonalize(g, kOracleMargin);
      return g;
    } catch (const RegularityViolation&) {
    }
  }
}

Mat regular_algebra(int n, Rng& rng) {
  for (;;) {
    const Mat J = random_algebra(n, rng);
    try {
      chamber_diagonalize(J, kOracleMargin);
      return J;
    } catch (const RegularityViolation&) {
    }
  }
}

// Direction in 𝔟: upper triangular with real diagonal.
Mat borel_direction(int n, Rng& rng) {
  Mat W = random_borel(n, rng, 1.0);
  for (int k = 0; k < n; ++k) W(k, k) = std::log(W(k, k).real());
  return W;
}

std::vector<InvariantFunction> phi_functions(int n) {
  std::vector<InvariantFunction> out;
  for (int j = 0; j < n - 1; ++j) out.push_back(InvariantFunction::phi(j));
  out.push_back(InvariantFunction::power(2));
  out.push_back(InvariantFunction::power(3));
  return out;
}

std::vector<ClassFunction> chi_functions(int n) {
  std::vector<ClassFunction> out;
  for (int j = 0; j < n - 1; ++j) out.push_back(ClassFunction::chi(j));
  out.push_back(ClassFunction::re_power(2));
  return out;
}

// ---- criterion 1 ----

// Richardson at 1e-3: a plain 1e-3 stencil under-resolves χ_j∘Ξ_R, a 1e-4 one
// loses ptr^3 to roundoff.
const DiffConfig kBracketDiff{1e-3, DiffConfig::Scheme::Central4, true};

Outcome bracket_flow(CheckContext& c) {
  const auto& gens = c.model.flow_generators();
  double worst = 0, min_step = kFlowStep;
  std::size_t probes = 0;
  for (int p = 0; p < c.cfg.points; ++p) {
    const PhasePoint x = c.model.sample(c.rng);
    const SpaceSpec space = space_of(x);
    const auto Fs = make_probes(slot_count(x), c.cfg.probes);
    probes = Fs.size();
    std::vector<PointGradient> dF;
    for (const auto& F : Fs) dF.push_back(point_gradient(F, x, kBracketDiff));
    for (const auto& g : gens) {
      const PointGradient dH = point_gradient(g.H, x, kBracketDiff);
      // Fast flows: keep h·(relative speed) near 2e-3, small enough for truncation
      // and large enough that roundoff in F does not dominate.
      const double speed = point_distance(g.flow(x, 1e-6), g.flow(x, -1e-6)) / 2e-6;
      const double h = std::min(kFlowStep, 2e-3 / (speed / std::max(1.0, flatten(x).norm())));
      min_step = std::min(min_step, h);
      const std::array<PhasePoint, 4> ys = {g.flow(x, 2 * h), g.flow(x, h), g.flow(x, -h), g.flow(x, -2 * h)};
      for (std::size_t k = 0; k < Fs.size(); ++k) {
        const auto& F = Fs[k];
        const double d = (-F(ys[0]) + 8 * F(ys[1]) - 8 * F(ys[2]) + F(ys[3])) / (12 * h);
        worst = std::max(worst, rel_gap(d, bracket_from_gradients(x, space, dF[k], dH)));
      }
    }
  }
  return {worst, str(gens.size(), " generators, ", probes, " probes, ", c.cfg.points, " points, min step ", min_step)};
}

// ---- criterion 2 ----

Outcome abelian_brackets(CheckContext& c) {
  double worst = 0;
  std::size_t pairs = 0;
  for (const auto& fam : c.model.families()) {
    for (int p = 0; p < 5; ++p) {
      const PhasePoint x = c.model.sample(c.rng);
      std::vector<PointGradient> dH;
      for (const auto& g : fam) dH.push_back(point_gradient(g.H, x));
      for (std::size_t a = 0; a < fam.size(); ++a)
        for (std::size_t b = a + 1; b < fam.size(); ++b)
          worst = std::max(worst, std::abs(bracket_from_gradients(x, space_of(x), dH[a], dH[b])));
    }
    pairs += fam.size() * (fam.size() - 1) / 2;
  }
  return {worst, str(pairs, " pairs at 5 points")};
}

Outcome abelian_flows(CheckContext& c) {
  double worst = 0;
  for (const auto& fam : c.model.families())
    for (int p = 0; p < 3; ++p) {
      const PhasePoint x = c.model.sample(c.rng);
      for (std::size_t a = 0; a < fam.size(); ++a)
        for (std::size_t b = a + 1; b < fam.size(); ++b) {
          const PhasePoint ab = fam[b].flow(fam[a].flow(x, 0.3), 0.7);
          const PhasePoint ba = fam[a].flow(fam[b].flow(x, 0.7), 0.3);
          worst = std::max(worst, point_distance(ab, ba));
        }
    }
  return {worst, "times (0.3, 0.7)"};
}

// ---- criterion 3 ----

Outcome momentum_conservation(CheckContext& c) {
  double worst = 0;
  for (int p = 0; p < 10; ++p) {
    const PhasePoint x = c.model.sample(c.rng);
    for (const auto& g : c.model.flow_generators())
      for (double tau : {0.7, -1.3}) {
        const PhasePoint y = g.flow(x, tau);
        for (const auto& q : c.model.momenta()) worst = std::max(worst, (q.eval(y) - q.eval(x)).norm());
      }
  }
  return {worst, c.model.momenta().front().name};
}

Outcome cotangent_pairs(CheckContext& c) {
  const int n = c.model.n();
  double worst = 0;
  for (int p = 0; p < 10; ++p) {
    const auto x = std::get<CotangentPoint>(c.model.sample(c.rng));
    for (double tau : {0.3, -1.7}) {
      for (const auto& f : phi_functions(n)) {
        const auto y = std::get<CotangentPoint>(flow(x, HS::cotangent_phi(f), tau));
        worst = std::max(worst, (y.J - x.J).norm());
        worst = std::max(worst, (y.g.adjoint() * y.J * y.g - x.g.adjoint() * x.J * x.g).norm());
      }
      for (const auto& f : chi_functions(n)) {
        const auto y = std::get<CotangentPoint>(flow(x, HS::cotangent_chi(f), tau));
        worst = std::max(worst, (y.g - x.g).norm());
      }
    }
  }
  return {worst, "J, g^-1 J g along phi flows; g along chi flows"};
}

Outcome heisenberg_invariants(CheckContext& c) {
  double worst = 0;
  for (int p = 0; p < 10; ++p) {
    const Mat X = std::get<HeisenbergPoint>(c.model.sample(c.rng)).X;
    const auto f0 = iwasawa_decompose(X);
    const Mat P0 = posdef_map(f0.b_R);
    for (double tau : {0.4, -1.3})
      for (const auto& f : phi_functions(c.model.n())) {
        const auto f1 = iwasawa_decompose(std::get<HeisenbergPoint>(flow(HeisenbergPoint{X}, HS::heisenberg_phi(f), tau)).X);
        const Mat P1 = posdef_map(f1.b_R);
        worst = std::max({worst, (f1.b_R - f0.b_R).norm(), (P1 - P0).norm(),
                          (f1.g_R.adjoint() * P1 * f1.g_R - f0.g_R.adjoint() * P0 * f0.g_R).norm()});
      }
  }
  return {worst, "b_R, P(b_R), g_R^-1 P(b_R) g_R along phi flows"};
}

Outcome xi_r_law(CheckContext& c) {
  double worst = 0;
  for (int p = 0; p < 10; ++p) {
    const Mat X = std::get<HeisenbergPoint>(c.model.sample(c.rng)).X;
    const auto f0 = iwasawa_decompose(X);
    for (double tau : {0.4, -1.3})
      for (const auto& chi : chi_functions(c.model.n())) {
        const Mat X1 = std::get<HeisenbergPoint>(flow(HeisenbergPoint{X}, HS::heisenberg_chi(chi), tau)).X;
        const Mat E = exp_herm(kI * tau * chi.gradient(f0.g_R));
        const Mat gamma = borel_factor(E).inverse() * E;
        worst = std::max(worst, (iwasawa_xi_R(X1) - gamma * f0.g_R * gamma.adjoint()).norm());
      }
  }
  return {worst, "Xi_R(X(t)) = gamma Xi_R(X) gamma^-1"};
}

Outcome sphere_invariants(CheckContext& c) {
  double worst = 0;
  for (int p = 0; p < 10; ++p) {
    const PhasePoint x = c.model.sample(c.rng);
    const auto v0 = sphere_constants_of_motion(std::get<ModuliPoint>(x));
    for (const auto& g : c.model.flow_generators()) {
      const auto v1 = sphere_constants_of_motion(std::get<ModuliPoint>(g.flow(x, 0.9)));
      for (std::size_t k = 0; k < v0.size(); ++k) worst = std::max(worst, std::abs(v1[k].value - v0[k].value));
    }
  }
  return {worst, "word-trace invariants of (C1,C2) and (C1C2,C3)"};
}

// ---- criterion 4 ----

Outcome torus_periodicity(CheckContext& c) {
  double worst = 0;
  for (const auto& t : c.model.tori()) {
    if (!t.compact) continue;
    for (int p = 0; p < 5; ++p) {
      const PhasePoint x = c.model.sample(c.rng);
      for (int k = 0; k < t.dim; ++k) {
        Vec e = Vec::Zero(t.dim);
        e(k) = 2 * kPi;
        worst = std::max(worst, point_distance(t.act(x, e), x));
        worst = std::max(worst, point_distance(t.generators[k].flow(x, 2 * kPi), x));
      }
    }
  }
  return {worst, "tau = 2 pi e_k, action and generator flow"};
}

bool has_compact_torus(const SpaceModel& m) {
  for (const auto& t : m.tori())
    if (t.compact) return true;
  return false;
}

Outcome torus_additivity(CheckContext& c) {
  double worst = 0, cond = 0;
  for (const auto& t : c.model.tori())
    for (int p = 0; p < 5; ++p) {
      const PhasePoint x = c.model.sample(c.rng);
      const Vec t1 = random_tau(t.dim, c.rng, kTauCap), t2 = random_tau(t.dim, c.rng, kTauCap);
      worst = std::max(worst, point_distance(t.act(x, Vec::Zero(t.dim)), x));
      const PhasePoint y = t.act(x, t1 + t2);
      worst = std::max(worst, point_distance(t.act(t.act(x, t2), t1), y));
      if (const auto* h = std::get_if<HeisenbergPoint>(&y)) {
        Eigen::JacobiSVD<Mat> svd(h->X);
        cond = std::max(cond, svd.singularValues()(0) / svd.singularValues().tail(1)(0));
      }
    }
  std::string note = str("|tau_j| <= ", kTauCap);
  if (cond > 0) note += str("; max cond X(tau) = ", cond);
  return {worst, note};
}

Outcome torus_generator_flows(CheckContext& c) {
  double worst = 0;
  for (const auto& t : c.model.tori())
    for (int p = 0; p < 5; ++p) {
      const PhasePoint x = c.model.sample(c.rng);
      const Vec tau = random_tau(t.dim, c.rng, kTauCap);
      PhasePoint y = x;
      for (int k = 0; k < t.dim; ++k) y = t.generators[k].flow(y, tau(k));
      worst = std::max(worst, point_distance(y, t.act(x, tau)));
    }
  return {worst, "composed action-variable flows"};
}

// ---- criterion 5 ----

Outcome principal_points(CheckContext& c) {
  const auto cases = c.model.principal_cases();
  int failures = 0;
  std::string failed;
  for (const auto& pc : cases) {
    const auto r = stabilizer_dimension(pc.point, pc.action, kSvdThreshold, pc.id);
    if (r.infinitesimal_dim != 0 || !r.center_fixes) {
      ++failures;
      failed += " " + pc.id;
    }
  }
  std::string note = str(cases.size(), " crafted points");
  if (failures) note += "; failing:" + failed;
  return {double(failures), note};
}

Outcome random_rank(CheckContext& c) {
  int deficient = 0;
  for (int p = 0; p < c.cfg.points; ++p) {
    const PhasePoint x = c.model.sample(c.rng);
    for (const auto& t : c.model.tori()) {
      const auto r = ieq_rank_check(x, t.spec);
      if (r.generator_rank != r.expected_generator_rank || r.action_rank != r.expected_action_rank) ++deficient;
    }
  }
  return {double(deficient), str(c.cfg.points, " points; count of rank-deficient points")};
}

bool has_second_cases(const SpaceModel& m) {
  for (const auto& pc : m.principal_cases())
    if (pc.action.second_dim(m.n()) > 0) return true;
  return false;
}

Outcome torus_freeness(CheckContext& c) {
  double margin = 1e300;
  int used = 0;
  for (const auto& pc : c.model.principal_cases()) {
    if (pc.action.second_dim(c.model.n()) == 0) continue;
    ++used;
    for (int t = 0; t < 2; ++t) {
      const PhasePoint x = k_action(random_group(c.model.n(), c.rng), pc.point);
      margin = std::min(margin, torus_freeness_margin(x, pc.action, c.rng, 16));
    }
  }
  return {margin, str(used, " crafted points, K-conjugated")};
}

// ---- criterion 6 ----

Vec random_traceless(int n, Rng& rng, double s) {
  std::normal_distribution<double> N(0.0, s);
  Vec h(n);
  for (auto& v : h) v = N(rng);
  h.array() -= h.mean();
  return h;
}

Outcome f1_identity(CheckContext& c) {
  double worst = 0;
  for (int n = 2; n <= 5; ++n)
    for (int t = 0; t < 50; ++t) worst = std::max(worst, commutator_identity_check(random_traceless(n, c.rng, 2.0)));
  return {worst, "50 targets per n = 2..5"};
}

Outcome commutator_solver(CheckContext& c) {
  double worst = 0;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int n = 2; n <= 5; ++n) {
    worst = std::max(worst, commutator_solve(Vec::Zero(n)).residual);
    for (int t = 0; t < 20; ++t) {
      Vec v(n);
      for (auto& e : v) e = U(c.rng);
      std::sort(v.begin(), v.end(), std::greater<>());
      Vec xi = 2 * kPi * 0.95 * (v.array() - v(n - 1)).matrix() / std::max(1e-9, v(0) - v(n - 1));
      xi.array() -= xi.mean();
      worst = std::max(worst, commutator_solve(xi).residual);
    }
  }
  return {worst, "zero and 20 alcove targets per n = 2..5"};
}

// ---- criterion 7 ----

Outcome rational_qc(CheckContext&) {
  int bad = 0;
  for (int n = 2; n <= 8; ++n) {
    const RootDatum rd = build_root_datum(n);
    RationalMatrix C(rd.rank, std::vector<Rational>(rd.rank));
    for (int i = 0; i < rd.rank; ++i)
      for (int j = 0; j < rd.rank; ++j) C[i][j] = Rational(rd.cartan[i][j]);
    const auto QC = rational_product(rd.q_matrix, C);
    for (int i = 0; i < rd.rank; ++i)
      for (int j = 0; j < rd.rank; ++j)
        if (QC[i][j] != Rational(i == j ? 1 : 0)) ++bad;
  }
  return {double(bad), "exact rational entries off the identity, n = 2..8"};
}

Outcome iwasawa_roundtrip(CheckContext& c) {
  double worst = 0;
  for (int t = 0; t < 30; ++t) {
    const Mat X = random_complex_group(c.model.n(), c.rng);
    const auto f = iwasawa_decompose(X);
    worst = std::max({worst, (f.g_L * f.b_R.inverse() - X).norm(), (f.b_L * f.g_R.adjoint() - X).norm()});
  }
  return {worst, "X = g_L b_R^-1 = b_L g_R^-1, 30 samples"};
}

Outcome p_equivariance(CheckContext& c) {
  double worst = 0;
  for (int t = 0; t < 30; ++t) {
    const Mat b = random_borel(c.model.n(), c.rng);
    const Mat eta = random_group(c.model.n(), c.rng);
    worst = std::max(worst, (posdef_map(dressing_action(eta, b)) - eta * posdef_map(b) * eta.adjoint()).norm());
  }
  return {worst, "P(Dress_eta b) = eta P(b) eta^-1"};
}

Outcome quasi_adjoint_law(CheckContext& c) {
  double worst = 0;
  for (int t = 0; t < 30; ++t) {
    const Mat X = random_complex_group(c.model.n(), c.rng);
    const Mat eta = random_group(c.model.n(), c.rng);
    const auto f = iwasawa_decompose(X);
    const Mat et = iwasawa_xi_R(eta * f.b_L).adjoint();
    const auto g = iwasawa_decompose(quasi_adjoint_action(eta, X));
    worst = std::max({worst, (g.g_R - et * f.g_R * et.adjoint()).norm(), (g.b_R - dressing_action(et, f.b_R)).norm()});
  }
  return {worst, "(g_R, b_R) under the quasi-adjoint action"};
}

bool quasi_poisson(const SpaceModel& m) { return m.type() == SpaceType::Double || m.is_moduli(); }

Outcome momentum_condition(CheckContext& c) {
  const std::vector<GroupFunction> Fs = {[](const Mat& g) { return (g * g).trace().real(); },
                                         [](const Mat& g) { return g.trace().imag(); }};
  double worst = 0;
  for (int p = 0; p < 5; ++p) {
    const PhasePoint x = c.model.sample(c.rng);
    for (const auto& f : make_probes(slot_count(x), c.cfg.probes))
      for (const auto& F : Fs) worst = std::max(worst, momentum_condition_residual(f, F, x, space_of(x)));
  }
  return {worst, "word-trace probes against Re tr g^2 and Im tr g"};
}

Outcome shifting_trick(CheckContext& c) {
  double worst = 0;
  for (int p = 0; p < 3; ++p) {
    const ModuliPoint u = random_moduli_point(c.model.m(), c.model.n_factors(), c.model.n(), c.rng);
    const ModuliPoint x = embed_shift(u);
    const auto fs = invariant_probes(static_cast<int>(u.comps.size()));
    std::vector<PointGradient> gu, gx;
    for (const auto& f : fs) {
      gu.push_back(point_gradient(f, u));
      gx.push_back(point_gradient(f, x));
    }
    for (std::size_t a = 0; a < fs.size(); ++a)
      for (std::size_t b = a + 1; b < fs.size(); ++b) {
        const double bu = bracket_from_gradients(u, space_of(u), gu[a], gu[b]);
        const double bx = bracket_from_gradients(x, space_of(x), gx[a], gx[b]);
        worst = std::max(worst, rel_gap(bx, bu));
      }
  }
  return {worst, str("M_{", c.model.m(), ",", c.model.n_factors(), "} against M_{", c.model.m(), ",",
                     c.model.n_factors() + 1, "} on Phi = e")};
}

// ---- criterion 8 ----

Outcome gradient_alcove(CheckContext& c) {
  const int n = c.model.n();
  double worst = 0;
  for (int t = 0; t < 30; ++t) {
    const Mat g = regular_group(n, c.rng), Z = random_algebra(n, c.rng);
    for (int j = 0; j < n - 1; ++j)
      for (ActionFamily fam : {ActionFamily::Chi, ActionFamily::Xi}) {
        const double fd = d4([&](double s) { return action_variables(expm(s * Z) * g, fam)(j); }, kGradStep);
        const double cf = pair(Z, gradient_action_variable(g, fam, j));
        worst = std::max(worst, std::abs(fd - cf) / std::max(1.0, std::abs(cf)));
      }
  }
  return {worst, "grad chi_j and grad Xi_j, 30 inputs"};
}

Outcome gradient_phi_algebra(CheckContext& c) {
  const int n = c.model.n();
  double worst = 0;
  for (int t = 0; t < 30; ++t) {
    const Mat J = regular_algebra(n, c.rng), Z = random_algebra(n, c.rng);
    for (int j = 0; j < n - 1; ++j) {
      const double fd = d4([&](double s) { return action_variables(J + s * Z, ActionFamily::Phi)(j); }, kGradStep);
      const double cf = pair(Z, gradient_action_variable(J, ActionFamily::Phi, j));
      worst = std::max(worst, std::abs(fd - cf) / std::max(1.0, std::abs(cf)));
    }
  }
  return {worst, "d phi_j on the chamber, 30 inputs"};
}

Outcome gradient_phi_borel(CheckContext& c) {
  const int n = c.model.n();
  double worst = 0;
  for (int t = 0; t < 30; ++t) {
    const Mat b = random_borel(n, c.rng, 0.7), W = borel_direction(n, c.rng);
    for (int j = 0; j < n - 1; ++j) {
      const double fd =
          d4([&](double s) { return action_variables(expm(s * W) * b, ActionFamily::PhiBorel)(j); }, kGradStep);
      const double cf = (W * gradient_action_variable(b, ActionFamily::PhiBorel, j)).trace().imag();
      worst = std::max(worst, std::abs(fd - cf) / std::max(1.0, std::abs(cf)));
    }
    for (const auto& f : {InvariantFunction::power(2), InvariantFunction::power(3)}) {
      const double fd = d4([&](double s) { return f.value_borel(expm(s * W) * b); }, kGradStep);
      const double cf = (W * f.gradient_borel(b)).trace().imag();
      worst = std::max(worst, std::abs(fd - cf) / std::max(1.0, std::abs(cf)));
    }
  }
  return {worst, "D phi on B under the Im-form, 30 inputs"};
}

Outcome gradient_power_trace(CheckContext& c) {
  const int n = c.model.n();
  double worst = 0;
  for (int t = 0; t < 30; ++t) {
    const Mat g = random_group(n, c.rng), Z = random_algebra(n, c.rng), J = random_algebra(n, c.rng);
    for (const auto& cf : {ClassFunction::re_power(1), ClassFunction::re_power(2), ClassFunction::re_power(3),
                           ClassFunction::im_power(1), ClassFunction::im_power(2)}) {
      const double fd = d4([&](double s) { return cf.value(expm(s * Z) * g); }, kGradStep);
      const double cl = pair(Z, cf.gradient(g));
      worst = std::max(worst, std::abs(fd - cl) / std::max(1.0, std::abs(cl)));
    }
    for (const auto& f : {InvariantFunction::power(2), InvariantFunction::power(3)}) {
      const double fd = d4([&](double s) { return f.value_algebra(J + s * Z); }, kGradStep);
      const double cl = pair(Z, f.gradient_algebra(J));
      worst = std::max(worst, std::abs(fd - cl) / std::max(1.0, std::abs(cl)));
    }
  }
  return {worst, "power traces on K and on k, 30 inputs"};
}

// ---- criterion 9 ----

bool permutable(const SpaceModel& m) { return m.is_moduli() && m.m() + m.n_factors() >= 2; }

Outcome permutation_brackets(CheckContext& c) {
  const int factors = c.model.m() + c.model.n_factors();
  std::vector<PermutationPlan> plans;
  for (int j = 1; j < factors; ++j) plans.push_back({{j}});
  if (factors >= 3) {
    PermutationPlan all;
    for (int j = factors - 1; j >= 1; --j) all.steps.push_back(j);
    plans.push_back(all);
  }
  double worst = 0;
  for (const auto& plan : plans)
    for (int p = 0; p < 2; ++p) {
      const ModuliPoint x = random_moduli_point(c.model.m(), c.model.n_factors(), c.model.n(), c.rng);
      const ModuliPoint y = permutation_pushforward(x, plan);
      const auto fs = make_probes(static_cast<int>(x.comps.size()), c.cfg.probes);
      std::vector<PointGradient> up, down;
      for (const auto& f : fs) {
        up.push_back(point_gradient(pullback_hamiltonian(f, plan), x));
        down.push_back(point_gradient(f, y));
      }
      for (std::size_t a = 0; a < fs.size(); ++a)
        for (std::size_t b = a + 1; b < fs.size(); ++b)
          worst = std::max(worst, rel_gap(bracket_from_gradients(x, space_of(x), up[a], up[b]),
                                          bracket_from_gradients(y, space_of(y), down[a], down[b])));
    }
  return {worst, str(plans.size(), " plans")};
}

Outcome permutation_family(CheckContext& c) {
  const int factors = c.model.m() + c.model.n_factors();
  const PermutationPlan plan{{1}};
  const int split = factors / 2 - 1;
  std::vector<ScalarObservable> fs;
  for (const auto& chi : {ClassFunction::re_power(1), ClassFunction::im_power(2)}) {
    fs.push_back(pullback_hamiltonian(WordHamiltonian::factor_range(0, split, chi, "left"), plan));
    fs.push_back(pullback_hamiltonian(WordHamiltonian::factor_range(split + 1, factors - 1, chi, "right"), plan));
    fs.push_back(pullback_hamiltonian(WordHamiltonian::factor_range(0, factors - 1, chi, "all"), plan));
  }
  double worst = 0;
  for (int p = 0; p < 3; ++p) {
    const ModuliPoint x = random_moduli_point(c.model.m(), c.model.n_factors(), c.model.n(), c.rng);
    std::vector<PointGradient> d;
    for (const auto& f : fs) d.push_back(point_gradient(f, x));
    for (std::size_t a = 0; a < fs.size(); ++a)
      for (std::size_t b = a + 1; b < fs.size(); ++b)
        worst = std::max(worst, std::abs(bracket_from_gradients(x, space_of(x), d[a], d[b])));
  }
  return {worst, "contiguous blocks of the swapped layout pulled back along psi_1"};
}

bool sphere_shape(const SpaceModel& m) { return m.is_moduli() && m.m() == 0 && m.n_factors() == 3; }

std::vector<CheckDef> build_catalog() {
  const auto le = Comparison::AtMost;
  const auto cotangent = only(SpaceType::Cotangent);
  const auto heisenberg = only(SpaceType::Heisenberg);
  std::vector<CheckDef> v = {
      {"flow.bracket_consistency", "bracket-flow", 1, 1e-6, le, always, bracket_flow},
      {"abelian.brackets", "abelian-family", 2, 1e-6, le, always, abelian_brackets},
      {"abelian.flow_commutation", "abelian-family", 2, 1e-8, le, always, abelian_flows},
      {"conservation.momentum", "momentum-map", 3, 1e-10, le, always, momentum_conservation},
      {"conservation.remark_pairs", "cotangent-pairs", 3, 1e-10, le, cotangent, cotangent_pairs},
      {"conservation.lambda_invariants", "heisenberg-invariants", 3, 1e-10, le, heisenberg, heisenberg_invariants},
      {"conservation.xi_r_law", "xi-r-conjugation", 3, 1e-9, le, heisenberg, xi_r_law},
      {"conservation.sphere_invariants", "sphere-invariants", 3, 1e-10, le, sphere_shape, sphere_invariants},
      {"torus.periodicity", "torus-period", 4, 1e-8, le, has_compact_torus, torus_periodicity},
      {"torus.additivity", "torus-action", 4, 1e-9, le, always, torus_additivity},
      {"torus.generator_flows", "torus-action", 4, 1e-8, le, always, torus_generator_flows},
      {"isotropy.principal_points", "principal-isotropy", 5, 0, le, always, principal_points},
      {"isotropy.random_rank", "generator-rank", 5, 0, le, always, random_rank},
      {"isotropy.torus_freeness", "torus-freeness", 5, 1e-4, Comparison::AtLeast, has_second_cases, torus_freeness},
      {"identity.f1", "coxeter-identity", 6, 1e-10, le, always, f1_identity},
      {"identity.commutator_solve", "coxeter-identity", 6, 1e-10, le, always, commutator_solver},
      {"structure.rational_qc", "root-datum", 7, 0, le, always, rational_qc},
      {"structure.iwasawa_roundtrip", "iwasawa", 7, 1e-12, le, always, iwasawa_roundtrip},
      {"structure.p_equivariance", "dressing", 7, 1e-10, le, always, p_equivariance},
      {"structure.quasi_adjoint_law", "quasi-adjoint", 7, 1e-9, le, always, quasi_adjoint_law},
      {"structure.momentum_condition", "momentum-condition", 7, 1e-6, le, quasi_poisson, momentum_condition},
      {"structure.shifting_trick", "shifting-trick", 7, 1e-6, le, moduli, shifting_trick},
      {"gradient.alcove", "gradient-oracle", 8, 1e-6, le, always, gradient_alcove},
      {"gradient.phi_algebra", "gradient-oracle", 8, 1e-6, le, always, gradient_phi_algebra},
      {"gradient.phi_borel", "gradient-oracle", 8, 1e-6, le, always, gradient_phi_borel},
      {"gradient.power_trace", "gradient-oracle", 8, 1e-6, le, always, gradient_power_trace},
      {"permutation.bracket_preservation", "permutation", 9, 1e-6, le, permutable, permutation_brackets},
      {"permutation.pulled_back_abelian", "permutation", 9, 1e-6, le, permutable, permutation_family},
  };
  std::sort(v.begin(), v.end(), [](const CheckDef& a, const CheckDef& b) { return a.name < b.name; });
  return v;
}

}  // namespace

const std::vector<CheckDef>& check_catalog() {
  static const std::vector<CheckDef> catalog = build_catalog();
  return catalog;
}

}  // namespace hamred::detail
