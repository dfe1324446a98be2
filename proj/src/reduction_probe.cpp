#include "hamred/reduction_probe.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/SVD>

namespace hamred {

namespace {

RMat columns(const std::vector<Vec>& cols) {
  if (cols.empty()) return RMat(0, 0);
  RMat M(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) M.col(static_cast<Eigen::Index>(j)) = cols[j];
  return M;
}

Vec singular_values(const RMat& M) {
  if (M.size() == 0) return Vec(0);
  return Eigen::JacobiSVD<RMat>(M).singularValues();
}

Vec singular_values(const std::vector<Vec>& cols) { return singular_values(columns(cols)); }

int count_above(const Vec& s, double threshold) {
  return static_cast<int>(std::count_if(s.begin(), s.end(), [&](double v) { return v >= threshold; }));
}

Vec d4_vec(const std::function<Vec(double)>& f, double h = 1e-3) {
  return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
}

// Tangent directions of the phase space: left translations on group slots,
// additive shifts on algebra slots, left translations by sl(n,ℂ) on complex slots.
struct Direction {
  int slot;
  Mat Z;
};

std::vector<Direction> tangent_directions(const PhasePoint& x) {
  const int n = point_dim(x);
  const auto su = su_basis(n);
  const auto sl = realified_sl_basis(n);
  std::vector<Direction> out;
  for (int s = 0; s < slot_count(x); ++s)
    for (const Mat& Z : slot_kind(x, s) == SlotKind::Complex ? sl : su) out.push_back({s, Z});
  return out;
}

PhasePoint move(const PhasePoint& x, const Direction& d, double t) {
  PhasePoint y = x;
  Mat& m = slot_mut(y, d.slot);
  switch (slot_kind(x, d.slot)) {
    case SlotKind::Group: m = exp_skew(t * d.Z) * m; break;
    case SlotKind::Algebra: m += t * d.Z; break;
    case SlotKind::Complex: m = expm(t * d.Z) * m; break;
  }
  return y;
}

std::vector<ScalarObservable> invariant_probes(const PhasePoint& x) {
  std::vector<ScalarObservable> out;
  if (std::holds_alternative<HeisenbergPoint>(x)) {
    // K acts on (Ξ_R, 𝒫∘Λ_R) by simultaneous conjugation.
    auto word = [](std::vector<int> letters, TracePart part) {
      std::string name = "heis";
      for (int l : letters) name += std::to_string(l);
      return ScalarObservable(name, [letters, part](const PhasePoint& p) {
        const auto f = iwasawa_decompose(std::get<HeisenbergPoint>(p).X);
        const Mat mats[2] = {f.g_R, posdef_map(f.b_R)};
        Mat w = identity(static_cast<int>(f.g_R.rows()));
        for (int l : letters) w = w * mats[l];
        return part == TracePart::Real ? w.trace().real() : w.trace().imag();
      });
    };
    for (const auto& letters : std::vector<std::vector<int>>{
             {0}, {0, 0}, {1}, {1, 1}, {0, 1}, {0, 0, 1}, {0, 1, 1}, {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 0, 0}, {1, 1, 1}})
      for (auto part : {TracePart::Real, TracePart::Imag}) out.push_back(word(letters, part));
    return out;
  }
  using Op = Letter::Op;
  const int k = slot_count(x);
  for (int a = 0; a < k; ++a) {
    out.push_back(ScalarObservable::word_trace({{a, Op::Plain}}));
    out.push_back(ScalarObservable::word_trace({{a, Op::Plain}}, TracePart::Imag));
    out.push_back(ScalarObservable::word_trace({{a, Op::Plain}, {a, Op::Plain}}));
    out.push_back(ScalarObservable::word_trace({{a, Op::Plain}, {a, Op::Plain}}, TracePart::Imag));
    for (int b = a + 1; b < k; ++b)
      for (auto op : {Op::Plain, Op::Adjoint})
        for (auto part : {TracePart::Real, TracePart::Imag}) {
          out.push_back(ScalarObservable::word_trace({{a, Op::Plain}, {b, op}}, part));
          out.push_back(ScalarObservable::word_trace({{a, Op::Plain}, {a, Op::Plain}, {b, op}}, part));
          out.push_back(ScalarObservable::word_trace({{a, Op::Plain}, {b, op}, {b, op}}, part));
          for (int c = b + 1; c < k; ++c)
            out.push_back(ScalarObservable::word_trace({{a, Op::Plain}, {b, op}, {c, Op::Plain}}, part));
        }
  }
  return out;
}

int jacobian_rank(const std::vector<ScalarObservable>& fs, const PhasePoint& x, double threshold, Vec* sv = nullptr) {
  const auto dirs = tangent_directions(x);
  std::vector<Vec> rows;
  for (const auto& F : fs) {
    Vec r(static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      const auto& dir = dirs[d];
      r(static_cast<Eigen::Index>(d)) = (-F(move(x, dir, 2e-3)) + 8 * F(move(x, dir, 1e-3)) -
                                         8 * F(move(x, dir, -1e-3)) + F(move(x, dir, -2e-3))) /
                                        12e-3;
    }
    rows.push_back(r);
  }
  const Vec s = singular_values(rows);
  if (sv) *sv = s;
  return count_above(s, threshold);
}

}  // namespace

// ---------------------------------------------------------------- ActionSpec

int ActionSpec::second_dim(int n) const {
  switch (second) {
    case Second::None: return 0;
    case Second::Closed: return n - 1;
    case Second::Moduli: return static_cast<int>(blocks.size()) * (n - 1);
  }
  return 0;
}

bool ActionSpec::second_compact() const {
  return second != Second::Closed || torus_is_compact(torus);
}

PhasePoint ActionSpec::act_second(const PhasePoint& x, const Vec& tau) const {
  switch (second) {
    case Second::None: return x;
    case Second::Closed: return torus_action(x, tau, torus);
    case Second::Moduli: return moduli_torus_action(std::get<ModuliPoint>(x), tau, blocks);
  }
  return x;
}

std::vector<ScalarObservable> ActionSpec::second_generators(int n) const {
  std::vector<ScalarObservable> out;
  if (second == Second::Closed)
    for (const auto& h : torus_generators(torus, n)) out.push_back(h.observable());
  if (second == Second::Moduli)
    for (const auto& h : action_hamiltonians(blocks, n)) out.push_back(h.observable());
  return out;
}

std::string ActionSpec::name() const {
  static const std::map<TorusActionSpec, std::string> names = {
      {TorusActionSpec::CotangentTorus, "T"},       {TorusActionSpec::CotangentVector, "R^l"},
      {TorusActionSpec::HeisenbergTorus, "T"},      {TorusActionSpec::HeisenbergVector, "R^l"},
      {TorusActionSpec::DoubleP1Torus, "T"},        {TorusActionSpec::DoubleP2Torus, "T"},
      {TorusActionSpec::DoubleAdjoint, "T^ad"},
  };
  std::string s = with_k ? "K" : "";
  auto add = [&](const std::string& part) { s += (s.empty() ? "" : " x ") + part; };
  if (second == Second::Closed) add(names.at(torus));
  if (second == Second::Moduli)
    for (const auto& b : blocks) add(b.block == WordHamiltonian::Block::SingleA ? "T" : "T^ad");
  return s.empty() ? "trivial" : s;
}

RMat generator_matrix(const PhasePoint& x, const ActionSpec& a, bool second_only) {
  const int n = point_dim(x);
  std::vector<Vec> cols;
  if (a.with_k && !second_only)
    for (const Mat& Z : su_basis(n))
      cols.push_back(d4_vec([&](double s) { return flatten(k_action(exp_skew(s * Z), x)); }));
  const int d = a.second_dim(n);
  for (int j = 0; j < d; ++j)
    cols.push_back(d4_vec([&](double s) {
      Vec tau = Vec::Zero(d);
      tau(j) = s;
      return flatten(a.act_second(x, tau));
    }));
  return columns(cols);
}

StabilizerReport stabilizer_dimension(const PhasePoint& x, const ActionSpec& a, double threshold,
                                      std::string point_id) {
  const int n = point_dim(x);
  StabilizerReport r;
  r.point_id = std::move(point_id);
  r.group_dim = a.group_dim(n);
  r.singular_values = singular_values(generator_matrix(x, a));
  r.infinitesimal_dim = r.group_dim - count_above(r.singular_values, threshold);
  for (const Mat& c : special_elements(n).center)
    r.center_residual = std::max(r.center_residual, point_distance(k_action(c, x), x));
  r.center_fixes = r.center_residual <= 1e-10;
  return r;
}

// ---------------------------------------------------------------- special points

Vec generic_alcove_vector(int n, int salt) {
  const Vec rho = special_elements(n).rho_vee;
  Vec xi(n);
  for (int k = 0; k < n; ++k) xi(k) = rho(k) + 0.2 * std::sin(1.7 * k + 0.9 * salt + 0.3);
  xi.array() -= xi.mean();
  return (2 * kPi / n) * xi;
}

Mat apposition_torus_element(int n, int salt) {
  const Mat F = special_elements(n).apposition;
  return F * exp_skew(idiag(generic_alcove_vector(n, salt + 17))) * F.adjoint();
}

Mat apposition_algebra_element(int n, int salt) {
  const Mat F = special_elements(n).apposition;
  return F * idiag(generic_alcove_vector(n, salt + 29)) * F.adjoint();
}

Mat coxeter_minus_id_inverse(int n) {
  const Mat g = special_elements(n).coxeter_rep;
  Eigen::MatrixXd W(n, n);
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e(k) = 1;
    W.col(k) = (g * diag(e) * g.adjoint()).diagonal().real();
  }
  W -= Eigen::MatrixXd::Identity(n, n);
  // The kernel is spanned by (1,…,1); the pseudo-inverse is the inverse on 𝔱.
  return Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(W).pseudoInverse().cast<cplx>();
}

namespace {

void require_traceless(const Vec& h) {
  if (h.size() < 2) throw ShapeError("diagonal vector needs length >= 2");
  if (std::abs(h.sum()) > 1e-9 * (1 + h.norm())) throw ShapeError("vector is not in t (entries must sum to 0)");
}

Vec solve_coxeter(const Vec& h) {
  return (coxeter_minus_id_inverse(static_cast<int>(h.size())).real() * h).eval();
}

}  // namespace

double commutator_identity_check(const Vec& h) {
  require_traceless(h);
  const int n = static_cast<int>(h.size());
  const Mat g = special_elements(n).coxeter_rep;
  const Mat E = exp_skew(idiag(solve_coxeter(h)));
  return (g * E * g.adjoint() * E.adjoint() - exp_skew(idiag(h))).norm();
}

CommutatorSolution commutator_solve(const Vec& xi) {
  require_traceless(xi);
  const int n = static_cast<int>(xi.size());
  for (int k = 0; k + 1 < n; ++k)
    if (xi(k) < xi(k + 1) - 1e-12) throw RegularityViolation("target is not in the closed alcove (not decreasing)");
  if (xi(0) - xi(n - 1) > 2 * kPi + 1e-12) throw RegularityViolation("target is not in the closed alcove (span > 2 pi)");
  CommutatorSolution s;
  s.A = special_elements(n).coxeter_rep;
  s.B = exp_skew(idiag(solve_coxeter(xi)));
  s.residual = (group_commutator(s.A, s.B) - exp_skew(idiag(xi))).norm();
  return s;
}

namespace {

// A ∈ 𝕋^reg and B = g_cox with [A,B] = exp(iξ).
std::pair<Mat, Mat> coxeter_pair(const Vec& xi) {
  const int n = static_cast<int>(xi.size());
  return {exp_skew(idiag(-solve_coxeter(xi))), special_elements(n).coxeter_rep};
}

Mat alcove_element(int n, int salt) { return exp_skew(idiag(generic_alcove_vector(n, salt))); }

CotangentPoint cotangent_point(int n) { return {alcove_element(n, 0), apposition_algebra_element(n, 0)}; }

HeisenbergPoint heisenberg_point(int n) {
  const Mat F = special_elements(n).apposition;
  const Mat P = F * exp_herm(diag(generic_alcove_vector(n, 5))) * F.adjoint();
  return {heisenberg_from_right_factors(alcove_element(n, 0), posdef_unmap(P))};
}

IntervalFamily family(int m, int n, std::vector<int> I, std::vector<int> I_hat, std::vector<Interval> J) {
  IntervalFamily f;
  f.m = m;
  f.n = n;
  f.I = std::move(I);
  f.I_hat = std::move(I_hat);
  f.J = std::move(J);
  return f;
}

}  // namespace

ModuliPoint principal_family_point(const IntervalFamily& f, int n) {
  validate(f);
  if (!f.nested.empty() || !f.commutator_blocks.empty() || !f.tails.empty())
    throw Unsupported("crafted points exist only for families built from I, I_hat and J");
  const Mat F = special_elements(n).apposition;
  int salt = 0;
  std::vector<Mat> comps(2 * f.m + f.n, identity(n));
  bool torus_frame_hat = f.I.empty() && f.J.empty();
  for (int i = 1; i <= f.m; ++i) {
    Mat& A = comps[2 * (i - 1)];
    Mat& B = comps[2 * (i - 1) + 1];
    if (std::count(f.I.begin(), f.I.end(), i)) {
      A = alcove_element(n, ++salt);
      B = F;
    } else if (std::count(f.I_hat.begin(), f.I_hat.end(), i)) {
      auto [a, b] = coxeter_pair(generic_alcove_vector(n, ++salt));
      if (torus_frame_hat) {
        A = a;
        B = b;
        torus_frame_hat = false;
      } else {
        A = F * a * F.adjoint();
        B = F * b * F.adjoint();
      }
    } else {
      A = apposition_torus_element(n, ++salt);
      B = alcove_element(n, ++salt);
    }
  }
  const int c0 = 2 * f.m;
  for (int k = 1; k <= f.n; ++k) comps[c0 + k - 1] = apposition_torus_element(n, ++salt);
  for (const auto& iv : f.J) {
    for (int k = iv.lo + 1; k < iv.hi; ++k) comps[c0 + k - 1] = identity(n);
    const Mat& last = comps[c0 + iv.hi - 1];
    comps[c0 + iv.lo - 1] = alcove_element(n, ++salt) * last.adjoint();
  }
  return ModuliPoint::canonical(f.m, f.n, std::move(comps));
}

std::vector<std::string> supported_lemma_ids() {
  return {"cotangent-K", "cotangent-KxT", "cotangent-KxR", "heisenberg-K", "heisenberg-KxT", "heisenberg-KxR", "sphere-KxTad", "double-KxT", "double-KxT-tilde",
          "genus2-coxeter", "genus2-two-commutators", "m0-interval", "m1-handle-interval", "m1-commutator-interval", "m2-handle-commutator", "m2-mixed-interval"};
}

PrincipalCase principal_case(const std::string& id, int n) {
  using T = TorusActionSpec;
  const Mat F = special_elements(n).apposition;
  auto from_family = [&](const std::string& desc, const IntervalFamily& f) {
    return PrincipalCase{id, desc, principal_family_point(f, n), ActionSpec::moduli(family_blocks(f))};
  };
  if (id == "cotangent-K") return {id, "T*K: g in exp(iA), J in t'^reg; K", cotangent_point(n), ActionSpec::k_only()};
  if (id == "cotangent-KxT") return {id, "T*K: g in exp(iA), J in t'^reg; K x T", cotangent_point(n), ActionSpec::closed(T::CotangentTorus)};
  if (id == "cotangent-KxR")
    return {id, "T*K: g in exp(iA), J in t'^reg; K x R^l", cotangent_point(n), ActionSpec::closed(T::CotangentVector)};
  if (id == "heisenberg-K") return {id, "Heisenberg: g_R in exp(iA), P(b_R) in exp(t'); K", heisenberg_point(n), ActionSpec::k_only()};
  if (id == "heisenberg-KxT")
    return {id, "Heisenberg: g_R in exp(iA), P(b_R) in exp(t'); K x T", heisenberg_point(n),
            ActionSpec::closed(T::HeisenbergTorus)};
  if (id == "heisenberg-KxR")
    return {id, "Heisenberg: g_R in exp(iA), P(b_R) in exp(t'); K x R^l", heisenberg_point(n),
            ActionSpec::closed(T::HeisenbergVector)};
  if (id == "sphere-KxTad") return from_family("M_{0,3}: C2, C3 in T'^reg, C1C2 in exp(iA); K x T^ad", IntervalFamily::sphere());
  if (id == "double-KxT")
    return {id, "D(K): A in exp(iA), B = F; K x T", ModuliPoint::make_double(alcove_element(n, 1), F),
            ActionSpec::closed(T::DoubleP1Torus)};
  if (id == "double-KxT-tilde")
    return {id, "D(K): A = F, B in exp(iA); K x T", ModuliPoint::make_double(F, alcove_element(n, 1)),
            ActionSpec::closed(T::DoubleP2Torus)};
  if (id == "genus2-coxeter") {
    auto [a1, b1] = coxeter_pair(generic_alcove_vector(n, 1));
    const auto x = ModuliPoint::canonical(2, 0, {a1, b1, alcove_element(n, 2), F});
    IntervalFamily f = family(2, 0, {2}, {1}, {});
    return {id, "M_{2,0}: A1 in T^reg, B1 Coxeter, [A1,B1] in exp(iA), A2 in exp(iA), B2A2B2^-1 in T'; K x T^ad x T",
            x, ActionSpec::moduli(family_blocks(f))};
  }
  if (id == "genus2-two-commutators")
    return from_family("M_{2,0}: pairs of Coxeter type in T and T'; K x T^ad x T^ad", family(2, 0, {}, {1, 2}, {}));
  if (id == "m0-interval") return from_family("M_{0,4}, J = {[2,3]}", family(0, 4, {}, {}, {{2, 3}}));
  if (id == "m1-handle-interval") return from_family("M_{1,3}, I = {1}, J = {[2,3]}", family(1, 3, {1}, {}, {{2, 3}}));
  if (id == "m1-commutator-interval") return from_family("M_{1,2}, I_hat = {1}, J = {[1,2]}", family(1, 2, {}, {1}, {{1, 2}}));
  if (id == "m2-handle-commutator") return from_family("M_{2,1}, I = {1}, I_hat = {2}", family(2, 1, {1}, {2}, {}));
  if (id == "m2-mixed-interval") return from_family("M_{2,3}, I = {2}, I_hat = {1}, J = {[1,2]}", family(2, 3, {2}, {1}, {{1, 2}}));
  throw Unsupported("no crafted point for lemma id '" + id + "'");
}

PhasePoint principal_test_point(const std::string& id, int n) { return principal_case(id, n).point; }

// ---------------------------------------------------------------- ranks

RankReport ieq_rank_check(const PhasePoint& x, const ActionSpec& a, double threshold) {
  const int n = point_dim(x);
  const auto gens = a.second_generators(n);
  for (const auto& H : gens) H(x);  // throws RegularityViolation off the regular set

  RankReport r;
  r.generator_singular_values = singular_values(generator_matrix(x, a, true));
  r.generator_rank = count_above(r.generator_singular_values, threshold);
  r.expected_generator_rank = a.second_dim(n);

  r.action_rank = jacobian_rank(gens, x, threshold, &r.action_singular_values);
  r.expected_action_rank = static_cast<int>(gens.size());

  r.dim_Y = static_cast<int>(tangent_directions(x).size());
  r.k_orbit_dim = count_above(singular_values(generator_matrix(x, ActionSpec::k_only())), threshold);
  const auto probes = invariant_probes(x);
  r.probe_count = static_cast<int>(probes.size());
  r.invariant_probe_rank = jacobian_rank(probes, x, threshold);
  return r;
}

double torus_freeness_margin(const PhasePoint& x, const ActionSpec& a, Rng& rng, int samples) {
  const int d = a.second_dim(point_dim(x));
  if (d == 0) throw Unsupported("action has no second factor");
  const bool compact = a.second_compact();
  std::uniform_real_distribution<double> U(compact ? 0.0 : -3.0, compact ? 2 * kPi : 3.0);
  auto far_from_lattice = [&](const Vec& tau) {
    for (double t : tau) {
      if (compact && t >= 0.1 && t <= 2 * kPi - 0.1) return true;
      if (!compact && std::abs(t) >= 0.1) return true;
    }
    return false;
  };
  double margin = std::numeric_limits<double>::infinity();
  int done = 0;
  while (done < samples) {
    Vec tau(d);
    for (auto& t : tau) t = U(rng);
    // Half the samples probe a single coordinate direction.
    if (done % 2 == 1) {
      const int j = static_cast<int>(rng() % static_cast<unsigned>(d));
      const double keep = tau(j);
      tau.setZero();
      tau(j) = keep;
    }
    if (!far_from_lattice(tau)) continue;
    margin = std::min(margin, point_distance(a.act_second(x, tau), x));
    ++done;
  }
  return margin;
}

}  // namespace hamred
