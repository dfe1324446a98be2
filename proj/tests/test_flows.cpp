#include <gtest/gtest.h>

#include "hamred/flows.hpp"
#include "test_support.hpp"

using namespace hamred;
using Family = HamiltonianSpec::Family;

namespace {

Mat regular_su(int n, Rng& rng) {
  for (;;) {
    const Mat J = oracle::random_su(n, rng);
    try {
      chamber_diagonalize(J, 1e-3);
      return J;
    } catch (const RegularityViolation&) {
    }
  }
}

Mat regular_SU(int n, Rng& rng) {
  for (;;) {
    const Mat g = oracle::random_SU(n, rng);
    try {
      alcove_diagonalize(g, 1e-3);
      return g;
    } catch (const RegularityViolation&) {
    }
  }
}

PhasePoint cotangent(int n, Rng& rng) { return CotangentPoint{regular_SU(n, rng), regular_su(n, rng)}; }
PhasePoint heisenberg(int n, Rng& rng) { return HeisenbergPoint{random_complex_group(n, rng)}; }
PhasePoint double_point(int n, Rng& rng) {
  for (;;) {
    const Mat A = regular_SU(n, rng), B = regular_SU(n, rng);
    try {
      alcove_diagonalize(group_commutator(A, B), 1e-3);
      return ModuliPoint::make_double(A, B);
    } catch (const RegularityViolation&) {
    }
  }
}

Vec random_tau(int l, Rng& rng, double s = 1.0) {
  std::uniform_real_distribution<double> U(-s, s);
  Vec t(l);
  for (int k = 0; k < l; ++k) t(k) = U(rng);
  return t;
}

PhasePoint sample_for(TorusActionSpec a, int n, Rng& rng) {
  switch (a) {
    case TorusActionSpec::CotangentTorus:
    case TorusActionSpec::CotangentVector: return cotangent(n, rng);
    case TorusActionSpec::HeisenbergTorus:
    case TorusActionSpec::HeisenbergVector: return heisenberg(n, rng);
    default: return double_point(n, rng);
  }
}

const std::vector<TorusActionSpec> kAllActions = {
    TorusActionSpec::CotangentTorus,  TorusActionSpec::CotangentVector, TorusActionSpec::HeisenbergTorus,
    TorusActionSpec::HeisenbergVector, TorusActionSpec::DoubleP1Torus,  TorusActionSpec::DoubleP2Torus,
    TorusActionSpec::DoubleAdjoint,
};

Mat heis_X(const PhasePoint& x) { return std::get<HeisenbergPoint>(x).X; }

}  // namespace

TEST(Flow, ZeroTimeIsIdentity) {
  Rng rng(1);
  const PhasePoint c = cotangent(3, rng), h = heisenberg(3, rng), d = double_point(3, rng);
  const auto cf = ClassFunction::re_power(2);
  const auto inv = InvariantFunction::power(2);
  EXPECT_LT(point_distance(flow(c, HamiltonianSpec::cotangent_phi(inv), 0.0), c), 1e-14);
  EXPECT_LT(point_distance(flow(c, HamiltonianSpec::cotangent_chi(cf), 0.0), c), 1e-14);
  EXPECT_LT(point_distance(flow(h, HamiltonianSpec::heisenberg_phi(inv), 0.0), h), 1e-13);
  EXPECT_LT(point_distance(flow(h, HamiltonianSpec::heisenberg_chi(cf), 0.0), h), 1e-13);
  for (auto spec : {HamiltonianSpec::double_p1(cf), HamiltonianSpec::double_p2(cf), HamiltonianSpec::double_momentum(cf)})
    EXPECT_LT(point_distance(flow(d, spec, 0.0), d), 1e-14);
}

TEST(Flow, InadmissibleSpaceRejected) {
  Rng rng(2);
  EXPECT_THROW(flow(heisenberg(2, rng), HamiltonianSpec::double_p1(ClassFunction::chi(0)), 0.1), InvalidShape);
}

TEST(Flow, AlcoveHamiltonianAtIrregularArgument) {
  const PhasePoint c = CotangentPoint{identity(3), Mat::Zero(3, 3)};
  EXPECT_THROW(flow(c, HamiltonianSpec::cotangent_chi(ClassFunction::chi(0)), 0.1), RegularityViolation);
}

TEST(Flow, CotangentPhiJMatchesTorusElement) {
  Rng rng(3);
  const int n = 4;
  const RootDatum rd = build_root_datum(n);
  for (int t = 0; t < 10; ++t) {
    const auto x = std::get<CotangentPoint>(cotangent(n, rng));
    const Mat G = chamber_diagonalize(x.J).gamma;
    for (int j = 0; j < n - 1; ++j) {
      const double tau = 0.37 + j;
      Vec e = Vec::Zero(n - 1);
      e(j) = tau;
      const auto y = std::get<CotangentPoint>(flow(x, HamiltonianSpec::cotangent_phi(InvariantFunction::phi(j)), tau));
      EXPECT_LT((y.g - G.adjoint() * oracle::expm(-kI * tau * rd.coroot(j)) * G * x.g).norm(), 1e-11);
      EXPECT_LT((y.J - x.J).norm(), 1e-15);
    }
  }
}

TEST(Conservation, CotangentRemarkPairsAndMomentum) {
  Rng rng(4);
  const auto momentum = [](const CotangentPoint& p) { return Mat(p.J - p.g.adjoint() * p.J * p.g); };
  for (int t = 0; t < 20; ++t) {
    const auto x = std::get<CotangentPoint>(cotangent(3, rng));
    for (double tau : {0.3, 1.7, -2.2}) {
      const auto a = std::get<CotangentPoint>(flow(x, HamiltonianSpec::cotangent_phi(InvariantFunction::power(3)), tau));
      EXPECT_LE((a.g.adjoint() * a.J * a.g - x.g.adjoint() * x.J * x.g).norm(), 1e-10);
      EXPECT_LE((a.J - x.J).norm(), 1e-10);
      EXPECT_LE((momentum(a) - momentum(x)).norm(), 1e-10);
      const auto b = std::get<CotangentPoint>(flow(x, HamiltonianSpec::cotangent_chi(ClassFunction::chi(1)), tau));
      EXPECT_LE((b.g - x.g).norm(), 1e-10);
      EXPECT_LE((momentum(b) - momentum(x)).norm(), 1e-10);
    }
  }
}

TEST(Conservation, HeisenbergMomentumAndLambdaInvariants) {
  Rng rng(5);
  const auto Lambda = [](const Mat& X) {
    const auto f = iwasawa_decompose(X);
    return Mat(f.b_L * f.b_R);
  };
  for (int t = 0; t < 20; ++t) {
    const Mat X0 = heis_X(heisenberg(3, rng));
    const auto f0 = iwasawa_decompose(X0);
    const Mat P0 = posdef_map(f0.b_R);
    for (double tau : {0.4, -1.3}) {
      const Mat X1 = heis_X(flow(HeisenbergPoint{X0}, HamiltonianSpec::heisenberg_phi(InvariantFunction::power(2)), tau));
      const auto f1 = iwasawa_decompose(X1);
      EXPECT_LE((Lambda(X1) - Lambda(X0)).norm(), 1e-10 * std::max(1.0, Lambda(X0).norm()));
      EXPECT_LE((f1.b_R - f0.b_R).norm(), 1e-10);
      EXPECT_LE((posdef_map(f1.b_R) - P0).norm(), 1e-10);
      EXPECT_LE((f1.g_R.adjoint() * posdef_map(f1.b_R) * f1.g_R - f0.g_R.adjoint() * P0 * f0.g_R).norm(), 1e-10);

      const auto chi = ClassFunction::re_power(2);
      const Mat X2 = heis_X(flow(HeisenbergPoint{X0}, HamiltonianSpec::heisenberg_chi(chi), tau));
      EXPECT_LE((Lambda(X2) - Lambda(X0)).norm(), 1e-10 * std::max(1.0, Lambda(X0).norm()));
      // Ξ_R(X(τ)) = γ Ξ_R(X₀) γ⁻¹ with γ the K-factor of exp(iτ∇χ(g_R)).
      const Mat E = exp_herm(kI * tau * chi.gradient(f0.g_R));
      const Mat gamma = borel_factor(E).inverse() * E;
      EXPECT_LE((iwasawa_xi_R(X2) - gamma * f0.g_R * gamma.adjoint()).norm(), 1e-9);
    }
  }
}

TEST(Conservation, DoubleMomentumAlongInvariantFlows) {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const PhasePoint x = double_point(3, rng);
    const Mat phi0 = std::get<ModuliPoint>(x).momentum();
    for (auto spec : {HamiltonianSpec::double_p1(ClassFunction::chi(0)), HamiltonianSpec::double_p2(ClassFunction::im_power(1)),
                      HamiltonianSpec::double_momentum(ClassFunction::xi(1))}) {
      const Mat phi1 = std::get<ModuliPoint>(flow(x, spec, 1.1)).momentum();
      EXPECT_LE((phi1 - phi0).norm(), 1e-10) << spec.name();
    }
  }
}

TEST(QuasiAdjoint, TransformationLawOfRightFactors) {
  Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    const Mat X = random_complex_group(3, rng);
    const Mat eta = oracle::random_SU(3, rng);
    const auto f = iwasawa_decompose(X);
    const Mat et = iwasawa_xi_R(eta * f.b_L).adjoint();
    const auto g = iwasawa_decompose(quasi_adjoint_action(eta, X));
    EXPECT_LE((g.g_R - et * f.g_R * et.adjoint()).norm(), 1e-9);
    EXPECT_LE((g.b_R - dressing_action(et, f.b_R)).norm(), 1e-9);
  }
}

TEST(QuasiAdjoint, IsAGroupAction) {
  Rng rng(8);
  const Mat X = random_complex_group(3, rng);
  const Mat a = oracle::random_SU(3, rng), b = oracle::random_SU(3, rng);
  EXPECT_LE((quasi_adjoint_action(a, quasi_adjoint_action(b, X)) - quasi_adjoint_action(a * b, X)).norm(), 1e-10);
  EXPECT_LE((quasi_adjoint_action(identity(3), X) - X).norm(), 1e-13);
}

TEST(Equivariance, FlowsCommuteWithTheKAction) {
  Rng rng(9);
  const auto cf = ClassFunction::re_power(2);
  const auto inv = InvariantFunction::power(2);
  const std::vector<std::pair<HamiltonianSpec, PhasePoint>> cases = {
      {HamiltonianSpec::cotangent_phi(inv), cotangent(3, rng)},
      {HamiltonianSpec::cotangent_chi(ClassFunction::chi(0)), cotangent(3, rng)},
      {HamiltonianSpec::heisenberg_phi(inv), heisenberg(3, rng)},
      {HamiltonianSpec::heisenberg_chi(cf), heisenberg(3, rng)},
      {HamiltonianSpec::double_p1(ClassFunction::chi(1)), double_point(3, rng)},
      {HamiltonianSpec::double_p2(cf), double_point(3, rng)},
      {HamiltonianSpec::double_momentum(ClassFunction::xi(0)), double_point(3, rng)},
  };
  for (const auto& [h, x] : cases) {
    const Mat eta = oracle::random_SU(3, rng);
    EXPECT_LE(point_distance(flow(k_action(eta, x), h, 0.8), k_action(eta, flow(x, h, 0.8))), 1e-9) << h.name();
  }
}

TEST(Commutation, FlowsWithinOneFamilyCommute) {
  Rng rng(10);
  const std::vector<std::pair<std::vector<HamiltonianSpec>, PhasePoint>> families = {
      {{HamiltonianSpec::cotangent_phi(InvariantFunction::phi(0)), HamiltonianSpec::cotangent_phi(InvariantFunction::power(3))},
       cotangent(3, rng)},
      {{HamiltonianSpec::cotangent_chi(ClassFunction::chi(0)), HamiltonianSpec::cotangent_chi(ClassFunction::re_power(2))},
       cotangent(3, rng)},
      {{HamiltonianSpec::heisenberg_phi(InvariantFunction::phi(1)), HamiltonianSpec::heisenberg_phi(InvariantFunction::power(2))},
       heisenberg(3, rng)},
      {{HamiltonianSpec::heisenberg_chi(ClassFunction::chi(1)), HamiltonianSpec::heisenberg_chi(ClassFunction::re_power(1))},
       heisenberg(3, rng)},
      {{HamiltonianSpec::double_p1(ClassFunction::chi(0)), HamiltonianSpec::double_p1(ClassFunction::chi(1))}, double_point(3, rng)},
      {{HamiltonianSpec::double_momentum(ClassFunction::xi(0)), HamiltonianSpec::double_momentum(ClassFunction::re_power(2))},
       double_point(3, rng)},
  };
  for (const auto& [hs, x] : families) {
    const PhasePoint ab = flow(flow(x, hs[0], 0.3), hs[1], 0.7);
    const PhasePoint ba = flow(flow(x, hs[1], 0.7), hs[0], 0.3);
    EXPECT_LE(point_distance(ab, ba), 1e-8) << hs[0].name();
  }
}

TEST(TorusAction, ZeroAdditivityAndGeneratorComposition) {
  Rng rng(11);
  for (int n : {2, 3, 4}) {
    for (TorusActionSpec a : kAllActions) {
      const PhasePoint x = sample_for(a, n, rng);
      const Vec t1 = random_tau(n - 1, rng), t2 = random_tau(n - 1, rng);
      EXPECT_LT(point_distance(torus_action(x, Vec::Zero(n - 1), a), x), 1e-12);
      const PhasePoint lhs = torus_action(torus_action(x, t2, a), t1, a);
      EXPECT_LE(point_distance(lhs, torus_action(x, t1 + t2, a)), 1e-9) << int(a) << " n=" << n;
      PhasePoint y = x;
      const auto gens = torus_generators(a, n);
      for (int j = 0; j < n - 1; ++j) y = flow(y, gens[j], t1(j));
      EXPECT_LE(point_distance(y, torus_action(x, t1, a)), 1e-8) << int(a) << " n=" << n;
    }
  }
}

TEST(TorusAction, CompactActionsArePeriodic) {
  Rng rng(12);
  for (int n = 2; n <= 5; ++n) {
    for (TorusActionSpec a : kAllActions) {
      if (!torus_is_compact(a)) continue;
      const PhasePoint x = sample_for(a, n, rng);
      for (const auto& h : torus_generators(a, n)) EXPECT_LE(periodicity_residual(x, h), 1e-8) << h.name();
    }
  }
}

TEST(TorusAction, CoweightTranslationIsNotPeriodic) {
  Rng rng(13);
  for (int n = 2; n <= 4; ++n) {
    const PhasePoint x = double_point(n, rng);
    for (int j = 0; j < n - 1; ++j)
      EXPECT_GT(periodicity_residual(x, HamiltonianSpec::double_p1(ClassFunction::xi(j))), 1e-2);
  }
}

TEST(TorusAction, VectorActionsDoNotClose) {
  Rng rng(14);
  const PhasePoint x = cotangent(3, rng);
  EXPECT_FALSE(torus_is_compact(TorusActionSpec::CotangentVector));
  EXPECT_GT(periodicity_residual(x, HamiltonianSpec::cotangent_chi(ClassFunction::chi(0))), 1.0);
}

TEST(STransform, Examples) {
  Rng rng(15);
  const Mat A = oracle::random_SU(3, rng), B = oracle::random_SU(3, rng);
  auto [a0, b0] = s_transform(A, identity(3));
  EXPECT_LT((a0 - identity(3)).norm(), 1e-14);
  EXPECT_LT((b0 - A).norm(), 1e-14);
  EXPECT_LT((s_transform(A, B).first - B.inverse()).norm(), 1e-14);

  Mat A2 = Mat::Zero(2, 2), B2(2, 2);
  A2(0, 0) = kI;
  A2(1, 1) = -kI;
  B2 << 0, -1, 1, 0;
  Mat Bi(2, 2), C(2, 2);
  Bi << 0, 1, -1, 0;
  C << -kI, 0, 0, kI;
  auto [s1, s2] = s_transform(A2, B2);
  EXPECT_LT((s1 - Bi).norm(), 1e-15);
  EXPECT_LT((s2 - C).norm(), 1e-15);
}

TEST(Unitarity, DriftIsRepairedAndLogged) {
  Rng rng(16);
  PhasePoint x = ModuliPoint::make_double(oracle::random_SU(3, rng), oracle::random_SU(3, rng));
  std::get<ModuliPoint>(x).comps[0] *= 1.0 + 1e-6;
  DriftLog log;
  maintain_unitarity(x, &log);
  EXPECT_EQ(log.events.size(), 1u);
  EXPECT_LT(unitarity_defect(std::get<ModuliPoint>(x).comps[0]), 1e-12);
  maintain_unitarity(x, &log);
  EXPECT_EQ(log.events.size(), 1u);
}

TEST(Trajectory, RecordsConservedDeviationsAndRejectsBadTimes) {
  Rng rng(17);
  const PhasePoint x = double_point(3, rng);
  const auto h = HamiltonianSpec::double_momentum(ClassFunction::re_power(1));
  const std::vector<NamedQuantity> q = {{"Phi", [](const PhasePoint& y) { return std::get<ModuliPoint>(y).momentum(); }}};
  const auto phi = [&](const PhasePoint& y, double t) { return flow(y, h, t); };
  const Trajectory tr = integrate_trajectory(x, phi, {0.0, 0.5, 1.0, 5.0}, q);
  EXPECT_EQ(tr.points.size(), 4u);
  EXPECT_LE(tr.conserved.at("Phi"), 1e-10);
  EXPECT_THROW(integrate_trajectory(x, phi, {0.0, 0.0}, q), ShapeError);
}
