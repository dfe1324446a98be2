#include <gtest/gtest.h>

#include "hamred/matdecomp.hpp"
#include "test_support.hpp"

using namespace hamred;

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

}  // namespace

TEST(Chamber, AlreadyInChamberForm) {
  Mat J = Mat::Zero(2, 2);
  J(0, 0) = cplx(0, 1);
  J(1, 1) = cplx(0, -1);
  const auto c = chamber_diagonalize(J);
  EXPECT_NEAR(c.xi(0), 1.0, 1e-14);
  EXPECT_NEAR(c.xi(1), -1.0, 1e-14);
  EXPECT_LT((c.gamma - Mat::Identity(2, 2)).norm(), 1e-14);
}

TEST(Chamber, SortsAndDetCorrectsPermutation) {
  Mat J = Mat::Zero(2, 2);
  J(0, 0) = cplx(0, -1);
  J(1, 1) = cplx(0, 1);
  const auto c = chamber_diagonalize(J);
  EXPECT_NEAR(c.xi(0), 1.0, 1e-14);
  EXPECT_NEAR(c.xi(1), -1.0, 1e-14);
  EXPECT_NEAR(std::abs(c.gamma.determinant() - 1.0), 0.0, 1e-14);
  EXPECT_LT((c.gamma * J * c.gamma.adjoint() - idiag(c.xi)).norm(), 1e-14);
  EXPECT_NEAR(std::abs(c.gamma(0, 0)), 0.0, 1e-14);
}

TEST(Chamber, RandomReconstruction) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const Mat J = regular_su(4, rng);
    const auto c = chamber_diagonalize(J);
    EXPECT_LE((c.gamma * J * c.gamma.adjoint() - idiag(c.xi)).norm(), 1e-10);
    EXPECT_TRUE(is_group_element(c.gamma, 1e-12));
    for (int k = 0; k < 3; ++k) EXPECT_GT(c.xi(k), c.xi(k + 1));
  }
}

TEST(Chamber, DegenerateSpectrumRejected) {
  Mat J = idiag(Vec::Zero(3));
  EXPECT_THROW(chamber_diagonalize(J), RegularityViolation);
}

TEST(Alcove, AlreadyInAlcoveForm) {
  Mat g = Mat::Zero(2, 2);
  g(0, 0) = cplx(0, 1);
  g(1, 1) = cplx(0, -1);
  const auto a = alcove_diagonalize(g);
  EXPECT_NEAR(a.xi(0), kPi / 2, 1e-14);
  EXPECT_NEAR(a.xi(1), -kPi / 2, 1e-14);
  EXPECT_LT((a.gamma - Mat::Identity(2, 2)).norm(), 1e-14);
}

TEST(Alcove, CyclicShiftRuleWithOneWrap) {
  Mat g = Mat::Zero(2, 2);
  g(0, 0) = std::exp(cplx(0, 3 * kPi / 4));
  g(1, 1) = std::exp(cplx(0, -3 * kPi / 4));
  const auto a = alcove_diagonalize(g);
  EXPECT_NEAR(a.xi(0), 3 * kPi / 4, 1e-14);
  EXPECT_NEAR(a.xi(1), -3 * kPi / 4, 1e-14);
}

TEST(Alcove, ReconstructionAndConstraintsAcrossRanks) {
  for (int n = 2; n <= 5; ++n) {
    Rng rng(100 + n);
    for (int t = 0; t < 100; ++t) {
      const Mat g = regular_SU(n, rng);
      const auto a = alcove_diagonalize(g);
      EXPECT_LE((a.gamma * g * a.gamma.adjoint() - oracle::expm(idiag(a.xi))).norm(), 1e-10);
      EXPECT_NEAR(a.xi.sum(), 0.0, 1e-12);
      EXPECT_LT(a.xi(0) - a.xi(n - 1), 2 * kPi - kEpsReg);
      for (int k = 0; k + 1 < n; ++k) EXPECT_GT(a.xi(k) - a.xi(k + 1), kEpsReg);
    }
  }
}

TEST(Alcove, XiIsConjugationInvariant) {
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const Mat g = regular_SU(3, rng);
    const Mat eta = oracle::random_SU(3, rng);
    EXPECT_LT((alcove_diagonalize(eta * g * eta.adjoint()).xi - alcove_diagonalize(g).xi).norm(), 1e-9);
  }
}

TEST(Alcove, CentralElementRejected) {
  EXPECT_THROW(alcove_diagonalize(Mat::Identity(3, 3)), RegularityViolation);
}

TEST(ActionVariables, ChiOfPrincipalSU2) {
  Mat g = Mat::Zero(2, 2);
  g(0, 0) = cplx(0, 1);
  g(1, 1) = cplx(0, -1);
  EXPECT_NEAR(action_variables(g, ActionFamily::Chi)(0), kPi, 1e-14);
}

TEST(ActionVariables, XiEqualsQTimesChi) {
  Rng rng(4);
  const RMat Q = build_root_datum(3).q_double();
  for (int t = 0; t < 20; ++t) {
    const Mat g = regular_SU(3, rng);
    const Vec chi = action_variables(g, ActionFamily::Chi);
    const Vec xi = action_variables(g, ActionFamily::Xi);
    EXPECT_LT((xi - Q * chi).norm(), 1e-12);
    const Mat eta = oracle::random_SU(3, rng);
    EXPECT_LT((action_variables(eta * g * eta.adjoint(), ActionFamily::Chi) - chi).norm(), 1e-9);
  }
}

TEST(Gradients, DiagonalSU2ChiGradient) {
  for (double a : {0.3, 1.2, 2.9}) {
    Vec x(2);
    x << a, -a;
    const Mat g = oracle::expm(idiag(x));
    const Mat expect = -idiag(build_root_datum(2).coroots[0]);
    EXPECT_LT((gradient_action_variable(g, ActionFamily::Chi, 0) - expect).norm(), 1e-13);
  }
}

TEST(Gradients, IndependentOfTorusAmbiguity) {
  Rng rng(6);
  const Mat g = regular_SU(3, rng);
  const auto a = alcove_diagonalize(g);
  Vec t(3);
  t << 0.4, -1.1, 0.7;
  const Mat G2 = idiag(t).exp() * a.gamma;
  const Mat h = idiag(build_root_datum(3).coroots[1]);
  EXPECT_LT((G2.adjoint() * h * G2 - a.gamma.adjoint() * h * a.gamma).norm(), 1e-13);
}

// ⟨Z, ∇F(x)⟩ against the directional derivative of F along e^{tZ}x or x+tZ.
TEST(Gradients, MatchFiniteDifferences) {
  Rng rng(12);
  const int n = 3;
  const RootDatum rd = build_root_datum(n);
  double worst = 0;
  for (int t = 0; t < 30; ++t) {
    const Mat g = regular_SU(n, rng);
    const Mat J = regular_su(n, rng);
    const Mat Z = oracle::random_su(n, rng);
    for (int j = 0; j < rd.rank; ++j) {
      for (ActionFamily fam : {ActionFamily::Chi, ActionFamily::Xi}) {
        const double fd = oracle::d4([&](double s) { return action_variables(oracle::expm(s * Z) * g, fam)(j); });
        const double cf = oracle::re_tr(Z, gradient_action_variable(g, fam, j));
        worst = std::max(worst, std::abs(fd - cf) / std::max(1.0, std::abs(cf)));
      }
      const double fd = oracle::d4([&](double s) { return action_variables(J + s * Z, ActionFamily::Phi)(j); });
      const double cf = oracle::re_tr(Z, gradient_action_variable(J, ActionFamily::Phi, j));
      worst = std::max(worst, std::abs(fd - cf) / std::max(1.0, std::abs(cf)));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Gradients, BorelPhiMatchesImFormFiniteDifferences) {
  Rng rng(13);
  const int n = 3;
  double worst = 0;
  for (int t = 0; t < 30; ++t) {
    const Mat b = random_borel(n, rng, 0.7);
    // Direction in 𝔟: upper triangular, real traceless diagonal.
    Mat Z = random_borel(n, rng, 1.0);
    for (int k = 0; k < n; ++k) Z(k, k) = std::log(Z(k, k).real());
    for (int j = 0; j < n - 1; ++j) {
      const double fd = oracle::d4([&](double s) {
        return action_variables(oracle::expm(s * Z) * b, ActionFamily::PhiBorel)(j);
      });
      const Mat D = gradient_action_variable(b, ActionFamily::PhiBorel, j);
      const double cf = (Z * D).trace().imag();
      worst = std::max(worst, std::abs(fd - cf) / std::max(1.0, std::abs(cf)));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Iwasawa, Identity) {
  const auto f = iwasawa_decompose(Mat::Identity(3, 3));
  for (const Mat* m : {&f.g_L, &f.g_R, &f.b_L, &f.b_R}) EXPECT_LT((*m - Mat::Identity(3, 3)).norm(), 1e-14);
}

TEST(Iwasawa, UpperTriangularInput) {
  Rng rng(8);
  const Mat b = random_borel(3, rng);
  const auto f = iwasawa_decompose(b);
  EXPECT_LT((f.g_L - Mat::Identity(3, 3)).norm(), 1e-12);
  EXPECT_LT((f.b_R - b.inverse()).norm(), 1e-12);
}

TEST(Iwasawa, RoundTripsAndUniqueness) {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    const Mat X = random_complex_group(3, rng);
    const auto f = iwasawa_decompose(X);
    EXPECT_LE((f.g_L * f.b_R.inverse() - X).norm(), 1e-12);
    EXPECT_LE((f.b_L * f.g_R.adjoint() - X).norm(), 1e-12);
    EXPECT_TRUE(is_group_element(f.g_L, 1e-12));
    EXPECT_TRUE(is_group_element(f.g_R, 1e-12));
    EXPECT_TRUE(is_borel_element(f.b_L, 1e-11));
    EXPECT_TRUE(is_borel_element(f.b_R, 1e-11));
    const auto f2 = iwasawa_decompose(f.g_L * f.b_R.inverse());
    EXPECT_LE((f2.g_L - f.g_L).norm(), 1e-11);
    EXPECT_LE((f2.b_R - f.b_R).norm(), 1e-11);
  }
}

TEST(Iwasawa, SingularInputRejected) {
  Mat X = Mat::Zero(2, 2);
  X(0, 0) = 1.0;
  EXPECT_THROW(iwasawa_decompose(X), SingularMatrix);
}

TEST(Iwasawa, RightFactorsDetermineX) {
  Rng rng(3);
  const Mat g = oracle::random_SU(3, rng);
  const Mat b = random_borel(3, rng);
  const auto f = iwasawa_decompose(heisenberg_from_right_factors(g, b));
  EXPECT_LT((f.g_R - g).norm(), 1e-12);
  EXPECT_LT((f.b_R - b).norm(), 1e-12);
}

TEST(Dressing, IdentityAndTorusFixDiagonal) {
  Rng rng(2);
  const Mat b = random_borel(3, rng);
  EXPECT_LT((dressing_action(Mat::Identity(3, 3), b) - b).norm(), 1e-13);
  Vec x(3), t(3);
  x << 0.5, 0.1, -0.6;
  t << 1.0, -0.3, -0.7;
  const Mat e = diag(x.array().exp().matrix());
  EXPECT_LT((dressing_action(oracle::expm(idiag(t)), e) - e).norm(), 1e-13);
}

TEST(Dressing, PosdefEquivariance) {
  Rng rng(17);
  for (int t = 0; t < 30; ++t) {
    const Mat b = random_borel(3, rng);
    const Mat eta = oracle::random_SU(3, rng);
    const Mat lhs = posdef_map(dressing_action(eta, b));
    EXPECT_LE((lhs - eta * posdef_map(b) * eta.adjoint()).norm(), 1e-10);
  }
}

TEST(Posdef, KnownValuesAndRoundTrip) {
  EXPECT_LT((posdef_map(Mat::Identity(2, 2)) - Mat::Identity(2, 2)).norm(), 1e-15);
  Mat b = Mat::Zero(2, 2);
  b(0, 0) = 2.0;
  b(1, 1) = 0.5;
  const Mat p = posdef_map(b);
  EXPECT_NEAR(p(0, 0).real(), 4.0, 1e-15);
  EXPECT_NEAR(p(1, 1).real(), 0.25, 1e-15);
  Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    const Mat bb = random_borel(3, rng);
    EXPECT_LE((posdef_unmap(posdef_map(bb)) - bb).norm(), 1e-12);
  }
  Mat bad = Mat::Identity(2, 2);
  bad(1, 1) = -1.0;
  EXPECT_THROW(posdef_unmap(bad), NotPositiveDefinite);
}
