#include "hamred/flows.hpp"

#include <sstream>

namespace hamred {

namespace {

const CotangentPoint& as_cotangent(const PhasePoint& x) {
  if (const auto* p = std::get_if<CotangentPoint>(&x)) return *p;
  throw InvalidShape("expected a cotangent point");
}

const Mat& as_heisenberg(const PhasePoint& x) {
  if (const auto* p = std::get_if<HeisenbergPoint>(&x)) return p->X;
  throw InvalidShape("expected a Heisenberg point");
}

const ModuliPoint& as_double(const PhasePoint& x) {
  const auto* p = std::get_if<ModuliPoint>(&x);
  if (!p || p->layout.size() != 1 || p->layout[0] != FactorKind::Double)
    throw InvalidShape("expected a point of D(K)");
  return *p;
}

Mat lambda_R(const Mat& X) {
  auto [Q, R] = qr_positive(X);
  return R.triangularView<Eigen::Upper>().solve(identity(static_cast<int>(X.rows())));
}

}  // namespace

ScalarObservable HamiltonianSpec::observable() const {
  const HamiltonianSpec h = *this;
  switch (family) {
    case Family::CotangentPhi:
      return {name(), [h](const PhasePoint& x) { return h.phi.value_algebra(as_cotangent(x).J); }};
    case Family::CotangentChi:
      return {name(), [h](const PhasePoint& x) { return h.chi.value(as_cotangent(x).g); }};
    case Family::HeisenbergPhi:
      return {name(), [h](const PhasePoint& x) { return h.phi.value_borel(lambda_R(as_heisenberg(x))); }};
    case Family::HeisenbergChi:
      return {name(), [h](const PhasePoint& x) { return h.chi.value(iwasawa_xi_R(as_heisenberg(x))); }};
    case Family::DoubleP1: return ScalarObservable::on_slot(chi, 0);
    case Family::DoubleP2: return ScalarObservable::on_slot(chi, 1);
    case Family::DoubleMomentum:
      return {name(), [h](const PhasePoint& x) {
                const auto& p = as_double(x);
                return h.chi.value(group_commutator(p.comps[0], p.comps[1]));
              }};
  }
  throw Unsupported("unknown Hamiltonian family");
}

std::string HamiltonianSpec::name() const {
  switch (family) {
    case Family::CotangentPhi: return phi.name() + "(J)";
    case Family::CotangentChi: return chi.name() + "(g)";
    case Family::HeisenbergPhi: return phi.name() + "(Lambda_R)";
    case Family::HeisenbergChi: return chi.name() + "(Xi_R)";
    case Family::DoubleP1: return chi.name() + "(A)";
    case Family::DoubleP2: return chi.name() + "(B)";
    case Family::DoubleMomentum: return chi.name() + "([A,B])";
  }
  return "?";
}

bool HamiltonianSpec::admissible_for(const PhasePoint& x) const {
  switch (family) {
    case Family::CotangentPhi:
    case Family::CotangentChi: return std::holds_alternative<CotangentPoint>(x);
    case Family::HeisenbergPhi:
    case Family::HeisenbergChi: return std::holds_alternative<HeisenbergPoint>(x);
    default: {
      const auto* p = std::get_if<ModuliPoint>(&x);
      return p && p->layout.size() == 1 && p->layout[0] == FactorKind::Double;
    }
  }
}

Mat borel_factor(const Mat& Y) { return iwasawa_lambda_L(Y); }

PhasePoint flow(const PhasePoint& x, const HamiltonianSpec& h, double tau, DriftLog* log) {
  if (!h.admissible_for(x)) throw InvalidShape(h.name() + " is not defined on a " + point_kind_name(x) + " point");
  PhasePoint out = x;
  using F = HamiltonianSpec::Family;
  switch (h.family) {
    case F::CotangentPhi: {
      auto& p = std::get<CotangentPoint>(out);
      p.g = exp_skew(tau * h.phi.gradient_algebra(p.J)) * p.g;
      break;
    }
    case F::CotangentChi: {
      auto& p = std::get<CotangentPoint>(out);
      p.J = p.J - tau * h.chi.gradient(p.g);
      break;
    }
    case F::HeisenbergPhi: {
      auto& X = std::get<HeisenbergPoint>(out).X;
      X = X * exp_skew(-tau * h.phi.gradient_borel(lambda_R(X)));
      break;
    }
    case F::HeisenbergChi: {
      auto& X = std::get<HeisenbergPoint>(out).X;
      const Mat g_R = iwasawa_xi_R(X);
      X = X * borel_factor(exp_herm(kI * tau * h.chi.gradient(g_R)));
      break;
    }
    case F::DoubleP1: {
      auto& c = std::get<ModuliPoint>(out).comps;
      c[1] = c[1] * exp_skew(-tau * h.chi.gradient(c[0]));
      break;
    }
    case F::DoubleP2: {
      auto& c = std::get<ModuliPoint>(out).comps;
      c[0] = c[0] * exp_skew(tau * h.chi.gradient(c[1]));
      break;
    }
    case F::DoubleMomentum: {
      auto& c = std::get<ModuliPoint>(out).comps;
      const Mat e = exp_skew(tau * h.chi.gradient(group_commutator(c[0], c[1])));
      c[0] = conj_by(e, c[0]);
      c[1] = conj_by(e, c[1]);
      break;
    }
  }
  maintain_unitarity(out, log);
  return out;
}

bool torus_is_compact(TorusActionSpec a) {
  return a != TorusActionSpec::CotangentVector && a != TorusActionSpec::HeisenbergVector;
}

std::vector<HamiltonianSpec> torus_generators(TorusActionSpec a, int n) {
  std::vector<HamiltonianSpec> out;
  for (int j = 0; j < n - 1; ++j) {
    switch (a) {
      case TorusActionSpec::CotangentTorus: out.push_back(HamiltonianSpec::cotangent_phi(InvariantFunction::phi(j))); break;
      case TorusActionSpec::CotangentVector: out.push_back(HamiltonianSpec::cotangent_chi(ClassFunction::chi(j))); break;
      case TorusActionSpec::HeisenbergTorus: out.push_back(HamiltonianSpec::heisenberg_phi(InvariantFunction::phi(j))); break;
      case TorusActionSpec::HeisenbergVector: out.push_back(HamiltonianSpec::heisenberg_chi(ClassFunction::chi(j))); break;
      case TorusActionSpec::DoubleP1Torus: out.push_back(HamiltonianSpec::double_p1(ClassFunction::chi(j))); break;
      case TorusActionSpec::DoubleP2Torus: out.push_back(HamiltonianSpec::double_p2(ClassFunction::chi(j))); break;
      case TorusActionSpec::DoubleAdjoint: out.push_back(HamiltonianSpec::double_momentum(ClassFunction::xi(j))); break;
    }
  }
  return out;
}

PhasePoint torus_action(const PhasePoint& x, const Vec& tau, TorusActionSpec action, DriftLog* log) {
  const int n = point_dim(x);
  if (tau.size() != n - 1) throw ShapeError("torus parameter must have length n-1");
  const RootDatum rd = build_root_datum(n);
  PhasePoint out = x;
  switch (action) {
    case TorusActionSpec::CotangentTorus: {
      auto& p = std::get<CotangentPoint>(out);
      const Mat G = chamber_diagonalize(as_cotangent(x).J).gamma;
      p.g = G.adjoint() * torus_T(rd, tau) * G * p.g;
      break;
    }
    case TorusActionSpec::CotangentVector: {
      auto& p = std::get<CotangentPoint>(out);
      const Mat G = alcove_diagonalize(as_cotangent(x).g).gamma;
      p.J = p.J + G.adjoint() * idiag(coroot_combination(rd, tau)) * G;
      break;
    }
    case TorusActionSpec::HeisenbergTorus: {
      auto& X = std::get<HeisenbergPoint>(out).X;
      const Mat G = chamber_diagonalize(kI * log_posdef(posdef_map(lambda_R(as_heisenberg(x))))).gamma;
      X = X * G.adjoint() * torus_T(rd, tau) * G;
      break;
    }
    case TorusActionSpec::HeisenbergVector: {
      auto& X = std::get<HeisenbergPoint>(out).X;
      const Mat G = alcove_diagonalize(iwasawa_xi_R(as_heisenberg(x))).gamma;
      X = X * borel_factor(G.adjoint() * diag(coroot_combination(rd, tau).array().exp().matrix()) * G);
      break;
    }
    case TorusActionSpec::DoubleP1Torus: {
      auto& c = std::get<ModuliPoint>(out).comps;
      as_double(x);
      const Mat G = alcove_diagonalize(c[0]).gamma;
      c[1] = c[1] * G.adjoint() * torus_T(rd, -tau) * G;
      break;
    }
    case TorusActionSpec::DoubleP2Torus: {
      auto& c = std::get<ModuliPoint>(out).comps;
      as_double(x);
      const Mat G = alcove_diagonalize(c[1]).gamma;
      c[0] = c[0] * G.adjoint() * torus_T(rd, tau) * G;
      break;
    }
    case TorusActionSpec::DoubleAdjoint: {
      auto& c = std::get<ModuliPoint>(out).comps;
      as_double(x);
      const Mat G = alcove_diagonalize(group_commutator(c[0], c[1])).gamma;
      const Mat g = G.adjoint() * torus_T_omega(rd, tau) * G;
      c[0] = conj_by(g, c[0]);
      c[1] = conj_by(g, c[1]);
      break;
    }
  }
  maintain_unitarity(out, log);
  return out;
}

std::pair<Mat, Mat> s_transform(const Mat& A, const Mat& B) {
  const Mat Bi = B.inverse();
  return {Bi, Bi * A * B};
}

double periodicity_residual(const PhasePoint& x, const HamiltonianSpec& h) {
  return point_distance(x, flow(x, h, 2.0 * kPi));
}

Mat quasi_adjoint_action(const Mat& eta, const Mat& X) {
  return eta * X * iwasawa_xi_R(eta * iwasawa_lambda_L(X));
}

PhasePoint k_action(const Mat& eta, const PhasePoint& x) {
  PhasePoint out = x;
  if (auto* c = std::get_if<CotangentPoint>(&out)) {
    c->g = conj_by(eta, c->g);
    c->J = conj_by(eta, c->J);
  } else if (auto* h = std::get_if<HeisenbergPoint>(&out)) {
    h->X = quasi_adjoint_action(eta, h->X);
  } else {
    for (auto& m : std::get<ModuliPoint>(out).comps) m = conj_by(eta, m);
  }
  return out;
}

void maintain_unitarity(PhasePoint& x, DriftLog* log, double tol) {
  for (int i = 0; i < slot_count(x); ++i) {
    if (slot_kind(x, i) != SlotKind::Group) continue;
    Mat& m = slot_mut(x, i);
    const double d = unitarity_defect(m);
    if (d > tol) {
      m = polar_unitary(m);
      if (log) {
        std::ostringstream os;
        os << "slot " << i << " re-projected, drift " << d;
        log->events.push_back(os.str());
      }
    }
  }
}

Trajectory integrate_trajectory(const PhasePoint& x0, const std::function<PhasePoint(const PhasePoint&, double)>& phi,
                                const std::vector<double>& times, const std::vector<NamedQuantity>& conserved) {
  Trajectory tr;
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw ShapeError("trajectory times must be strictly increasing");
  std::vector<Mat> ref;
  for (const auto& q : conserved) {
    ref.push_back(q.eval(x0));
    tr.conserved[q.name] = 0.0;
  }
  for (double t : times) {
    PhasePoint x = phi(x0, t);
    maintain_unitarity(x, &tr.drift);
    for (std::size_t q = 0; q < conserved.size(); ++q) {
      double& dev = tr.conserved[conserved[q].name];
      dev = std::max(dev, (conserved[q].eval(x) - ref[q]).norm());
    }
    tr.times.push_back(t);
    tr.points.push_back(std::move(x));
  }
  return tr;
}

}  // namespace hamred
