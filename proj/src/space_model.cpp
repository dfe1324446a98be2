#include "space_model.hpp"

#include <cmath>

namespace hamred::detail {

namespace {

using Op = Letter::Op;

constexpr double kSampleMargin = 1e-2;
constexpr int kMaxTries = 2000;
// Spread of the Gaussian exponent for Heisenberg samples, per entry. Divided
// by sqrt(n) so that ‖log X‖ and hence the ptr^3 flow speed do not grow with n.
constexpr double kHeisenbergSpread = 0.6;

bool alcove_regular(const Mat& g) {
  try {
    alcove_diagonalize(g, kSampleMargin);
    return true;
  } catch (const RegularityViolation&) {
    return false;
  }
}

bool chamber_regular(const Mat& J) {
  try {
    chamber_diagonalize(J, kSampleMargin);
    return true;
  } catch (const RegularityViolation&) {
    return false;
  }
}

bool borel_regular(const Mat& b) {
  try {
    action_variables(b, ActionFamily::PhiBorel, kSampleMargin);
    return true;
  } catch (const RegularityViolation&) {
    return false;
  }
}

std::vector<Generator> from_specs(const std::vector<HamiltonianSpec>& hs) {
  std::vector<Generator> out;
  for (const auto& h : hs) out.push_back(from_spec(h));
  return out;
}

std::vector<Generator> from_words(const std::vector<WordHamiltonian>& hs) {
  std::vector<Generator> out;
  for (const auto& h : hs) out.push_back(from_word(h));
  return out;
}

TorusModel closed_torus(TorusActionSpec a, int n) {
  TorusModel t;
  t.spec = ActionSpec::closed(a);
  t.name = t.spec.name();
  t.compact = torus_is_compact(a);
  t.dim = n - 1;
  t.act = [a](const PhasePoint& x, const Vec& tau) { return torus_action(x, tau, a); };
  t.generators = from_specs(torus_generators(a, n));
  return t;
}

}  // namespace

Generator from_spec(const HamiltonianSpec& h) {
  return {h.name(), h.observable(), [h](const PhasePoint& x, double t) { return flow(x, h, t); }};
}

Generator from_word(const WordHamiltonian& h) {
  return {h.name(), h.observable(),
          [h](const PhasePoint& x, double t) -> PhasePoint { return moduli_flow(std::get<ModuliPoint>(x), h, t); }};
}

SpaceModel::SpaceModel(const ScenarioConfig& c) : type_(c.space), n_(c.n), tilde_(c.tilde) {
  const int n = n_, l = n - 1;
  using HS = HamiltonianSpec;
  std::vector<InvariantFunction> phis;
  std::vector<ClassFunction> chis;
  for (int j = 0; j < l; ++j) {
    phis.push_back(InvariantFunction::phi(j));
    chis.push_back(ClassFunction::chi(j));
  }
  phis.push_back(InvariantFunction::power(2));
  phis.push_back(InvariantFunction::power(3));
  chis.push_back(ClassFunction::re_power(1));
  chis.push_back(ClassFunction::im_power(2));

  auto phi_family = [&](auto make) {
    std::vector<HS> out;
    for (const auto& f : phis) out.push_back(make(f));
    return out;
  };
  auto chi_family = [&](auto make) {
    std::vector<HS> out;
    for (const auto& f : chis) out.push_back(make(f));
    return out;
  };

  switch (type_) {
    case SpaceType::Cotangent: {
      const auto h = phi_family(HS::cotangent_phi), ht = chi_family(HS::cotangent_chi);
      families_ = {from_specs(tilde_ ? ht : h)};
      flows_ = families_.front();
      momenta_ = {{"J - g^-1 J g", [](const PhasePoint& x) {
                     const auto& p = std::get<CotangentPoint>(x);
                     return Mat(p.J - p.g.adjoint() * p.J * p.g);
                   }}};
      tori_ = {closed_torus(tilde_ ? TorusActionSpec::CotangentVector : TorusActionSpec::CotangentTorus, n)};
      break;
    }
    case SpaceType::Heisenberg: {
      const auto h = phi_family(HS::heisenberg_phi), ht = chi_family(HS::heisenberg_chi);
      families_ = {from_specs(tilde_ ? ht : h)};
      flows_ = families_.front();
      // Λ = b_L b_R, scaled by its own norm so the deviation is relative.
      momenta_ = {{"Lambda", [](const PhasePoint& x) {
                     const auto f = iwasawa_decompose(std::get<HeisenbergPoint>(x).X);
                     const Mat L = f.b_L * f.b_R;
                     return Mat(L / std::max(1.0, L.norm()));
                   }}};
      tori_ = {closed_torus(tilde_ ? TorusActionSpec::HeisenbergVector : TorusActionSpec::HeisenbergTorus, n)};
      break;
    }
    case SpaceType::Double: {
      const auto h = chi_family(tilde_ ? HS::double_p2 : HS::double_p1);
      std::vector<HS> mom;
      for (int j = 0; j < l; ++j) mom.push_back(HS::double_momentum(ClassFunction::xi(j)));
      mom.push_back(HS::double_momentum(ClassFunction::re_power(2)));
      families_ = {from_specs(h), from_specs(mom)};
      flows_ = families_[0];
      flows_.insert(flows_.end(), families_[1].begin(), families_[1].end());
      momenta_ = {{"Phi", [](const PhasePoint& x) { return std::get<ModuliPoint>(x).momentum(); }}};
      tori_ = {closed_torus(tilde_ ? TorusActionSpec::DoubleP2Torus : TorusActionSpec::DoubleP1Torus, n),
               closed_torus(TorusActionSpec::DoubleAdjoint, n)};
      break;
    }
    case SpaceType::Moduli:
    case SpaceType::Sphere4: {
      family_ = c.family.value_or(IntervalFamily::sphere());
      family_.m = c.m;
      family_.n = c.n_factors;
      validate(family_);
      auto gens = from_words(hamiltonian_family(family_, {ClassFunction::re_power(1), ClassFunction::im_power(2)}));
      const auto acts = from_words(action_hamiltonians(family_, n));
      gens.insert(gens.end(), acts.begin(), acts.end());
      families_ = {gens};
      flows_ = gens;
      momenta_ = {{"Phi", [](const PhasePoint& x) { return std::get<ModuliPoint>(x).momentum(); }}};
      const auto blocks = family_blocks(family_);
      TorusModel t;
      t.spec = ActionSpec::moduli(blocks);
      t.name = t.spec.name();
      t.compact = true;
      t.dim = l * static_cast<int>(blocks.size());
      t.act = [blocks](const PhasePoint& x, const Vec& tau) -> PhasePoint {
        return moduli_torus_action(std::get<ModuliPoint>(x), tau, blocks);
      };
      t.generators = acts;
      tori_ = {t};
      break;
    }
  }
}

PhasePoint SpaceModel::sample(Rng& rng) const {
  const int n = n_;
  for (int t = 0; t < kMaxTries; ++t) {
    switch (type_) {
      case SpaceType::Cotangent: {
        const Mat g = random_group(n, rng), J = random_algebra(n, rng);
        if (alcove_regular(g) && chamber_regular(J)) return CotangentPoint{g, J};
        break;
      }
      case SpaceType::Heisenberg: {
        const Mat X = random_complex_group(n, rng, kHeisenbergSpread / std::sqrt(double(n)));
        const auto f = iwasawa_decompose(X);
        if (alcove_regular(f.g_R) && borel_regular(f.b_R)) return HeisenbergPoint{X};
        break;
      }
      case SpaceType::Double: {
        const Mat A = random_group(n, rng), B = random_group(n, rng);
        if (alcove_regular(A) && alcove_regular(B) && alcove_regular(group_commutator(A, B)))
          return ModuliPoint::make_double(A, B);
        break;
      }
      default: {
        const ModuliPoint x = random_moduli_point(family_.m, family_.n, n, rng);
        bool ok = true;
        for (const auto& b : family_blocks(family_)) {
          const WordHamiltonian h{b.block, b.first, b.last, ClassFunction::chi(0), b.label};
          if (!alcove_regular(h.argument(x))) {
            ok = false;
            break;
          }
        }
        if (ok) return x;
      }
    }
  }
  throw RegularityViolation("no regular sample found for " + space_name(type_));
}

PhasePoint SpaceModel::crafted() const {
  switch (type_) {
    case SpaceType::Cotangent: return principal_test_point("cotangent-K", n_);
    case SpaceType::Heisenberg: return principal_test_point("heisenberg-K", n_);
    case SpaceType::Double: return principal_test_point(tilde_ ? "double-KxT-tilde" : "double-KxT", n_);
    default: return principal_family_point(family_, n_);
  }
}

std::vector<PrincipalCase> SpaceModel::principal_cases() const {
  std::vector<PrincipalCase> out;
  for (const auto& id : supported_lemma_ids()) {
    PrincipalCase c = principal_case(id, n_);
    bool match = false;
    if (const auto* x = std::get_if<ModuliPoint>(&c.point)) {
      const bool dbl = x->layout.size() == 1 && x->layout[0] == FactorKind::Double;
      match = type_ == SpaceType::Double ? dbl : (is_moduli() && !dbl);
    } else if (std::holds_alternative<CotangentPoint>(c.point)) {
      match = type_ == SpaceType::Cotangent;
    } else {
      match = type_ == SpaceType::Heisenberg;
    }
    if (match) out.push_back(std::move(c));
  }
  if (is_moduli()) {
    try {
      const ModuliPoint x = principal_family_point(family_, n_);
      out.push_back({"configured-family", "crafted point of the configured family", x,
                     ActionSpec::moduli(family_blocks(family_))});
    } catch (const Unsupported&) {
    }
  }
  return out;
}

std::vector<ScalarObservable> make_probes(int slots, int count) {
  using W = std::vector<Letter>;
  std::vector<ScalarObservable> c;
  auto add = [&](W w, TracePart p = TracePart::Real) { c.push_back(ScalarObservable::word_trace(std::move(w), p)); };
  for (int s = 0; s < slots; ++s) add({{s, Op::Plain}});
  for (int s = 0; s + 1 < slots; ++s) add({{s, Op::Plain}, {s + 1, Op::Plain}});
  for (int s = 0; s < slots; ++s) add({{s, Op::Plain}, {s, Op::Plain}}, TracePart::Imag);
  for (int s = 0; s + 1 < slots; ++s) add({{s, Op::Plain}, {s + 1, Op::Adjoint}, {s, Op::Plain}}, TracePart::Imag);
  for (int s = 0; s < slots; ++s) add({{s, Op::Plain}, {s, Op::Plain}});
  for (int s = 0; s < slots; ++s) add({{s, Op::Plain}, {s, Op::Plain}, {s, Op::Plain}}, TracePart::Imag);
  for (int s = 0; s < slots; ++s) add({{s, Op::Plain}}, TracePart::Imag);
  for (int s = 0; s < slots; ++s) add({{s, Op::Plain}, {s, Op::Plain}, {s, Op::Plain}});
  for (int s = 0; s < slots; ++s) add({{s, Op::Plain}, {s, Op::Adjoint}});
  for (int s = 0; s < slots; ++s) add({{s, Op::Plain}, {s, Op::Plain}, {s, Op::Adjoint}}, TracePart::Imag);
  if (static_cast<int>(c.size()) > count) c.resize(count);
  return c;
}

std::vector<ScalarObservable> invariant_probes(int slots) {
  std::vector<ScalarObservable> out;
  for (int s = 0; s + 1 < slots; ++s) {
    out.push_back(ScalarObservable::word_trace({{s, Op::Plain}, {s + 1, Op::Plain}}));
    out.push_back(
        ScalarObservable::word_trace({{s, Op::Plain}, {s + 1, Op::Plain}, {s + 1, Op::Plain}}, TracePart::Imag));
  }
  std::vector<Letter> all;
  for (int s = 0; s < slots; ++s) all.push_back({s, Op::Plain});
  out.push_back(ScalarObservable::word_trace(all));
  return out;
}

Vec random_tau(int dim, Rng& rng, double cap) {
  std::uniform_real_distribution<double> U(-cap, cap);
  Vec t(dim);
  for (int k = 0; k < dim; ++k) t(k) = U(rng);
  return t;
}

}  // namespace hamred::detail
