#pragma once

// Internal to the scenario library: a uniform view of the five space types
// (sampling, Hamiltonian families, momenta, torus actions, probes).

#include <functional>
#include <string>
#include <vector>

#include "hamred/reduction_probe.hpp"
#include "hamred/scenario.hpp"

namespace hamred::detail {

struct Generator {
  std::string name;
  ScalarObservable H;
  std::function<PhasePoint(const PhasePoint&, double)> flow;
};

struct TorusModel {
  std::string name;
  bool compact = true;
  int dim = 0;
  std::function<PhasePoint(const PhasePoint&, const Vec&)> act;
  std::vector<Generator> generators;
  ActionSpec spec;
};

Generator from_spec(const HamiltonianSpec& h);
Generator from_word(const WordHamiltonian& h);

class SpaceModel {
 public:
  explicit SpaceModel(const ScenarioConfig& c);

  SpaceType type() const { return type_; }
  int n() const { return n_; }
  bool is_moduli() const { return type_ == SpaceType::Moduli || type_ == SpaceType::Sphere4; }
  const IntervalFamily& family() const { return family_; }
  int m() const { return family_.m; }
  int n_factors() const { return family_.n; }

  // Random point whose family arguments are regular with margin 1e−2.
  PhasePoint sample(Rng& rng) const;
  // A point with regular family arguments reached from a crafted point, for exports.
  PhasePoint crafted() const;

  // Commuting families: the configured one first.
  const std::vector<std::vector<Generator>>& families() const { return families_; }
  // Every closed-form flow of the space that is tested against brackets.
  const std::vector<Generator>& flow_generators() const { return flows_; }
  const std::vector<NamedQuantity>& momenta() const { return momenta_; }
  const std::vector<TorusModel>& tori() const { return tori_; }

  // Principal cases whose point lives on this space.
  std::vector<PrincipalCase> principal_cases() const;

 private:
  SpaceType type_;
  int n_;
  bool tilde_;
  IntervalFamily family_;
  std::vector<std::vector<Generator>> families_;
  std::vector<Generator> flows_;
  std::vector<NamedQuantity> momenta_;
  std::vector<TorusModel> tori_;
};

// Word-trace probes of the slots, most informative first.
std::vector<ScalarObservable> make_probes(int slots, int count);

// Invariant word traces of the first `slots` slots (products of neighbours).
std::vector<ScalarObservable> invariant_probes(int slots);

Vec random_tau(int dim, Rng& rng, double cap);

}  // namespace hamred::detail

namespace hamred::detail {

struct Outcome {
  double residual = 0;
  std::string note;
};

struct CheckContext {
  const ScenarioConfig& cfg;
  const SpaceModel& model;
  Rng& rng;
};

struct CheckDef {
  std::string name;
  std::string tag;
  int criterion = 0;
  double tolerance = 0;
  Comparison comparison = Comparison::AtMost;
  std::function<bool(const SpaceModel&)> applies;
  std::function<Outcome(CheckContext&)> run;
};

// Sorted by name.
const std::vector<CheckDef>& check_catalog();

}  // namespace hamred::detail
