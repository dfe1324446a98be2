#include "hamred/moduli.hpp"

#include <algorithm>
#include <set>

namespace hamred {

ModuliPoint build_moduli_point(int m, int n, std::vector<Mat> comps) {
  return ModuliPoint::canonical(m, n, std::move(comps));
}

Mat moduli_momentum(const ModuliPoint& x) { return x.momentum(); }

ModuliPoint random_moduli_point(int m, int n, int dim, Rng& rng, double scale) {
  if (m < 0 || n < 0 || m + n == 0) throw InvalidShape("M_{m,n} needs m, n >= 0, not both 0");
  std::vector<Mat> c;
  for (int k = 0; k < 2 * m + n; ++k) c.push_back(random_group(dim, rng, scale));
  return ModuliPoint::canonical(m, n, std::move(c));
}

ModuliPoint embed_shift(const ModuliPoint& u) {
  ModuliPoint x = u;
  x.layout.push_back(FactorKind::K);
  x.comps.push_back(u.momentum().adjoint());
  return x;
}

// ---------------------------------------------------------------- validation

namespace {

[[noreturn]] void violate(const std::string& clause, const std::string& detail) {
  throw AssumptionViolation(clause, detail);
}

std::string show(Interval iv) { return "[" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]"; }

void check_interval_set(const std::vector<Interval>& J, int n, const std::string& what) {
  int prev = 0;
  for (const auto& iv : J) {
    if (!(iv.lo > prev && iv.lo < iv.hi && iv.hi <= n))
      violate("interval order", what + " must satisfy 1 <= l1 < r1 < l2 < ... <= n, offending " + show(iv));
    prev = iv.hi;
  }
}

bool disjoint(Interval a, Interval b) { return a.hi < b.lo || b.hi < a.lo; }
bool properly_contains(Interval outer, Interval inner) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi && (outer.lo != inner.lo || outer.hi != inner.hi);
}

}  // namespace

void validate(const IntervalFamily& f) {
  if (f.m < 0 || f.n < 0 || f.m + f.n == 0) throw InvalidShape("M_{m,n} needs m, n >= 0, not both 0");
  const int p = static_cast<int>(f.I.size()), ph = static_cast<int>(f.I_hat.size());
  const int q = static_cast<int>(f.J.size());
  if (p + ph + q == 0) violate("p+p_hat+q>0", "I, I_hat and J are all empty");

  for (const auto* set : {&f.I, &f.I_hat}) {
    std::set<int> seen;
    for (int i : *set) {
      if (i < 1 || i > f.m) violate("indices in range", "handle index " + std::to_string(i) + " outside 1..m");
      if (!seen.insert(i).second) violate("indices in range", "repeated handle index " + std::to_string(i));
    }
  }
  for (int i : f.I)
    if (std::find(f.I_hat.begin(), f.I_hat.end(), i) != f.I_hat.end())
      violate("I,I_hat disjoint", "handle " + std::to_string(i) + " appears in both I and I_hat");

  check_interval_set(f.J, f.n, "J");
  if (f.m == 0) {
    if (f.n < 3) violate("m=0 => n>=3", "m = 0 needs at least three boundary factors");
    int covered = 0;
    for (const auto& iv : f.J) covered += iv.hi - iv.lo + 1;
    if (covered == f.n) violate("m=0 => union(J) proper subset", "intervals of J cover all of {1..n}");
  }
  if (f.m == 1 && f.n == 0 && ph > 0) violate("m=1,n=0 => I_hat empty", "commutator Hamiltonian is a Casimir on M_{1,0}");

  std::vector<Interval> lower = f.J;
  for (std::size_t lvl = 0; lvl < f.nested.size(); ++lvl) {
    check_interval_set(f.nested[lvl], f.n, "nested level " + std::to_string(lvl + 1));
    for (const auto& outer : f.nested[lvl])
      for (const auto& inner : lower)
        if (!disjoint(outer, inner) && !properly_contains(outer, inner))
          violate("nesting", "interval " + show(outer) + " at level " + std::to_string(lvl + 1) +
                                 " neither contains nor avoids " + show(inner));
    lower.insert(lower.end(), f.nested[lvl].begin(), f.nested[lvl].end());
  }

  for (const auto& b : f.commutator_blocks) {
    if (!(1 <= b.lo && b.lo < b.hi && b.hi <= f.m))
      violate("commutator block", "needs 1 <= k1 < k2 <= m, got " + show(b));
    for (int k = b.lo; k <= b.hi; ++k)
      if (std::count(f.I.begin(), f.I.end(), k) || std::count(f.I_hat.begin(), f.I_hat.end(), k))
        violate("commutator block", show(b) + " meets I or I_hat at " + std::to_string(k));
  }
  int max_handle = 0;
  for (int i : f.I) max_handle = std::max(max_handle, i);
  for (int i : f.I_hat) max_handle = std::max(max_handle, i);
  const int lambda1 = f.J.empty() ? f.n + 1 : f.J.front().lo;
  for (const auto& t : f.tails) {
    if (t.k < 1 || t.k > f.m || t.k <= max_handle)
      violate("tail block", "needs max(I, I_hat) < k <= m, got k = " + std::to_string(t.k));
    if (t.kappa < 0 || t.kappa >= lambda1)
      violate("tail block", "needs 0 <= kappa < lambda_1, got kappa = " + std::to_string(t.kappa));
  }

  // Conjugation blocks must form a laminar family, otherwise their flows need not commute.
  const auto blocks = family_blocks(f);
  for (std::size_t a = 0; a < blocks.size(); ++a)
    for (std::size_t b = a + 1; b < blocks.size(); ++b) {
      if (blocks[a].block != WordHamiltonian::Block::FactorRange || blocks[b].block != WordHamiltonian::Block::FactorRange)
        continue;
      const Interval x{blocks[a].first, blocks[a].last}, y{blocks[b].first, blocks[b].last};
      if (!disjoint(x, y) && !properly_contains(x, y) && !properly_contains(y, x))
        violate("laminar blocks", blocks[a].label + " and " + blocks[b].label + " overlap partially");
    }
}

// ---------------------------------------------------------------- word Hamiltonians

WordHamiltonian WordHamiltonian::single_a(int handle, ClassFunction chi) {
  return {Block::SingleA, handle - 1, handle - 1, chi, "A" + std::to_string(handle)};
}

WordHamiltonian WordHamiltonian::commutator(int handle, ClassFunction chi) {
  return {Block::FactorRange, handle - 1, handle - 1, chi, "[A" + std::to_string(handle) + ",B" + std::to_string(handle) + "]"};
}

WordHamiltonian WordHamiltonian::c_interval(int m, Interval iv, ClassFunction chi) {
  std::string label;
  for (int k = iv.lo; k <= iv.hi; ++k) label += "C" + std::to_string(k);
  return {Block::FactorRange, m + iv.lo - 1, m + iv.hi - 1, chi, label};
}

WordHamiltonian WordHamiltonian::factor_range(int first, int last, ClassFunction chi, std::string label) {
  if (label.empty()) label = "Phi[" + std::to_string(first) + ".." + std::to_string(last) + "]";
  return {Block::FactorRange, first, last, chi, std::move(label)};
}

Mat WordHamiltonian::argument(const ModuliPoint& x) const {
  const int nf = static_cast<int>(x.layout.size());
  if (first < 0 || last < first || last >= nf) throw UnsupportedWord("block " + label + " outside the factor list");
  if (block == Block::SingleA) {
    if (x.layout[first] != FactorKind::Double) throw UnsupportedWord("block " + label + " needs a D(K) factor");
    return x.comps[x.factor_offsets()[first]];
  }
  Mat p = x.factor_momentum(first);
  for (int f = first + 1; f <= last; ++f) p = p * x.factor_momentum(f);
  return p;
}

std::string WordHamiltonian::name() const { return chi.name() + "(" + label + ")"; }

ScalarObservable WordHamiltonian::observable() const {
  const WordHamiltonian h = *this;
  return ScalarObservable(name(), [h](const PhasePoint& x) {
    const auto* p = std::get_if<ModuliPoint>(&x);
    if (!p) throw InvalidShape("word Hamiltonian needs a moduli point");
    return h.value(*p);
  });
}

std::vector<FamilyBlock> family_blocks(const IntervalFamily& f) {
  using B = WordHamiltonian::Block;
  std::vector<FamilyBlock> out;
  for (int i : f.I) out.push_back({B::SingleA, i - 1, i - 1, "A" + std::to_string(i)});
  for (int i : f.I_hat)
    out.push_back({B::FactorRange, i - 1, i - 1, "[A" + std::to_string(i) + ",B" + std::to_string(i) + "]"});
  auto add_intervals = [&](const std::vector<Interval>& J) {
    for (const auto& iv : J) {
      const auto w = WordHamiltonian::c_interval(f.m, iv, {});
      out.push_back({B::FactorRange, w.first, w.last, w.label});
    }
  };
  add_intervals(f.J);
  for (const auto& level : f.nested) add_intervals(level);
  for (const auto& b : f.commutator_blocks)
    out.push_back({B::FactorRange, b.lo - 1, b.hi - 1, "[A,B]" + std::to_string(b.lo) + ".." + std::to_string(b.hi)});
  for (const auto& t : f.tails) {
    std::string label = "[A,B]" + std::to_string(t.k) + ".." + std::to_string(f.m);
    for (int k = 1; k <= t.kappa; ++k) label += "C" + std::to_string(k);
    out.push_back({B::FactorRange, t.k - 1, f.m + t.kappa - 1, label});
  }
  return out;
}

std::vector<WordHamiltonian> hamiltonian_family(const IntervalFamily& f, const std::vector<ClassFunction>& chis) {
  validate(f);
  std::vector<WordHamiltonian> out;
  for (const auto& b : family_blocks(f))
    for (const auto& chi : chis) out.push_back({b.block, b.first, b.last, chi, b.label});
  return out;
}

std::vector<WordHamiltonian> action_hamiltonians(const std::vector<FamilyBlock>& blocks, int n) {
  std::vector<WordHamiltonian> out;
  for (const auto& b : blocks)
    for (int j = 0; j < n - 1; ++j)
      out.push_back({b.block, b.first, b.last,
                     b.block == WordHamiltonian::Block::SingleA ? ClassFunction::chi(j) : ClassFunction::xi(j), b.label});
  return out;
}

std::vector<WordHamiltonian> action_hamiltonians(const IntervalFamily& f, int dim) {
  validate(f);
  return action_hamiltonians(family_blocks(f), dim);
}

ModuliPoint moduli_flow(const ModuliPoint& x, const WordHamiltonian& h, double tau, DriftLog* log) {
  const Mat arg = h.argument(x);
  PhasePoint out = x;
  auto& p = std::get<ModuliPoint>(out);
  const auto off = x.factor_offsets();
  if (h.block == WordHamiltonian::Block::SingleA) {
    Mat& B = p.comps[off[h.first] + 1];
    B = B * exp_skew(-tau * h.chi.gradient(arg));
  } else {
    const Mat e = exp_skew(tau * h.chi.gradient(arg));
    for (int f = h.first; f <= h.last; ++f)
      for (int s = 0; s < x.factor_size(f); ++s) p.comps[off[f] + s] = conj_by(e, p.comps[off[f] + s]);
  }
  maintain_unitarity(out, log);
  return std::get<ModuliPoint>(std::move(out));
}

ModuliPoint moduli_torus_action(const ModuliPoint& x, const Vec& tau, const std::vector<FamilyBlock>& blocks,
                                DriftLog* log) {
  const int n = x.dim(), l = n - 1;
  if (tau.size() != l * static_cast<int>(blocks.size()))
    throw ShapeError("torus parameter must have length (n-1) * #blocks");
  const RootDatum rd = build_root_datum(n);
  PhasePoint out = x;
  auto& p = std::get<ModuliPoint>(out);
  const auto off = x.factor_offsets();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Vec t = tau.segment(static_cast<Eigen::Index>(b) * l, l);
    const auto& blk = blocks[b];
    const WordHamiltonian w{blk.block, blk.first, blk.last, {}, blk.label};
    const Mat arg = w.argument(p);
    const Mat G = alcove_diagonalize(arg).gamma;
    if (blk.block == WordHamiltonian::Block::SingleA) {
      Mat& B = p.comps[off[blk.first] + 1];
      B = B * G.adjoint() * torus_T(rd, -t) * G;
    } else {
      const Mat g = G.adjoint() * torus_T_omega(rd, t) * G;
      for (int f = blk.first; f <= blk.last; ++f)
        for (int s = 0; s < x.factor_size(f); ++s) p.comps[off[f] + s] = conj_by(g, p.comps[off[f] + s]);
    }
  }
  maintain_unitarity(out, log);
  return std::get<ModuliPoint>(std::move(out));
}

ModuliPoint moduli_torus_action(const ModuliPoint& x, const Vec& tau, const IntervalFamily& f, DriftLog* log) {
  validate(f);
  return moduli_torus_action(x, tau, family_blocks(f), log);
}

std::vector<FamilyBlock> joint_genus_two_blocks() {
  using B = WordHamiltonian::Block;
  return {{B::FactorRange, 0, 0, "[A1,B1]"}, {B::SingleA, 1, 1, "A2"}, {B::FactorRange, 1, 1, "[A2,B2]"}};
}

// ---------------------------------------------------------------- permutations

ModuliPoint permutation_pushforward(const ModuliPoint& x, const PermutationPlan& plan) {
  ModuliPoint y = x;
  for (int j : plan.steps) {
    const int nf = static_cast<int>(y.layout.size());
    if (j < 1 || j >= nf)
      throw InvalidPlan("transposition psi_" + std::to_string(j) + " needs 1 <= j < " + std::to_string(nf));
    const auto off = y.factor_offsets();
    const int a = j - 1, b = j;
    const Mat phi = y.factor_momentum(a);
    std::vector<Mat> first(y.comps.begin() + off[a], y.comps.begin() + off[a] + y.factor_size(a));
    std::vector<Mat> second(y.comps.begin() + off[b], y.comps.begin() + off[b] + y.factor_size(b));
    for (auto& c : second) c = conj_by(phi, c);
    std::vector<Mat> merged = second;
    merged.insert(merged.end(), first.begin(), first.end());
    std::copy(merged.begin(), merged.end(), y.comps.begin() + off[a]);
    std::swap(y.layout[a], y.layout[b]);
  }
  return y;
}

ScalarObservable pullback_hamiltonian(const ScalarObservable& F, const PermutationPlan& plan) {
  return ScalarObservable(F.name() + " o psi", [F, plan](const PhasePoint& x) {
    return F(permutation_pushforward(std::get<ModuliPoint>(x), plan));
  });
}

ScalarObservable pullback_hamiltonian(const WordHamiltonian& h, const PermutationPlan& plan) {
  return pullback_hamiltonian(h.observable(), plan);
}

std::vector<NamedValue> sphere_constants_of_motion(const ModuliPoint& x) {
  if (!x.is_canonical() || x.num_doubles() != 0 || x.num_k() != 3)
    throw InvalidShape("sphere constants need a point of M_{0,3}");
  const Mat &c1 = x.comps[0], &c2 = x.comps[1], &c3 = x.comps[2];
  const Mat c12 = c1 * c2;
  return {
      {"Re tr C1", c1.trace().real()},
      {"Re tr C2", c2.trace().real()},
      {"Re tr C1C2", c12.trace().real()},
      {"Im tr C1C2", c12.trace().imag()},
      {"Re tr C1C2^-1", (c1 * c2.adjoint()).trace().real()},
      {"Re tr C3", c3.trace().real()},
      {"Re tr C1C2C3", (c12 * c3).trace().real()},
      {"Im tr C1C2C3", (c12 * c3).trace().imag()},
      {"Re tr C1C2C3^-1", (c12 * c3.adjoint()).trace().real()},
  };
}

}  // namespace hamred
