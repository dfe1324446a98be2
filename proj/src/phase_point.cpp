#include "hamred/phase_point.hpp"

#include "hamred/errors.hpp"

namespace hamred {

ModuliPoint ModuliPoint::canonical(int m, int n, std::vector<Mat> comps) {
  if (m < 0 || n < 0 || m + n == 0) throw InvalidShape("M_{m,n} needs m, n >= 0, not both 0");
  if (static_cast<int>(comps.size()) != 2 * m + n)
    throw InvalidShape("expected " + std::to_string(2 * m + n) + " components");
  ModuliPoint p;
  p.layout.assign(m, FactorKind::Double);
  p.layout.insert(p.layout.end(), n, FactorKind::K);
  p.comps = std::move(comps);
  return p;
}

ModuliPoint ModuliPoint::make_double(const Mat& A, const Mat& B) { return canonical(1, 0, {A, B}); }

int ModuliPoint::num_doubles() const {
  int c = 0;
  for (auto f : layout) c += f == FactorKind::Double;
  return c;
}

int ModuliPoint::num_k() const { return static_cast<int>(layout.size()) - num_doubles(); }

bool ModuliPoint::is_canonical() const {
  bool seen_k = false;
  for (auto f : layout) {
    if (f == FactorKind::K) seen_k = true;
    else if (seen_k) return false;
  }
  return true;
}

std::vector<int> ModuliPoint::factor_offsets() const {
  std::vector<int> off;
  int o = 0;
  for (int f = 0; f < static_cast<int>(layout.size()); ++f) {
    off.push_back(o);
    o += factor_size(f);
  }
  return off;
}

Mat ModuliPoint::factor_momentum(int f) const {
  const int o = factor_offsets().at(f);
  if (layout[f] == FactorKind::K) return comps[o];
  return group_commutator(comps[o], comps[o + 1]);
}

Mat ModuliPoint::momentum() const {
  Mat phi = identity(dim());
  for (int f = 0; f < static_cast<int>(layout.size()); ++f) phi = phi * factor_momentum(f);
  return phi;
}

const Mat& ModuliPoint::A(int i) const {
  if (!is_canonical() || i < 1 || i > num_doubles()) throw InvalidShape("no handle A_" + std::to_string(i));
  return comps[2 * (i - 1)];
}

const Mat& ModuliPoint::B(int i) const {
  if (!is_canonical() || i < 1 || i > num_doubles()) throw InvalidShape("no handle B_" + std::to_string(i));
  return comps[2 * (i - 1) + 1];
}

const Mat& ModuliPoint::C(int k) const {
  if (!is_canonical() || k < 1 || k > num_k()) throw InvalidShape("no boundary C_" + std::to_string(k));
  return comps[2 * num_doubles() + k - 1];
}

int slot_count(const PhasePoint& x) {
  return std::visit(
      [](const auto& p) -> int {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CotangentPoint>) return 2;
        else if constexpr (std::is_same_v<T, HeisenbergPoint>) return 1;
        else return static_cast<int>(p.comps.size());
      },
      x);
}

SlotKind slot_kind(const PhasePoint& x, int i) {
  if (const auto* c = std::get_if<CotangentPoint>(&x)) {
    (void)c;
    return i == 0 ? SlotKind::Group : SlotKind::Algebra;
  }
  if (std::holds_alternative<HeisenbergPoint>(x)) return SlotKind::Complex;
  return SlotKind::Group;
}

const Mat& slot(const PhasePoint& x, int i) {
  return slot_mut(const_cast<PhasePoint&>(x), i);
}

Mat& slot_mut(PhasePoint& x, int i) {
  if (auto* c = std::get_if<CotangentPoint>(&x)) return i == 0 ? c->g : c->J;
  if (auto* h = std::get_if<HeisenbergPoint>(&x)) return h->X;
  return std::get<ModuliPoint>(x).comps.at(i);
}

int point_dim(const PhasePoint& x) { return static_cast<int>(slot(x, 0).rows()); }

double point_distance(const PhasePoint& a, const PhasePoint& b) {
  if (a.index() != b.index() || slot_count(a) != slot_count(b))
    throw InvalidShape("points live on different spaces");
  double s = 0;
  for (int i = 0; i < slot_count(a); ++i) s += (slot(a, i) - slot(b, i)).squaredNorm();
  return std::sqrt(s);
}

Vec flatten(const PhasePoint& x) {
  const int n = point_dim(x);
  const int k = slot_count(x);
  Vec v(2 * n * n * k);
  int o = 0;
  for (int i = 0; i < k; ++i) {
    const Mat& m = slot(x, i);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        v(o++) = m(r, c).real();
        v(o++) = m(r, c).imag();
      }
  }
  return v;
}

std::string point_kind_name(const PhasePoint& x) {
  switch (x.index()) {
    case 0: return "cotangent";
    case 1: return "heisenberg";
    default: return "moduli";
  }
}

}  // namespace hamred
