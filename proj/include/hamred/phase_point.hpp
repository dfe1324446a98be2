#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hamred/linalg.hpp"

namespace hamred {

struct CotangentPoint {
  Mat g;  // K
  Mat J;  // 𝔨
};

struct HeisenbergPoint {
  Mat X;  // SL(n,ℂ)
};

// A factor of a fused product: a copy of K (one letter C) or an internally
// fused double D(K) (two letters A, B).
enum class FactorKind { K, Double };

// Point of a fused product of K and D(K) factors. The canonical layout of
// M_{m,n} is m doubles followed by n copies of K; other layouts arise from
// permutations of fused factors. Handle and boundary indices are 1-based.
struct ModuliPoint {
  std::vector<FactorKind> layout;
  std::vector<Mat> comps;

  static ModuliPoint canonical(int m, int n, std::vector<Mat> comps);
  static ModuliPoint make_double(const Mat& A, const Mat& B);

  int num_doubles() const;
  int num_k() const;
  bool is_canonical() const;
  int dim() const { return static_cast<int>(comps.front().rows()); }

  // First component index of each factor.
  std::vector<int> factor_offsets() const;
  int factor_size(int f) const { return layout.at(f) == FactorKind::K ? 1 : 2; }
  Mat factor_momentum(int f) const;
  Mat momentum() const;

  // Canonical-layout accessors.
  const Mat& A(int i) const;
  const Mat& B(int i) const;
  const Mat& C(int k) const;
};

using PhasePoint = std::variant<CotangentPoint, HeisenbergPoint, ModuliPoint>;

enum class SlotKind { Group, Algebra, Complex };

int slot_count(const PhasePoint& x);
SlotKind slot_kind(const PhasePoint& x, int i);
const Mat& slot(const PhasePoint& x, int i);
Mat& slot_mut(PhasePoint& x, int i);
int point_dim(const PhasePoint& x);

double point_distance(const PhasePoint& a, const PhasePoint& b);
// Real coordinates of all slot entries (re, im interleaved).
Vec flatten(const PhasePoint& x);
std::string point_kind_name(const PhasePoint& x);

}  // namespace hamred
