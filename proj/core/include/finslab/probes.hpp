#pragma once

#include <cstdint>
#include <vector>

#include "finslab/alphabeta.hpp"

namespace finslab::classify {

/// How probe directions are drawn. A count of 0 selects the default of four
/// times the number of homogeneous cubic monomials in n variables.
struct ProbePolicy {
  std::size_t count = 0;
  std::uint64_t seed = 20130601;
  /// Minimum s / b = beta / (alpha * |beta|_alpha) accepted.
  double singular_margin = 0.05;
  /// Minimum |Delta| accepted; Delta = 0 is where the fundamental tensor
  /// degenerates and both spray routes blow up.
  double delta_margin = 0.05;
};

/// Unit directions at a base point. For (alpha, beta)-metrics every sample
/// satisfies beta(x, y) >= singular_margin * alpha(x, y) * b(x).
struct ProbeSet {
  Vec x;
  std::vector<Vec> directions;
  std::uint64_t seed = 0;
  double singular_margin = 0.0;

  std::size_t count() const noexcept { return directions.size(); }
};

std::size_t default_probe_count(int n);

ProbeSet make_probe_set(const alphabeta::AlphaBetaMetric& M, const Vec& x, const ProbePolicy& policy);

/// Generic variant: keeps directions where F evaluates to a positive value.
ProbeSet make_probe_set(const ad::TwoArgField& F, const Vec& x, const ProbePolicy& policy);

/// Reproducible Gaussian-on-the-sphere directions, no filtering.
std::vector<Vec> sphere_directions(int n, std::size_t count, std::uint64_t seed);

}  // namespace finslab::classify
