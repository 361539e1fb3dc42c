#include "finslab/probes.hpp"

#include <cmath>
#include <random>

#include "finslab/errors.hpp"
#include "finslab/lsq.hpp"

namespace finslab::classify {

namespace {

constexpr std::size_t kAttemptsPerProbe = 1000;

class SphereSampler {
 public:
  SphereSampler(int n, std::uint64_t seed) : n_(n), rng_(seed) {}

  Vec next() {
    Vec v(n_);
    do {
      for (int i = 0; i < n_; ++i) v(i) = normal_(rng_);
    } while (v.norm() < 1e-8);
    return v / v.norm();
  }

 private:
  int n_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

std::size_t default_probe_count(int n) { return 4 * cubic_monomial_count(n); }

std::vector<Vec> sphere_directions(int n, std::size_t count, std::uint64_t seed) {
  SphereSampler sampler(n, seed);
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.next());
  return out;
}

ProbeSet make_probe_set(const alphabeta::AlphaBetaMetric& M, const Vec& x, const ProbePolicy& policy) {
  const int n = M.dim();
  const std::size_t want = policy.count ? policy.count : default_probe_count(n);
  const riemann::CovariantPackage pkg = riemann::covariant_package(M.alpha, M.beta, x);
  if (!(pkg.b2 > 0.0)) throw ConfigurationError("beta vanishes at the probe base point");
  const double b = std::sqrt(pkg.b2);

  ProbeSet ps{x, {}, policy.seed, policy.singular_margin};
  SphereSampler sampler(n, policy.seed);
  std::size_t attempts = 0;
  while (ps.directions.size() < want) {
    if (++attempts > kAttemptsPerProbe * want)
      throw ConfigurationError("could not draw enough probes off the singular locus of '" + M.label + "'");
    Vec y = sampler.next();
    if (pkg.b.dot(y) < 0.0) y = -y;
    const alphabeta::Slope sl = alphabeta::slope(pkg, y);
    if (sl.s < policy.singular_margin * b) continue;
    try {
      const alphabeta::SprayInvariants inv = alphabeta::spray_invariants(M.phi, sl.s, sl.b2);
      if (std::abs(inv.Delta) < policy.delta_margin) continue;
      if (!(alphabeta::phi_jet(M.phi, sl.s).phi > 0.0)) continue;
    } catch (const DomainError&) {
      continue;
    }
    ps.directions.push_back(y);
  }
  return ps;
}

ProbeSet make_probe_set(const ad::TwoArgField& F, const Vec& x, const ProbePolicy& policy) {
  const std::size_t want = policy.count ? policy.count : default_probe_count(F.dim);
  ProbeSet ps{x, {}, policy.seed, policy.singular_margin};
  SphereSampler sampler(F.dim, policy.seed);
  std::size_t attempts = 0;
  while (ps.directions.size() < want) {
    if (++attempts > kAttemptsPerProbe * want) throw ConfigurationError("could not draw enough probes");
    Vec y = sampler.next();
    try {
      if (!(ad::value_at(F, x, y) > 0.0)) continue;
    } catch (const DomainError&) {
      continue;
    }
    ps.directions.push_back(y);
  }
  return ps;
}

}  // namespace finslab::classify
