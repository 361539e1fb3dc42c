#include "finslab/field.hpp"

#include "finslab/errors.hpp"

namespace finslab::ad {

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

std::vector<double> concat(const Vec& a, const Vec& b) {
  std::vector<double> out = to_std(a);
  out.insert(out.end(), b.data(), b.data() + b.size());
  return out;
}

void check_dim(int dim, const Vec& x) {
  if (x.size() != dim) throw ConfigurationError("point dimension does not match field dimension");
}

}  // namespace

JetVec seed_point(const Vec& x, std::span<const Vec> seeds) {
  if (seeds.size() > kMaxSeeds) throw ConfigurationError("too many seed directions");
  const auto n = static_cast<std::size_t>(x.size());
  JetVec out;
  out.reserve(n);
  std::array<double, kMaxSeeds> dir{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      if (seeds[k].size() != x.size()) throw ConfigurationError("seed dimension mismatch");
      dir[k] = seeds[k](static_cast<Eigen::Index>(i));
    }
    out.push_back(Jet2::variable(x(static_cast<Eigen::Index>(i)), std::span(dir.data(), seeds.size())));
  }
  return out;
}

JetVec seed_axes(const Vec& x, std::size_t offset, std::size_t total) {
  if (total > kMaxSeeds) throw ConfigurationError("too many seed directions");
  const auto n = static_cast<std::size_t>(x.size());
  JetVec out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Jet2 j = Jet2::constant(x(static_cast<Eigen::Index>(i)), total);
    j.set_grad(offset + i, 1.0);
    out.push_back(j);
  }
  return out;
}

JetVec constant_point(const Vec& x) {
  JetVec out;
  out.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) out.emplace_back(x(i));
  return out;
}

Jet2 jet_eval(const ScalarField& f, const Vec& x, std::span<const Vec> seeds) {
  check_dim(f.dim, x);
  if (seeds.size() > 2 * static_cast<std::size_t>(f.dim))
    throw ConfigurationError("at most 2n seed directions are allowed");
  const JetVec pt = seed_point(x, seeds);
  try {
    return f.eval(pt);
  } catch (const DomainError& e) {
    throw e.at(to_std(x));
  }
}

JetVec jet_eval(const VectorField& f, const Vec& x, std::span<const Vec> seeds) {
  check_dim(f.dim, x);
  if (seeds.size() > 2 * static_cast<std::size_t>(f.dim))
    throw ConfigurationError("at most 2n seed directions are allowed");
  const JetVec pt = seed_point(x, seeds);
  try {
    return f.eval(pt);
  } catch (const DomainError& e) {
    throw e.at(to_std(x));
  }
}

XYDerivatives mixed_xy_derivatives(const TwoArgField& F, const Vec& x, const Vec& y) {
  check_dim(F.dim, x);
  check_dim(F.dim, y);
  const auto n = static_cast<std::size_t>(F.dim);
  const JetVec xs = seed_axes(x, 0, 2 * n);
  const JetVec ys = seed_axes(y, n, 2 * n);
  Jet2 j;
  try {
    j = F.eval(xs, ys);
  } catch (const DomainError& e) {
    throw e.at(concat(x, y));
  }
  const auto N = static_cast<Eigen::Index>(n);
  XYDerivatives d;
  d.value = j.value();
  d.dx.resize(N);
  d.dy.resize(N);
  d.dxdx.resize(N, N);
  d.dxdy.resize(N, N);
  d.dydy.resize(N, N);
  for (std::size_t a = 0; a < n; ++a) {
    const auto A = static_cast<Eigen::Index>(a);
    d.dx(A) = j.grad(a);
    d.dy(A) = j.grad(n + a);
    for (std::size_t b = 0; b < n; ++b) {
      const auto B = static_cast<Eigen::Index>(b);
      d.dxdx(A, B) = j.hess(a, b);
      d.dxdy(A, B) = j.hess(a, n + b);
      d.dydy(A, B) = j.hess(n + a, n + b);
    }
  }
  return d;
}

double value_at(const TwoArgField& F, const Vec& x, const Vec& y) {
  check_dim(F.dim, x);
  check_dim(F.dim, y);
  try {
    return F.eval(constant_point(x), constant_point(y)).value();
  } catch (const DomainError& e) {
    throw e.at(concat(x, y));
  }
}

}  // namespace finslab::ad
