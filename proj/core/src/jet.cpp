#include "finslab/jet.hpp"

#include <algorithm>
#include <cmath>

#include "finslab/errors.hpp"

namespace finslab::ad {

namespace {

std::uint8_t joint_seeds(const Jet2& a, const Jet2& b) {
  return static_cast<std::uint8_t>(std::max(a.seeds(), b.seeds()));
}

bool is_integer(double p) { return std::nearbyint(p) == p; }

}  // namespace

Jet2 Jet2::constant(double value, std::size_t seeds) {
  if (seeds > kMaxSeeds) throw ConfigurationError("too many seed directions for Jet2");
  Jet2 j(value);
  j.seeds_ = static_cast<std::uint8_t>(seeds);
  return j;
}

Jet2 Jet2::variable(double value, std::span<const double> direction) {
  Jet2 j = constant(value, direction.size());
  std::copy(direction.begin(), direction.end(), j.grad_.begin());
  return j;
}

Jet2& Jet2::operator+=(const Jet2& o) { return *this = *this + o; }
Jet2& Jet2::operator-=(const Jet2& o) { return *this = *this - o; }
Jet2& Jet2::operator*=(const Jet2& o) { return *this = *this * o; }
Jet2& Jet2::operator/=(const Jet2& o) { return *this = *this / o; }

Jet2 Jet2::chain(double f, double df, double d2f) const {
  Jet2 r;
  r.value_ = f;
  r.seeds_ = seeds_;
  const std::size_t n = seeds_;
  for (std::size_t i = 0; i < n; ++i) r.grad_[i] = df * grad_[i];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      r.hess_[packed(i, j)] = df * hess_[packed(i, j)] + d2f * grad_[i] * grad_[j];
  return r;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value_ = a.value_ + b.value_;
  r.seeds_ = joint_seeds(a, b);
  const std::size_t n = r.seeds_;
  for (std::size_t i = 0; i < n; ++i) r.grad_[i] = a.grad_[i] + b.grad_[i];
  for (std::size_t k = 0; k < Jet2::packed(n, 0); ++k) r.hess_[k] = a.hess_[k] + b.hess_[k];
  return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value_ = a.value_ - b.value_;
  r.seeds_ = joint_seeds(a, b);
  const std::size_t n = r.seeds_;
  for (std::size_t i = 0; i < n; ++i) r.grad_[i] = a.grad_[i] - b.grad_[i];
  for (std::size_t k = 0; k < Jet2::packed(n, 0); ++k) r.hess_[k] = a.hess_[k] - b.hess_[k];
  return r;
}

Jet2 operator-(const Jet2& a) {
  Jet2 r;
  r.value_ = -a.value_;
  r.seeds_ = a.seeds_;
  const std::size_t n = r.seeds_;
  for (std::size_t i = 0; i < n; ++i) r.grad_[i] = -a.grad_[i];
  for (std::size_t k = 0; k < Jet2::packed(n, 0); ++k) r.hess_[k] = -a.hess_[k];
  return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value_ = a.value_ * b.value_;
  r.seeds_ = joint_seeds(a, b);
  const std::size_t n = r.seeds_;
  for (std::size_t i = 0; i < n; ++i) r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const std::size_t k = Jet2::packed(i, j);
      r.hess_[k] = a.value_ * b.hess_[k] + b.value_ * a.hess_[k] + a.grad_[i] * b.grad_[j] +
                   b.grad_[i] * a.grad_[j];
    }
  return r;
}

Jet2 reciprocal(const Jet2& a) {
  const double v = a.value();
  if (v == 0.0) throw DomainError("division by zero");
  const double inv = 1.0 / v;
  return a.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.seeds() == 0) {
    if (b.value() == 0.0) throw DomainError("division by zero");
    return a * Jet2(1.0 / b.value());
  }
  return a * reciprocal(b);
}

Jet2 square(const Jet2& a) { return a * a; }

Jet2 sqrt(const Jet2& a) {
  const double v = a.value();
  if (v < 0.0) throw DomainError("square root of a negative value");
  if (v == 0.0) {
    for (std::size_t i = 0; i < a.seeds(); ++i)
      if (a.grad(i) != 0.0 || a.hess(i, i) != 0.0)
        throw DomainError("square root at zero has unbounded derivatives");
    return a.chain(0.0, 0.0, 0.0);
  }
  const double r = std::sqrt(v);
  return a.chain(r, 0.5 / r, -0.25 / (r * v));
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return a.chain(e, e, e);
}

Jet2 log(const Jet2& a) {
  const double v = a.value();
  if (v <= 0.0) throw DomainError("logarithm of a non-positive value");
  return a.chain(std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.chain(s, c, -s);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.chain(c, -s, -c);
}

Jet2 pow(const Jet2& a, double p) {
  const double v = a.value();
  if (p == 0.0) return a.chain(1.0, 0.0, 0.0);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  const bool integral = is_integer(p);
  if (v < 0.0 && !integral) throw DomainError("fractional power of a negative value");
  if (v == 0.0) {
    if (p < 0.0) throw DomainError("negative power of zero");
    if (p < 2.0 && !integral) throw DomainError("fractional power at zero has unbounded derivatives");
    const double d1 = (p == 1.0) ? 1.0 : 0.0;
    const double d2 = (p == 2.0) ? 2.0 : 0.0;
    return a.chain(0.0, d1, d2);
  }
  const double f = std::pow(v, p);
  return a.chain(f, p * f / v, p * (p - 1.0) * f / (v * v));
}

}  // namespace finslab::ad
