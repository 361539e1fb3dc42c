#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace finslab::ad {

/// Maximum number of seed directions a jet can carry. A full (x, y) pass over
/// an n-dimensional chart needs 2n seeds, so charts up to n = 4 are supported.
inline constexpr std::size_t kMaxSeeds = 8;

/// Second-order forward-mode jet: a value together with its gradient and
/// Hessian along a set of seed directions.
///
/// The Hessian is stored as a packed lower triangle, so hess(i, j) and
/// hess(j, i) read the same slot and symmetry holds bit for bit.
/// Jets with fewer seeds than their operand partner are treated as having
/// zero derivatives in the missing slots; plain doubles promote to 0-seed jets.
class Jet2 {
 public:
  static constexpr std::size_t kPacked = kMaxSeeds * (kMaxSeeds + 1) / 2;

  constexpr Jet2() = default;
  constexpr Jet2(double value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  /// A constant carrying `seeds` (all zero) derivative slots.
  static Jet2 constant(double value, std::size_t seeds);
  /// An affine coordinate: value plus gradient `direction`, zero Hessian.
  static Jet2 variable(double value, std::span<const double> direction);

  double value() const noexcept { return value_; }
  std::size_t seeds() const noexcept { return seeds_; }
  double grad(std::size_t i) const noexcept { return grad_[i]; }
  double hess(std::size_t i, std::size_t j) const noexcept {
    return i >= j ? hess_[packed(i, j)] : hess_[packed(j, i)];
  }

  void set_grad(std::size_t i, double v) noexcept { grad_[i] = v; }
  void set_hess(std::size_t i, std::size_t j, double v) noexcept {
    if (i >= j)
      hess_[packed(i, j)] = v;
    else
      hess_[packed(j, i)] = v;
  }

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);

  /// Composition with a scalar function f given f(u), f'(u), f''(u).
  Jet2 chain(double f, double df, double d2f) const;

  static constexpr std::size_t packed(std::size_t i, std::size_t j) noexcept {
    return i * (i + 1) / 2 + j;
  }

 private:
  friend Jet2 operator+(const Jet2&, const Jet2&);
  friend Jet2 operator-(const Jet2&, const Jet2&);
  friend Jet2 operator-(const Jet2&);
  friend Jet2 operator*(const Jet2&, const Jet2&);

  double value_ = 0.0;
  std::uint8_t seeds_ = 0;
  std::array<double, kMaxSeeds> grad_{};
  std::array<double, kPacked> hess_{};
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);

Jet2 reciprocal(const Jet2& a);
Jet2 square(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
/// a^p for real p. Negative bases require an integer exponent; a zero base
/// requires an exponent whose first two derivatives stay finite.
Jet2 pow(const Jet2& a, double p);

}  // namespace finslab::ad
