#pragma once

#include <functional>
#include <string>
#include <vector>

#include "finslab/field.hpp"

namespace finslab::riemann {

/// Riemannian metric a_ij(x). The evaluator returns the n*n components in
/// row-major order; only the upper triangle is read, so the metric seen by
/// every consumer is symmetric by construction.
class MetricField {
 public:
  using Evaluator = std::function<ad::JetVec(ad::JetSpan x)>;

  MetricField() = default;
  MetricField(int dim, std::string label, Evaluator components);

  int dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }

  /// Symmetrized components as jets, row-major n*n.
  ad::JetVec eval(ad::JetSpan x) const;
  /// Plain matrix value; throws GeometryError when not positive definite.
  Mat value(const Vec& x) const;

 private:
  int dim_ = 0;
  std::string label_;
  Evaluator components_;
};

/// 1-form beta = b_i(x) y^i.
class OneFormField {
 public:
  using Evaluator = std::function<ad::JetVec(ad::JetSpan x)>;

  OneFormField() = default;
  OneFormField(int dim, std::string label, Evaluator components);

  int dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }

  ad::JetVec eval(ad::JetSpan x) const;
  Vec value(const Vec& x) const;

 private:
  int dim_ = 0;
  std::string label_;
  Evaluator components_;
};

/// Rank-3 array gamma^i_{jk}.
class Christoffel {
 public:
  explicit Christoffel(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}
  int dim() const noexcept { return n_; }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

 private:
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>((i * n_ + j) * n_ + k);
  }
  int n_;
  std::vector<double> data_;
};

/// b_{i|j} and its standard decomposition at one point, together with the
/// metric data the contractions were formed with.
struct CovariantPackage {
  Mat nabla;   // b_{i|j}
  Mat r;       // r_ij
  Mat s;       // s_ij
  Vec r_vec;   // r_j = b^i r_ij
  Vec s_vec;   // s_j = b^i s_ij
  Vec s_up;    // s^i = a^{ik} s_k
  double b2 = 0.0;
  /// Frobenius norm of |d_j b_i| + |b_k gamma^k_ij|: the size of the terms
  /// b_{i|j} is formed from, used to normalize cancellation-prone residuals.
  double nabla_scale = 0.0;
  Mat a, a_inv;
  Vec b, b_up;

  double r00(const Vec& y) const { return y.dot(r * y); }
  double s0(const Vec& y) const { return s_vec.dot(y); }
  /// s^i_0 = a^{ik} s_kj y^j
  Vec s_up0(const Vec& y) const { return a_inv * (s * y); }
};

/// Tolerances used by identity checks; the library has no intrinsic
/// thresholds, these are verification policy.
struct Tolerances {
  double algebraic = 1e-9;
  double finite_difference = 1e-6;
};

/// Cholesky-checked inverse. Throws GeometryError on non-SPD input.
Mat spd_inverse(const Mat& a);

Christoffel christoffel(const MetricField& a, const Vec& x);

/// G^i_alpha from the definitional formula applied to alpha^2.
Vec spray_alpha(const MetricField& a, const Vec& x, const Vec& y);

/// G^i_alpha = 1/2 gamma^i_{jk} y^j y^k.
Vec spray_from_christoffel(const Christoffel& g, const Vec& y);

CovariantPackage covariant_package(const MetricField& a, const OneFormField& b, const Vec& x);

/// alpha^2(x, y) = a_ij(x) y^i y^j as a two-argument field.
ad::TwoArgField norm_squared_field(const MetricField& a);
/// alpha(x, y).
ad::TwoArgField norm_field(const MetricField& a);

/// a_ij y^i y^j over jets; `a` row-major n*n.
ad::Jet2 quadratic_form(ad::JetSpan a, ad::JetSpan y);
/// b^T a^{-1} b over jets via an LDL^T elimination (a symmetric positive definite).
ad::Jet2 inverse_quadratic_form(ad::JetSpan a, ad::JetSpan b);

/// |b|^2_alpha = a^{ij} b_i b_j as a scalar field.
ad::ScalarField norm_squared_of(const MetricField& a, const OneFormField& b);

MetricField euclidean(int n);
/// a_ij = exp(2 <sigma, x>) delta_ij.
MetricField conformal_exp(const Vec& sigma);
/// a_ij = exp(2 f(x)) delta_ij for an arbitrary scalar field f.
MetricField conformal(const ad::ScalarField& f, std::string label);

OneFormField constant_form(const Vec& b);
/// b_i = b0_i + J_ij x^j.
OneFormField affine_form(const Vec& b0, const Mat& jac);

}  // namespace finslab::riemann
