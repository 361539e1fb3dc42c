#pragma once

#include <span>
#include <vector>

#include "finslab/field.hpp"

namespace finslab::classify {

/// Exponent tuples of all homogeneous monomials of `degree` in n variables,
/// in lexicographic order.
std::vector<std::vector<int>> homogeneous_monomials(int n, int degree);

/// C(n + 2, 3): number of homogeneous cubic monomials in n variables.
std::size_t cubic_monomial_count(int n);

/// Least-squares fit of sampled values by a homogeneous polynomial.
/// Rows of the design matrix are the monomials evaluated at each sample.
class HomogeneousFit {
 public:
  HomogeneousFit(std::span<const Vec> samples, int degree);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(design_.rows()); }
  std::size_t monomials() const noexcept { return static_cast<std::size_t>(design_.cols()); }

  Vec coefficients(const Vec& values) const;
  /// Euclidean norm of the fit residual vector.
  double residual_norm(const Vec& values) const;

 private:
  Mat design_;
  Eigen::ColPivHouseholderQR<Mat> qr_;
};

struct AnsatzFit {
  Vec coefficients;
  /// ||T - sum c_k B_k||_F / ||T||_F, with 0/0 -> 0.
  double residual = 0.0;
};

/// Least squares over a span of symmetric matrices. Throws
/// ConfigurationError when the basis is (numerically) linearly dependent:
/// Gram determinant of the Frobenius-normalized basis <= 1e-12.
AnsatzFit fit_tensor_ansatz(const Mat& T, std::span<const Mat> basis);

}  // namespace finslab::classify
