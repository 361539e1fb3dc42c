#include "finslab/lsq.hpp"

#include <cmath>
#include <functional>

#include "finslab/errors.hpp"

namespace finslab::classify {

std::vector<std::vector<int>> homogeneous_monomials(int n, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == n - 1) {
      e[static_cast<std::size_t>(var)] = left;
      out.push_back(e);
      return;
    }
    for (int p = left; p >= 0; --p) {
      e[static_cast<std::size_t>(var)] = p;
      rec(var + 1, left - p);
    }
  };
  if (n > 0) rec(0, degree);
  return out;
}

std::size_t cubic_monomial_count(int n) {
  const auto m = static_cast<std::size_t>(n);
  return (m + 2) * (m + 1) * m / 6;
}

HomogeneousFit::HomogeneousFit(std::span<const Vec> samples, int degree) {
  if (samples.empty()) throw ConfigurationError("homogeneous fit needs samples");
  const auto n = static_cast<int>(samples.front().size());
  const auto mons = homogeneous_monomials(n, degree);
  if (samples.size() < mons.size())
    throw ConfigurationError("underdetermined fit: " + std::to_string(samples.size()) +
                             " samples for " + std::to_string(mons.size()) + " monomials");
  design_.resize(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(mons.size()));
  for (std::size_t r = 0; r < samples.size(); ++r)
    for (std::size_t c = 0; c < mons.size(); ++c) {
      double v = 1.0;
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < mons[c][static_cast<std::size_t>(i)]; ++p) v *= samples[r](i);
      design_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  qr_.compute(design_);
  if (qr_.rank() < design_.cols())
    throw ConfigurationError("sample directions do not determine a homogeneous polynomial");
}

Vec HomogeneousFit::coefficients(const Vec& values) const { return qr_.solve(values); }

double HomogeneousFit::residual_norm(const Vec& values) const {
  return (values - design_ * coefficients(values)).norm();
}

AnsatzFit fit_tensor_ansatz(const Mat& T, std::span<const Mat> basis) {
  if (basis.empty()) throw ConfigurationError("empty ansatz basis");
  const Eigen::Index K = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index N = T.size();
  Mat A(N, K), An(N, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const Mat& B = basis[static_cast<std::size_t>(k)];
    if (B.rows() != T.rows() || B.cols() != T.cols())
      throw ConfigurationError("ansatz basis shape does not match tensor");
    A.col(k) = B.reshaped();
    const double nb = B.norm();
    if (nb == 0.0) throw ConfigurationError("ansatz basis contains a zero matrix");
    An.col(k) = A.col(k) / nb;
  }
  const double gram_det = (An.transpose() * An).determinant();
  if (!(gram_det > 1e-12)) throw ConfigurationError("ansatz basis is linearly dependent");

  AnsatzFit fit;
  Vec t = T.reshaped();
  Vec cn = An.colPivHouseholderQr().solve(t);
  fit.coefficients.resize(K);
  for (Eigen::Index k = 0; k < K; ++k) fit.coefficients(k) = cn(k) / basis[static_cast<std::size_t>(k)].norm();
  const double tn = t.norm();
  fit.residual = tn == 0.0 ? 0.0 : (t - An * cn).norm() / tn;
  return fit;
}

}  // namespace finslab::classify
