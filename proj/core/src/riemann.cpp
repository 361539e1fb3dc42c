#include "finslab/riemann.hpp"

#include <cmath>

#include "finslab/errors.hpp"

namespace finslab::riemann {

using ad::Jet2;
using ad::JetSpan;
using ad::JetVec;

namespace {

Mat jets_to_matrix(const JetVec& comps, int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = comps[static_cast<std::size_t>(i * n + j)].value();
  return m;
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

MetricField::MetricField(int dim, std::string label, Evaluator components)
    : dim_(dim), label_(std::move(label)), components_(std::move(components)) {
  if (dim_ < 1) throw ConfigurationError("metric dimension must be positive");
}

JetVec MetricField::eval(JetSpan x) const {
  JetVec c = components_(x);
  const auto n = static_cast<std::size_t>(dim_);
  if (c.size() != n * n) throw ConfigurationError("metric evaluator returned wrong component count");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) c[i * n + j] = c[j * n + i];
  return c;
}

Mat MetricField::value(const Vec& x) const {
  if (x.size() != dim_) throw ConfigurationError("point dimension does not match metric dimension");
  JetVec c;
  try {
    c = eval(ad::constant_point(x));
  } catch (const DomainError& e) {
    throw e.at(to_std(x));
  }
  Mat m = jets_to_matrix(c, dim_);
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) throw GeometryError("metric '" + label_ + "' is not positive definite");
  return m;
}

OneFormField::OneFormField(int dim, std::string label, Evaluator components)
    : dim_(dim), label_(std::move(label)), components_(std::move(components)) {
  if (dim_ < 1) throw ConfigurationError("1-form dimension must be positive");
}

JetVec OneFormField::eval(JetSpan x) const {
  JetVec c = components_(x);
  if (c.size() != static_cast<std::size_t>(dim_))
    throw ConfigurationError("1-form evaluator returned wrong component count");
  return c;
}

Vec OneFormField::value(const Vec& x) const {
  if (x.size() != dim_) throw ConfigurationError("point dimension does not match 1-form dimension");
  JetVec c;
  try {
    c = eval(ad::constant_point(x));
  } catch (const DomainError& e) {
    throw e.at(to_std(x));
  }
  Vec b(dim_);
  for (int i = 0; i < dim_; ++i) b(i) = c[static_cast<std::size_t>(i)].value();
  return b;
}

Mat spd_inverse(const Mat& a) {
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) throw GeometryError("matrix is not positive definite");
  return llt.solve(Mat::Identity(a.rows(), a.cols()));
}

Christoffel christoffel(const MetricField& a, const Vec& x) {
  const int n = a.dim();
  if (x.size() != n) throw ConfigurationError("point dimension does not match metric dimension");
  JetVec comps;
  try {
    comps = a.eval(ad::seed_axes(x, 0, static_cast<std::size_t>(n)));
  } catch (const DomainError& e) {
    throw e.at(to_std(x));
  }
  const Mat A = jets_to_matrix(comps, n);
  const Mat Ainv = spd_inverse(A);
  // da(l, j, k) = d a_lj / dx^k
  auto da = [&](int l, int j, int k) {
    return comps[static_cast<std::size_t>(l * n + j)].grad(static_cast<std::size_t>(k));
  };
  Christoffel g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) acc += Ainv(i, l) * (da(l, k, j) + da(l, j, k) - da(j, k, l));
        g(i, j, k) = 0.5 * acc;
        g(i, k, j) = g(i, j, k);
      }
  return g;
}

Vec spray_from_christoffel(const Christoffel& g, const Vec& y) {
  const int n = g.dim();
  Vec G = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) G(i) += g(i, j, k) * y(j) * y(k);
  return 0.5 * G;
}

Vec spray_alpha(const MetricField& a, const Vec& x, const Vec& y) {
  const Mat Ainv = spd_inverse(a.value(x));
  const ad::XYDerivatives d = ad::mixed_xy_derivatives(norm_squared_field(a), x, y);
  return 0.25 * Ainv * (d.dxdy.transpose() * y - d.dx);
}

CovariantPackage covariant_package(const MetricField& a, const OneFormField& b, const Vec& x) {
  const int n = a.dim();
  if (b.dim() != n) throw ConfigurationError("metric and 1-form dimensions differ");
  const Christoffel gamma = christoffel(a, x);
  JetVec bj;
  try {
    bj = b.eval(ad::seed_axes(x, 0, static_cast<std::size_t>(n)));
  } catch (const DomainError& e) {
    throw e.at(to_std(x));
  }
  CovariantPackage p;
  p.a = a.value(x);
  p.a_inv = spd_inverse(p.a);
  p.b.resize(n);
  for (int i = 0; i < n; ++i) p.b(i) = bj[static_cast<std::size_t>(i)].value();
  p.b_up = p.a_inv * p.b;
  p.b2 = p.b.dot(p.b_up);

  p.nabla.resize(n, n);
  Mat magnitude(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = bj[static_cast<std::size_t>(i)].grad(static_cast<std::size_t>(j));
      double mag = std::abs(v);
      for (int k = 0; k < n; ++k) {
        v -= p.b(k) * gamma(k, i, j);
        mag += std::abs(p.b(k) * gamma(k, i, j));
      }
      p.nabla(i, j) = v;
      magnitude(i, j) = mag;
    }
  p.nabla_scale = magnitude.norm();
  p.r = 0.5 * (p.nabla + p.nabla.transpose());
  p.s = p.nabla - p.r;
  p.r_vec = p.r.transpose() * p.b_up;
  p.s_vec = p.s.transpose() * p.b_up;
  p.s_up = p.a_inv * p.s_vec;
  return p;
}

Jet2 quadratic_form(JetSpan a, JetSpan y) {
  const std::size_t n = y.size();
  Jet2 acc;
  for (std::size_t i = 0; i < n; ++i) {
    Jet2 row;
    for (std::size_t j = 0; j < n; ++j) row += a[i * n + j] * y[j];
    acc += y[i] * row;
  }
  return acc;
}

Jet2 inverse_quadratic_form(JetSpan a, JetSpan b) {
  const std::size_t n = b.size();
  std::vector<Jet2> L(n * n), D(n), z(n);
  for (std::size_t j = 0; j < n; ++j) {
    Jet2 d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= L[j * n + k] * L[j * n + k] * D[k];
    if (d.value() <= 0.0) throw GeometryError("matrix is not positive definite");
    D[j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      Jet2 v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= L[i * n + k] * L[j * n + k] * D[k];
      L[i * n + j] = v / d;
    }
  }
  Jet2 acc;
  for (std::size_t i = 0; i < n; ++i) {
    Jet2 v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= L[i * n + k] * z[k];
    z[i] = v;
    acc += v * v / D[i];
  }
  return acc;
}

ad::TwoArgField norm_squared_field(const MetricField& a) {
  return {a.dim(), [a](JetSpan x, JetSpan y) { return quadratic_form(a.eval(x), y); }};
}

ad::TwoArgField norm_field(const MetricField& a) {
  return {a.dim(), [a](JetSpan x, JetSpan y) { return ad::sqrt(quadratic_form(a.eval(x), y)); }};
}

ad::ScalarField norm_squared_of(const MetricField& a, const OneFormField& b) {
  return {a.dim(), [a, b](JetSpan x) { return inverse_quadratic_form(a.eval(x), b.eval(x)); }};
}

MetricField euclidean(int n) {
  return MetricField(n, "euclidean", [n](JetSpan) {
    JetVec c(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i * n + i)] = Jet2(1.0);
    return c;
  });
}

MetricField conformal(const ad::ScalarField& f, std::string label) {
  const int n = f.dim;
  return MetricField(n, std::move(label), [f, n](JetSpan x) {
    const Jet2 w = ad::exp(2.0 * f.eval(x));
    JetVec c(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i * n + i)] = w;
    return c;
  });
}

MetricField conformal_exp(const Vec& sigma) {
  const auto n = static_cast<int>(sigma.size());
  ad::ScalarField f{n, [sigma](JetSpan x) {
                      Jet2 acc;
                      for (std::size_t i = 0; i < x.size(); ++i)
                        acc += sigma(static_cast<Eigen::Index>(i)) * x[i];
                      return acc;
                    }};
  return conformal(f, "conformal-exp");
}

OneFormField constant_form(const Vec& b) {
  const auto n = static_cast<int>(b.size());
  return OneFormField(n, "constant", [b](JetSpan) {
    JetVec c;
    for (Eigen::Index i = 0; i < b.size(); ++i) c.emplace_back(b(i));
    return c;
  });
}

OneFormField affine_form(const Vec& b0, const Mat& jac) {
  const auto n = static_cast<int>(b0.size());
  if (jac.rows() != n || jac.cols() != n) throw ConfigurationError("affine 1-form Jacobian must be n x n");
  return OneFormField(n, "affine", [b0, jac, n](JetSpan x) {
    JetVec c;
    for (int i = 0; i < n; ++i) {
      Jet2 v(b0(i));
      for (int j = 0; j < n; ++j)
        if (jac(i, j) != 0.0) v += jac(i, j) * x[static_cast<std::size_t>(j)];
      c.push_back(v);
    }
    return c;
  });
}

}  // namespace finslab::riemann
