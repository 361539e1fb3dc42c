#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "finslab/jet.hpp"

namespace finslab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace ad {

using JetSpan = std::span<const Jet2>;
using JetVec = std::vector<Jet2>;

/// Scalar field x -> f(x) on an n-dimensional chart.
struct ScalarField {
  int dim = 0;
  std::function<Jet2(JetSpan x)> eval;
};

/// Vector (or flattened tensor) field x -> (f_0(x), ..., f_{k-1}(x)).
struct VectorField {
  int dim = 0;
  int components = 0;
  std::function<JetVec(JetSpan x)> eval;
};

/// Field of two arguments, F(x, y), with x a point and y a tangent direction.
struct TwoArgField {
  int dim = 0;
  std::function<Jet2(JetSpan x, JetSpan y)> eval;
};

/// Lifts `x` to jet coordinates carrying `seeds` as derivative directions.
JetVec seed_point(const Vec& x, std::span<const Vec> seeds);

/// Lifts `x` to jet coordinates seeded along the coordinate axes, optionally
/// offset so the axes occupy slots [offset, offset + n) of `total` slots.
JetVec seed_axes(const Vec& x, std::size_t offset, std::size_t total);

/// Constant jets (no derivative information) for a plain point.
JetVec constant_point(const Vec& x);

/// Evaluates `f` at `x` with derivatives along `seeds` (at most kMaxSeeds).
/// Domain faults inside the evaluator are rethrown with the offending point.
Jet2 jet_eval(const ScalarField& f, const Vec& x, std::span<const Vec> seeds);
JetVec jet_eval(const VectorField& f, const Vec& x, std::span<const Vec> seeds);

/// Every first and second derivative of F(x, y) in one 2n-seed pass.
/// Matrix blocks are indexed [first variable][second variable], so
/// dxdy(m, l) = d^2 F / dx^m dy^l.
struct XYDerivatives {
  double value = 0.0;
  Vec dx, dy;
  Mat dxdx, dxdy, dydy;
};

XYDerivatives mixed_xy_derivatives(const TwoArgField& F, const Vec& x, const Vec& y);

/// Plain value of F(x, y).
double value_at(const TwoArgField& F, const Vec& x, const Vec& y);

}  // namespace ad
}  // namespace finslab
