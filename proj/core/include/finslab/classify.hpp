#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "finslab/alphabeta.hpp"
#include "finslab/probes.hpp"

namespace finslab::classify {

enum class Verdict { Yes, No, Inconclusive };

std::string to_string(Verdict v);

/// "yes" below tol, "no" above 10 * tol, "inconclusive" in between.
Verdict verdict_for(double residual, double tol);

/// Which spray evaluation feeds the Douglas test.
enum class SprayRoute {
  Closed,        // the (alpha, beta) assembly from the covariant package
  Definitional,  // AD on F^2 alone
};

/// For each pair i < j, D^{ij}(y) = G^i y^j - G^j y^i is fitted by a
/// homogeneous cubic over the probe set. Returns the largest
/// ||fit residual|| / ||S^i |y^j| + S^j |y^i|||  over pairs (0/0 -> 0), where
/// S bounds the terms of the closed spray assembly componentwise, so that a
/// spray which vanishes by cancellation does not turn rounding noise into
/// an O(1) ratio.
/// Throws ConfigurationError when the probe count is below the number of
/// cubic monomials.
double douglas_residual(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P,
                        SprayRoute route = SprayRoute::Closed);

/// Douglas test on the (alpha, beta) identity directly: the part of
/// D^{ij} beyond G_alpha,
///   alpha Q (s^i_0 y^j - s^j_0 y^i) + Psi (-2 alpha Q s_0 + r_00)(b^i y^j - b^j y^i),
/// must itself be a homogeneous cubic.
double douglas_residual_direct(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P);

/// RMS over probes and l of |F_{x^m y^l} y^m - F_{x^l}|, divided by the RMS
/// of |F_{x^l}| (0/0 -> 0).
double hamel_residual(const ad::TwoArgField& F, const ProbeSet& P);
/// Same numerator; the denominator uses |phi - s phi'| |alpha_{x^l}| +
/// |phi'| |beta_{x^l}|, the terms F_{x^l} is built from, so metrics that are
/// x-independent only after cancellation score near zero.
double hamel_residual(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P);

/// Projective flatness through the (alpha, beta) identity
///   (a_ml alpha^2 - y_m y_l) G^m_alpha + alpha^3 Q s_l0
///   + Psi alpha (-2 alpha Q s_0 + r_00)(alpha b_l - s y_l) = 0,
/// normalized by the RMS of the summed term magnitudes.
double hamel_residual_direct(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P);

/// P = F_{x^m} y^m / (2F).
double projective_factor(const ad::TwoArgField& F, const Vec& x, const Vec& y);
double projective_factor(const alphabeta::AlphaBetaMetric& M, const Vec& x, const Vec& y);

/// Scalar flag curvature K = (P^2 - y^m dP/dx^m) / F^2 of a projectively
/// flat metric. The Hamel identity is checked at the flag first; a relative
/// violation above `hamel_tol` raises PreconditionError.
double flag_curvature_projective(const ad::TwoArgField& F, const Vec& x, const Vec& y,
                                 double hamel_tol = 1e-8);
/// Same, with the flag check normalized as in hamel_residual(M, P).
double flag_curvature_projective(const alphabeta::AlphaBetaMetric& M, const Vec& x, const Vec& y,
                                 double hamel_tol = 1e-8);

struct ClassifyTolerances {
  double douglas = 1e-8;
  double hamel = 1e-8;
  double condition = 1e-8;
  double spray = 1e-6;
};

struct ClassificationReport {
  std::string metric_label;
  std::map<std::string, double> residuals;
  std::map<std::string, double> fitted;
  Verdict is_douglas = Verdict::Inconclusive;
  Verdict is_proj_flat = Verdict::Inconclusive;
  ClassifyTolerances tolerances;
  std::size_t probe_count = 0;
  std::uint64_t probe_seed = 0;
};

/// Douglas and Hamel tests (both routes each) with verdicts.
ClassificationReport classify_metric(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P,
                                     const ClassifyTolerances& tol = {});

/// Largest relative disagreement between the two spray routes over a probe
/// set, |G_closed - G_definitional| / max(|G_closed|, |G_definitional|, 1e-12).
double spray_route_discrepancy(const alphabeta::AlphaBetaMetric& M, const ProbeSet& P);

}  // namespace finslab::classify
