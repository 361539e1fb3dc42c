#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "finslab/alphabeta.hpp"

namespace finslab::classify {

/// Characterization conditions of singular (alpha, beta)-metrics, by the tag
/// of the equation they test.
///
/// Covariant conditions on beta (tau, k, k2 are fitted per point):
///   ygjcw, cr70, y0017   s_ij = (b_i s_j - b_j s_i) / b^2
///   y6    b_{i|j} = 2 tau {m b^2 a_ij - (m + 1 + k2 b^2) b_i b_j}
///   y06   b_{i|j} = 2 tau {m b^2 a_ij - (m + 1) b_i b_j}
///   y17   r_ij = 2 tau {m b^2 a_ij - (m + 1 + k b^2) b_i b_j}
///                - (m + 1 + 2 k b^2) / ((m - 1) b^2) (b_i s_j + b_j s_i)
///   cr69  r_ij = 2 tau {m b^2 a_ij - (m + 1) b_i b_j}
///                - (m + 1) / ((m - 1) b^2) (b_i s_j + b_j s_i)
///
/// Spray conditions on G_alpha (rho_i fitted, the rest taken from the
/// companion covariant condition, whose residual is folded in):
///   w001, cw1  G_a = rho y - r_00 / (2 b^2) b - (alpha^2 - c beta^2) / (2 b^2) s     [with ygjcw]
///   w1         G_a = rho y - tau (m alpha^2 - k2 beta^2) b                             [with y6]
///   w3         G_a = rho y + {2 k beta s_0 / ((m-1) b^2) - tau (m alpha^2 - k beta^2)} b
///                    - (m alpha^2 + k beta^2) / ((m-1) b^2) s                          [with y17, y0017]
///   cw3        G_a = rho y - m tau alpha^2 b                                           [with y06]
///   cw4        G_a = rho y - m tau alpha^2 b + m / ((1-m) b^2) alpha^2 s               [with cr70, cr69]
///
/// Here b, s on the right of the spray conditions are the raised b^i, s^i.
enum class ConditionTag { Ygjcw, Cr70, Y0017, Y6, Y06, Y17, Cr69, W001, Cw1, W1, W3, Cw3, Cw4 };

std::string to_string(ConditionTag t);
ConditionTag condition_from_string(const std::string& name);
const std::vector<ConditionTag>& all_conditions();

struct ConditionOptions {
  /// Directions used by spray-type fits; 0 selects 4n.
  std::size_t spray_probes = 0;
  std::uint64_t seed = 7;
};

struct ConditionResult {
  ConditionTag tag = ConditionTag::Ygjcw;
  /// Largest of the component residuals.
  double residual = 0.0;
  std::map<std::string, double> components;
  std::map<std::string, double> fitted;
};

/// Evaluates one condition at x for the exponent m and linear coefficient c
/// of M's phi family.
ConditionResult check_condition(const alphabeta::AlphaBetaMetric& M, ConditionTag which, const Vec& x,
                                const ConditionOptions& opts = {});

}  // namespace finslab::classify
