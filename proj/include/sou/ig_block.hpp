#pragma once

#include <algorithm>
#include <cmath>

#include "sou/root_finding.hpp"
#include "sou/special_functions.hpp"

namespace sou {

// Shared coordinate updates for the Inverse-Gamma variational factors.
//
// Every local/global scale factor q(x) = InvGamma(a, b) with an Exp(lambda)
// prior enters the objective through the same two pieces:
//
//   (gamma_beta/2) * [ W * a/b + k * (log b - psi(a)) ]
//     + gamma_s * KL(InvGamma(a,b) || Exp(lambda)),
//
// where W collects the coefficient second moments weighted by the other
// expected precisions and k counts how many coefficients share the factor
// (k = 1 for a local scale, k = I or p for the global one). The noise factor
// q(sigma^2) = InvGamma(a, b) with an InvGamma(a_pi, b_pi) prior has the
// analogous form
//
//   (N/2) * (log b - psi(a)) + (C/2) * a/b + gamma_s * KL(IG || IG-prior).
//
// Both admit a closed-form rate update given the shape and a 1-D shape
// equation. Fits solve each (shape, rate) pair jointly through the profiled
// shape equation: the alternating form approaches the small-gamma optimum
// (shape ~ gamma_beta / (2 gamma_s)) only at O(1) per sweep, which never
// terminates when gamma_s ~ 1e-9.

struct ExpScaleBlock {
  double gamma_beta;  // confidence on the coefficient block
  double gamma_s;     // confidence on this scale block
  double lambda;      // exponential prior rate
  double k;           // multiplicity of the log b - psi(a) term
  double W;           // precision-weighted second moment coefficient

  // Explicit rate update given the shape: positive root of
  //   lambda*gamma_s/(a-1) b^2 - c b - (gamma_beta/2) W a = 0,
  //   c = gamma_s - k*gamma_beta/2.
  // For c <= 0 the textbook form subtracts two nearly equal numbers when
  // gamma_s ~ 0; the rationalised form below is algebraically identical.
  double rate_update(double a) const {
    const double c = gamma_s - 0.5 * k * gamma_beta;
    const double w = std::max(W, 1e-300);
    const double e = 2.0 * lambda * gamma_s * gamma_beta * w * a / (a - 1.0);
    const double root = std::sqrt(c * c + e);
    if (c > 0.0) {
      return (a - 1.0) * (c + root) / (2.0 * lambda * gamma_s);
    }
    return gamma_beta * w * a / (root - c);
  }

  // Stationarity equation for the shape given the rate (equals minus the
  // a-derivative of the objective, so roots are stationary points).
  double shape_residual(double a, double b) const {
    const double tg = trigamma(a);
    const double am1 = a - 1.0;
    return -0.5 * gamma_beta * (W / b - k * tg) -
           gamma_s * ((a + 1.0) * tg - 1.0 - lambda * b / (am1 * am1));
  }

  double profile_residual(double a) const {
    return shape_residual(a, rate_update(a));
  }

  // KL(InvGamma(a,b) || Exp(lambda)); requires a > 1.
  double kl(double a, double b) const {
    return a * std::log(b) - log_gamma(a) -
           (a + 1.0) * (std::log(b) - digamma(a)) - a - std::log(lambda) +
           lambda * b / (a - 1.0);
  }

  // Contribution to the objective including the coefficient cross terms.
  double objective_terms(double a, double b) const {
    const double cross =
        0.5 * gamma_beta * (W * a / b + k * (std::log(b) - digamma(a)));
    return cross + gamma_s * kl(a, b);
  }
};

struct InvGammaNoiseBlock {
  double N;        // effective count multiplying log b - psi(a)
  double C;        // effective sum of squares multiplying a/b
  double gamma_s;  // confidence on the noise block
  double a_pi;
  double b_pi;

  double rate_update(double a) const {
    return a * (C + 2.0 * gamma_s * b_pi) / (N + 2.0 * gamma_s * a_pi);
  }

  double shape_residual(double a, double b) const {
    const double tg = trigamma(a);
    return 0.5 * N * tg - 0.5 * C / b -
           gamma_s * (-tg * (a_pi - a) + b_pi / b - 1.0);
  }

  double profile_residual(double a) const {
    return shape_residual(a, rate_update(a));
  }

  double kl(double a, double b) const {
    return a * std::log(b) - a_pi * std::log(b_pi) + log_gamma(a_pi) -
           log_gamma(a) + (std::log(b) - digamma(a)) * (a_pi - a) +
           (a / b) * (b_pi - b);
  }

  double objective_terms(double a, double b) const {
    return 0.5 * N * (std::log(b) - digamma(a)) + 0.5 * C * a / b +
           gamma_s * kl(a, b);
  }
};

// Solve the profiled shape equation on [shape_floor, inf). The profile
// derivative is positive at an interior minimum's left and negative to its
// right (the residual is minus the profile gradient), so a non-positive
// residual at the floor means the minimum sits at or below it.
template <typename Block>
double solve_shape(const Block& block, const SolverConfig& cfg) {
  const double lo = cfg.shape_floor;
  const double f_lo = block.profile_residual(lo);
  if (f_lo <= 0.0) return lo;
  double hi = 64.0;
  double f_hi = block.profile_residual(hi);
  while (f_hi > 0.0 && hi < 1e12) {
    hi *= 8.0;
    f_hi = block.profile_residual(hi);
  }
  if (f_hi > 0.0)
    throw bracketing_error("solve_shape: no sign change up to 1e12");
  return safeguarded_root([&](double a) { return block.profile_residual(a); },
                          lo, hi, cfg);
}

// Joint (shape, rate) block update used inside fit sweeps.
template <typename Block>
void update_pair(const Block& block, double& a, double& b,
                 const SolverConfig& cfg) {
  a = std::max(solve_shape(block, cfg), cfg.shape_floor);
  b = block.rate_update(a);
}

}  // namespace sou
