#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace sou {

struct SolverConfig {
  double tol = 1e-8;            // convergence threshold on parameter change
  int max_iters = 5000;         // sweep cap
  double newton_tol = 1e-10;    // residual threshold for 1-D solves
  int newton_max = 100;         // per-solve iteration cap
  double shape_floor = 1.001;   // lower bound for Inverse-Gamma shapes
  double monotonicity_slack = 1e-6;  // allowed per-sweep objective increase
};

struct bracketing_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct nonconvergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct divergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Safeguarded 1-D root solve on a bracket with sign change: Newton steps
// when a derivative is supplied (bisection fallback when a step leaves the
// bracket), secant/bisection otherwise. The bracket shrinks after every
// evaluation. Returns x with |g(x)| <= cfg.newton_tol or bracket width
// <= 1e-14 * max(1, |x|).
inline double safeguarded_root(const std::function<double(double)>& g,
                               const std::function<double(double)>& g_prime,
                               double lo, double hi, const SolverConfig& cfg) {
  if (!(lo < hi)) throw bracketing_error("safeguarded_root: empty bracket");
  double flo = g(lo);
  double fhi = g(hi);
  if (std::abs(flo) <= cfg.newton_tol) return lo;
  if (std::abs(fhi) <= cfg.newton_tol) return hi;
  if (flo * fhi > 0.0)
    throw bracketing_error("safeguarded_root: no sign change on bracket");

  double x = 0.5 * (lo + hi);
  double fx = g(x);
  double x_prev = lo;
  double f_prev = flo;
  for (int it = 0; it < cfg.newton_max; ++it) {
    if (std::abs(fx) <= cfg.newton_tol) return x;
    // maintain the sign-change bracket
    if (flo * fx <= 0.0) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
    const double width = hi - lo;
    if (width <= 1e-14 * std::max(1.0, std::abs(lo))) return 0.5 * (lo + hi);

    double x_next;
    if (g_prime) {
      const double d = g_prime(x);
      x_next = (d != 0.0) ? x - fx / d : lo;
    } else {
      const double denom = fx - f_prev;
      x_next = (denom != 0.0) ? x - fx * (x - x_prev) / denom : lo;
    }
    if (!(x_next > lo) || !(x_next < hi) || !std::isfinite(x_next)) {
      x_next = 0.5 * (lo + hi);  // bisect
    }
    x_prev = x;
    f_prev = fx;
    x = x_next;
    fx = g(x);
  }
  if (std::abs(fx) <= cfg.newton_tol) return x;
  throw nonconvergence_error("safeguarded_root: iteration cap, residual " +
                             std::to_string(fx));
}

inline double safeguarded_root(const std::function<double(double)>& g,
                               double lo, double hi, const SolverConfig& cfg) {
  return safeguarded_root(g, nullptr, lo, hi, cfg);
}

}  // namespace sou
