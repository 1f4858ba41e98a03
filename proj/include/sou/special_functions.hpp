#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sou {

// Scalar special functions used by the variational objectives. All take
// positive (or finite) arguments and throw std::domain_error otherwise.

namespace detail {

// Stirling series at x >= 10; callers shift up by recurrence first.
template <typename Scalar>
Scalar log_gamma_asymptotic(Scalar x) {
  const Scalar inv = Scalar(1) / x;
  const Scalar inv2 = inv * inv;
  // Bernoulli coefficients B_{2n} / (2n (2n-1) x^{2n-1})
  Scalar series = inv *
      (Scalar(1.0 / 12.0) +
       inv2 * (Scalar(-1.0 / 360.0) +
       inv2 * (Scalar(1.0 / 1260.0) +
       inv2 * (Scalar(-1.0 / 1680.0) +
       inv2 * (Scalar(1.0 / 1188.0) +
       inv2 * Scalar(-691.0 / 360360.0))))));
  const Scalar half_log_two_pi = Scalar(0.91893853320467274178032973640562);
  return (x - Scalar(0.5)) * std::log(x) - x + half_log_two_pi + series;
}

}  // namespace detail

template <typename Scalar = double>
Scalar log_gamma(Scalar x) {
  if (!(x > Scalar(0)) || !std::isfinite(x))
    throw std::domain_error("log_gamma: x must be positive and finite");
  Scalar shift = Scalar(0);
  while (x < Scalar(10)) {
    shift += std::log(x);
    x += Scalar(1);
  }
  return detail::log_gamma_asymptotic(x) - shift;
}

template <typename Scalar = double>
Scalar digamma(Scalar x) {
  if (!(x > Scalar(0)) || !std::isfinite(x))
    throw std::domain_error("digamma: x must be positive and finite");
  Scalar acc = Scalar(0);
  while (x < Scalar(10)) {
    acc -= Scalar(1) / x;
    x += Scalar(1);
  }
  const Scalar inv = Scalar(1) / x;
  const Scalar inv2 = inv * inv;
  Scalar series = inv2 *
      (Scalar(1.0 / 12.0) +
       inv2 * (Scalar(-1.0 / 120.0) +
       inv2 * (Scalar(1.0 / 252.0) +
       inv2 * (Scalar(-1.0 / 240.0) +
       inv2 * (Scalar(1.0 / 132.0) +
       inv2 * Scalar(-691.0 / 32760.0))))));
  return acc + std::log(x) - Scalar(0.5) * inv - series;
}

template <typename Scalar = double>
Scalar trigamma(Scalar x) {
  if (!(x > Scalar(0)) || !std::isfinite(x))
    throw std::domain_error("trigamma: x must be positive and finite");
  Scalar acc = Scalar(0);
  while (x < Scalar(10)) {
    acc += Scalar(1) / (x * x);
    x += Scalar(1);
  }
  const Scalar inv = Scalar(1) / x;
  const Scalar inv2 = inv * inv;
  // psi'(x) ~ 1/x + 1/(2x^2) + sum B_{2n} x^{-2n-1}
  Scalar series = inv *
      (Scalar(1) +
       inv * (Scalar(0.5) +
       inv * (Scalar(1.0 / 6.0) +
       inv2 * (Scalar(-1.0 / 30.0) +
       inv2 * (Scalar(1.0 / 42.0) +
       inv2 * (Scalar(-1.0 / 30.0) +
       inv2 * Scalar(5.0 / 66.0)))))));
  return acc + series;
}

template <typename Scalar = double>
Scalar sigmoid(Scalar x) {
  if (x >= Scalar(0)) {
    return Scalar(1) / (Scalar(1) + std::exp(-x));
  }
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

// log(sigmoid(x)), stable for large |x|.
template <typename Scalar = double>
Scalar log_sigmoid(Scalar x) {
  if (x >= Scalar(0)) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

// Jaakkola-Jordan coefficient lambda(xi) = (sigmoid(xi) - 1/2) / (2 xi),
// even in xi, with the series limit 1/8 - xi^2/96 near zero.
template <typename Scalar = double>
Scalar jj_lambda(Scalar xi) {
  if (!std::isfinite(xi)) throw std::domain_error("jj_lambda: xi must be finite");
  const Scalar axi = std::abs(xi);
  if (axi < Scalar(1e-6)) {
    return Scalar(0.125) - xi * xi / Scalar(96);
  }
  // (sigmoid(xi) - 1/2)/(2 xi) == tanh(xi/2)/(4 xi), free of cancellation
  return std::tanh(axi / Scalar(2)) / (Scalar(4) * axi);
}

}  // namespace sou
