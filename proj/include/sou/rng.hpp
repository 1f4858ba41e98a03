#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace sou {

// Deterministic pseudo-random generator with hand-rolled distributions.
// std:: distributions are implementation-defined; these keep benchmark CSV
// output byte-identical for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { seed_state(seed); }

  std::uint64_t next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // (0, 1), never exactly 0 or 1
  double uniform() {
    const double u = (next_u64() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double exponential(double rate) {
    return -std::log(uniform()) / rate;
  }

  // Marsaglia-Tsang for shape >= 1, boost trick below 1.
  double gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
      throw std::domain_error("gamma: shape and rate must be positive");
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
  }

  // 1/Gamma(shape, rate) ~ InvGamma(shape, rate)
  double inv_gamma(double shape, double rate) {
    return rate / gamma(shape, 1.0);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Student t with dof degrees of freedom: N / sqrt(chi2/dof)
  double student_t(double dof) {
    const double z = normal();
    const double chi2 = 2.0 * gamma(dof / 2.0, 1.0);
    return z / std::sqrt(chi2 / dof);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  void seed_state(std::uint64_t seed) {
    // splitmix64 expansion
    for (auto& s : s_) {
      seed += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = seed;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      s = z ^ (z >> 31);
    }
  }

  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sou
