#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace sou {

// Closed-form tempered conjugate updates for exponential families and the
// normal-normal model; the analytic oracle the generic solver is checked
// against.

struct TemperedConjugateUpdate {
  double N0;               // prior pseudo-count, > 0
  Eigen::VectorXd T0;      // prior sufficient-statistic guess
  long n;                  // sample count, >= 0
  Eigen::VectorXd sum_T;   // summed sufficient statistics
  double gamma;            // confidence, > 0
};

struct TemperedConjugateResult {
  double N_n;
  Eigen::VectorXd T_n;
  double alpha_n;
};

inline TemperedConjugateResult tempered_conjugate_update(
    const TemperedConjugateUpdate& u) {
  if (!(u.N0 > 0.0) || !(u.gamma > 0.0) || u.n < 0)
    throw std::domain_error("tempered_conjugate_update: invalid inputs");
  TemperedConjugateResult r;
  r.N_n = u.N0 + static_cast<double>(u.n) / u.gamma;
  if (u.n == 0) {
    r.alpha_n = 1.0;
    r.T_n = u.T0;
    return r;
  }
  if (u.sum_T.size() != u.T0.size())
    throw std::domain_error("tempered_conjugate_update: dimension mismatch");
  r.alpha_n = u.gamma * u.N0 / (u.gamma * u.N0 + static_cast<double>(u.n));
  const Eigen::VectorXd T_bar = u.sum_T / static_cast<double>(u.n);
  r.T_n = r.alpha_n * u.T0 + (1.0 - r.alpha_n) * T_bar;
  return r;
}

struct NormalNormalProblem {
  double mu0;
  double sigma0_sq;  // > 0
  double sigma_sq;   // known noise variance, > 0
  double ybar;
  long n;            // >= 1
  double gamma_mu;   // > 0

  void validate() const {
    if (!(sigma0_sq > 0.0) || !(sigma_sq > 0.0) || !(gamma_mu > 0.0) || n < 1)
      throw std::domain_error("NormalNormalProblem: invalid fields");
  }
};

struct NormalNormalResult {
  double mu_q;
  double sigma_q_sq;
  double alpha_sou;
};

inline NormalNormalResult normal_normal_sou(const NormalNormalProblem& p) {
  p.validate();
  const double data_prec = static_cast<double>(p.n) / (p.gamma_mu * p.sigma_sq);
  const double prior_prec = 1.0 / p.sigma0_sq;
  NormalNormalResult r;
  r.sigma_q_sq = 1.0 / (data_prec + prior_prec);
  r.alpha_sou = prior_prec / (prior_prec + data_prec);
  r.mu_q = r.alpha_sou * p.mu0 + (1.0 - r.alpha_sou) * p.ybar;
  return r;
}

struct Figure1Row {
  std::string setting;  // "prior_scale" or "confidence"
  double param_value;
  double mu_q;
  double sigma_q_sq;
};

// Panel (a): vary sigma0 at gamma = 1; panel (b): vary gamma_mu at the fixed
// prior. Rows feed a CSV with header setting,param_value,mu_q,sigma_q_sq.
inline std::vector<Figure1Row> figure1_sweep(
    const NormalNormalProblem& base, const std::vector<double>& sigma0_grid,
    const std::vector<double>& gamma_grid) {
  std::vector<Figure1Row> rows;
  for (double s0 : sigma0_grid) {
    if (!(s0 > 0.0)) throw std::domain_error("figure1_sweep: sigma0 <= 0");
    NormalNormalProblem p = base;
    p.sigma0_sq = s0 * s0;
    p.gamma_mu = 1.0;
    const NormalNormalResult r = normal_normal_sou(p);
    rows.push_back({"prior_scale", s0, r.mu_q, r.sigma_q_sq});
  }
  for (double g : gamma_grid) {
    if (!(g > 0.0)) throw std::domain_error("figure1_sweep: gamma <= 0");
    NormalNormalProblem p = base;
    p.gamma_mu = g;
    const NormalNormalResult r = normal_normal_sou(p);
    rows.push_back({"confidence", g, r.mu_q, r.sigma_q_sq});
  }
  return rows;
}

}  // namespace sou
