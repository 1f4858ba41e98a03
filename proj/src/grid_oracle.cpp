#include "sou/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sou/root_finding.hpp"

namespace sou {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long kMaxAtoms = 1000000;

// index decomposition: loss index = ((i1*n2 + i2)*n3 + i3)...
std::string describe_ancestor(const FiniteBlockProblem& p, int k, long anc) {
  std::ostringstream os;
  os << "(";
  std::vector<int> idx(k);
  for (int j = k - 1; j >= 0; --j) {
    idx[j] = static_cast<int>(anc % p.block_size(j));
    anc /= p.block_size(j);
  }
  for (int j = 0; j < k; ++j) {
    if (j) os << ", ";
    os << p.blocks[j][idx[j]];
  }
  os << ")";
  return os.str();
}

}  // namespace

long FiniteBlockProblem::ancestor_count(int k) const {
  long c = 1;
  for (int j = 0; j < k; ++j) c *= block_size(j);
  return c;
}

long FiniteBlockProblem::total_atoms() const {
  return ancestor_count(num_blocks());
}

void FiniteBlockProblem::validate() const {
  const int K = num_blocks();
  if (K == 0) throw std::invalid_argument("problem has no blocks");
  if (static_cast<int>(priors.size()) != K || static_cast<int>(gammas.size()) != K)
    throw std::invalid_argument("priors/gammas size mismatch with blocks");
  if (total_atoms() > kMaxAtoms)
    throw std::invalid_argument("grid exceeds the 10^6 atom cap");
  for (int k = 0; k < K; ++k) {
    if (block_size(k) == 0) throw std::invalid_argument("empty block grid");
    if (!(gammas[k] > 0.0))
      throw std::invalid_argument("gammas must be strictly positive");
    const Eigen::MatrixXd& pi = priors[k];
    if (pi.rows() != ancestor_count(k) || pi.cols() != block_size(k))
      throw std::invalid_argument("prior table shape mismatch at block " +
                                  std::to_string(k + 1));
    for (long r = 0; r < pi.rows(); ++r) {
      double row_sum = 0.0;
      for (int c = 0; c < pi.cols(); ++c) {
        if (pi(r, c) < 0.0)
          throw std::invalid_argument("negative prior entry");
        row_sum += pi(r, c);
      }
      if (std::abs(row_sum - 1.0) > 1e-12)
        throw std::invalid_argument("prior row does not sum to 1");
    }
  }
  if (loss.size() != total_atoms())
    throw std::invalid_argument("loss table size mismatch");
  for (long i = 0; i < loss.size(); ++i)
    if (std::isnan(loss[i])) throw std::invalid_argument("NaN loss entry");
}

void BlockwiseDistribution::validate(const FiniteBlockProblem& p) const {
  if (static_cast<int>(kernels.size()) != p.num_blocks())
    throw std::invalid_argument("kernel count mismatch");
  for (int k = 0; k < p.num_blocks(); ++k) {
    const Eigen::MatrixXd& q = kernels[k];
    if (q.rows() != p.ancestor_count(k) || q.cols() != p.block_size(k))
      throw std::invalid_argument("kernel shape mismatch at block " +
                                  std::to_string(k + 1));
    for (long r = 0; r < q.rows(); ++r) {
      double row_sum = 0.0;
      for (int c = 0; c < q.cols(); ++c) {
        if (q(r, c) < 0.0) throw std::invalid_argument("negative kernel entry");
        row_sum += q(r, c);
      }
      if (std::abs(row_sum - 1.0) > 1e-12)
        throw std::invalid_argument("kernel row does not sum to 1");
    }
  }
}

double BlockwiseDistribution::joint(const FiniteBlockProblem& p,
                                    const std::vector<int>& idx) const {
  double mass = 1.0;
  long anc = 0;
  for (int k = 0; k < p.num_blocks(); ++k) {
    mass *= kernels[k](anc, idx[k]);
    anc = anc * p.block_size(k) + idx[k];
  }
  return mass;
}

BlockwiseDistribution backward_recursion(const FiniteBlockProblem& problem) {
  problem.validate();
  const int K = problem.num_blocks();
  BlockwiseDistribution out;
  out.kernels.resize(K);
  out.values.resize(K);
  out.log_normalisers.resize(K);

  Eigen::VectorXd V = problem.loss;  // V_K over the full grid
  for (int k = K - 1; k >= 0; --k) {
    const long anc_count = problem.ancestor_count(k);
    const int nk = problem.block_size(k);
    const double gamma = problem.gammas[k];
    const Eigen::MatrixXd& pi = problem.priors[k];
    out.values[k] = V;
    Eigen::MatrixXd q(anc_count, nk);
    Eigen::VectorXd logZ(anc_count);
    Eigen::VectorXd V_next(anc_count);
    Eigen::VectorXd w(nk);
    for (long a = 0; a < anc_count; ++a) {
      double wmax = -kInf;
      for (int j = 0; j < nk; ++j) {
        const double lp = pi(a, j) > 0.0 ? std::log(pi(a, j)) : -kInf;
        const double v = V[a * nk + j];
        w[j] = (std::isfinite(v) && lp != -kInf) ? -v / gamma + lp : -kInf;
        wmax = std::max(wmax, w[j]);
      }
      if (wmax == -kInf)
        throw divergence_error("degenerate slice at block " +
                               std::to_string(k + 1) + ", ancestor atom " +
                               describe_ancestor(problem, k, a));
      double sum = 0.0;
      for (int j = 0; j < nk; ++j)
        sum += (w[j] == -kInf) ? 0.0 : std::exp(w[j] - wmax);
      const double lz = wmax + std::log(sum);
      logZ[a] = lz;
      for (int j = 0; j < nk; ++j)
        q(a, j) = (w[j] == -kInf) ? 0.0 : std::exp(w[j] - lz);
      V_next[a] = -gamma * lz;
    }
    out.kernels[k] = q;
    out.log_normalisers[k] = logZ;
    V = V_next;
  }
  return out;
}

namespace {

// prefix marginal weights of q over the first k blocks
Eigen::VectorXd prefix_weights(const FiniteBlockProblem& p,
                               const BlockwiseDistribution& q, int k) {
  Eigen::VectorXd w(1);
  w[0] = 1.0;
  for (int j = 0; j < k; ++j) {
    const long anc = p.ancestor_count(j);
    const int nj = p.block_size(j);
    Eigen::VectorXd next(anc * nj);
    for (long a = 0; a < anc; ++a)
      for (int i = 0; i < nj; ++i) next[a * nj + i] = w[a] * q.kernels[j](a, i);
    w.swap(next);
  }
  return w;
}

}  // namespace

ObjectiveBreakdown evaluate_objective_parts(const FiniteBlockProblem& problem,
                                            const BlockwiseDistribution& q) {
  problem.validate();
  q.validate(problem);
  const int K = problem.num_blocks();
  ObjectiveBreakdown parts;

  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd w = prefix_weights(problem, q, k);
    const Eigen::MatrixXd& qk = q.kernels[k];
    const Eigen::MatrixXd& pik = problem.priors[k];
    double kl = 0.0;
    for (long a = 0; a < w.size(); ++a) {
      if (w[a] == 0.0) continue;
      double row = 0.0;
      for (int j = 0; j < qk.cols(); ++j) {
        const double qv = qk(a, j);
        if (qv == 0.0) continue;
        if (pik(a, j) == 0.0) {
          parts.weighted_kl = kInf;
          return parts;
        }
        row += qv * std::log(qv / pik(a, j));
      }
      kl += w[a] * row;
    }
    parts.weighted_kl += problem.gammas[k] * kl;
  }

  const Eigen::VectorXd w_full = prefix_weights(problem, q, K);
  double eloss = 0.0;
  for (long i = 0; i < w_full.size(); ++i) {
    if (w_full[i] == 0.0) continue;
    if (!std::isfinite(problem.loss[i])) {
      parts.expected_loss = kInf;
      return parts;
    }
    eloss += w_full[i] * problem.loss[i];
  }
  parts.expected_loss = eloss;
  return parts;
}

double evaluate_objective(const FiniteBlockProblem& problem,
                          const BlockwiseDistribution& q) {
  return evaluate_objective_parts(problem, q).total();
}

namespace {

// M(q) = -E_q[log P] and H(q) = sum_k gamma_k E[entropy of q_k], with P the
// unnormalised aggregated target pi_1^g1 ... pi_K^gK exp(-L). The missing
// log-normaliser is constant across q, so differences of M - H are exact.
double m_minus_h(const FiniteBlockProblem& p, const BlockwiseDistribution& q) {
  const int K = p.num_blocks();
  double m = 0.0;
  const Eigen::VectorXd w_full = prefix_weights(p, q, K);
  for (long i = 0; i < w_full.size(); ++i) {
    if (w_full[i] == 0.0) continue;
    long rest = i;
    std::vector<int> idx(K);
    for (int k = K - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(rest % p.block_size(k));
      rest /= p.block_size(k);
    }
    double log_p = -p.loss[i];
    long anc = 0;
    for (int k = 0; k < K; ++k) {
      log_p += p.gammas[k] * std::log(p.priors[k](anc, idx[k]));
      anc = anc * p.block_size(k) + idx[k];
    }
    m -= w_full[i] * log_p;
  }
  double h = 0.0;
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd w = prefix_weights(p, q, k);
    double ent = 0.0;
    for (long a = 0; a < w.size(); ++a) {
      if (w[a] == 0.0) continue;
      double row = 0.0;
      for (int j = 0; j < p.block_size(k); ++j) {
        const double qv = q.kernels[k](a, j);
        if (qv > 0.0) row -= qv * std::log(qv);
      }
      ent += w[a] * row;
    }
    h += p.gammas[k] * ent;
  }
  return m - h;
}

}  // namespace

double decomposition_check(const FiniteBlockProblem& problem,
                           const BlockwiseDistribution& qA,
                           const BlockwiseDistribution& qB) {
  const double lhs = m_minus_h(problem, qA) - m_minus_h(problem, qB);
  const double rhs =
      evaluate_objective(problem, qA) - evaluate_objective(problem, qB);
  return std::abs(lhs - rhs);
}

std::vector<CollapsePoint> collapse_sweep(const FiniteBlockProblem& problem,
                                          const std::vector<double>& scales) {
  for (size_t i = 0; i + 1 < scales.size(); ++i)
    if (!(scales[i] > scales[i + 1]))
      throw std::invalid_argument("scales must be strictly decreasing");
  std::vector<CollapsePoint> out;
  for (double c : scales) {
    if (!(c > 0.0)) throw std::invalid_argument("scales must be positive");
    FiniteBlockProblem scaled = problem;
    for (double& g : scaled.gammas) g *= c;
    const BlockwiseDistribution q = backward_recursion(scaled);
    const ObjectiveBreakdown parts = evaluate_objective_parts(scaled, q);
    out.push_back({c, parts.expected_loss, parts.weighted_kl});
  }
  return out;
}

std::string FiniteBlockProblem::to_json() const {
  nlohmann::json j;
  j["blocks"] = blocks;
  for (const auto& pi : priors) {
    nlohmann::json rows = nlohmann::json::array();
    for (long r = 0; r < pi.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (long c = 0; c < pi.cols(); ++c) row.push_back(pi(r, c));
      rows.push_back(row);
    }
    j["priors"].push_back(rows);
  }
  nlohmann::json lv = nlohmann::json::array();
  for (long i = 0; i < loss.size(); ++i) {
    if (std::isfinite(loss[i]))
      lv.push_back(loss[i]);
    else
      lv.push_back(nullptr);  // null encodes +infinity
  }
  j["loss"] = lv;
  j["gammas"] = gammas;
  return j.dump(2);
}

FiniteBlockProblem FiniteBlockProblem::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  FiniteBlockProblem p;
  p.blocks = j.at("blocks").get<std::vector<std::vector<double>>>();
  for (const auto& rows : j.at("priors")) {
    const long r = rows.size();
    const long c = rows.empty() ? 0 : rows[0].size();
    Eigen::MatrixXd pi(r, c);
    for (long i = 0; i < r; ++i)
      for (long k = 0; k < c; ++k) pi(i, k) = rows[i][k].get<double>();
    p.priors.push_back(pi);
  }
  const auto& lv = j.at("loss");
  p.loss.resize(lv.size());
  for (size_t i = 0; i < lv.size(); ++i)
    p.loss[i] = lv[i].is_null() ? kInf : lv[i].get<double>();
  p.gammas = j.at("gammas").get<std::vector<double>>();
  p.validate();
  return p;
}

}  // namespace sou
