#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace sou {

// Exact SoU posteriors on finite parameter grids. Blocks are ordered; the
// prior of block k is a conditional table with one row per combination of
// ancestor atoms (block 1 has a single row). The loss is tabulated over the
// full product grid, row-major with the last block fastest. +infinity loss
// entries are allowed and get zero weight.

struct FiniteBlockProblem {
  std::vector<std::vector<double>> blocks;  // atom values, block k has n_k
  std::vector<Eigen::MatrixXd> priors;      // priors[k]: (#ancestors, n_k)
  Eigen::VectorXd loss;                     // full product grid
  std::vector<double> gammas;               // one per block, > 0

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  int block_size(int k) const { return static_cast<int>(blocks[k].size()); }
  // number of ancestor combinations for block k (1 for k = 0)
  long ancestor_count(int k) const;
  long total_atoms() const;
  void validate() const;  // throws std::invalid_argument on violations

  std::string to_json() const;
  static FiniteBlockProblem from_json(const std::string& text);
};

struct BlockwiseDistribution {
  // kernels[k]: (#ancestors, n_k), every row sums to 1
  std::vector<Eigen::MatrixXd> kernels;
  // cached value tables V_k (over the first k blocks) and log-normalisers
  // from the backward recursion; empty for hand-built distributions
  std::vector<Eigen::VectorXd> values;
  std::vector<Eigen::VectorXd> log_normalisers;

  void validate(const FiniteBlockProblem& problem) const;
  // joint mass of a full atom index tuple
  double joint(const FiniteBlockProblem& problem,
               const std::vector<int>& idx) const;
};

struct ObjectiveBreakdown {
  double expected_loss = 0.0;
  double weighted_kl = 0.0;  // sum_k gamma_k KL_k
  double total() const { return expected_loss + weighted_kl; }
};

// Theorem-1 backward recursion; exact on the grid. Throws divergence_error
// naming the offending ancestor atom when a conditional slice has zero
// normaliser.
BlockwiseDistribution backward_recursion(const FiniteBlockProblem& problem);

// Unscaled objective E_q[L] + sum_k gamma_k E[KL_k]; +infinity when q puts
// mass on zero-prior atoms or infinite-loss atoms.
double evaluate_objective(const FiniteBlockProblem& problem,
                          const BlockwiseDistribution& q);
ObjectiveBreakdown evaluate_objective_parts(const FiniteBlockProblem& problem,
                                            const BlockwiseDistribution& q);

// | (M(qA)-H(qA)) - (M(qB)-H(qB)) - (J(qA)-J(qB)) | with M, H computed from
// the aggregated target P; the normaliser of P cancels in the difference.
double decomposition_check(const FiniteBlockProblem& problem,
                           const BlockwiseDistribution& qA,
                           const BlockwiseDistribution& qB);

struct CollapsePoint {
  double scale;
  double expected_loss;
  double weighted_kl;
};

// Re-solves the problem with gamma replaced by c * gamma for each scale.
std::vector<CollapsePoint> collapse_sweep(const FiniteBlockProblem& problem,
                                          const std::vector<double>& scales);

}  // namespace sou
