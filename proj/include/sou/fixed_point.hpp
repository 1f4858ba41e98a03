#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <vector>

#include "sou/root_finding.hpp"

namespace sou {

// A coordinate-update model: one sweep applies every closed-form update and
// 1-D stationarity solve in the model's listed order.
class CoordinateModel {
 public:
  virtual ~CoordinateModel() = default;
  virtual void sweep(const SolverConfig& cfg) = 0;
  virtual double objective() const = 0;
  // Flat view of all variational parameters, used for the change metric.
  virtual Eigen::VectorXd parameters() const = 0;
  // Fixed-point / stationarity residuals, one per update equation.
  virtual Eigen::VectorXd update_residuals() const = 0;
  virtual std::string coordinate_name(int index) const {
    return "theta[" + std::to_string(index) + "]";
  }
};

struct ConvergenceReport {
  int iterations = 0;
  double final_max_change = std::numeric_limits<double>::infinity();
  std::vector<double> objective_trace;  // length iterations + 1
  bool converged = false;
  Eigen::VectorXd final_residuals;
};

// Coordinate fixed-point driver: sweeps until the largest scaled parameter
// change max_i |d_i| / (1 + |theta_i|) drops below cfg.tol or the sweep cap
// is hit. The scaling keeps the criterion meaningful for shape parameters
// that sit at O(1/gamma) when a block confidence is near zero.
inline ConvergenceReport run_fixed_point(CoordinateModel& model,
                                         const SolverConfig& cfg) {
  ConvergenceReport report;
  report.objective_trace.push_back(model.objective());
  Eigen::VectorXd prev = model.parameters();
  for (int t = 0; t < cfg.max_iters; ++t) {
    model.sweep(cfg);
    const Eigen::VectorXd cur = model.parameters();
    for (int i = 0; i < cur.size(); ++i) {
      if (!std::isfinite(cur[i]))
        throw divergence_error("non-finite parameter " +
                               model.coordinate_name(i) + " at sweep " +
                               std::to_string(t + 1));
    }
    const double obj = model.objective();
    if (!std::isfinite(obj))
      throw divergence_error("non-finite objective at sweep " +
                             std::to_string(t + 1));
    const double prev_obj = report.objective_trace.back();
    if (obj > prev_obj + cfg.monotonicity_slack)
      throw divergence_error("objective increased by " +
                             std::to_string(obj - prev_obj) + " at sweep " +
                             std::to_string(t + 1));
    report.objective_trace.push_back(obj);
    report.iterations = t + 1;

    double max_change = 0.0;
    for (int i = 0; i < cur.size(); ++i) {
      const double c = std::abs(cur[i] - prev[i]) / (1.0 + std::abs(cur[i]));
      if (c > max_change) max_change = c;
    }
    report.final_max_change = max_change;
    prev = cur;
    if (max_change < cfg.tol) {
      report.converged = true;
      break;
    }
  }
  report.final_residuals = model.update_residuals();
  return report;
}

}  // namespace sou
