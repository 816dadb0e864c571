#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "parisi/cascade.hpp"

namespace parisi {

enum class ControlKind { optimal, zero, custom };

struct SimulateOptions {
  int n_paths = 100000;
  int n_steps = 1000;  // uniform in xi'-time; must be >= 200
  std::uint64_t seed = 1;
  ControlKind control = ControlKind::optimal;
  std::function<double(double s, double x)> custom_control;
  double x0 = 0.0;
  int threads = 0;                  // 0: hardware choice
  bool record_trajectories = false;  // per-path (t, X, u); small n_paths only
};

/// Euler-Maruyama batch of the optimally controlled state, stepped on a
/// xi'-uniform time grid refined to contain every level boundary exactly.
struct PathBatch {
  double gamma = 0;
  double x0 = 0;
  ControlKind control = ControlKind::optimal;
  std::vector<double> time;        // s_j, includes all q_l
  std::vector<double> checkpoints; // the q_l themselves

  Eigen::ArrayXd objective;        // log cosh(X(1)) - penalty, per path
  Eigen::ArrayXd x_final;
  Eigen::ArrayXXd u_at_checkpoints;      // checkpoints x paths
  Eigen::ArrayXXd ddpsi_at_checkpoints;  // d2/dx2 Psi at checkpoints
  Eigen::ArrayXd ddpsi_sq_integral;      // gamma int alpha zeta (ddpsi)^2 ds per path

  std::vector<std::vector<double>> trajectories_x;  // only when recorded
  std::vector<std::vector<double>> trajectories_u;
};

PathBatch simulate(const LevelSolution& sol, const SimulateOptions& opts);

struct MeanSe {
  double mean = 0;
  double se = 0;
};

/// Empirical mean and standard error of the control objective
/// log cosh(x + gamma int alpha zeta u ds + sqrt(gamma) int zeta^{1/2} dW)
/// - (gamma/2) int alpha zeta u^2 ds.
MeanSe variational_objective(const PathBatch& batch);

struct MartingaleCheckpoint {
  double q = 0;
  MeanSe u_mean;       // should vanish at x = 0
  MeanSe u_sq;         // should match E u(q_b)^2 from the cascade
  double eu2_cascade = 0;
  bool u_mean_ok = false;
  bool u_sq_ok = false;
};

struct MartingaleReport {
  std::vector<MartingaleCheckpoint> checkpoints;
  MeanSe ito_gap;  // E[ddpsi(1)-ddpsi(0) + gamma int alpha zeta ddpsi^2] ~ 0
  bool ito_ok = false;
  bool pass = false;
};

/// Verifies the martingale identities of the optimally controlled state
/// against the cascade's tilted expectations (3-sigma tests).
MartingaleReport martingale_check(const PathBatch& batch, const LevelSolution& sol);

/// Deterministic pairwise sum (fixed reduction order, any thread count).
double pairwise_sum(const double* data, std::size_t n);
MeanSe mean_se(const Eigen::ArrayXd& values);

}  // namespace parisi
