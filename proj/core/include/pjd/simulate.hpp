#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "pjd/triplet.hpp"

namespace pjd {

struct SimConfig {
  std::vector<double> x0;  // ambient coordinates
  double T = 1.0;
  double dt = 1e-3;
  int n_paths = 1000;
  std::uint64_t seed = 1;
  double max_jump_budget = 0.1;
  double boundary_tol = 1e-9;
  /// Substeps are shortened so that sqrt(a_ii h) <= dist_i / boundary_sigmas,
  /// dist_i being the distance of coordinate i to the boundary; 0 disables.
  double boundary_sigmas = 6.0;
  /// Shortest substep, as a fraction of dt.
  double min_substep = 1e-4;
  /// Store every save_every-th base step (the final time is always stored).
  int save_every = 1;
  /// Pairs (2m, 2m+1) share Gaussian increments with opposite signs.
  bool antithetic = false;
  bool record_jumps = false;
  /// 0 means all hardware threads, capped by PJD_THREADS.
  int threads = 0;
};

struct JumpEvent {
  int path = 0;
  double time = 0.0;
  std::vector<double> pre;
  std::vector<double> displacement;
};

struct PathSet {
  std::vector<double> times;
  int n_paths = 0;
  int coords = 1;
  bool antithetic = false;
  std::vector<double> states;  // [path][time][coord]
  std::vector<std::int64_t> jump_counts;
  std::vector<JumpEvent> jumps;  // only with record_jumps, ordered by path then time
  std::int64_t total_substeps = 0;
  std::int64_t substeps_over_bound = 0;  // pre-projection violation above 5 scale sqrt(dt)
  double max_violation = 0.0;

  std::span<const double> state(int path, std::size_t time_index) const {
    return {states.data() + (static_cast<std::size_t>(path) * times.size() + time_index) * static_cast<std::size_t>(coords),
            static_cast<std::size_t>(coords)};
  }
  std::size_t time_index(double t) const;
};

/// Euler scheme with uncompensated Poisson jumps: drift b - sum lambda \int gamma mu,
/// sqrt(a) Gaussian increments, jump counts Poisson(lambda dt mu(E)), adaptive
/// substeps keeping lambda dt mu(E) <= max_jump_budget and the diffusion
/// increments small next to the boundary, projection onto E.
/// Throws UnsupportedForSimulation, ExplodedIntensity, InvalidTriplet.
PathSet simulate(const LevyTriplet& triplet, const SimConfig& cfg);

/// Sample mean and standard error of p(X_t); pairs are averaged first for
/// antithetic path sets. Throws TimeNotOnGrid.
std::pair<double, double> empirical_moment(const PathSet& paths, const Polynomial& p, double t);

/// Symmetric PSD square root, negative eigenvalues clamped to zero. Throws
/// TooIndefinite when the smallest eigenvalue is below -max(reg, 1e-8 |A|).
Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& A, double reg = 0.0);

/// Workers to use: requested (0 = hardware) capped by PJD_THREADS.
int worker_count(int requested);

}  // namespace pjd
