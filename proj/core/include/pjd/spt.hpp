#pragma once

#include <Eigen/Core>
#include <vector>

#include "pjd/triplet.hpp"

namespace pjd {

/// Volatility-stabilized market weights on the simplex with downward Type 2
/// jumps: lambda_i = q_i(x) / x_i, jump (y - e_i) x_i with y ~ mu_i.
struct SPTModel {
  int d = 3;
  double beta = 0.0;
  std::vector<std::vector<double>> q;  // q[i][j] = q_i(e_j) >= 0
  std::vector<MeasureRep> mu;          // atoms y in the simplex, y != e_i
};

/// alpha_ij = 1 off the diagonal.
Eigen::MatrixXd spt_alpha(int d);
/// B = (1+beta)/2 11^T - d(1+beta)/2 I.
Eigen::MatrixXd spt_drift(int d, double beta);

LevyTriplet spt_build(const SPTModel& model);

struct InteriorMargin {
  int k = 0, j = 0;
  double margin = 0.0;
};

struct InteriorReport {
  bool ok = true;
  std::vector<InteriorMargin> margins;
};

/// beta/2 - sum_{i != k} q_i(e_j) \int y_k mu_i + q_k(e_j) \int (1 + log y_k - y_k) mu_k
/// for all j != k; an undefined log-moment counts as -infinity.
InteriorReport spt_check_interior(const SPTModel& model);

}  // namespace pjd
