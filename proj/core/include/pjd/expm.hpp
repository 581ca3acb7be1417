#pragma once

#include <Eigen/Core>

namespace pjd {

/// e^M by scaling and squaring with the degree-13 Pade approximant
/// (Higham 2005). Throws NonFinite for non-finite input.
Eigen::MatrixXd expm(const Eigen::MatrixXd& M);

}  // namespace pjd
