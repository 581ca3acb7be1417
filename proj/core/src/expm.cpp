#include "pjd/expm.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "pjd/error.hpp"

namespace pjd {

namespace {

constexpr std::array<double, 14> kB13 = {64764752532480000.0,
                                         32382376266240000.0,
                                         7771770303897600.0,
                                         1187353796428800.0,
                                         129060195264000.0,
                                         10559470521600.0,
                                         670442572800.0,
                                         33522128640.0,
                                         1323241920.0,
                                         40840800.0,
                                         960960.0,
                                         16380.0,
                                         182.0,
                                         1.0};

// theta_m for m = 3, 5, 7, 9, 13
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                                          2.097847961257068e0, 5.371920351148152e0};

Eigen::MatrixXd pade_low(const Eigen::MatrixXd& A, int m) {
  static const double b3[] = {120, 60, 12, 1};
  static const double b5[] = {30240, 15120, 3360, 420, 30, 1};
  static const double b7[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
  static const double b9[] = {17643225600, 8821612800, 2075673600, 302702400, 30270240, 2162160, 110880, 3960, 90, 1};
  const double* b = m == 3 ? b3 : m == 5 ? b5 : m == 7 ? b7 : b9;
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd A2 = A * A;
  Eigen::MatrixXd Apow = I;
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n, n), V = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k <= m; k += 2) {
    V += b[k] * Apow;
    U += b[k + 1] * Apow;
    Apow = Apow * A2;
  }
  U = A * U;
  return (V - U).partialPivLu().solve(V + U);
}

Eigen::MatrixXd pade13(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd A2 = A * A, A4 = A2 * A2, A6 = A4 * A2;
  const auto& b = kB13;
  Eigen::MatrixXd U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  Eigen::MatrixXd V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  return (V - U).partialPivLu().solve(V + U);
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::OutOfRange, "expm needs a square matrix");
  if (!M.allFinite()) throw Error(ErrorCode::NonFinite, "expm input has non-finite entries");
  const Eigen::Index n = M.rows();
  if (n == 0) return M;
  const double norm1 = M.cwiseAbs().colwise().sum().maxCoeff();
  const int orders[] = {3, 5, 7, 9};
  for (int i = 0; i < 4; ++i)
    if (norm1 <= kTheta[static_cast<std::size_t>(i)]) return pade_low(M, orders[i]);
  int s = 0;
  if (norm1 > kTheta[4]) s = static_cast<int>(std::ceil(std::log2(norm1 / kTheta[4])));
  Eigen::MatrixXd R = pade13(M / std::ldexp(1.0, s));
  for (int k = 0; k < s; ++k) R = R * R;
  if (!R.allFinite()) throw Error(ErrorCode::NonFinite, "expm overflowed");
  return R;
}

}  // namespace pjd
