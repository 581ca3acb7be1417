#pragma once

// Independent reference computations used by the tests. None of these call
// into the library beyond plain data types.

#include <Eigen/Core>
#include <cmath>
#include <functional>

namespace oracle {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Classical fourth order Runge-Kutta for y' = M y.
inline Eigen::VectorXd rk4_linear(const Eigen::MatrixXd& M, Eigen::VectorXd y, double T, int steps) {
  const double h = T / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = M * y;
    const Eigen::VectorXd k2 = M * (y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = M * (y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = M * (y + h * k3);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y;
}

// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace oracle
