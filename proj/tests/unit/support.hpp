#pragma once

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "sparse_ar/ar_model.hpp"

namespace sparse_ar::testing {

/// Coefficients with sum |phi_j| <= 0.9, which is sufficient for causality.
inline Eigen::VectorXd random_causal(std::mt19937_64& rng, std::size_t p) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd phi(static_cast<Eigen::Index>(p));
  for (auto& v : phi) v = u(rng);
  return phi * (0.9 * std::uniform_real_distribution<double>(0.2, 1.0)(rng) / phi.lpNorm<1>());
}

inline Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd up = x, down = x;
    up(i) += h;
    down(i) -= h;
    g(i) = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd central_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h) {
  Eigen::MatrixXd j(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd up = x, down = x;
    up(i) += h;
    down(i) -= h;
    j.col(i) = (f(up) - f(down)) / (2.0 * h);
  }
  return j;
}

inline double relative_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

}  // namespace sparse_ar::testing
