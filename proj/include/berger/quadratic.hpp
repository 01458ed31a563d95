#pragma once

// Vector-valued maps that are exactly quadratic in a few parameters, fitted
// from point evaluations, and a damped Gauss-Newton solver for their zeros.

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace berger {

/// r(c) = r0 + L c + sum_{i <= j} Q_ij c_i c_j
class QuadraticMap {
 public:
  using Fn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  /// Exact for quadratic f: uses f(0), f(+-e_i) and f(e_i + e_j).
  static QuadraticMap fit(const Fn& f, int k) {
    if (k < 0) throw std::invalid_argument("QuadraticMap: negative parameter count");
    QuadraticMap q;
    q.k_ = k;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(k);
    q.r0_ = f(zero);
    const Eigen::Index m = q.r0_.size();
    q.lin_ = Eigen::MatrixXd::Zero(m, k);
    q.quad_.assign(static_cast<std::size_t>(k * k), Eigen::VectorXd::Zero(m));
    std::vector<Eigen::VectorXd> plus(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXd e = zero;
      e[i] = 1.0;
      plus[i] = f(e);
      const Eigen::VectorXd minus = f(-e);
      q.lin_.col(i) = 0.5 * (plus[i] - minus);
      q.quad_[i * k + i] = 0.5 * (plus[i] + minus) - q.r0_;
    }
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        Eigen::VectorXd e = zero;
        e[i] = 1.0;
        e[j] = 1.0;
        q.quad_[i * k + j] = f(e) - plus[i] - plus[j] + q.r0_;
      }
    return q;
  }

  int params() const { return k_; }

  /// Largest coefficient magnitude; sets the rounding floor of evaluations.
  double scale() const {
    double m = r0_.cwiseAbs().maxCoeff();
    if (lin_.size()) m = std::max(m, lin_.cwiseAbs().maxCoeff());
    for (const auto& v : quad_) m = std::max(m, v.cwiseAbs().maxCoeff());
    return m;
  }
  Eigen::Index size() const { return r0_.size(); }

  Eigen::VectorXd operator()(const Eigen::VectorXd& c) const {
    Eigen::VectorXd r = r0_ + lin_ * c;
    for (int i = 0; i < k_; ++i)
      for (int j = i; j < k_; ++j) r += (c[i] * c[j]) * quad_[i * k_ + j];
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& c) const {
    Eigen::MatrixXd jac = lin_;
    for (int i = 0; i < k_; ++i)
      for (int j = i; j < k_; ++j) {
        const Eigen::VectorXd& qv = quad_[i * k_ + j];
        jac.col(i) += c[j] * qv;
        jac.col(j) += c[i] * qv;
      }
    return jac;
  }

 private:
  int k_ = 0;
  Eigen::VectorXd r0_;
  Eigen::MatrixXd lin_;
  std::vector<Eigen::VectorXd> quad_;  // index i * k + j, i <= j
};

struct GaussNewtonResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  int iterations = 0;
};

/// Pseudo-inverse Gauss-Newton steps, halved until the residual norm drops.
/// Runs until no step helps or the residual falls below floor (by default a
/// few hundred ulps of the model's coefficient scale).
inline GaussNewtonResult gauss_newton(const QuadraticMap& q, Eigen::VectorXd x, int max_iter = 200,
                                      double damping = 0.5, double floor = -1.0) {
  if (floor < 0.0) floor = 256.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, q.scale());
  double norm = q(x).norm();
  int it = 0;
  for (; it < max_iter && norm > floor; ++it) {
    const Eigen::VectorXd r = q(x);
    const Eigen::MatrixXd jac = q.jacobian(x);
    // Minimum-norm step. The Jacobian is rank deficient on quadrics of
    // revolution, so rounding-level singular values must not count as rank.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Eigen::VectorXd step = -svd.solve(r);
    if (!step.allFinite() || step.norm() == 0.0) break;
    double lambda = 1.0;
    bool improved = false;
    while (lambda > 1e-12) {
      const Eigen::VectorXd trial = x + lambda * step;
      const double tn = q(trial).norm();
      if (tn < norm) {
        x = trial;
        norm = tn;
        improved = true;
        break;
      }
      lambda *= damping;
    }
    if (!improved) break;
  }
  return {x, norm, it};
}

}  // namespace berger
