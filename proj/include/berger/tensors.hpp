#pragma once

// Coefficient tensors over the standard basis of m, and the structure
// constants of the reductive pair read off the matrix model.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "berger/algebra.hpp"

namespace berger {

/// Real bilinear map m x m -> m. Entry (i, j, k) is the e_k coefficient of alpha(e_i, e_j).
class Bilin {
 public:
  explicit Bilin(int n) : n_(n), d_(m_dim(n)), c_(Eigen::VectorXd::Zero(d_ * d_ * d_)) { detail::require_n(n); }

  Bilin(int n, Eigen::VectorXd coeffs) : n_(n), d_(m_dim(n)), c_(std::move(coeffs)) {
    detail::require_n(n);
    if (c_.size() != d_ * d_ * d_) throw std::invalid_argument("Bilin: coefficient vector has wrong length");
    if (!c_.allFinite()) throw std::invalid_argument("Bilin: non-finite coefficient");
  }

  /// Tabulates f on pairs of standard basis vectors.
  static Bilin tabulate(int n, const std::function<MVec(const MVec&, const MVec&)>& f) {
    Bilin out(n);
    const auto basis = standard_basis(n);
    const int d = out.d_;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const Eigen::VectorXd v = f(basis[i], basis[j]).coords();
        for (int k = 0; k < d; ++k) out(i, j, k) = v[k];
      }
    }
    return out;
  }

  int n() const { return n_; }
  int dim() const { return d_; }

  double& operator()(int i, int j, int k) { return c_[(i * d_ + j) * d_ + k]; }
  double operator()(int i, int j, int k) const { return c_[(i * d_ + j) * d_ + k]; }

  const Eigen::VectorXd& coeffs() const { return c_; }

  /// alpha(e_i, .) as a d x d matrix acting on coordinates.
  Eigen::MatrixXd left_map(int i) const {
    Eigen::MatrixXd m(d_, d_);
    for (int j = 0; j < d_; ++j)
      for (int k = 0; k < d_; ++k) m(k, j) = (*this)(i, j, k);
    return m;
  }

  Eigen::VectorXd apply_coords(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d_);
    for (int i = 0; i < d_; ++i) {
      if (x[i] == 0.0) continue;
      for (int j = 0; j < d_; ++j) {
        const double w = x[i] * y[j];
        if (w == 0.0) continue;
        for (int k = 0; k < d_; ++k) out[k] += w * (*this)(i, j, k);
      }
    }
    return out;
  }

  double max_abs() const { return c_.size() == 0 ? 0.0 : c_.cwiseAbs().maxCoeff(); }

  friend Bilin operator+(const Bilin& a, const Bilin& b) {
    detail::require_same_n(a.n_, b.n_, "Bilin +");
    return Bilin(a.n_, a.c_ + b.c_);
  }
  friend Bilin operator-(const Bilin& a, const Bilin& b) {
    detail::require_same_n(a.n_, b.n_, "Bilin -");
    return Bilin(a.n_, a.c_ - b.c_);
  }
  friend Bilin operator*(double s, const Bilin& a) { return Bilin(a.n_, s * a.c_); }

 private:
  int n_;
  int d_;
  Eigen::VectorXd c_;
};

/// alpha(X, Y) for MVec arguments.
inline MVec apply(const Bilin& alpha, const MVec& x, const MVec& y) {
  detail::require_same_n(alpha.n(), x.n(), "apply");
  detail::require_same_n(alpha.n(), y.n(), "apply");
  return MVec::from_coords(alpha.n(), alpha.apply_coords(x.coords(), y.coords()));
}

/// Entry (i, j, k, l) is the e_l coefficient of R(e_i, e_j, e_k).
class CurvTensor {
 public:
  explicit CurvTensor(int n) : n_(n), d_(m_dim(n)), c_(Eigen::VectorXd::Zero(d_ * d_ * d_ * d_)) {}

  static CurvTensor tabulate(int n, const std::function<MVec(const MVec&, const MVec&, const MVec&)>& f) {
    CurvTensor out(n);
    const auto basis = standard_basis(n);
    const int d = out.d_;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          const Eigen::VectorXd v = f(basis[i], basis[j], basis[k]).coords();
          for (int l = 0; l < d; ++l) out(i, j, k, l) = v[l];
        }
    return out;
  }

  int n() const { return n_; }
  int dim() const { return d_; }

  double& operator()(int i, int j, int k, int l) { return c_[((i * d_ + j) * d_ + k) * d_ + l]; }
  double operator()(int i, int j, int k, int l) const { return c_[((i * d_ + j) * d_ + k) * d_ + l]; }

  const Eigen::VectorXd& coeffs() const { return c_; }

  /// Frobenius norm of the coefficient array.
  double norm() const { return c_.norm(); }

  /// Largest |R(i,j,.,.) + R(j,i,.,.)|.
  double antisymmetry_defect() const {
    double worst = 0.0;
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j)
        for (int k = 0; k < d_; ++k)
          for (int l = 0; l < d_; ++l) worst = std::max(worst, std::abs((*this)(i, j, k, l) + (*this)(j, i, k, l)));
    return worst;
  }

  Eigen::VectorXd apply_coords(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d_);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) {
        const double w = x[i] * y[j];
        if (w == 0.0) continue;
        for (int k = 0; k < d_; ++k) {
          if (z[k] == 0.0) continue;
          for (int l = 0; l < d_; ++l) out[l] += w * z[k] * (*this)(i, j, k, l);
        }
      }
    return out;
  }

  friend CurvTensor operator-(const CurvTensor& a, const CurvTensor& b) {
    detail::require_same_n(a.n_, b.n_, "CurvTensor -");
    CurvTensor out(a.n_);
    out.c_ = a.c_ - b.c_;
    return out;
  }

 private:
  int n_;
  int d_;
  Eigen::VectorXd c_;
};

/// Rank-2 tensor (Ricci, S, Gram) in standard coordinates.
struct Rank2Tensor {
  int n;
  Eigen::MatrixXd coeffs;

  double operator()(int i, int j) const { return coeffs(i, j); }

  static Rank2Tensor tabulate(int n, const std::function<double(const MVec&, const MVec&)>& f) {
    const auto basis = standard_basis(n);
    const int d = m_dim(n);
    Rank2Tensor out{n, Eigen::MatrixXd::Zero(d, d)};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out.coeffs(i, j) = f(basis[i], basis[j]);
    return out;
  }
};

/// Brackets of standard basis vectors of m: the m-part as a Bilin and, for
/// each pair (i, j), the matrix of Z -> [[e_i, e_j]_h, Z].
struct Structure {
  int n;
  Bilin bracket_m;
  std::vector<Eigen::MatrixXd> h_action;  // index i * d + j

  const Eigen::MatrixXd& h_ad(int i, int j) const { return h_action[i * m_dim(n) + j]; }
};

inline Structure compute_structure(int n) {
  detail::require_n(n);
  const int d = m_dim(n);
  const auto basis = standard_basis(n);
  Structure s{n, Bilin(n), std::vector<Eigen::MatrixXd>(d * d)};
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const HMPair br = bracket_mm(basis[i], basis[j]);
      const Eigen::VectorXd m = br.m.coords();
      for (int k = 0; k < d; ++k) s.bracket_m(i, j, k) = m[k];
      s.h_action[i * d + j] = ad_matrix(br.h);
    }
  }
  return s;
}

/// Cached, immutable structure constants for n.
inline const Structure& structure_for(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const Structure>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<const Structure>(compute_structure(n))).first;
  return *it->second;
}

}  // namespace berger
