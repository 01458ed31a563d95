#pragma once

// Matrix model of su(n+1) = h + m for the sphere SU(n+1)/SU(n).
//
// m is identified with C^n + Ri through (z, a). Real coordinates on m use the
// ordered basis (e_1,0), (i e_1,0), ..., (e_n,0), (i e_n,0), (0,i), so a vector
// with coordinates x has z_k = x[2k] + i x[2k+1] and a = i x[2n].

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "berger/tolerances.hpp"

namespace berger {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Real dimension of m for the sphere S^{2n+1}.
constexpr int m_dim(int n) { return 2 * n + 1; }

namespace detail {

inline void require_n(int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1, got " + std::to_string(n));
}

inline void require_same_n(int a, int b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (n=" +
                                std::to_string(a) + " vs n=" + std::to_string(b) + ")");
  }
}

inline bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  }
  return true;
}

inline double scaled_tol(const CMatrix& m, double tol) {
  return tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

}  // namespace detail

/// Element (z, a) of m. The scalar a is purely imaginary.
class MVec {
 public:
  MVec(CVector z, cplx a) : z_(std::move(z)), a_(a) {
    if (z_.size() < 1) throw std::invalid_argument("MVec: z must have n >= 1 entries");
    if (a_.real() != 0.0) throw std::invalid_argument("MVec: a must be purely imaginary");
    if (!detail::all_finite(z_) || !std::isfinite(a_.imag())) {
      throw std::invalid_argument("MVec: non-finite entry");
    }
  }

  static MVec zero(int n) {
    detail::require_n(n);
    return MVec(CVector::Zero(n), cplx{0.0, 0.0});
  }

  /// Inverse of coords().
  static MVec from_coords(int n, const Eigen::VectorXd& x) {
    detail::require_n(n);
    if (x.size() != m_dim(n)) throw std::invalid_argument("MVec::from_coords: wrong length");
    CVector z(n);
    for (int k = 0; k < n; ++k) z[k] = cplx{x[2 * k], x[2 * k + 1]};
    return MVec(std::move(z), cplx{0.0, x[2 * n]});
  }

  int n() const { return static_cast<int>(z_.size()); }
  const CVector& z() const { return z_; }
  cplx a() const { return a_; }

  Eigen::VectorXd coords() const {
    const int n = this->n();
    Eigen::VectorXd x(m_dim(n));
    for (int k = 0; k < n; ++k) {
      x[2 * k] = z_[k].real();
      x[2 * k + 1] = z_[k].imag();
    }
    x[2 * n] = a_.imag();
    return x;
  }

  friend MVec operator+(const MVec& x, const MVec& y) {
    detail::require_same_n(x.n(), y.n(), "MVec +");
    return MVec(x.z_ + y.z_, x.a_ + y.a_);
  }
  friend MVec operator-(const MVec& x, const MVec& y) {
    detail::require_same_n(x.n(), y.n(), "MVec -");
    return MVec(x.z_ - y.z_, x.a_ - y.a_);
  }
  friend MVec operator*(double s, const MVec& x) { return MVec(s * x.z_, s * x.a_); }

 private:
  CVector z_;
  cplx a_;
};

/// Element B of h = su(n), sitting in the top-left block of su(n+1).
class HVec {
 public:
  explicit HVec(CMatrix b, const Tolerances& tol = {}) : b_(std::move(b)) {
    if (b_.rows() != b_.cols() || b_.rows() < 1) throw std::invalid_argument("HVec: B must be square");
    if (!detail::all_finite(b_)) throw std::invalid_argument("HVec: non-finite entry");
    const double t = detail::scaled_tol(b_, tol.exact);
    if ((b_ + b_.adjoint()).cwiseAbs().maxCoeff() > t) throw std::invalid_argument("HVec: B is not anti-Hermitian");
    if (std::abs(b_.trace()) > t) throw std::invalid_argument("HVec: B is not traceless");
  }

  static HVec zero(int n) { return HVec(CMatrix::Zero(n, n)); }

  int n() const { return static_cast<int>(b_.rows()); }
  const CMatrix& matrix() const { return b_; }

 private:
  CMatrix b_;
};

/// Element of g = su(n+1).
class AmbientMat {
 public:
  explicit AmbientMat(CMatrix a, const Tolerances& tol = {}) : a_(std::move(a)) {
    if (a_.rows() != a_.cols() || a_.rows() < 2) throw std::invalid_argument("AmbientMat: must be square, size >= 2");
    if (!detail::all_finite(a_)) throw std::invalid_argument("AmbientMat: non-finite entry");
    const double t = detail::scaled_tol(a_, tol.exact);
    if ((a_ + a_.adjoint()).cwiseAbs().maxCoeff() > t) throw std::invalid_argument("AmbientMat: not anti-Hermitian");
    if (std::abs(a_.trace()) > t) throw std::invalid_argument("AmbientMat: not traceless");
  }

  int n() const { return static_cast<int>(a_.rows()) - 1; }
  const CMatrix& matrix() const { return a_; }

  friend AmbientMat operator+(const AmbientMat& x, const AmbientMat& y) {
    detail::require_same_n(x.n(), y.n(), "AmbientMat +");
    return AmbientMat(x.a_ + y.a_);
  }

  /// [x, y] = xy - yx.
  friend AmbientMat commutator(const AmbientMat& x, const AmbientMat& y) {
    detail::require_same_n(x.n(), y.n(), "commutator");
    return AmbientMat(x.a_ * y.a_ - y.a_ * x.a_);
  }

 private:
  CMatrix a_;
};

enum class Signature { riemannian, lorentzian };

/// The Berger metric g_eps((z,a),(w,b)) = Re(z^t conj(w)) + eps*a*b.
class Metric {
 public:
  Metric(int n, double eps) : n_(n), eps_(eps) {
    detail::require_n(n);
    if (eps == 0.0 || !std::isfinite(eps)) throw std::invalid_argument("Metric: eps must be finite and nonzero");
  }

  int n() const { return n_; }
  double eps() const { return eps_; }
  int dim() const { return m_dim(n_); }

  /// Gram matrix in the standard basis: diag(1, ..., 1, -eps).
  Eigen::MatrixXd gram() const {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(dim(), dim());
    g(dim() - 1, dim() - 1) = -eps_;
    return g;
  }

  Signature signature() const {
    return gram()(dim() - 1, dim() - 1) > 0.0 ? Signature::riemannian : Signature::lorentzian;
  }

 private:
  int n_;
  double eps_;
};

struct HMPair {
  HVec h;
  MVec m;
};

/// Block matrix [[-(a/n) I, z], [-conj(z)^t, a]].
inline AmbientMat embed_m(const MVec& x) {
  const int n = x.n();
  CMatrix a = CMatrix::Zero(n + 1, n + 1);
  a.topLeftCorner(n, n) = (-x.a() / static_cast<double>(n)) * CMatrix::Identity(n, n);
  a.topRightCorner(n, 1) = x.z();
  a.bottomLeftCorner(1, n) = -x.z().adjoint();
  a(n, n) = x.a();
  return AmbientMat(std::move(a));
}

inline AmbientMat embed_h(const HVec& h) {
  const int n = h.n();
  CMatrix a = CMatrix::Zero(n + 1, n + 1);
  a.topLeftCorner(n, n) = h.matrix();
  return AmbientMat(std::move(a));
}

/// Splits A along g = h + m.
inline HMPair project(const AmbientMat& amb) {
  const CMatrix& a = amb.matrix();
  const int n = amb.n();
  const cplx am{0.0, a(n, n).imag()};
  CVector z = a.topRightCorner(n, 1);
  CMatrix b = a.topLeftCorner(n, n) + (am / static_cast<double>(n)) * CMatrix::Identity(n, n);
  return HMPair{HVec(std::move(b)), MVec(std::move(z), am)};
}

inline HMPair bracket_mm(const MVec& x, const MVec& y) {
  detail::require_same_n(x.n(), y.n(), "bracket_mm");
  return project(commutator(embed_m(x), embed_m(y)));
}

/// [h, X]; lands in m because the decomposition is reductive.
inline MVec bracket_hm(const HVec& h, const MVec& x) {
  detail::require_same_n(h.n(), x.n(), "bracket_hm");
  return project(commutator(embed_h(h), embed_m(x))).m;
}

inline double metric_eval(const Metric& g, const MVec& x, const MVec& y) {
  detail::require_same_n(x.n(), y.n(), "metric_eval");
  detail::require_same_n(g.n(), x.n(), "metric_eval");
  // a*b is a product of two imaginary numbers, hence real.
  return (x.z().transpose() * y.z().conjugate()).value().real() + g.eps() * (x.a() * y.a()).real();
}

inline std::vector<MVec> standard_basis(int n) {
  detail::require_n(n);
  std::vector<MVec> basis;
  basis.reserve(m_dim(n));
  for (int k = 0; k < n; ++k) {
    CVector e = CVector::Zero(n);
    e[k] = 1.0;
    basis.emplace_back(e, cplx{});
    basis.emplace_back(kI * e, cplx{});
  }
  basis.emplace_back(CVector::Zero(n), kI);
  return basis;
}

struct OrthonormalBasis {
  std::vector<MVec> vectors;
  std::vector<int> signs;  // g(f_j, f_j)
};

inline OrthonormalBasis orthonormal_basis(const Metric& g) {
  OrthonormalBasis out{standard_basis(g.n()), {}};
  out.vectors.back() = (1.0 / std::sqrt(std::abs(g.eps()))) * out.vectors.back();
  out.signs.assign(out.vectors.size(), 1);
  out.signs.back() = g.eps() < 0 ? 1 : -1;
  return out;
}

/// Basis of su(n): real antisymmetric and imaginary symmetric off-diagonal
/// generators, then the diagonal ones i(E_kk - E_{k+1,k+1}).
inline std::vector<HVec> su_basis(int n) {
  detail::require_n(n);
  std::vector<HVec> basis;
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) {
      CMatrix x = CMatrix::Zero(n, n);
      x(r, c) = 1.0;
      x(c, r) = -1.0;
      basis.emplace_back(x);
      CMatrix y = CMatrix::Zero(n, n);
      y(r, c) = kI;
      y(c, r) = kI;
      basis.emplace_back(y);
    }
  }
  for (int k = 0; k + 1 < n; ++k) {
    CMatrix d = CMatrix::Zero(n, n);
    d(k, k) = kI;
    d(k + 1, k + 1) = -kI;
    basis.emplace_back(d);
  }
  return basis;
}

inline bool is_diagonal(const HVec& h) {
  const CMatrix& b = h.matrix();
  return (b - CMatrix(b.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
}

/// Real matrix of X -> [h, X] on m in standard coordinates.
inline Eigen::MatrixXd ad_matrix(const HVec& h) {
  const int n = h.n();
  const int d = m_dim(n);
  Eigen::MatrixXd m(d, d);
  const auto basis = standard_basis(n);
  for (int j = 0; j < d; ++j) m.col(j) = bracket_hm(h, basis[j]).coords();
  return m;
}

}  // namespace berger
