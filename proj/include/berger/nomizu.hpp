#pragma once

// Torsion, curvature and Ricci calculus of invariant connections, computed
// from the Nomizu map alpha and the structure constants of the matrix model:
//
//   T(X,Y)   = alpha(X,Y) - alpha(Y,X) - [X,Y]_m
//   R(X,Y)Z  = alpha(X,alpha(Y,Z)) - alpha(Y,alpha(X,Z)) - alpha([X,Y]_m,Z) - [[X,Y]_h,Z]

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "berger/algebra.hpp"
#include "berger/tensors.hpp"
#include "berger/tolerances.hpp"

namespace berger {

inline Bilin torsion(const Bilin& alpha) {
  const Structure& st = structure_for(alpha.n());
  const int d = alpha.dim();
  Bilin t(alpha.n());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) t(i, j, k) = alpha(i, j, k) - alpha(j, i, k) - st.bracket_m(i, j, k);
  return t;
}

inline CurvTensor curvature(const Bilin& alpha) {
  const Structure& st = structure_for(alpha.n());
  const int d = alpha.dim();
  std::vector<Eigen::MatrixXd> left(d);
  for (int i = 0; i < d; ++i) left[i] = alpha.left_map(i);

  CurvTensor r(alpha.n());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Eigen::MatrixXd e = left[i] * left[j] - left[j] * left[i] - st.h_ad(i, j);
      for (int m = 0; m < d; ++m) {
        const double c = st.bracket_m(i, j, m);
        if (c != 0.0) e -= c * left[m];
      }
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) r(i, j, k, l) = e(l, k);
    }
  }
  return r;
}

/// Which slot of R(., ., Z) the Ricci trace runs over.
enum class RicciConvention { trace_first_slot, trace_second_slot };

namespace detail {

inline Rank2Tensor ricci_with(const CurvTensor& r, const Metric& g, RicciConvention conv) {
  detail::require_same_n(r.n(), g.n(), "ricci");
  const int d = r.dim();
  const OrthonormalBasis ob = orthonormal_basis(g);
  const Eigen::MatrixXd gram = g.gram();
  // W(i, l) = sum_f sign_f f_i (g f)_l, so the trace is sum_{i,l} W(i,l) R(., ., ., .).
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t f = 0; f < ob.vectors.size(); ++f) {
    const Eigen::VectorXd fj = ob.vectors[f].coords();
    w += ob.signs[f] * fj * (gram * fj).transpose();
  }
  Rank2Tensor ric{g.n(), Eigen::MatrixXd::Zero(d, d)};
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      for (int i = 0; i < d; ++i)
        for (int l = 0; l < d; ++l) {
          if (w(i, l) == 0.0) continue;
          acc += w(i, l) * (conv == RicciConvention::trace_first_slot ? r(i, a, b, l) : r(a, i, b, l));
        }
      ric.coeffs(a, b) = acc;
    }
  return ric;
}

}  // namespace detail

/// Convention fixed once so the round Levi-Civita connection on S^5 has
/// Ric = 2n g. Throws if no candidate reproduces it.
inline RicciConvention calibrated_ricci_convention() {
  static const RicciConvention conv = [] {
    const int n = 2;
    const Metric round(n, -1.0);
    // Levi-Civita map of g_{-1}: alpha(X,Y) = (bz - aw/n, -i Im(conj(z)^t w)).
    const Bilin lc = Bilin::tabulate(n, [&](const MVec& x, const MVec& y) {
      const double eps = -1.0;
      const double nn = n;
      CVector zc = -eps * y.a() * x.z() - (eps + (nn + 1.0) / nn) * x.a() * y.z();
      const cplx inner = (x.z().adjoint() * y.z()).value();
      return MVec(zc, cplx{0.0, -inner.imag()});
    });
    const CurvTensor r = curvature(lc);
    const Eigen::MatrixXd target = 2.0 * n * round.gram();
    for (auto c : {RicciConvention::trace_first_slot, RicciConvention::trace_second_slot}) {
      if ((detail::ricci_with(r, round, c).coeffs - target).cwiseAbs().maxCoeff() < 1e-9) return c;
    }
    throw std::logic_error("Ricci convention calibration failed");
  }();
  return conv;
}

/// Ric(X, Y) = sum_j sign_j g(R(f_j, X, Y), f_j) over an orthonormal basis (calibrated slot).
inline Rank2Tensor ricci(const CurvTensor& r, const Metric& g) {
  return detail::ricci_with(r, g, calibrated_ricci_convention());
}

inline Rank2Tensor ricci(const CurvTensor& r, const Metric& g, RicciConvention conv) {
  return detail::ricci_with(r, g, conv);
}

/// Signed trace of a rank-2 tensor against g.
inline double scalar(const Rank2Tensor& ric, const Metric& g) {
  detail::require_same_n(ric.n, g.n(), "scalar");
  const OrthonormalBasis ob = orthonormal_basis(g);
  double s = 0.0;
  for (std::size_t f = 0; f < ob.vectors.size(); ++f) {
    const Eigen::VectorXd fj = ob.vectors[f].coords();
    s += ob.signs[f] * fj.dot(ric.coeffs * fj);
  }
  return s;
}

inline Rank2Tensor sym(const Rank2Tensor& t) { return {t.n, 0.5 * (t.coeffs + t.coeffs.transpose())}; }

/// omega(X,Y,Z) = g(T(X,Y), Z).
struct TorsionForm {
  int n;
  Bilin values;  // (i, j, k) -> omega(e_i, e_j, e_k)

  /// Largest violation of total antisymmetry.
  double skew_defect() const {
    const int d = values.dim();
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          worst = std::max(worst, std::abs(values(i, j, k) + values(j, i, k)));
          worst = std::max(worst, std::abs(values(i, j, k) + values(i, k, j)));
        }
    return worst;
  }

  bool is_skew(double tol) const { return skew_defect() <= tol; }
};

inline TorsionForm torsion_form(const Bilin& alpha, const Metric& g) {
  detail::require_same_n(alpha.n(), g.n(), "torsion_form");
  const Bilin t = torsion(alpha);
  const Eigen::MatrixXd gram = g.gram();
  const int d = alpha.dim();
  Bilin w(alpha.n());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int m = 0; m < d; ++m) s += t(i, j, m) * gram(m, k);
        w(i, j, k) = s;
      }
  return {alpha.n(), std::move(w)};
}

/// S(X,Y) = sum_j g(T(f_j,X), T(f_j,Y)) g(f_j,f_j) over the given orthonormal basis.
inline Rank2Tensor s_tensor(const Bilin& alpha, const Metric& g, const OrthonormalBasis& basis) {
  detail::require_same_n(alpha.n(), g.n(), "s_tensor");
  const Bilin t = torsion(alpha);
  const int d = alpha.dim();
  const Eigen::MatrixXd gram = g.gram();
  Rank2Tensor s{g.n(), Eigen::MatrixXd::Zero(d, d)};
  std::vector<Eigen::VectorXd> tf(static_cast<std::size_t>(d));
  for (std::size_t f = 0; f < basis.vectors.size(); ++f) {
    const Eigen::VectorXd fj = basis.vectors[f].coords();
    for (int a = 0; a < d; ++a) {
      Eigen::VectorXd ea = Eigen::VectorXd::Zero(d);
      ea[a] = 1.0;
      tf[a] = t.apply_coords(fj, ea);
    }
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) s.coeffs(a, b) += basis.signs[f] * tf[a].dot(gram * tf[b]);
  }
  return s;
}

inline Rank2Tensor s_tensor(const Bilin& alpha, const Metric& g) { return s_tensor(alpha, g, orthonormal_basis(g)); }

/// Largest |g(alpha(X,Y),Z) + g(Y,alpha(X,Z))| over basis triples.
inline double metric_defect(const Bilin& alpha, const Metric& g) {
  const int d = alpha.dim();
  const Eigen::MatrixXd gram = g.gram();
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    const Eigen::MatrixXd a = gram * alpha.left_map(i);
    worst = std::max(worst, (a + a.transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

/// Sym(Ric) - (scal / dim) Gram.
inline Eigen::MatrixXd einstein_residual(const Bilin& alpha, const Metric& g) {
  const Rank2Tensor ric = ricci(curvature(alpha), g);
  const double s = scalar(ric, g);
  return sym(ric).coeffs - (s / g.dim()) * g.gram();
}

/// Frobenius norm of einstein_residual.
inline double einstein_defect(const Bilin& alpha, const Metric& g) { return einstein_residual(alpha, g).norm(); }

}  // namespace berger
