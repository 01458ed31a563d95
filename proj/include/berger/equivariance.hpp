#pragma once

// Spaces of h-invariant bilinear maps m x m -> m, computed as nullspaces of
// stacked linear constraints on the d^3 coefficients of a Bilin.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "berger/algebra.hpp"
#include "berger/linalg.hpp"
#include "berger/tensors.hpp"
#include "berger/tolerances.hpp"

namespace berger {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Linear (or affine, when offset is set) subspace of Bilin coefficient vectors.
struct LinearSpace {
  int n = 0;
  Eigen::MatrixXd basis;         // d^3 x dim, orthonormal columns
  std::optional<Bilin> offset;   // affine spaces only
  RankReport report;

  int ambient_dim() const { return static_cast<int>(basis.rows()); }
  int dim() const { return static_cast<int>(basis.cols()); }

  Bilin element(int k) const { return Bilin(n, basis.col(k)); }

  /// Point offset + sum c_k basis_k.
  Bilin at(const Eigen::VectorXd& c) const {
    Eigen::VectorXd v = basis * c;
    if (offset) v += offset->coeffs();
    return Bilin(n, std::move(v));
  }

  /// Distance from alpha to the space.
  double residual(const Bilin& alpha) const {
    Eigen::VectorXd v = alpha.coeffs();
    if (offset) v -= offset->coeffs();
    return projection_residual(basis, v);
  }
};

namespace detail {

inline int tindex(int d, int i, int j, int k) { return (i * d + j) * d + k; }

/// Rows of T -> [h, T(X,Y)] - T([h,X],Y) - T(X,[h,Y]) over all basis pairs.
inline void add_equivariance_rows(std::vector<Eigen::Triplet<double>>& trip, int row0, const Eigen::MatrixXd& ad) {
  const int d = static_cast<int>(ad.rows());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const int row = row0 + tindex(d, i, j, k);
        for (int m = 0; m < d; ++m) {
          if (ad(k, m) != 0.0) trip.emplace_back(row, tindex(d, i, j, m), ad(k, m));
          if (ad(m, i) != 0.0) trip.emplace_back(row, tindex(d, m, j, k), -ad(m, i));
          if (ad(m, j) != 0.0) trip.emplace_back(row, tindex(d, i, m, k), -ad(m, j));
        }
      }
}

inline SparseRows equivariance_operator(const std::vector<HVec>& hs, int n) {
  const int d = m_dim(n);
  const int d3 = d * d * d;
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t h = 0; h < hs.size(); ++h) {
    add_equivariance_rows(trip, static_cast<int>(h) * d3, ad_matrix(hs[h]));
  }
  SparseRows op(static_cast<Eigen::Index>(hs.size()) * d3, d3);
  op.setFromTriplets(trip.begin(), trip.end());
  op.prune(0.0);
  return op;
}

/// Rows g(T(e_i,e_j),e_k) + g(e_j,T(e_i,e_k)).
inline SparseRows metric_operator(const Metric& g) {
  const int d = g.dim();
  const Eigen::MatrixXd gram = g.gram();
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const int row = tindex(d, i, j, k);
        for (int m = 0; m < d; ++m) {
          if (gram(m, k) != 0.0) trip.emplace_back(row, tindex(d, i, j, m), gram(m, k));
          if (gram(j, m) != 0.0) trip.emplace_back(row, tindex(d, i, k, m), gram(j, m));
        }
      }
  SparseRows op(d * d * d, d * d * d);
  op.setFromTriplets(trip.begin(), trip.end());
  return op;
}

/// Rows (T(e_i,e_j) - T(e_j,e_i))_k: the part of the torsion that depends on T.
inline SparseRows antisymmetrizer(int d) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        if (i == j) continue;
        trip.emplace_back(tindex(d, i, j, k), tindex(d, i, j, k), 1.0);
        trip.emplace_back(tindex(d, i, j, k), tindex(d, j, i, k), -1.0);
      }
  SparseRows op(d * d * d, d * d * d);
  op.setFromTriplets(trip.begin(), trip.end());
  return op;
}

/// Rows w(i,j,k) + w(i,k,j) with w(i,j,k) = g(T(e_i,e_j) - T(e_j,e_i), e_k).
inline SparseRows skew_form_operator(const Metric& g) {
  const int d = g.dim();
  const Eigen::MatrixXd gram = g.gram();
  std::vector<Eigen::Triplet<double>> trip;
  auto add_w = [&](int row, int i, int j, int k) {
    for (int m = 0; m < d; ++m) {
      if (gram(m, k) == 0.0) continue;
      trip.emplace_back(row, tindex(d, i, j, m), gram(m, k));
      trip.emplace_back(row, tindex(d, j, i, m), -gram(m, k));
    }
  };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const int row = tindex(d, i, j, k);
        add_w(row, i, j, k);
        add_w(row, i, k, j);
      }
  SparseRows op(d * d * d, d * d * d);
  op.setFromTriplets(trip.begin(), trip.end());
  op.prune(0.0);
  return op;
}

}  // namespace detail

/// Largest equivariance residual of alpha over the su(n) basis and all basis pairs.
inline double equivariance_defect(const Bilin& alpha) {
  const auto hs = su_basis(alpha.n());
  if (hs.empty()) return 0.0;
  const SparseRows op = detail::equivariance_operator(hs, alpha.n());
  return (op * alpha.coeffs()).cwiseAbs().maxCoeff();
}

/// All h-invariant bilinear maps. The diagonal generators are handled first
/// through a block-decomposed SVD; the remaining generators act on that
/// (small) nullspace.
inline LinearSpace invariant_bilinear_space(int n, const Tolerances& tol = {}) {
  detail::require_n(n);
  const int d = m_dim(n);
  const int d3 = d * d * d;
  std::vector<HVec> cartan;
  std::vector<HVec> rest;
  for (auto& h : su_basis(n)) (is_diagonal(h) ? cartan : rest).push_back(h);

  LinearSpace out;
  out.n = n;
  if (cartan.empty() && rest.empty()) {
    out.basis = Eigen::MatrixXd::Identity(d3, d3);
    return out;
  }
  Nullspace stage1 = sparse_block_nullspace(detail::equivariance_operator(cartan, n), tol.rank_rel, tol.gap);
  out.report = stage1.report;
  out.basis = std::move(stage1.basis);
  if (!rest.empty()) {
    const SparseRows op = detail::equivariance_operator(rest, n);
    const Eigen::MatrixXd m = op * out.basis;
    Nullspace stage2 = nullspace(m, tol.rank_rel, tol.gap);
    out.report.merge(stage2.report);
    out.basis = out.basis * stage2.basis;
  }
  return out;
}

/// invariant_bilinear_space, computed once per (n, rank cut, gap threshold).
inline const LinearSpace& invariant_space_cached(int n, const Tolerances& tol = {}) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<const LinearSpace>> cache;
  const auto key = std::make_tuple(n, tol.rank_rel, tol.gap);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<const LinearSpace>(invariant_bilinear_space(n, tol))).first;
  }
  return *it->second;
}

/// Invariant maps with alpha(X, .) in so(m, g).
inline LinearSpace metric_connection_space(const LinearSpace& invariant, const Metric& g,
                                           const Tolerances& tol = {}) {
  detail::require_same_n(invariant.n, g.n(), "metric_connection_space");
  const Eigen::MatrixXd m = detail::metric_operator(g) * invariant.basis;
  Nullspace ns = nullspace(m, tol.rank_rel, tol.gap);
  LinearSpace out;
  out.n = g.n();
  out.basis = invariant.basis * ns.basis;
  out.report = ns.report;
  return out;
}

inline LinearSpace metric_connection_space(int n, double eps, const Tolerances& tol = {}) {
  return metric_connection_space(invariant_bilinear_space(n, tol), Metric(n, eps), tol);
}

/// The unique torsion-free element of the metric space.
inline Bilin levi_civita_generic(const LinearSpace& metric_space, const Tolerances& tol = {}) {
  const int n = metric_space.n;
  const int d = m_dim(n);
  const Eigen::MatrixXd a = detail::antisymmetrizer(d) * metric_space.basis;
  const Eigen::VectorXd b = structure_for(n).bracket_m.coeffs();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s[s.size() - 1] <= tol.rank_rel * s[0]) {
    throw std::runtime_error("levi_civita_generic: torsion-free metric connection is not unique");
  }
  const Eigen::VectorXd c = svd.solve(b);
  const double resid = (a * c - b).norm();
  if (resid > tol.num * (1.0 + b.norm())) {
    throw std::runtime_error("levi_civita_generic: no torsion-free metric connection (residual " +
                             std::to_string(resid) + ")");
  }
  return Bilin(n, metric_space.basis * c);
}

/// Metric maps whose lowered torsion is a 3-form, as an affine space over the
/// Levi-Civita map.
inline LinearSpace skew_torsion_space(const LinearSpace& metric_space, const Metric& g, const Tolerances& tol = {}) {
  detail::require_same_n(metric_space.n, g.n(), "skew_torsion_space");
  const Eigen::MatrixXd m = detail::skew_form_operator(g) * metric_space.basis;
  Nullspace ns = nullspace(m, tol.rank_rel, tol.gap);
  LinearSpace out;
  out.n = g.n();
  out.basis = metric_space.basis * ns.basis;
  out.offset = levi_civita_generic(metric_space, tol);
  out.report = ns.report;
  return out;
}

inline LinearSpace skew_torsion_space(int n, double eps, const Tolerances& tol = {}) {
  const Metric g(n, eps);
  return skew_torsion_space(metric_connection_space(invariant_bilinear_space(n, tol), g, tol), g, tol);
}

inline Bilin levi_civita_generic(int n, double eps, const Tolerances& tol = {}) {
  return levi_civita_generic(metric_connection_space(n, eps, tol), tol);
}

/// Every space for one (n, eps), sharing the invariant space.
struct ConnectionSpaces {
  LinearSpace invariant;
  LinearSpace metric;
  LinearSpace skew;

  const Bilin& levi_civita() const { return *skew.offset; }

  /// Worst singular-value gap over all rank decisions.
  double worst_gap() const {
    return std::min({invariant.report.gap(), metric.report.gap(), skew.report.gap()});
  }
};

inline ConnectionSpaces connection_spaces(const LinearSpace& invariant, const Metric& g, const Tolerances& tol = {}) {
  LinearSpace metric = metric_connection_space(invariant, g, tol);
  LinearSpace skew = skew_torsion_space(metric, g, tol);
  return {invariant, std::move(metric), std::move(skew)};
}

inline ConnectionSpaces connection_spaces(int n, double eps, const Tolerances& tol = {}) {
  return connection_spaces(invariant_bilinear_space(n, tol), Metric(n, eps), tol);
}

}  // namespace berger
