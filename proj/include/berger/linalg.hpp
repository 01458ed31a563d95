#pragma once

// Rank-revealing nullspaces for the stacked constraint systems.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/Sparse>

namespace berger {

/// Singular values were too close to the cut to trust the rank decision.
class RankAmbiguity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Diagnostics of one rank decision. gap = smallest kept / largest discarded.
struct RankReport {
  int rank = 0;
  double largest = 0.0;
  double smallest_kept = std::numeric_limits<double>::infinity();
  double largest_discarded = 0.0;

  double gap() const {
    if (largest_discarded == 0.0 || rank == 0) return std::numeric_limits<double>::infinity();
    return smallest_kept / largest_discarded;
  }

  /// Merge the report of a later stage; the gap of the result is the worst one.
  void merge(const RankReport& other) {
    if (other.gap() < gap()) {
      smallest_kept = other.smallest_kept;
      largest_discarded = other.largest_discarded;
    }
    rank += other.rank;
    largest = std::max(largest, other.largest);
  }
};

struct Nullspace {
  Eigen::MatrixXd basis;  // orthonormal columns
  RankReport report;
};

namespace detail {

/// Cut singular values at rel * largest.
inline RankReport classify_singular_values(const std::vector<double>& sv, double largest, double rel) {
  RankReport r;
  r.largest = largest;
  const double cut = rel * largest;
  for (double s : sv) {
    if (largest > 0.0 && s > cut) {
      ++r.rank;
      r.smallest_kept = std::min(r.smallest_kept, s);
    } else {
      r.largest_discarded = std::max(r.largest_discarded, s);
    }
  }
  return r;
}

inline void check_gap(const RankReport& r, double min_gap, const char* what) {
  if (r.gap() < min_gap) {
    throw RankAmbiguity(std::string(what) + ": singular-value gap " + std::to_string(r.gap()) +
                        " below threshold " + std::to_string(min_gap));
  }
}

}  // namespace detail

/// Nullspace of a dense matrix with a relative singular-value cut.
inline Nullspace nullspace(const Eigen::MatrixXd& m, double rel, double min_gap) {
  const Eigen::Index cols = m.cols();
  if (cols == 0) return {Eigen::MatrixXd(0, 0), {}};
  if (m.rows() == 0) return {Eigen::MatrixXd::Identity(cols, cols), {}};

  // Square up tall systems first; R has the same singular values and right vectors.
  Eigen::MatrixXd work;
  if (m.rows() > 2 * cols) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    work = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  } else {
    work = m;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(work, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  std::vector<double> sv(static_cast<std::size_t>(cols), 0.0);
  for (Eigen::Index i = 0; i < s.size(); ++i) sv[static_cast<std::size_t>(i)] = s[i];
  const double largest = s.size() ? s[0] : 0.0;
  RankReport rep = detail::classify_singular_values(sv, largest, rel);
  detail::check_gap(rep, min_gap, "nullspace");
  // Singular values come sorted, so the null directions are the trailing columns of V.
  return {svd.matrixV().rightCols(cols - rep.rank), rep};
}

/// Nullspace of a sparse matrix, split into the connected components of its
/// column-coupling graph. Each block gets a dense SVD; the cut is relative to
/// the largest singular value over all blocks.
inline Nullspace sparse_block_nullspace(const Eigen::SparseMatrix<double, Eigen::RowMajor>& m, double rel,
                                        double min_gap) {
  const Eigen::Index cols = m.cols();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(cols));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    Eigen::Index first = -1;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, r); it; ++it) {
      if (first < 0) {
        first = find(it.col());
      } else {
        parent[find(it.col())] = first;
      }
    }
  }

  std::vector<std::vector<Eigen::Index>> comp_cols;
  std::vector<Eigen::Index> comp_of(static_cast<std::size_t>(cols), -1);
  std::vector<Eigen::Index> root_to_comp(static_cast<std::size_t>(cols), -1);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const Eigen::Index root = find(c);
    if (root_to_comp[root] < 0) {
      root_to_comp[root] = static_cast<Eigen::Index>(comp_cols.size());
      comp_cols.emplace_back();
    }
    comp_of[c] = root_to_comp[root];
    comp_cols[comp_of[c]].push_back(c);
  }
  std::vector<std::vector<Eigen::Index>> comp_rows(comp_cols.size());
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, r);
    if (it) comp_rows[comp_of[it.col()]].push_back(r);
  }

  struct BlockResult {
    Eigen::MatrixXd v;
    Eigen::VectorXd s;
  };
  std::vector<BlockResult> blocks(comp_cols.size());
  double largest = 0.0;
  for (std::size_t b = 0; b < comp_cols.size(); ++b) {
    const auto& bc = comp_cols[b];
    const auto& br = comp_rows[b];
    const Eigen::Index nc = static_cast<Eigen::Index>(bc.size());
    std::vector<Eigen::Index> local(static_cast<std::size_t>(cols), -1);
    for (Eigen::Index k = 0; k < nc; ++k) local[bc[k]] = k;
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(br.size()), nc);
    for (std::size_t k = 0; k < br.size(); ++k) {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, br[k]); it; ++it) {
        dense(static_cast<Eigen::Index>(k), local[it.col()]) += it.value();
      }
    }
    if (dense.rows() == 0) {
      blocks[b] = {Eigen::MatrixXd::Identity(nc, nc), Eigen::VectorXd::Zero(nc)};
      continue;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeFullV);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(nc);
    s.head(svd.singularValues().size()) = svd.singularValues();
    largest = std::max(largest, s.size() ? s.maxCoeff() : 0.0);
    blocks[b] = {svd.matrixV(), s};
  }

  std::vector<double> all;
  for (const auto& blk : blocks)
    for (Eigen::Index i = 0; i < blk.s.size(); ++i) all.push_back(blk.s[i]);
  RankReport rep = detail::classify_singular_values(all, largest, rel);
  detail::check_gap(rep, min_gap, "sparse_block_nullspace");

  const double cut = rel * largest;
  std::vector<Eigen::VectorXd> null_cols;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (Eigen::Index i = 0; i < blocks[b].s.size(); ++i) {
      if (largest > 0.0 && blocks[b].s[i] > cut) continue;
      Eigen::VectorXd v = Eigen::VectorXd::Zero(cols);
      for (std::size_t k = 0; k < comp_cols[b].size(); ++k) v[comp_cols[b][k]] = blocks[b].v(static_cast<Eigen::Index>(k), i);
      null_cols.push_back(std::move(v));
    }
  }
  Eigen::MatrixXd basis(cols, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t c = 0; c < null_cols.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = null_cols[c];
  return {basis, rep};
}

/// Distance from v to the column span of an orthonormal basis.
inline double projection_residual(const Eigen::MatrixXd& orthonormal, const Eigen::VectorXd& v) {
  if (orthonormal.cols() == 0) return v.norm();
  return (v - orthonormal * (orthonormal.transpose() * v)).norm();
}

/// Smallest singular value of the columns of m (0 for an empty matrix).
inline double smallest_singular_value(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()[svd.singularValues().size() - 1];
}

}  // namespace berger
