#pragma once

// Einstein condition with skew torsion over the computed skew-torsion family:
// canonical quadrics, their classification, numeric solves, scalar curvature,
// Ricci-flat members and flatness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "berger/algebra.hpp"
#include "berger/equivariance.hpp"
#include "berger/families.hpp"
#include "berger/nomizu.hpp"
#include "berger/quadratic.hpp"
#include "berger/tolerances.hpp"

namespace berger {

enum class VarietyClass {
  empty,
  one_point,
  two_points,
  line,
  ellipsoid,
  cone,
  hyperboloid_one_sheet,
  hyperboloid_two_sheets
};

inline const char* to_string(VarietyClass v) {
  switch (v) {
    case VarietyClass::empty: return "empty";
    case VarietyClass::one_point: return "one_point";
    case VarietyClass::two_points: return "two_points";
    case VarietyClass::line: return "line";
    case VarietyClass::ellipsoid: return "ellipsoid";
    case VarietyClass::cone: return "cone";
    case VarietyClass::hyperboloid_one_sheet: return "hyperboloid_one_sheet";
    case VarietyClass::hyperboloid_two_sheets: return "hyperboloid_two_sheets";
  }
  return "?";
}

inline VarietyClass variety_from_string(const std::string& s) {
  for (auto v : {VarietyClass::empty, VarietyClass::one_point, VarietyClass::two_points, VarietyClass::line,
                 VarietyClass::ellipsoid, VarietyClass::cone, VarietyClass::hyperboloid_one_sheet,
                 VarietyClass::hyperboloid_two_sheets}) {
    if (s == to_string(v)) return v;
  }
  throw std::invalid_argument("unknown variety class: " + s);
}

/// Names of the family parameters in the order used by theta vectors.
inline std::vector<std::string> parameter_names(int n) {
  if (n == 3) return {"s", "s1", "s2"};
  if (n == 2) return {"s", "s3", "s4"};
  return {"s"};
}

inline int parameter_count(int n) { return (n == 2 || n == 3) ? 3 : 1; }

namespace detail {

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace detail

/// A s^2 + B (x1^2 + x2^2) = C in the family parameters; aux = 0 means no x
/// terms. For n = 1 the condition does not involve s and reads eps + 1 = 0.
struct CanonicalEquation {
  int n = 0;
  double eps = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  int aux = 0;
  int c_sign = 0;  // computed from the factors of C, not from its rounded value

  bool degenerate() const { return n == 1; }

  double residual(const Eigen::VectorXd& theta) const {
    if (degenerate()) return c;
    double r = a * theta[0] * theta[0] - c;
    if (aux) r += b * (theta[1] * theta[1] + theta[2] * theta[2]);
    return r;
  }

  bool holds(const Eigen::VectorXd& theta, double tol) const {
    if (degenerate()) return c_sign == 0;
    return std::abs(residual(theta)) <= tol;
  }

  std::string text() const {
    std::ostringstream os;
    os.precision(15);
    if (degenerate()) {
      os << "eps = -1";
      return os.str();
    }
    const auto names = parameter_names(n);
    os << a << "*" << names[0] << "^2";
    if (aux) os << " + " << b << "*(" << names[1] << "^2 + " << names[2] << "^2)";
    os << " = " << c;
    return os.str();
  }
};

inline CanonicalEquation einstein_equation(int n, double eps) {
  detail::require_n(n);
  if (!(eps != 0.0) || !std::isfinite(eps)) throw std::invalid_argument("einstein_equation: eps must be finite and nonzero");
  CanonicalEquation e;
  e.n = n;
  e.eps = eps;
  const double nn = n;
  const int sp = detail::sign_of(eps + 1.0);
  const int se = detail::sign_of(eps);
  if (n == 1) {
    e.c = eps + 1.0;
    e.c_sign = sp;
  } else if (n == 2) {
    e.a = 1.0;
    e.b = 1.0;
    e.aux = 2;
    e.c = 3.0 * (eps + 1.0) / eps;
    e.c_sign = sp * se;
  } else if (n == 3) {
    e.a = eps;
    e.b = 1.0;
    e.aux = 2;
    e.c = 2.0 * (eps + 1.0);
    e.c_sign = sp;
  } else {
    e.a = 1.0;
    e.c = ((nn + 1.0) / (nn - 1.0)) * (eps + 1.0) / eps;
    e.c_sign = sp * se;
  }
  return e;
}

/// Geometric type of the real solution set of the canonical equation.
inline VarietyClass classify(const CanonicalEquation& e) {
  if (e.degenerate()) return e.c_sign == 0 ? VarietyClass::line : VarietyClass::empty;
  int sa = detail::sign_of(e.a);
  int sb = detail::sign_of(e.b);
  if (e.aux == 0) {
    if (e.c_sign == 0) return VarietyClass::one_point;
    return e.c_sign * sa > 0 ? VarietyClass::two_points : VarietyClass::empty;
  }
  if (e.c_sign == 0) return sa == sb ? VarietyClass::one_point : VarietyClass::cone;
  if (e.c_sign < 0) {
    sa = -sa;
    sb = -sb;
  }
  if (sa > 0 && sb > 0) return VarietyClass::ellipsoid;
  if (sa < 0 && sb < 0) return VarietyClass::empty;
  // Two squares share the sign of B, one has the sign of A.
  if (sb > 0) return VarietyClass::hyperboloid_one_sheet;
  return VarietyClass::hyperboloid_two_sheets;
}

inline VarietyClass classify(int n, double eps) { return classify(einstein_equation(n, eps)); }

/// The computed skew-torsion space with directions aligned to the family
/// parameters: connection(theta) = LC + sum theta_k P(D_k), where D_k are the
/// closed-form directions and P projects onto the computed space.
class SkewFamily {
 public:
  SkewFamily(int n, double eps, const Tolerances& tol = {})
      : n_(n), eps_(eps), g_(n, eps), spaces_(connection_spaces(invariant_space_cached(n, tol), g_, tol)) {
    const int k = parameter_count(n);
    if (spaces_.skew.dim() != k) {
      throw std::runtime_error("SkewFamily: skew-torsion space has dimension " + std::to_string(spaces_.skew.dim()) +
                               ", expected " + std::to_string(k));
    }
    const Bilin lc = alpha_lc(n, eps);
    lc_residual_ = (spaces_.levi_civita().coeffs() - lc.coeffs()).cwiseAbs().maxCoeff();
    const Eigen::MatrixXd& basis = spaces_.skew.basis;
    directions_.resize(basis.rows(), k);
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
      e[i] = 1.0;
      const Eigen::VectorXd dir = skew_connection(n, eps, e).coeffs() - lc.coeffs();
      alignment_residual_ = std::max(alignment_residual_, projection_residual(basis, dir));
      directions_.col(i) = basis * (basis.transpose() * dir);
    }
    span_sigma_ = smallest_singular_value(basis.transpose() * directions_);
    if (alignment_residual_ > tol.num * (1.0 + directions_.norm()) || span_sigma_ <= tol.rank_rel) {
      throw std::runtime_error("SkewFamily: closed-form directions do not match the computed space");
    }
  }

  int n() const { return n_; }
  double eps() const { return eps_; }
  int params() const { return static_cast<int>(directions_.cols()); }
  const Metric& metric() const { return g_; }
  const ConnectionSpaces& spaces() const { return spaces_; }

  double alignment_residual() const { return alignment_residual_; }
  double span_sigma() const { return span_sigma_; }
  double levi_civita_residual() const { return lc_residual_; }

  Bilin connection(const Eigen::VectorXd& theta) const {
    if (theta.size() != params()) throw std::invalid_argument("SkewFamily: wrong parameter count");
    return Bilin(n_, spaces_.levi_civita().coeffs() + directions_ * theta);
  }

  /// Family parameters of a member of the skew-torsion space (least squares).
  Eigen::VectorXd coordinates(const Bilin& alpha) const {
    const Eigen::VectorXd v = alpha.coeffs() - spaces_.levi_civita().coeffs();
    return directions_.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(v);
  }

 private:
  int n_;
  double eps_;
  Metric g_;
  ConnectionSpaces spaces_;
  Eigen::MatrixXd directions_;
  double alignment_residual_ = 0.0;
  double span_sigma_ = 0.0;
  double lc_residual_ = 0.0;
};

/// Upper triangle of Sym(Ric) - (scal/dim) g, off-diagonal entries weighted by
/// sqrt(2) so the norm equals einstein_defect.
inline Eigen::VectorXd einstein_residual_vector(const Bilin& alpha, const Metric& g) {
  const Eigen::MatrixXd e = einstein_residual(alpha, g);
  const int d = static_cast<int>(e.rows());
  Eigen::VectorXd v(d * (d + 1) / 2);
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) v[k++] = (i == j ? 1.0 : std::numbers::sqrt2) * e(i, j);
  return v;
}

inline QuadraticMap einstein_model(const SkewFamily& fam) {
  return QuadraticMap::fit(
      [&](const Eigen::VectorXd& th) { return einstein_residual_vector(fam.connection(th), fam.metric()); },
      fam.params());
}

inline QuadraticMap curvature_model(const SkewFamily& fam) {
  return QuadraticMap::fit([&](const Eigen::VectorXd& th) { return curvature(fam.connection(th)).coeffs(); },
                           fam.params());
}

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Random points exactly on the canonical quadric (none when it is empty).
inline std::vector<Eigen::VectorXd> sample_on_shell(const CanonicalEquation& e, std::mt19937_64& rng, int count) {
  std::vector<Eigen::VectorXd> out;
  if (classify(e) == VarietyClass::empty) return out;
  const int k = parameter_count(e.n);
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd th = Eigen::VectorXd::Zero(k);
    if (e.degenerate()) {
      th[0] = uniform(rng, -3.0, 3.0);
    } else if (e.aux == 0) {
      th[0] = (uniform01(rng) < 0.5 ? -1.0 : 1.0) * std::sqrt(std::max(0.0, e.c / e.a));
    } else {
      // Pick s so the remaining radius^2 = (C - A s^2)/B is nonnegative.
      double s = 0.0;
      const double lo = std::max(0.0, e.c / e.a);
      if (e.a * e.b > 0.0) {
        s = uniform(rng, -1.0, 1.0) * std::sqrt(lo);
      } else {
        s = (uniform01(rng) < 0.5 ? -1.0 : 1.0) * std::sqrt(lo + uniform(rng, 0.0, 4.0));
      }
      const double rho = std::sqrt(std::max(0.0, (e.c - e.a * s * s) / e.b));
      const double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      th << s, rho * std::cos(phi), rho * std::sin(phi);
    }
    out.push_back(th);
  }
  return out;
}

struct SolveOptions {
  int seeds = 64;
  double damping = 0.5;
  std::uint64_t seed = 0;
  int max_iterations = 200;
};

struct Solution {
  Eigen::VectorXd theta;
  double defect = 0.0;      // full pipeline
  double equation = 0.0;    // canonical equation residual
};

namespace detail {

inline bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace detail

/// Gauss-Newton from random seeds on the Einstein residual of the family.
/// Returns up to count distinct solutions, sorted by parameter tuple.
inline std::vector<Solution> solve_numeric(const SkewFamily& fam, int count, const Tolerances& tol = {},
                                           const SolveOptions& opt = {}) {
  const CanonicalEquation eq = einstein_equation(fam.n(), fam.eps());
  const VarietyClass kind = classify(eq);
  const QuadraticMap model = einstein_model(fam);
  double radius = 1.0;
  if (!eq.degenerate()) {
    radius = std::max(radius, std::abs(eq.c / eq.a));
    if (eq.aux) radius = std::max(radius, std::abs(eq.c / eq.b));
  }
  radius = 1.5 * std::sqrt(radius) + 1.0;

  std::mt19937_64 rng(opt.seed);
  std::vector<Solution> found;
  for (int i = 0; i < opt.seeds; ++i) {
    Eigen::VectorXd x0(fam.params());
    for (Eigen::Index j = 0; j < x0.size(); ++j) x0[j] = uniform(rng, -radius, radius);
    const GaussNewtonResult gn = gauss_newton(model, x0, opt.max_iterations, opt.damping);
    if (gn.residual > tol.sol) continue;
    const double defect = einstein_defect(fam.connection(gn.x), fam.metric());
    if (defect > tol.sol) continue;
    const bool duplicate = std::any_of(found.begin(), found.end(),
                                       [&](const Solution& s) { return (s.theta - gn.x).norm() < 1e-3; });
    if (!duplicate) found.push_back({gn.x, defect, eq.residual(gn.x)});
  }
  std::sort(found.begin(), found.end(), [](const Solution& a, const Solution& b) { return detail::lex_less(a.theta, b.theta); });
  if (found.empty() && kind != VarietyClass::empty) {
    throw std::runtime_error("solve_numeric: no solution found for n=" + std::to_string(fam.n()) +
                             " although the variety is " + to_string(kind));
  }
  if (static_cast<int>(found.size()) > count) found.resize(static_cast<std::size_t>(count));
  return found;
}

inline std::vector<Solution> solve_numeric(int n, double eps, int count, const Tolerances& tol = {},
                                           const SolveOptions& opt = {}) {
  return solve_numeric(SkewFamily(n, eps, tol), count, tol, opt);
}

/// Scalar curvature of an Einstein member in terms of its parameters.
inline double scalar_curvature_formula(int n, double eps, const Eigen::VectorXd& theta) {
  const double nn = n;
  if (n == 2) return 20.0 * eps * (theta.squaredNorm() - 1.0);
  return 2.0 * nn * (2.0 * nn + 1.0) * eps * (theta[0] * theta[0] - 1.0);
}

/// The same value after eliminating parameters with the Einstein equation.
inline double scalar_curvature_on_shell(int n, double eps, const Eigen::VectorXd& theta) {
  const double nn = n;
  if (n == 1) return 6.0 * (1.0 - theta[0] * theta[0]);
  if (n == 3) return 42.0 * (eps + 2.0 - theta[1] * theta[1] - theta[2] * theta[2]);
  return 2.0 * nn * (2.0 * nn + 1.0) * (2.0 * eps + nn + 1.0) / (nn - 1.0);
}

struct RicciFlatSample {
  double eps = 0.0;
  Eigen::VectorXd theta;
  double ricci_norm = 0.0;       // full tensor
  double sym_ricci_norm = 0.0;
  double antisym_ricci_norm = 0.0;
  double einstein_defect = 0.0;
  double scalar = 0.0;
};

struct RicciFlatLocus {
  int n = 0;
  std::string condition;
  std::vector<RicciFlatSample> samples;

  double max_ricci() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.ricci_norm);
    return m;
  }
  double max_sym_ricci() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.sym_ricci_norm);
    return m;
  }
  /// Every sample is Einstein with vanishing symmetrized Ricci tensor.
  bool verified(const Tolerances& tol = {}) const {
    if (samples.empty()) return false;
    for (const auto& s : samples)
      if (s.sym_ricci_norm > tol.sol || s.einstein_defect > tol.sol) return false;
    return true;
  }
};

namespace detail {

inline RicciFlatSample ricci_flat_sample(const SkewFamily& fam, const Eigen::VectorXd& theta) {
  const Bilin alpha = fam.connection(theta);
  const Rank2Tensor ric = ricci(curvature(alpha), fam.metric());
  const Eigen::MatrixXd skew = 0.5 * (ric.coeffs - ric.coeffs.transpose());
  return {fam.eps(),
          theta,
          ric.coeffs.norm(),
          sym(ric).coeffs.norm(),
          skew.norm(),
          einstein_defect(alpha, fam.metric()),
          scalar(ric, fam.metric())};
}

}  // namespace detail

inline std::string ricci_flat_condition(int n) {
  if (n == 1) return "eps = -1, s = +-1";
  if (n == 2) return "eps = -3/2, s^2 + s3^2 + s4^2 = 1";
  if (n == 3) return "0 != eps >= -2, s = +-1, s1^2 + s2^2 = eps + 2";
  return "eps = -(n+1)/2, s = +-1";
}

/// Samples of the zero-scalar-curvature Einstein members at the family's eps,
/// checked through the full pipeline. The eps must lie on the locus.
inline RicciFlatLocus ricci_flat_members(const SkewFamily& fam) {
  const int n = fam.n();
  const double eps = fam.eps();
  RicciFlatLocus loc;
  loc.n = n;
  loc.condition = ricci_flat_condition(n);
  auto add = [&](const Eigen::VectorXd& th) { loc.samples.push_back(detail::ricci_flat_sample(fam, th)); };
  if (n == 2) {
    // Poles and a spread of points on the unit sphere.
    for (double s : {1.0, -1.0}) add(Eigen::Vector3d(s, 0.0, 0.0));
    const int m = 10;
    for (int i = 0; i < m; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / m;
      const double r = std::sqrt(1.0 - z * z);
      const double phi = i * std::numbers::pi * (3.0 - std::sqrt(5.0));
      add(Eigen::Vector3d(z, r * std::cos(phi), r * std::sin(phi)));
    }
  } else if (n == 3) {
    const double rho = std::sqrt(std::max(0.0, eps + 2.0));
    for (double s : {1.0, -1.0})
      for (int i = 0; i < 3; ++i) {
        const double phi = 2.0 * std::numbers::pi * (i + 0.25) / 3.0;
        add(Eigen::Vector3d(s, rho * std::cos(phi), rho * std::sin(phi)));
      }
  } else {
    for (double s : {1.0, -1.0}) add(Eigen::VectorXd::Constant(1, s));
  }
  return loc;
}

/// Every bullet of the zero-scalar-curvature classification for n, sampled
/// over the admissible eps.
inline RicciFlatLocus ricci_flat_locus(int n, const Tolerances& tol = {}) {
  detail::require_n(n);
  std::vector<double> eps_values;
  if (n == 1) eps_values = {-1.0};
  else if (n == 2) eps_values = {-1.5};
  else if (n == 3) eps_values = {-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 2.0};
  else eps_values = {-(n + 1.0) / 2.0};
  RicciFlatLocus loc;
  loc.n = n;
  loc.condition = ricci_flat_condition(n);
  for (double eps : eps_values) {
    const RicciFlatLocus part = ricci_flat_members(SkewFamily(n, eps, tol));
    loc.samples.insert(loc.samples.end(), part.samples.begin(), part.samples.end());
  }
  return loc;
}

namespace detail {

/// The `keep` smallest values of ||model|| over a uniform grid on [lo, hi]^k.
inline std::vector<std::pair<double, Eigen::VectorXd>> grid_minima(const QuadraticMap& model, int k, double lo,
                                                                   double hi, int steps, std::size_t keep) {
  std::vector<std::pair<double, Eigen::VectorXd>> grid;
  Eigen::VectorXd th(k);
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  while (true) {
    for (int j = 0; j < k; ++j) th[j] = lo + (hi - lo) * idx[j] / (steps - 1);
    grid.emplace_back(model(th).norm(), th);
    int j = 0;
    while (j < k && ++idx[j] == steps) idx[j++] = 0;
    if (j == k) break;
  }
  keep = std::min(keep, grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(keep), grid.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });
  grid.resize(keep);
  return grid;
}

}  // namespace detail

struct FlatReport {
  int n = 0;
  double eps = 0.0;
  bool flat_expected = false;
  double margin = 0.1;
  double min_norm = 0.0;             // grid plus refinement
  Eigen::VectorXd argmin;
  std::vector<Eigen::VectorXd> flat_points;  // sampled expected flat set
  double max_flat_norm = 0.0;
  int grid_points = 0;

  bool pass(const Tolerances& tol = {}) const {
    if (flat_expected) return !flat_points.empty() && max_flat_norm <= tol.sol;
    return min_norm > margin;
  }
};

/// Minimum of ||R|| over a parameter grid, refined by Gauss-Newton on the
/// curvature coefficients. For n = 3 and eps = -1 the flat circle s = 1,
/// s1^2 + s2^2 = 1 is sampled as well.
inline FlatReport flat_connection_check(int n, double eps, const Tolerances& tol = {}, double margin = 0.1) {
  if (n < 3 || n > 6) throw std::invalid_argument("flat_connection_check: n must be in 3..6");
  const SkewFamily fam(n, eps, tol);
  const QuadraticMap model = curvature_model(fam);
  FlatReport rep;
  rep.n = n;
  rep.eps = eps;
  rep.margin = margin;
  rep.flat_expected = (n == 3 && eps == -1.0);

  const int k = fam.params();
  const int steps = k == 1 ? 121 : 17;
  const double lo = k == 1 ? -3.0 : -2.0;
  const double hi = -lo;
  const auto grid = detail::grid_minima(model, k, lo, hi, steps, 8);
  rep.grid_points = static_cast<int>(std::pow(steps, k));
  rep.min_norm = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const GaussNewtonResult gn = gauss_newton(model, grid[i].second);
    const double nrm = curvature(fam.connection(gn.x)).norm();
    if (nrm < rep.min_norm) {
      rep.min_norm = nrm;
      rep.argmin = gn.x;
    }
  }
  if (rep.flat_expected) {
    for (int i = 0; i < 12; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / 12.0;
      const Eigen::Vector3d p(1.0, std::cos(phi), std::sin(phi));
      rep.flat_points.push_back(p);
      rep.max_flat_norm = std::max(rep.max_flat_norm, curvature(fam.connection(p)).norm());
    }
  }
  return rep;
}

struct DefectMinimum {
  double defect = 0.0;
  Eigen::VectorXd theta;
};

/// Minimum einstein_defect over the box [lo, hi]^k, from a grid refined by
/// Gauss-Newton and re-evaluated with the full pipeline.
inline DefectMinimum min_einstein_defect(const SkewFamily& fam, double lo, double hi, int steps = 2001) {
  const QuadraticMap model = einstein_model(fam);
  const int k = fam.params();
  if (k != 1) steps = std::min(steps, 41);
  const auto grid = detail::grid_minima(model, k, lo, hi, steps, 8);
  DefectMinimum best{std::numeric_limits<double>::infinity(), {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Eigen::VectorXd x = gauss_newton(model, grid[i].second).x;
    x = x.cwiseMax(lo).cwiseMin(hi);
    for (const Eigen::VectorXd& cand : {x, grid[i].second}) {
      const double d = einstein_defect(fam.connection(cand), fam.metric());
      if (d < best.defect) best = {d, cand};
    }
  }
  return best;
}

}  // namespace berger
