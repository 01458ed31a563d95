#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace berger;
using bt::Gen;
using V = VarietyClass;

namespace {

// Interval-by-interval reading of the quadric signs, written out by hand.
V hand_classification(int n, double eps) {
  if (n == 1) return eps == -1.0 ? V::line : V::empty;
  if (n == 2) {
    if (eps == -1.0) return V::one_point;
    return (eps < -1.0 || eps > 0.0) ? V::ellipsoid : V::empty;
  }
  if (n == 3) {
    if (eps < -1.0) return V::hyperboloid_two_sheets;
    if (eps == -1.0) return V::cone;
    return eps < 0.0 ? V::hyperboloid_one_sheet : V::ellipsoid;
  }
  if (eps == -1.0) return V::one_point;
  return (eps < -1.0 || eps > 0.0) ? V::two_points : V::empty;
}

Eigen::VectorXd off_shell(Gen& gen, int n) { return gen.theta(n, 2.5); }

// -1/2 (delta T) for an invariant torsion 3-form, from the Levi-Civita map:
// (nabla_X T)(Y,Z,W) = -T(a(X,Y),Z,W) - T(Y,a(X,Z),W) - T(Y,Z,a(X,W)).
Eigen::MatrixXd half_codifferential(const Bilin& alpha, const Metric& g) {
  const Bilin lc = alpha_lc(g.n(), g.eps());
  const TorsionForm w = torsion_form(alpha, g);
  const OrthonormalBasis ob = orthonormal_basis(g);
  const int d = g.dim();
  auto tf = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
    double s = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) s += x[i] * y[j] * z[k] * w.values(i, j, k);
    return s;
  };
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const Eigen::VectorXd ea = Eigen::VectorXd::Unit(d, a), eb = Eigen::VectorXd::Unit(d, b);
      double s = 0.0;
      for (std::size_t f = 0; f < ob.vectors.size(); ++f) {
        const Eigen::VectorXd x = ob.vectors[f].coords();
        const double nab = -tf(lc.apply_coords(x, x), ea, eb) - tf(x, lc.apply_coords(x, ea), eb) -
                           tf(x, ea, lc.apply_coords(x, eb));
        s += ob.signs[f] * nab;
      }
      out(a, b) = 0.5 * s;
    }
  return out;
}

}  // namespace

TEST(EinsteinEquation, Examples) {
  const CanonicalEquation e2 = einstein_equation(2, -0.5);
  EXPECT_DOUBLE_EQ(e2.c, -3.0);
  EXPECT_EQ(classify(e2), V::empty);
  const CanonicalEquation e3 = einstein_equation(3, -1.0);
  EXPECT_DOUBLE_EQ(e3.a, -1.0);
  EXPECT_DOUBLE_EQ(e3.b, 1.0);
  EXPECT_EQ(e3.c_sign, 0);
  EXPECT_EQ(classify(e3), V::cone);
  const CanonicalEquation e4 = einstein_equation(4, 1.0);
  EXPECT_NEAR(e4.c, 10.0 / 3.0, 1e-15);
  EXPECT_THROW(einstein_equation(4, 0.0), std::invalid_argument);
  EXPECT_THROW(einstein_equation(0, 1.0), std::invalid_argument);
}

TEST(EinsteinEquation, Text) {
  EXPECT_EQ(einstein_equation(1, 2.0).text(), "eps = -1");
  EXPECT_EQ(einstein_equation(3, -1.0).text(), "-1*s^2 + 1*(s1^2 + s2^2) = 0");
  EXPECT_EQ(einstein_equation(2, 1.0).text(), "1*s^2 + 1*(s3^2 + s4^2) = 6");
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(4, 2.0), V::two_points);
  EXPECT_EQ(classify(3, -0.5), V::hyperboloid_one_sheet);
  EXPECT_EQ(classify(1, -1.0), V::line);
  EXPECT_EQ(classify(5, 0.7), V::two_points);
}

TEST(Classify, TableOne) {
  struct Cell {
    int n;
    double eps;
    V want;
  };
  // Rows eps < -1, eps = -1, -1 < eps < 0, eps > 0; columns n >= 4, 3, 2, 1.
  const Cell cells[] = {
      {4, -2.0, V::two_points}, {3, -2.0, V::hyperboloid_two_sheets}, {2, -2.0, V::ellipsoid}, {1, -2.0, V::empty},
      {4, -1.0, V::one_point},  {3, -1.0, V::cone},                   {2, -1.0, V::one_point}, {1, -1.0, V::line},
      {4, -0.5, V::empty},      {3, -0.5, V::hyperboloid_one_sheet},  {2, -0.5, V::empty},     {1, -0.5, V::empty},
      {4, 1.0, V::two_points},  {3, 1.0, V::ellipsoid},               {2, 1.0, V::ellipsoid},  {1, 1.0, V::empty},
  };
  for (const Cell& c : cells) {
    EXPECT_EQ(classify(c.n, c.eps), c.want) << "n=" << c.n << " eps=" << c.eps;
    if (c.n == 4)
      for (int n = 5; n <= 9; ++n) EXPECT_EQ(classify(n, c.eps), c.want) << "n=" << n;
  }
}

TEST(Classify, AgreesWithSignAnalysisOnEpsGrid) {
  for (int n = 1; n <= 7; ++n) {
    std::vector<double> grid;
    for (int k = 0; k < 100; ++k) grid.push_back(-3.0 + 6.0 * k / 99.0);
    grid.push_back(-1.0);
    grid.push_back(-2.0);
    for (double eps : grid) EXPECT_EQ(classify(n, eps), hand_classification(n, eps)) << "n=" << n << " eps=" << eps;
  }
}

TEST(Classify, VarietyNamesRoundTrip) {
  for (V v : {V::empty, V::one_point, V::two_points, V::line, V::ellipsoid, V::cone, V::hyperboloid_one_sheet,
              V::hyperboloid_two_sheets})
    EXPECT_EQ(variety_from_string(to_string(v)), v);
  EXPECT_THROW(variety_from_string("torus"), std::invalid_argument);
}

TEST(SampleOnShell, PointsSatisfyTheEquation) {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 5; ++n)
    for (double eps : {-3.0, -1.5, -1.0, -0.5, 0.5, 2.0}) {
      const CanonicalEquation e = einstein_equation(n, eps);
      const auto pts = sample_on_shell(e, rng, 20);
      if (classify(e) == V::empty) {
        EXPECT_TRUE(pts.empty());
        continue;
      }
      ASSERT_EQ(pts.size(), 20u);
      for (const auto& th : pts) EXPECT_TRUE(e.holds(th, 1e-12)) << "n=" << n << " eps=" << eps;
    }
}

TEST(Uniform, PortableAndInRange) {
  std::mt19937_64 a(3), b(3);
  for (int k = 0; k < 1000; ++k) {
    const double x = uniform01(a);
    EXPECT_EQ(x, uniform01(b));
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  std::mt19937_64 c(0);
  EXPECT_EQ(uniform01(c), static_cast<double>(std::mt19937_64(0)() >> 11) / 9007199254740992.0);
}

TEST(SkewFamily, CoordinatesInvertConnection) {
  Gen gen(50);
  for (int n = 1; n <= 5; ++n) {
    const SkewFamily fam(n, gen.eps());
    EXPECT_EQ(fam.params(), parameter_count(n));
    EXPECT_LT(fam.alignment_residual(), 1e-10);
    EXPECT_LT(fam.levi_civita_residual(), 1e-10);
    const Eigen::VectorXd th = gen.theta(n);
    EXPECT_LT(bt::max_abs(fam.coordinates(fam.connection(th)) - th), 1e-10);
    EXPECT_LT(bt::max_abs(fam.connection(th).coeffs() - skew_connection(n, fam.eps(), th).coeffs()), 1e-10);
    EXPECT_THROW(fam.connection(Eigen::VectorXd::Zero(2)), std::invalid_argument);
  }
}

TEST(QuadraticModel, FitIsExactOnQuadratics) {
  Gen gen(51);
  Eigen::Matrix2d m;
  m << 0.5, -1.25, 2.0, 0.75;
  auto f = [&](const Eigen::VectorXd& c) {
    Eigen::VectorXd r(3);
    r << 1.0 + c[0] * c[1], m.row(0).dot(c) - c[1] * c[1], 2.0 * c[0] * c[0] - 0.5;
    return r;
  };
  const QuadraticMap q = QuadraticMap::fit(f, 2);
  for (int k = 0; k < 10; ++k) {
    const Eigen::Vector2d c(gen.real(), gen.real());
    EXPECT_LT(bt::max_abs(q(c) - f(c)), 1e-12);
    // Finite-difference Jacobian.
    const double h = 1e-6;
    for (int j = 0; j < 2; ++j) {
      Eigen::Vector2d cp = c, cm = c;
      cp[j] += h;
      cm[j] -= h;
      EXPECT_LT(bt::max_abs(q.jacobian(c).col(j) - (f(cp) - f(cm)) / (2.0 * h)), 1e-6);
    }
  }
}

TEST(QuadraticModel, GaussNewtonFindsRoots) {
  const QuadraticMap sq = QuadraticMap::fit(
      [](const Eigen::VectorXd& c) { return Eigen::VectorXd::Constant(1, c[0] * c[0] - 2.0); }, 1);
  EXPECT_NEAR(gauss_newton(sq, Eigen::VectorXd::Constant(1, 3.0)).x[0], std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(gauss_newton(sq, Eigen::VectorXd::Constant(1, -0.5)).x[0], -std::sqrt(2.0), 1e-12);
  // Underdetermined circle: the iterate lands on it.
  const QuadraticMap circ = QuadraticMap::fit(
      [](const Eigen::VectorXd& c) { return Eigen::VectorXd::Constant(1, c.squaredNorm() - 1.0); }, 2);
  const GaussNewtonResult r = gauss_newton(circ, Eigen::Vector2d(0.3, -2.0));
  EXPECT_LT(r.residual, 1e-12);
  EXPECT_NEAR(r.x.norm(), 1.0, 1e-12);
}

TEST(SolveNumeric, NineSphereLorentzian) {
  const auto sols = solve_numeric(4, 1.0, 5);
  ASSERT_EQ(sols.size(), 2u);
  const double want = std::sqrt(10.0 / 3.0);
  EXPECT_NEAR(sols[0].theta[0], -want, 1e-8);
  EXPECT_NEAR(sols[1].theta[0], want, 1e-8);
  for (const auto& s : sols) EXPECT_LE(s.defect, 1e-8);
}

TEST(SolveNumeric, EmptyCell) { EXPECT_TRUE(solve_numeric(2, -0.5, 5).empty()); }

TEST(SolveNumeric, ThreeSphereLine) {
  const auto sols = solve_numeric(1, -1.0, 6);
  EXPECT_EQ(sols.size(), 6u);
  for (const auto& s : sols) EXPECT_LE(s.defect, 1e-8);
  // Every s on the line, not only the ones the solver returns.
  const SkewFamily fam(1, -1.0);
  for (double s : {-7.0, -1.0, 0.0, 0.25, 3.0, 10.0})
    EXPECT_LE(einstein_defect(fam.connection(Eigen::VectorXd::Constant(1, s)), fam.metric()), 1e-8) << s;
}

TEST(SolveNumeric, SolutionsSatisfyCanonicalEquation) {
  for (int n = 1; n <= 5; ++n)
    for (double eps : {-2.0, -1.0, -0.5, 1.0}) {
      const CanonicalEquation e = einstein_equation(n, eps);
      const auto sols = solve_numeric(n, eps, 8);
      if (classify(e) == V::empty) EXPECT_TRUE(sols.empty());
      for (const auto& s : sols) {
        EXPECT_TRUE(e.holds(s.theta, 1e-6)) << "n=" << n << " eps=" << eps;
        EXPECT_LE(s.defect, 1e-8);
      }
    }
}

TEST(SolveNumeric, SortedAndDeterministic) {
  const auto a = solve_numeric(3, 1.0, 8);
  const auto b = solve_numeric(3, 1.0, 8);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].theta, b[i].theta);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LE(a[i - 1].theta[0], a[i].theta[0]);
}

TEST(SolveNumeric, ExhaustedBudgetIsAnError) {
  SolveOptions opt;
  opt.seeds = 0;
  EXPECT_THROW(solve_numeric(4, 1.0, 3, {}, opt), std::runtime_error);
  EXPECT_NO_THROW(solve_numeric(4, -0.5, 3, {}, opt));
}

TEST(Properties, DefectVanishesExactlyOnTheQuadric) {
  // 200 draws per cell, half on the quadric and half uniform.
  std::mt19937_64 rng(2024);
  Gen gen(52);
  for (int n = 1; n <= 5; ++n)
    for (double eps : {-3.0, -1.5, -1.0, -0.5, 0.5, 2.0}) {
      const SkewFamily fam(n, eps);
      const CanonicalEquation e = einstein_equation(n, eps);
      std::vector<Eigen::VectorXd> draws = sample_on_shell(e, rng, 100);
      while (draws.size() < 200) draws.push_back(off_shell(gen, n));
      int mismatches = 0, zeros = 0;
      for (const auto& th : draws) {
        const bool einstein = einstein_defect(fam.connection(th), fam.metric()) <= 1e-8;
        const bool eq = e.holds(th, 1e-6);
        mismatches += einstein != eq;
        zeros += einstein;
      }
      EXPECT_EQ(mismatches, 0) << "n=" << n << " eps=" << eps;
      if (classify(e) != V::empty) EXPECT_GE(zeros, 100);
    }
}

TEST(Properties, ScalarCurvatureFormulas) {
  std::mt19937_64 rng(2025);
  for (int n = 1; n <= 5; ++n)
    for (double eps : {-3.0, -1.5, -1.0, -0.5, 0.5, 2.0}) {
      const SkewFamily fam(n, eps);
      for (const auto& th : sample_on_shell(einstein_equation(n, eps), rng, 40)) {
        const double got = scalar(ricci(curvature(fam.connection(th)), fam.metric()), fam.metric());
        const double tol = 1e-9 * (1.0 + std::abs(got));
        EXPECT_NEAR(scalar_curvature_formula(n, eps, th), got, tol) << "n=" << n << " eps=" << eps;
        EXPECT_NEAR(scalar_curvature_on_shell(n, eps, th), got, tol) << "n=" << n << " eps=" << eps;
      }
    }
}

TEST(ScalarCurvature, ZeroExamples) {
  EXPECT_NEAR(scalar_curvature_formula(1, -1.0, Eigen::VectorXd::Constant(1, 1.0)), 0.0, 1e-15);
  EXPECT_NEAR(scalar_curvature_on_shell(4, -2.5, Eigen::VectorXd::Constant(1, 1.0)), 0.0, 1e-15);
  EXPECT_NEAR(scalar_curvature_on_shell(3, -2.0, Eigen::Vector3d(1.0, 0.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(scalar_curvature_formula(2, -1.5, Eigen::Vector3d(0.6, 0.0, 0.8)), 0.0, 1e-14);
}

TEST(RicciFlat, LocusIsEinsteinWithZeroSymmetricRicci) {
  for (int n = 1; n <= 5; ++n) {
    const RicciFlatLocus loc = ricci_flat_locus(n);
    EXPECT_TRUE(loc.verified()) << "n=" << n;
    EXPECT_LE(loc.max_sym_ricci(), 1e-8);
    for (const auto& s : loc.samples) EXPECT_NEAR(s.scalar, 0.0, 1e-9);
    if (n != 2) EXPECT_LE(loc.max_ricci(), 1e-8) << "n=" << n;
  }
}

TEST(RicciFlat, Conditions) {
  EXPECT_EQ(ricci_flat_condition(2), "eps = -3/2, s^2 + s3^2 + s4^2 = 1");
  EXPECT_EQ(ricci_flat_condition(3), "0 != eps >= -2, s = +-1, s1^2 + s2^2 = eps + 2");
  EXPECT_EQ(ricci_flat_condition(7), "eps = -(n+1)/2, s = +-1");
  const RicciFlatLocus l3 = ricci_flat_locus(3);
  EXPECT_EQ(l3.samples.size(), 42u);
  for (const auto& s : l3.samples) EXPECT_NEAR(s.theta[1] * s.theta[1] + s.theta[2] * s.theta[2], s.eps + 2.0, 1e-12);
}

TEST(RicciFlat, FiveSphereAntisymmetricPartIsTheCodifferential) {
  // Sym Ric vanishes on the whole unit sphere, the full tensor only at the poles.
  const RicciFlatLocus loc = ricci_flat_locus(2);
  const SkewFamily fam(2, -1.5);
  for (const auto& s : loc.samples) {
    const double rho = std::hypot(s.theta[1], s.theta[2]);
    EXPECT_NEAR(s.antisym_ricci_norm, 6.0 * rho, 1e-9);
    const Bilin a = fam.connection(s.theta);
    const Rank2Tensor ric = ricci(curvature(a), fam.metric());
    const Eigen::MatrixXd skew = 0.5 * (ric.coeffs - ric.coeffs.transpose());
    EXPECT_LT(bt::max_abs(skew - half_codifferential(a, fam.metric())), 1e-10);
    if (rho == 0.0) EXPECT_LE(s.ricci_norm, 1e-8);
  }
}

TEST(Flat, SevenSphereRoundCircle) {
  const FlatReport r = flat_connection_check(3, -1.0);
  EXPECT_TRUE(r.flat_expected);
  EXPECT_EQ(r.flat_points.size(), 12u);
  EXPECT_LE(r.max_flat_norm, 1e-8);
  EXPECT_TRUE(r.pass());
  // Closed form, away from the sampled angles.
  const FamilyParams f = FamilyParams::skew(Regime::s7, 3, -1.0, 1.0, std::cos(0.1), std::sin(0.1));
  EXPECT_LT(closed_curvature(3, -1.0, f).norm(), 1e-12);
}

TEST(Flat, NoFlatMembersElsewhere) {
  for (auto [n, eps] : {std::pair{4, -1.0}, {3, 2.0}, {3, -0.5}, {5, 1.0}, {6, -1.0}}) {
    const FlatReport r = flat_connection_check(n, eps);
    EXPECT_FALSE(r.flat_expected);
    EXPECT_GT(r.min_norm, 0.1) << "n=" << n << " eps=" << eps;
    EXPECT_TRUE(r.pass());
  }
  EXPECT_THROW(flat_connection_check(2, -1.0), std::invalid_argument);
}

TEST(Flat, GridMinimumIsNotBelowClosedFormMinimum) {
  // For n >= 4, ||R(s)||^2 is a quartic in s; scan it finely with the closed form.
  const double eps = -1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 6000; ++i) {
    const double s = -3.0 + i * 1e-3;
    best = std::min(best, closed_curvature(4, eps, FamilyParams::skew(Regime::general_n, 4, eps, s)).norm());
  }
  EXPECT_NEAR(flat_connection_check(4, eps).min_norm, best, 1e-3 * best);
}

TEST(ThreeSphere, NoEinsteinMembersOffTheRoundMetric) {
  for (double eps : {-2.0, -0.5, 1.0}) {
    const DefectMinimum m = min_einstein_defect(SkewFamily(1, eps), -10.0, 10.0);
    EXPECT_GT(m.defect, 1e-3) << "eps=" << eps;
    ASSERT_EQ(m.theta.size(), 1);
    EXPECT_LE(std::abs(m.theta[0]), 10.0);
  }
  EXPECT_LT(min_einstein_defect(SkewFamily(1, -1.0), -10.0, 10.0).defect, 1e-10);
}
