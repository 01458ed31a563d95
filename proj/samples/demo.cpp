// Walks through S^9 with the Lorentzian metric eps = 1: invariant spaces,
// the skew-torsion family, its Einstein members and their curvature.

#include <cmath>
#include <iostream>

#include "berger/berger.hpp"

int main() {
  using namespace berger;
  const int n = 4;
  const double eps = 1.0;

  const SkewFamily fam(n, eps);
  const auto& sp = fam.spaces();
  std::cout << "S^" << 2 * n + 1 << ", eps = " << eps << "\n";
  std::cout << "  invariant maps:        " << sp.invariant.dim() << "\n";
  std::cout << "  metric connections:    " << sp.metric.dim() << "\n";
  std::cout << "  skew-torsion (affine): " << sp.skew.dim() << "\n";
  std::cout << "  Levi-Civita vs closed form: " << fam.levi_civita_residual() << "\n";

  const CanonicalEquation eq = einstein_equation(n, eps);
  std::cout << "Einstein condition: " << eq.text() << "  -> " << to_string(classify(eq)) << "\n";

  for (const Solution& s : solve_numeric(fam, 4)) {
    const Bilin alpha = fam.connection(s.theta);
    const Rank2Tensor ric = ricci(curvature(alpha), fam.metric());
    std::cout << "  s = " << s.theta[0] << "  defect = " << s.defect
              << "  scal = " << scalar(ric, fam.metric())
              << "  (formula " << scalar_curvature_formula(n, eps, s.theta) << ")\n";
  }
  std::cout << "  expected |s| = " << std::sqrt(10.0 / 3.0) << "\n";

  const FlatReport flat = flat_connection_check(n, -1.0);
  std::cout << "Smallest curvature norm in the round family: " << flat.min_norm << "\n";
  return 0;
}
