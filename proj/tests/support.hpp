#pragma once

// Hand-rolled generators and comparison helpers shared by the test binaries.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "berger/berger.hpp"

namespace bt {

using berger::cplx;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  double real(double lo = -2.0, double hi = 2.0) { return berger::uniform(rng_, lo, hi); }
  cplx complex(double r = 2.0) { return {real(-r, r), real(-r, r)}; }
  int integer(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }

  /// eps in [-3, 3] with |eps| > 0.1.
  double eps() {
    while (true) {
      const double e = real(-3.0, 3.0);
      if (std::abs(e) > 0.1) return e;
    }
  }

  berger::MVec mvec(int n) {
    berger::CVector z(n);
    for (int k = 0; k < n; ++k) z[k] = complex(1.0);
    return berger::MVec(z, cplx{0.0, real(-1.0, 1.0)});
  }

  berger::HVec hvec(int n) {
    berger::CMatrix b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = complex(1.0);
    b = 0.5 * (b - b.adjoint()).eval();
    b -= (b.trace() / static_cast<double>(n)) * berger::CMatrix::Identity(n, n);
    return berger::HVec(b);
  }

  Eigen::VectorXd theta(int n, double r = 2.0) {
    Eigen::VectorXd th(berger::parameter_count(n));
    for (Eigen::Index i = 0; i < th.size(); ++i) th[i] = real(-r, r);
    return th;
  }

 private:
  std::mt19937_64 rng_;
};

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

inline double dist(const berger::MVec& x, const berger::MVec& y) { return (x.coords() - y.coords()).cwiseAbs().maxCoeff(); }

inline berger::MVec e_z(int n, int k, cplx c = 1.0) {
  berger::CVector z = berger::CVector::Zero(n);
  z[k] = c;
  return berger::MVec(z, cplx{});
}

inline berger::MVec e_a(int n, double c = 1.0) { return berger::MVec(berger::CVector::Zero(n), cplx{0.0, c}); }

}  // namespace bt
