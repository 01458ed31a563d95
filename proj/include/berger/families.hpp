#pragma once

// Closed-form invariant tensors at the base point and the parametrized
// families of invariant connections on S^{2n+1}, written in the (z, a)
// coordinates of m. Throughout, X = (z, a), Y = (w, b), Z = (u, c).

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "berger/algebra.hpp"
#include "berger/tensors.hpp"
#include "berger/tolerances.hpp"

namespace berger {

/// Requested closed form is not available for this regime.
class UnsupportedRegime : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace cf {

/// conj(z)^t w
inline cplx herm(const CVector& z, const CVector& w) { return (z.adjoint() * w).value(); }
/// z^t conj(w)
inline cplx bil(const CVector& z, const CVector& w) { return (z.transpose() * w.conjugate()).value(); }

inline CVector cross(const CVector& u, const CVector& v) {
  if (u.size() != 3 || v.size() != 3) throw std::invalid_argument("cross: C^3 vectors required");
  CVector r(3);
  r << u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0];
  return r;
}

inline cplx det3(const CVector& z, const CVector& w, const CVector& u) { return (z.transpose() * cross(w, u)).value(); }

/// theta(z1, z2) = (-conj(z2), conj(z1)).
inline CVector theta(const CVector& z) {
  if (z.size() != 2) throw std::invalid_argument("theta: C^2 vector required");
  CVector r(2);
  r << -std::conj(z[1]), std::conj(z[0]);
  return r;
}

/// MVec whose a-part is the imaginary part of a (the real part is rounding noise).
inline MVec mk(CVector z, cplx a) { return MVec(std::move(z), cplx{0.0, a.imag()}); }

}  // namespace cf

enum class Regime { general_n, s7, s5, s3 };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::general_n: return "general_n";
    case Regime::s7: return "s7";
    case Regime::s5: return "s5";
    case Regime::s3: return "s3";
  }
  return "?";
}

/// The regime whose closed forms describe S^{2n+1}.
inline Regime regime_for(int n) {
  detail::require_n(n);
  if (n == 1) return Regime::s3;
  if (n == 2) return Regime::s5;
  if (n == 3) return Regime::s7;
  return Regime::general_n;
}

/// Parameters of the metric families. For skew-torsion members s = 1 - q and
/// the extra coordinates are (-Re p, Im p).
struct FamilyParams {
  Regime regime = Regime::general_n;
  cplx q{1.0, 0.0};
  double t = 0.0;
  cplx p{0.0, 0.0};   // s7, s5
  cplx p2{0.0, 0.0};  // s5

  double s() const { return 1.0 - q.real(); }
  double aux1() const { return -p.real(); }
  double aux2() const { return p.imag(); }

  bool skew_eligible(int n, double eps, double tol = 1e-12) const {
    const double nn = n;
    bool ok = std::abs(q.imag()) <= tol && std::abs(t - (eps * q.real() - (nn + 1.0) / nn - 2.0 * eps)) <= tol;
    if (regime == Regime::s5) ok = ok && std::abs(p2 - eps * p) <= tol;
    if (regime == Regime::general_n || regime == Regime::s3) ok = ok && p == cplx{} && p2 == cplx{};
    return ok;
  }

  /// Skew-torsion member with s and, where present, the two extra coordinates.
  static FamilyParams skew(Regime regime, int n, double eps, double s, double aux1 = 0.0, double aux2 = 0.0) {
    const double nn = n;
    FamilyParams f;
    f.regime = regime;
    f.q = 1.0 - s;
    f.t = eps * f.q.real() - (nn + 1.0) / nn - 2.0 * eps;
    if (regime == Regime::s7 || regime == Regime::s5) f.p = cplx{-aux1, aux2};
    if (regime == Regime::s5) f.p2 = eps * f.p;
    return f;
  }
};

/// Generic invariant map (q1 bz + q2 aw, i(t ab + Im(q3 conj(z)^t w))).
inline Bilin alpha_general(int n, cplx q1, cplx q2, cplx q3, double t) {
  return Bilin::tabulate(n, [&](const MVec& x, const MVec& y) {
    const cplx ab = x.a() * y.a();
    return cf::mk(q1 * y.a() * x.z() + q2 * x.a() * y.z(), kI * (t * ab.real() + (q3 * cf::herm(x.z(), y.z())).imag()));
  });
}

/// Metric maps (-eps q bz + t aw, -i Im(conj(q) conj(z)^t w)).
inline Bilin alpha_metric(int n, double eps, cplx q, double t) {
  return Bilin::tabulate(n, [&](const MVec& x, const MVec& y) {
    return cf::mk(-eps * q * y.a() * x.z() + t * x.a() * y.z(),
                  -kI * (std::conj(q) * cf::herm(x.z(), y.z())).imag());
  });
}

/// S^7 metric maps: alpha_metric + (p conj(z) x conj(w), 0).
inline Bilin alpha_metric_s7(double eps, cplx q, double t, cplx p) {
  const Bilin extra = Bilin::tabulate(3, [&](const MVec& x, const MVec& y) {
    return cf::mk(p * cf::cross(x.z().conjugate(), y.z().conjugate()), cplx{});
  });
  return alpha_metric(3, eps, q, t) + extra;
}

/// S^5 metric maps with the theta terms: -eps p b theta(z) + p2 a theta(w), -i Im(conj(p) conj(theta(z))^t w).
inline Bilin alpha_metric_s5(double eps, cplx q, double t, cplx p, cplx p2) {
  const Bilin extra = Bilin::tabulate(2, [&](const MVec& x, const MVec& y) {
    const CVector tz = cf::theta(x.z());
    return cf::mk(-eps * p * y.a() * tz + p2 * x.a() * cf::theta(y.z()), -kI * (std::conj(p) * cf::herm(tz, y.z())).imag());
  });
  return alpha_metric(2, eps, q, t) + extra;
}

/// Metric family member described by params.
inline Bilin alpha_from_params(int n, double eps, const FamilyParams& f) {
  switch (f.regime) {
    case Regime::general_n:
    case Regime::s3: return alpha_metric(n, eps, f.q, f.t);
    case Regime::s7:
      if (n != 3) throw UnsupportedRegime("s7 regime requires n = 3");
      return alpha_metric_s7(eps, f.q, f.t, f.p);
    case Regime::s5:
      if (n != 2) throw UnsupportedRegime("s5 regime requires n = 2");
      return alpha_metric_s5(eps, f.q, f.t, f.p, f.p2);
  }
  throw UnsupportedRegime("unknown regime");
}

/// Levi-Civita map of g_eps: (-eps bz - (eps + (n+1)/n) aw, -i Im(conj(z)^t w)).
inline Bilin alpha_lc(int n, double eps) {
  const double nn = n;
  return alpha_metric(n, eps, cplx{1.0, 0.0}, -eps - (nn + 1.0) / nn);
}

/// The direction (eps(bz - aw), i Im(conj(z)^t w)) shared by every regime.
inline Bilin skew_direction(int n, double eps) {
  return Bilin::tabulate(n, [&](const MVec& x, const MVec& y) {
    return cf::mk(eps * (y.a() * x.z() - x.a() * y.z()), kI * cf::herm(x.z(), y.z()).imag());
  });
}

inline Bilin alpha_skew(int n, double eps, double s) { return alpha_lc(n, eps) + s * skew_direction(n, eps); }

/// (p conj(z) x conj(w), 0) with p = -s1 + i s2.
inline Bilin s7_cross_direction(double s1, double s2) {
  const cplx p{-s1, s2};
  return Bilin::tabulate(3, [&](const MVec& x, const MVec& y) {
    return cf::mk(p * cf::cross(x.z().conjugate(), y.z().conjugate()), cplx{});
  });
}

inline Bilin alpha_skew_s7(double eps, double s, double s1, double s2) {
  return alpha_skew(3, eps, s) + s7_cross_direction(s1, s2);
}

/// -(eps p (b theta(z) - a theta(w)), i Im(conj(p) conj(theta(z))^t w)) with p = -s3 + i s4.
inline Bilin s5_theta_direction(double eps, double s3, double s4) {
  const cplx p{-s3, s4};
  return Bilin::tabulate(2, [&](const MVec& x, const MVec& y) {
    const CVector tz = cf::theta(x.z());
    return cf::mk(-eps * p * (y.a() * tz - x.a() * cf::theta(y.z())),
                  -kI * (std::conj(p) * cf::herm(tz, y.z())).imag());
  });
}

inline Bilin alpha_skew_s5(double eps, double s, double s3, double s4) {
  return alpha_skew(2, eps, s) + s5_theta_direction(eps, s3, s4);
}

/// Invariant tensors at the base point o in m-coordinates.
class PointTensors {
 public:
  explicit PointTensors(int n) : n_(n) { detail::require_n(n); }

  int n() const { return n_; }

  /// psi(z, a) = (i z, 0)
  MVec psi(const MVec& x) const { return MVec(kI * x.z(), cplx{}); }
  /// eta(z, a) = i a, a real number.
  double eta(const MVec& x) const { return (kI * x.a()).real(); }
  /// xi = (0, -i)
  MVec xi() const { return MVec(CVector::Zero(n_), -kI); }
  /// Phi(X, Y) = -Im(conj(z)^t w)
  double phi(const MVec& x, const MVec& y) const { return -cf::herm(x.z(), y.z()).imag(); }

  /// Omega(X, Y, Z) = -Re det(z, w, u); n = 3 only.
  double omega(const MVec& x, const MVec& y, const MVec& z) const {
    require(3, "Omega");
    return -cf::det3(x.z(), y.z(), z.z()).real();
  }
  /// Omega(X, Y, psi_1(Z)) = Im det(z, w, u); n = 3 only.
  double omega_psi(const MVec& x, const MVec& y, const MVec& z) const {
    require(3, "Omega");
    return cf::det3(x.z(), y.z(), z.z()).imag();
  }
  /// Theta(X, Y) = -(conj(z) x conj(w), 0); n = 3 only.
  MVec theta_form(const MVec& x, const MVec& y) const {
    require(3, "Theta");
    return MVec(-cf::cross(x.z().conjugate(), y.z().conjugate()), cplx{});
  }
  /// Theta~(X, Y) = (i conj(z) x conj(w), 0); n = 3 only.
  MVec theta_tilde(const MVec& x, const MVec& y) const {
    require(3, "Theta~");
    return MVec(kI * cf::cross(x.z().conjugate(), y.z().conjugate()), cplx{});
  }
  /// psi^(z, a) = (theta(z), 0); n = 2 only.
  MVec psi_hat(const MVec& x) const {
    require(2, "psi^");
    return MVec(cf::theta(x.z()), cplx{});
  }

 private:
  void require(int n, const char* what) const {
    if (n_ != n) throw std::invalid_argument(std::string(what) + " is only defined for n = " + std::to_string(n));
  }

  int n_;
};

/// The Levi-Civita map plus the torsion terms written with psi, eta, xi, Phi,
/// Theta, Theta~ and psi^. params = (s), (s, s1, s2) for n = 3, (s, s3, s4) for n = 2.
inline Bilin theorem_connection(int n, double eps, const Eigen::VectorXd& params) {
  const PointTensors pt(n);
  const Metric g(n, eps);
  const int expected = (n == 2 || n == 3) ? 3 : 1;
  if (params.size() != expected) throw std::invalid_argument("theorem_connection: wrong parameter count");
  const Bilin torsion_part = Bilin::tabulate(n, [&](const MVec& x, const MVec& y) {
    MVec out = params[0] * (pt.phi(x, y) * pt.xi() + eps * (pt.eta(x) * pt.psi(y) - pt.eta(y) * pt.psi(x)));
    if (n == 3) {
      out = out + params[1] * pt.theta_form(x, y) + params[2] * pt.theta_tilde(x, y);
    } else if (n == 2) {
      const MVec hx = pt.psi_hat(x);
      const MVec hy = pt.psi_hat(y);
      out = out + params[1] * (pt.phi(hx, y) * pt.xi() + eps * (pt.eta(x) * pt.psi(hy) - pt.eta(y) * pt.psi(hx)));
      out = out + params[2] * (-metric_eval(g, hx, y) * pt.xi() + eps * (pt.eta(x) * hy - pt.eta(y) * hx));
    }
    return out;
  });
  return alpha_lc(n, eps) + torsion_part;
}

/// Coordinate form of the same family.
inline Bilin skew_connection(int n, double eps, const Eigen::VectorXd& params) {
  if (n == 3) return alpha_skew_s7(eps, params[0], params[1], params[2]);
  if (n == 2) return alpha_skew_s5(eps, params[0], params[1], params[2]);
  return alpha_skew(n, eps, params[0]);
}

/// Torsion of the metric families.
inline Bilin closed_torsion(int n, double eps, const FamilyParams& f) {
  const double nn = n;
  const Bilin base = Bilin::tabulate(n, [&](const MVec& x, const MVec& y) {
    const cplx k = -eps * f.q - f.t - (nn + 1.0) / nn;
    return cf::mk(k * (y.a() * x.z() - x.a() * y.z()),
                  (f.q.real() - 1.0) * (cf::herm(y.z(), x.z()) - cf::herm(x.z(), y.z())));
  });
  switch (f.regime) {
    case Regime::general_n:
    case Regime::s3: return base;
    case Regime::s7:
      return base + Bilin::tabulate(3, [&](const MVec& x, const MVec& y) {
               return cf::mk(2.0 * f.p * cf::cross(x.z().conjugate(), y.z().conjugate()), cplx{});
             });
    case Regime::s5:
      return base + Bilin::tabulate(2, [&](const MVec& x, const MVec& y) {
               const CVector tz = cf::theta(x.z());
               return cf::mk((-eps * f.p - f.p2) * (y.a() * tz - x.a() * cf::theta(y.z())),
                             -2.0 * kI * (std::conj(f.p) * cf::herm(tz, y.z())).imag());
             });
  }
  throw UnsupportedRegime("unknown regime");
}

/// Curvature of the skew-torsion families (general_n, s3 and s7).
inline CurvTensor closed_curvature(int n, double eps, const FamilyParams& f) {
  if (f.regime == Regime::s5) {
    throw UnsupportedRegime("closed_curvature: no closed form for the s5 regime; use the generic Nomizu path");
  }
  if (f.regime == Regime::s7 && n != 3) throw UnsupportedRegime("s7 regime requires n = 3");
  const double q = f.q.real();
  const double qq = q * q - 2.0 * q;
  return CurvTensor::tabulate(n, [&](const MVec& x, const MVec& y, const MVec& zz) {
    const CVector& z = x.z();
    const CVector& w = y.z();
    const CVector& u = zz.z();
    const cplx a = x.a(), b = y.a(), c = zz.a();
    CVector top = (eps * q * q / 2.0) * (z * (cf::herm(w, u) - cf::bil(w, u)) + w * (cf::bil(z, u) - cf::herm(z, u))) +
                  z * cf::herm(w, u) - w * cf::herm(z, u) +
                  (-eps * q + 2.0 * eps + 1.0) * u * (cf::herm(w, z) - cf::herm(z, w)) +
                  eps * eps * qq * c * (b * z - a * w);
    cplx bottom = -0.5 * eps * qq * ((cf::herm(z, u) + cf::bil(z, u)) * b - (cf::herm(w, u) + cf::bil(w, u)) * a);
    if (f.regime == Regime::s7) {
      const cplx p = f.p;
      const CVector zb = z.conjugate(), wb = w.conjugate(), ub = u.conjugate();
      top += (2.0 * eps * q - 4.0 * eps - 4.0) * p * (a * cf::cross(wb, ub) - b * cf::cross(zb, ub)) +
             2.0 * eps * q * p * c * cf::cross(zb, wb) +
             p * std::conj(p) * (cf::cross(zb, cf::cross(w, u)) - cf::cross(wb, cf::cross(z, u)));
      bottom += 2.0 * q * kI * (std::conj(p) * cf::det3(z, w, u)).imag();
    }
    return cf::mk(top, bottom);
  });
}

/// Ricci tensor of the skew-torsion families (general_n, s3 and s7).
inline Rank2Tensor closed_ricci(int n, double eps, const FamilyParams& f) {
  if (f.regime == Regime::s5) {
    throw UnsupportedRegime("closed_ricci: no closed form for the s5 regime; use closed_sym_ricci_s5");
  }
  const double nn = n;
  const double q = f.q.real();
  const double pp = std::norm(f.p);
  const double zcoef = f.regime == Regime::s7 ? 2.0 * (eps * (q * q - 2.0 * q + 2.0) + 4.0 - 2.0 * pp)
                                              : 2.0 * (eps * (q * q - 2.0 * q + 2.0) + nn + 1.0);
  const double acoef = 2.0 * nn * eps * eps * (q * q - 2.0 * q);
  return Rank2Tensor::tabulate(n, [&](const MVec& x, const MVec& y) {
    return zcoef * cf::bil(x.z(), y.z()).real() + acoef * (x.a() * y.a()).real();
  });
}

/// S tensor of the S^5 skew family: -8 eps (s^2 + |p|^2) Re(z^t conj(w)) - 16 eps^2 (s^2 + |p|^2) ab.
inline Rank2Tensor closed_s_tensor_s5(double eps, double s, cplx p) {
  const double k = s * s + std::norm(p);
  return Rank2Tensor::tabulate(2, [&](const MVec& x, const MVec& y) {
    return -8.0 * eps * k * cf::bil(x.z(), y.z()).real() - 16.0 * eps * eps * k * (x.a() * y.a()).real();
  });
}

/// Symmetrized Ricci of the S^5 skew family.
inline Rank2Tensor closed_sym_ricci_s5(double eps, double s, cplx p) {
  const double k = s * s + std::norm(p);
  return Rank2Tensor::tabulate(2, [&](const MVec& x, const MVec& y) {
    return (2.0 * eps + 6.0 + 2.0 * eps * k) * cf::bil(x.z(), y.z()).real() +
           (k - 1.0) * 4.0 * eps * eps * (x.a() * y.a()).real();
  });
}

}  // namespace berger
