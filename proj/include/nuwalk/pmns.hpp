// The 3x3 lepton mixing matrix built from three rotation factors and the
// Majorana phase diagonal: U = R23 * R13(delta) * R12 * diag(e^{i a1/2},
// e^{i a2/2}, 1). Flavor rows are indexed (e, mu, tau), mass columns (1,2,3).
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "nuwalk/types.hpp"

namespace nuwalk {

template <typename Scalar>
struct MixingParams {
  Scalar theta12{};
  Scalar theta13{};
  Scalar theta23{};
  Scalar delta{};   // Dirac CP phase
  Scalar alpha1{};  // Majorana phases, drop out of every |U|^2
  Scalar alpha2{};
};

template <typename Scalar>
using PmnsMatrix = Matrix3c<Scalar>;

template <typename Scalar>
PmnsMatrix<Scalar> build_pmns(const MixingParams<Scalar>& p) {
  for (Scalar v : {p.theta12, p.theta13, p.theta23, p.delta, p.alpha1, p.alpha2})
    if (!std::isfinite(v))
      throw std::invalid_argument("build_pmns: non-finite angle or phase");

  using C = std::complex<Scalar>;
  const Scalar c12 = std::cos(p.theta12), s12 = std::sin(p.theta12);
  const Scalar c13 = std::cos(p.theta13), s13 = std::sin(p.theta13);
  const Scalar c23 = std::cos(p.theta23), s23 = std::sin(p.theta23);
  const C pd = std::polar(Scalar(1), p.delta);

  Matrix3c<Scalar> r23, r13, r12, maj;
  r23 << C(1), C(0), C(0),
         C(0), C(c23), C(s23),
         C(0), C(-s23), C(c23);
  r13 << C(c13), C(0), s13 * std::conj(pd),
         C(0), C(1), C(0),
         -s13 * pd, C(0), C(c13);
  r12 << C(c12), C(s12), C(0),
         C(-s12), C(c12), C(0),
         C(0), C(0), C(1);
  maj = Matrix3c<Scalar>::Zero();
  maj(0, 0) = std::polar(Scalar(1), p.alpha1 / 2);
  maj(1, 1) = std::polar(Scalar(1), p.alpha2 / 2);
  maj(2, 2) = C(1);

  return r23 * r13 * r12 * maj;
}

// Coefficients of the flavor state over the mass basis: the conjugated row.
template <typename Scalar>
Vector3c<Scalar> flavor_coefficients(const PmnsMatrix<Scalar>& u, Flavor alpha) {
  const int row = static_cast<int>(alpha);
  if (row < 0 || row > 2)
    throw std::invalid_argument("flavor_coefficients: flavor index out of range");
  return u.row(row).conjugate().transpose();
}

}  // namespace nuwalk
