// Shared aliases, the flavor enum and the physical constants used by the
// parameter mapping. Everything downstream is templated on the real scalar
// type; double is what the CLI instantiates.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nuwalk {

template <typename Scalar> using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar> using Matrix3c = Eigen::Matrix<std::complex<Scalar>, 3, 3>;
template <typename Scalar> using Matrix6c = Eigen::Matrix<std::complex<Scalar>, 6, 6>;
template <typename Scalar> using Vector2c = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
template <typename Scalar> using Vector3c = Eigen::Matrix<std::complex<Scalar>, 3, 1>;
template <typename Scalar> using Vector6c = Eigen::Matrix<std::complex<Scalar>, 6, 1>;
template <typename Scalar>
using MatrixXc = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorXc = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using VectorXr = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class Flavor : int { e = 0, mu = 1, tau = 2 };

inline const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::e:   return "e";
    case Flavor::mu:  return "mu";
    case Flavor::tau: return "tau";
  }
  throw std::invalid_argument("flavor_name: flavor index out of range");
}

inline Flavor parse_flavor(const std::string& s) {
  if (s == "e") return Flavor::e;
  if (s == "mu") return Flavor::mu;
  if (s == "tau") return Flavor::tau;
  throw std::invalid_argument("unknown flavor '" + s + "' (valid: e, mu, tau)");
}

// SI constants, fixed so parameter mappings are reproducible bit for bit.
namespace si {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double c = 2.99792458e8;        // m/s
inline constexpr double eV = 1.602176634e-19;    // J
}  // namespace si

}  // namespace nuwalk
