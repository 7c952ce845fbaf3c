// Discrete-time quantum walk operators for the three mass sectors: per-sector
// coin rotations, momentum-basis shift phases, the 6x6 block walk unitary,
// its dispersion relation and mass eigenmodes, the alternative coin-basis
// encodings, and a position-lattice evolver used as a verification oracle.
//
// Coin basis ordering is zeta_1..zeta_6 = (sector 1 up, sector 1 down,
// sector 2 up, sector 2 down, sector 3 up, sector 3 down). One step is
// shift-after-coin: the coin rotates within each sector, then the up
// components pick up e^{-i ktilde} and the down components e^{+i ktilde}.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "nuwalk/types.hpp"

namespace nuwalk {

template <typename Scalar>
struct WalkParams {
  std::array<Scalar, 3> theta{};  // coin angle per mass sector, radians
  Scalar ktilde{};                // dimensionless momentum k a / hbar, radians
  Scalar dt_seconds{};            // documentation only, not used by dynamics
  Scalar a_meters{};              // documentation only
};

template <typename Scalar>
struct MassEigenmode {
  int sector{};          // 1, 2 or 3
  Scalar phase{};        // phi = arccos(cos theta cos ktilde), in [0, pi]
  std::complex<Scalar> f{};  // spinor-up amplitude
  std::complex<Scalar> g{};  // spinor-down amplitude
};

struct degenerate_mode_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> coin_block(Scalar theta) {
  if (!std::isfinite(theta))
    throw std::invalid_argument("coin_block: non-finite angle");
  const Scalar c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix<Scalar, 2, 2> m;
  m << c, s, -s, c;
  return m;
}

template <typename Scalar>
std::pair<std::complex<Scalar>, std::complex<Scalar>> shift_phases(Scalar ktilde) {
  if (!std::isfinite(ktilde))
    throw std::invalid_argument("shift_phases: non-finite momentum");
  return {std::polar(Scalar(1), -ktilde), std::polar(Scalar(1), ktilde)};
}

// diag(e^{-i ktilde}, e^{+i ktilde}) * coin_block(theta)
template <typename Scalar>
Matrix2c<Scalar> walk_block(Scalar theta, Scalar ktilde) {
  const auto coin = coin_block(theta);
  const auto [up, dn] = shift_phases(ktilde);
  Matrix2c<Scalar> w;
  w << up * coin(0, 0), up * coin(0, 1),
       dn * coin(1, 0), dn * coin(1, 1);
  return w;
}

template <typename Scalar>
Matrix6c<Scalar> six_level_walk(const WalkParams<Scalar>& p) {
  Matrix6c<Scalar> w = Matrix6c<Scalar>::Zero();
  for (int j = 0; j < 3; ++j)
    w.template block<2, 2>(2 * j, 2 * j) = walk_block(p.theta[j], p.ktilde);
  return w;
}

// Positive branch of the dispersion relation, arccos(cos theta cos ktilde)
// in [0, pi]. Evaluated through atan2 so small phases keep full relative
// accuracy (1 - cos^2 would lose half the digits).
template <typename Scalar>
Scalar dispersion_phase(Scalar theta, Scalar ktilde) {
  if (!std::isfinite(theta) || !std::isfinite(ktilde))
    throw std::invalid_argument("dispersion_phase: non-finite input");
  const Scalar s = std::sin(theta), c = std::cos(theta);
  const Scalar sk = std::sin(ktilde), ck = std::cos(ktilde);
  return std::atan2(std::hypot(s, c * sk), c * ck);
}

// Eigenvector of walk_block(theta, ktilde) for the eigenvalue e^{-i phi}:
//   f = sin(theta) e^{-i ktilde} / D,  g = i u / D,  D = sqrt(sin^2 theta + u^2)
// with u = cos(theta) sin(ktilde) - sin(phi). The textbook u cancels
// catastrophically when cos(theta) sin(ktilde) > 0 and theta is small, so in
// that half-plane we use the rationalized equivalent
//   u = -sin^2(theta) / (cos(theta) sin(ktilde) + sin(phi)).
// At sin(theta) = 0 with cos(theta) sin(ktilde) > 0 the formula is 0/0; the
// analytic limit is (e^{-i ktilde}, 0). The mode is undefined only where the
// two eigenvalues coincide (sin phi = 0, e.g. theta = ktilde = 0).
template <typename Scalar>
MassEigenmode<Scalar> mass_eigenmode(int sector, Scalar theta, Scalar ktilde) {
  if (sector < 1 || sector > 3)
    throw std::invalid_argument("mass_eigenmode: sector must be 1, 2 or 3");
  if (!std::isfinite(theta) || !std::isfinite(ktilde))
    throw std::invalid_argument("mass_eigenmode: non-finite input");

  const Scalar s = std::sin(theta), c = std::cos(theta);
  const Scalar sk = std::sin(ktilde), ck = std::cos(ktilde);
  const Scalar sinphi = std::hypot(s, c * sk);
  if (sinphi == Scalar(0)) {
    std::ostringstream os;
    os << "mass_eigenmode: degenerate walk block at theta=" << theta
       << ", ktilde=" << ktilde << " (eigenvalues coincide)";
    throw degenerate_mode_error(os.str());
  }

  MassEigenmode<Scalar> m;
  m.sector = sector;
  m.phase = std::atan2(sinphi, c * ck);

  const Scalar csk = c * sk;
  const Scalar u = (csk > Scalar(0)) ? -(s * s) / (csk + sinphi) : csk - sinphi;
  const Scalar d = std::hypot(s, u);
  if (d == Scalar(0)) {
    // s == 0 and csk > 0: limit of the formula as theta -> 0+
    m.f = std::polar(Scalar(1), -ktilde);
    m.g = std::complex<Scalar>(0);
    return m;
  }
  m.f = (s / d) * std::polar(Scalar(1), -ktilde);
  m.g = std::complex<Scalar>(0, u / d);
  return m;
}

// Orthogonal partner mode, eigenvector for e^{+i phi}.
template <typename Scalar>
Vector2c<Scalar> partner_spinor(const MassEigenmode<Scalar>& m) {
  Vector2c<Scalar> w;
  w << -std::conj(m.g), std::conj(m.f);
  return w;
}

// ---------------------------------------------------------------------------
// Coin basis encodings. Each encoding is a bijection from six basis labels
// onto zeta_1..zeta_6; to_zeta[i] is the 0-based zeta index carried by the
// i-th encoded label.

struct CoinBasisEncoding {
  std::string name;
  std::array<std::string, 6> labels;
  std::array<int, 6> to_zeta{};
};

inline CoinBasisEncoding encoding_table(const std::string& name) {
  CoinBasisEncoding e;
  e.name = name;
  e.to_zeta = {0, 1, 2, 3, 4, 5};
  if (name == "six-level") {
    e.labels = {"zeta1", "zeta2", "zeta3", "zeta4", "zeta5", "zeta6"};
  } else if (name == "three-qubit") {
    e.labels = {"000", "001", "010", "011", "100", "101"};
  } else if (name == "qubit-qutrit") {
    e.labels = {"00", "01", "02", "10", "11", "12"};
  } else {
    throw std::invalid_argument(
        "encoding_table: unknown encoding '" + name +
        "' (valid: six-level, three-qubit, qubit-qutrit)");
  }
  return e;
}

// Reindex an operator on the canonical zeta basis into encoded labels, and
// back. Pure permutations of entries, hence exact.
template <typename Scalar>
Matrix6c<Scalar> encode_operator(const Matrix6c<Scalar>& w, const CoinBasisEncoding& e) {
  Matrix6c<Scalar> out;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      out(i, j) = w(e.to_zeta[i], e.to_zeta[j]);
  return out;
}

template <typename Scalar>
Matrix6c<Scalar> decode_operator(const Matrix6c<Scalar>& w, const CoinBasisEncoding& e) {
  Matrix6c<Scalar> out;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      out(e.to_zeta[i], e.to_zeta[j]) = w(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Position-lattice oracle. Sites x in {-N, ..., N} on a ring (x = N + 1 is
// identified with -N); states are 6 x (2N+1) amplitude arrays, row = coin
// component, column index i = x + N.

struct LatticeSpec {
  int half_size = 1;  // N
};

template <typename Scalar>
MatrixXc<Scalar> lattice_step(const MatrixXc<Scalar>& state,
                              const std::array<Scalar, 3>& theta,
                              const LatticeSpec& lat) {
  if (lat.half_size < 1)
    throw std::invalid_argument("lattice_step: half_size must be >= 1");
  const Eigen::Index sites = 2 * static_cast<Eigen::Index>(lat.half_size) + 1;
  if (state.rows() != 6 || state.cols() != sites) {
    std::ostringstream os;
    os << "lattice_step: state is " << state.rows() << "x" << state.cols()
       << ", expected 6x" << sites;
    throw std::invalid_argument(os.str());
  }
  if (std::abs(state.norm() - Scalar(1)) > Scalar(1e-10)) {
    std::ostringstream os;
    os << "lattice_step: state norm is " << state.norm()
       << ", expected 1 within 1e-10";
    throw std::invalid_argument(os.str());
  }

  MatrixXc<Scalar> rotated(6, sites);
  for (int j = 0; j < 3; ++j) {
    const Scalar c = std::cos(theta[static_cast<size_t>(j)]);
    const Scalar s = std::sin(theta[static_cast<size_t>(j)]);
    rotated.row(2 * j) = c * state.row(2 * j) + s * state.row(2 * j + 1);
    rotated.row(2 * j + 1) = -s * state.row(2 * j) + c * state.row(2 * j + 1);
  }

  MatrixXc<Scalar> out(6, sites);
  for (int r = 0; r < 6; r += 2) {  // up components move x -> x + 1
    out.row(r).segment(1, sites - 1) = rotated.row(r).segment(0, sites - 1);
    out(r, 0) = rotated(r, sites - 1);
  }
  for (int r = 1; r < 6; r += 2) {  // down components move x -> x - 1
    out.row(r).segment(0, sites - 1) = rotated.row(r).segment(1, sites - 1);
    out(r, sites - 1) = rotated(r, 0);
  }
  return out;
}

}  // namespace nuwalk
