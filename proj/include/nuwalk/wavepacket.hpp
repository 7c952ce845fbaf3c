// Gaussian momentum-space wavepackets and the two entropy diagnostics built
// on them: the coin reduced density matrix (spin-position entanglement) and
// the flavor-position correlation density matrix over the momentum grid.
//
// All grid reductions run in ascending momentum order so outputs are
// bit-stable. The sweep classes cache the per-grid-point eigenmode data once
// and evaluate any step count in O(grid) / O(grid^2), which is what makes
// multi-thousand-step entropy scans cheap.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nuwalk/numerics.hpp"
#include "nuwalk/oscillation.hpp"
#include "nuwalk/pmns.hpp"
#include "nuwalk/types.hpp"
#include "nuwalk/walk.hpp"

namespace nuwalk {

template <typename Scalar>
struct WavepacketSpec {
  Scalar ktilde0{};  // central momentum, radians
  Scalar epsilon{};  // half-width of the momentum window; 0 means delta packet
  Scalar xi{};       // Gaussian width parameter, weights e^{-xi (k-k0)^2}
  Scalar spacing{};  // grid spacing in ktilde
};

template <typename Scalar>
void validate_spec(const WavepacketSpec<Scalar>& spec) {
  for (Scalar v : {spec.ktilde0, spec.epsilon, spec.xi, spec.spacing})
    if (!std::isfinite(v))
      throw std::invalid_argument("WavepacketSpec: non-finite field");
  if (spec.xi < Scalar(0))
    throw std::invalid_argument("WavepacketSpec: xi must be >= 0");
  if (spec.epsilon == Scalar(0)) return;  // delta packet, single grid point
  if (!(spec.epsilon > Scalar(0)))
    throw std::invalid_argument("WavepacketSpec: epsilon must be >= 0");
  if (!(spec.spacing > Scalar(0)))
    throw std::invalid_argument("WavepacketSpec: spacing must be > 0");
  if (spec.epsilon < spec.spacing)
    throw std::invalid_argument("WavepacketSpec: epsilon must be >= spacing");
}

// Offsets from ktilde0: {-eps, -eps + spacing, ..., -eps + (M-1) spacing},
// M = floor(2 eps / spacing) + 1. When 2 eps is a whole number of spacings
// the upper half is mirrored from the lower half, so symmetric points carry
// bitwise-identical magnitudes and the Gaussian weights are exactly even.
template <typename Scalar>
VectorXr<Scalar> grid_offsets(const WavepacketSpec<Scalar>& spec) {
  validate_spec(spec);
  if (spec.epsilon == Scalar(0)) {
    VectorXr<Scalar> o(1);
    o[0] = Scalar(0);
    return o;
  }
  const Eigen::Index m =
      static_cast<Eigen::Index>(std::floor(2 * spec.epsilon / spec.spacing + Scalar(1e-9))) + 1;
  VectorXr<Scalar> o(m);
  const bool symmetric =
      std::abs(static_cast<Scalar>(m - 1) * spec.spacing - 2 * spec.epsilon) <
      Scalar(1e-9) * spec.spacing;
  if (symmetric) {
    for (Eigen::Index i = 0; 2 * i <= m - 1; ++i) {
      const Scalar v = static_cast<Scalar>(i) * spec.spacing - spec.epsilon;
      o[i] = v;
      o[m - 1 - i] = -v;
    }
  } else {
    for (Eigen::Index i = 0; i < m; ++i)
      o[i] = static_cast<Scalar>(i) * spec.spacing - spec.epsilon;
  }
  return o;
}

template <typename Scalar>
VectorXr<Scalar> momentum_grid(const WavepacketSpec<Scalar>& spec) {
  VectorXr<Scalar> g = grid_offsets(spec);
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] += spec.ktilde0;
  return g;
}

// p(k) = e^{-xi (k - k0)^2 / 2} / sqrt(sum_k e^{-xi (k - k0)^2}); real
// positive, sum of squares 1.
template <typename Scalar>
VectorXr<Scalar> gaussian_amplitudes(const WavepacketSpec<Scalar>& spec) {
  const VectorXr<Scalar> o = grid_offsets(spec);
  if (o.size() == 0) throw std::invalid_argument("gaussian_amplitudes: empty grid");
  VectorXr<Scalar> p(o.size());
  for (Eigen::Index i = 0; i < o.size(); ++i)
    p[i] = std::exp(-(spec.xi / 2) * o[i] * o[i]);
  const Scalar norm = std::sqrt(p.squaredNorm());
  return p / norm;
}

template <typename Scalar>
using CoinDensity = Matrix6c<Scalar>;

template <typename Scalar>
struct FlavorMomentumDensity {
  MatrixXc<Scalar> rho;  // trace-normalized Hermitization, M x M
  Scalar raw_trace{};    // trace before normalization
};

// ---------------------------------------------------------------------------
// Source-flavor wavepacket evolved in the momentum basis. A flavor state is
// a superposition of the three mass eigenmodes, so each grid point evolves by
// pure per-sector phases; the constructor caches the modes once.

template <typename Scalar>
class WavepacketEvolution {
 public:
  WavepacketEvolution(const WavepacketSpec<Scalar>& spec, const PmnsMatrix<Scalar>& u,
                      const std::array<Scalar, 3>& theta, Flavor source)
      : grid_(momentum_grid(spec)), p_(gaussian_amplitudes(spec)), u_(u), source_(source) {
    const Vector3c<Scalar> coeff = flavor_coefficients(u, source);
    modes_.resize(static_cast<size_t>(grid_.size()));
    for (Eigen::Index k = 0; k < grid_.size(); ++k) {
      for (int j = 0; j < 3; ++j) {
        try {
          const auto m = mass_eigenmode(j + 1, theta[static_cast<size_t>(j)], grid_[k]);
          auto& sm = modes_[static_cast<size_t>(k)][static_cast<size_t>(j)];
          sm.f = coeff[j] * m.f;
          sm.g = coeff[j] * m.g;
          sm.phi = m.phase;
        } catch (const degenerate_mode_error& err) {
          std::ostringstream os;
          os << "wavepacket: degenerate mode at grid point ktilde = " << grid_[k]
             << " (" << err.what() << ")";
          throw degenerate_mode_error(os.str());
        }
      }
    }
  }

  Eigen::Index size() const { return grid_.size(); }
  const VectorXr<Scalar>& grid() const { return grid_; }
  const VectorXr<Scalar>& amplitudes() const { return p_; }

  // Six coin amplitudes of grid point k after n steps.
  Vector6c<Scalar> state(Eigen::Index k, long n) const {
    const Scalar t = static_cast<Scalar>(n);
    Vector6c<Scalar> psi;
    for (int j = 0; j < 3; ++j) {
      const auto& sm = modes_[static_cast<size_t>(k)][static_cast<size_t>(j)];
      const std::complex<Scalar> ph = std::polar(Scalar(1), -t * sm.phi);
      psi[2 * j] = ph * sm.f;
      psi[2 * j + 1] = ph * sm.g;
    }
    return psi;
  }

  // rho_c(n) = sum_k p_k^2 |psi_k(n)><psi_k(n)|
  CoinDensity<Scalar> coin_density(long n) const {
    CoinDensity<Scalar> rho = CoinDensity<Scalar>::Zero();
    for (Eigen::Index k = 0; k < grid_.size(); ++k) {
      const Vector6c<Scalar> psi = state(k, n);
      rho.noalias() += (p_[k] * p_[k]) * (psi * psi.adjoint());
    }
    return rho;
  }

  // sum_k p_k^2 P_k(source -> beta, n)
  Scalar probability(Flavor beta, long n) const {
    Scalar sum = 0;
    for (Eigen::Index k = 0; k < grid_.size(); ++k) {
      const auto& sm = modes_[static_cast<size_t>(k)];
      const std::array<Scalar, 3> phases{sm[0].phi, sm[1].phi, sm[2].phi};
      sum += p_[k] * p_[k] *
             phase_interference_probability(source_, beta, u_, phases, n);
    }
    return sum;
  }

 private:
  struct SectorMode {
    std::complex<Scalar> f{}, g{};  // eigenmode spinor scaled by U*_{source j}
    Scalar phi{};
  };
  VectorXr<Scalar> grid_, p_;
  PmnsMatrix<Scalar> u_;
  Flavor source_;
  std::vector<std::array<SectorMode, 3>> modes_;
};

template <typename Scalar>
CoinDensity<Scalar> reduced_coin_density(const WavepacketSpec<Scalar>& spec,
                                         const PmnsMatrix<Scalar>& u,
                                         const std::array<Scalar, 3>& theta,
                                         Flavor alpha, long steps) {
  return WavepacketEvolution<Scalar>(spec, u, theta, alpha).coin_density(steps);
}

template <typename Scalar>
Scalar spin_space_entropy(const CoinDensity<Scalar>& rho) {
  return von_neumann_entropy(rho);
}

template <typename Scalar>
Scalar wavepacket_probability(const WavepacketSpec<Scalar>& spec,
                              const PmnsMatrix<Scalar>& u,
                              const std::array<Scalar, 3>& theta, Flavor alpha,
                              Flavor beta, long steps) {
  return WavepacketEvolution<Scalar>(spec, u, theta, alpha).probability(beta, steps);
}

// ---------------------------------------------------------------------------
// Flavor-position correlation matrix over the momentum grid,
//
//   rho_alpha[k',k''] = sum_{k,m,n} p_k^2 p_{k'} p_{k''}
//                       U*_{src n} U_{src m} U*_{alpha m} U_{alpha n}
//                       <nu^{k''}_m|nu^k_m> <nu^k_n|nu^{k'}_n>
//                       e^{-i t (phi_n(k') - phi_m(k''))},
//
// evaluated through its Gram factorization rho = sum_k p_k^2 b_k b_k^dagger
// with (b_k)_{k'} = p_{k'} sum_n U*_{src n} U_{alpha n} <nu^k_n|nu^{k'}_n>
// e^{-i t phi_n(k')}. The factorized form is one small matrix product per
// step and is Hermitian PSD by construction; the raw triple sum is kept as a
// cross-check in the test suite.

template <typename Scalar>
class FlavorCorrelationEvolution {
 public:
  FlavorCorrelationEvolution(const WavepacketSpec<Scalar>& spec,
                             const PmnsMatrix<Scalar>& u,
                             const std::array<Scalar, 3>& theta, Flavor source,
                             Flavor probe)
      : grid_(momentum_grid(spec)), p_(gaussian_amplitudes(spec)) {
    const Eigen::Index m = grid_.size();
    for (int s = 0; s < 3; ++s) {
      coeff_[static_cast<size_t>(s)] =
          std::conj(u(static_cast<int>(source), s)) * u(static_cast<int>(probe), s);
      VectorXc<Scalar> f(m), g(m);
      phi_[static_cast<size_t>(s)].resize(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        try {
          const auto mode = mass_eigenmode(s + 1, theta[static_cast<size_t>(s)], grid_[k]);
          f[k] = mode.f;
          g[k] = mode.g;
          phi_[static_cast<size_t>(s)][k] = mode.phase;
        } catch (const degenerate_mode_error& err) {
          std::ostringstream os;
          os << "flavor correlation: degenerate mode at grid point ktilde = "
             << grid_[k] << " (" << err.what() << ")";
          throw degenerate_mode_error(os.str());
        }
      }
      // ov(k, k') = <nu^k | nu^k'> = conj(f_k) f_k' + conj(g_k) g_k'
      ov_[static_cast<size_t>(s)].noalias() =
          f.conjugate() * f.transpose() + g.conjugate() * g.transpose();
    }
  }

  const VectorXr<Scalar>& grid() const { return grid_; }
  const VectorXr<Scalar>& amplitudes() const { return p_; }

  // Pre-Hermitization matrix (exactly Hermitian up to rounding already).
  MatrixXc<Scalar> raw_density(long n) const {
    const Eigen::Index m = grid_.size();
    const Scalar t = static_cast<Scalar>(n);
    MatrixXc<Scalar> b = MatrixXc<Scalar>::Zero(m, m);
    VectorXc<Scalar> colscale(m);
    for (int s = 0; s < 3; ++s) {
      for (Eigen::Index k = 0; k < m; ++k)
        colscale[k] = std::polar(Scalar(1), -t * phi_[static_cast<size_t>(s)][k]) * p_[k];
      b.noalias() += coeff_[static_cast<size_t>(s)] *
                     (ov_[static_cast<size_t>(s)] * colscale.asDiagonal());
    }
    for (Eigen::Index k = 0; k < m; ++k) b.row(k) *= p_[k];
    return (b.transpose() * b.conjugate()).eval();
  }

  FlavorMomentumDensity<Scalar> density(long n) const {
    MatrixXc<Scalar> raw = raw_density(n);
    MatrixXc<Scalar> herm = (raw + raw.adjoint().eval()) / Scalar(2);
    FlavorMomentumDensity<Scalar> out;
    out.raw_trace = herm.trace().real();
    if (!(out.raw_trace > Scalar(0)))
      throw std::runtime_error("flavor correlation: matrix trace is not positive");
    out.rho = herm / out.raw_trace;
    return out;
  }

 private:
  VectorXr<Scalar> grid_, p_;
  std::array<MatrixXc<Scalar>, 3> ov_;
  std::array<VectorXr<Scalar>, 3> phi_;
  std::array<std::complex<Scalar>, 3> coeff_;
};

template <typename Scalar>
FlavorMomentumDensity<Scalar> flavor_position_density(
    const WavepacketSpec<Scalar>& spec, const PmnsMatrix<Scalar>& u,
    const std::array<Scalar, 3>& theta, Flavor source, Flavor alpha, long steps) {
  return FlavorCorrelationEvolution<Scalar>(spec, u, theta, source, alpha).density(steps);
}

template <typename Scalar>
Scalar flavor_correlation_entropy(const FlavorMomentumDensity<Scalar>& d) {
  return von_neumann_entropy(d.rho);
}

}  // namespace nuwalk
