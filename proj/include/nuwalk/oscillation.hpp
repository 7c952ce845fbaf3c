// Flavor-state preparation, spectral time evolution, walk transition
// probabilities, the continuum three-flavor oscillation formula kept as an
// independent cross-check, and the mapping between physical neutrino
// parameters and walk parameters.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nuwalk/pmns.hpp"
#include "nuwalk/types.hpp"
#include "nuwalk/walk.hpp"

namespace nuwalk {

template <typename Scalar>
struct PhysicalParams {
  Scalar dm21_sq{};     // mass-squared splittings, eV^2
  Scalar dm31_sq{};
  Scalar dm32_sq{};
  Scalar energy_gev{};  // beam energy
  Scalar baseline_km{};
};

template <typename Scalar>
void validate_physical(const PhysicalParams<Scalar>& p) {
  for (Scalar v : {p.dm21_sq, p.dm31_sq, p.dm32_sq, p.energy_gev, p.baseline_km})
    if (!std::isfinite(v))
      throw std::invalid_argument("PhysicalParams: non-finite field");
  const Scalar gap = std::abs(p.dm31_sq - (p.dm21_sq + p.dm32_sq));
  if (gap > Scalar(1e-9)) {
    std::ostringstream os;
    os << "PhysicalParams: dm31_sq - (dm21_sq + dm32_sq) = " << gap
       << " eV^2, splittings inconsistent beyond 1e-9";
    throw std::invalid_argument(os.str());
  }
  if (!(p.energy_gev > Scalar(0)))
    throw std::invalid_argument("PhysicalParams: energy_gev must be > 0");
  if (p.baseline_km < Scalar(0))
    throw std::invalid_argument("PhysicalParams: baseline_km must be >= 0");
}

template <typename Scalar>
struct FlavorState {
  Vector6c<Scalar> amplitudes;  // over zeta_1..zeta_6, unit norm
  Scalar ktilde{};
};

// |nu_alpha> = sum_j U*_{alpha j} |nu_j>, each mass eigenmode embedded in
// its own two-component sector.
template <typename Scalar>
FlavorState<Scalar> prepare_flavor(Flavor alpha, const PmnsMatrix<Scalar>& u,
                                   const WalkParams<Scalar>& p) {
  const Vector3c<Scalar> coeff = flavor_coefficients(u, alpha);
  FlavorState<Scalar> st;
  st.ktilde = p.ktilde;
  st.amplitudes = Vector6c<Scalar>::Zero();
  for (int j = 0; j < 3; ++j) {
    const auto m = mass_eigenmode(j + 1, p.theta[static_cast<size_t>(j)], p.ktilde);
    st.amplitudes[2 * j] = coeff[j] * m.f;
    st.amplitudes[2 * j + 1] = coeff[j] * m.g;
  }
  return st;
}

// n steps of the walk applied spectrally: each sector is resolved onto its
// two eigenmodes, whose amplitudes pick up e^{-i n phi} and e^{+i n phi}.
// A sector whose block is a pure phase (sin phi = 0, e.g. theta = ktilde = 0)
// is handled as the scalar it is, so this never throws.
template <typename Scalar>
FlavorState<Scalar> evolve(const FlavorState<Scalar>& st, const WalkParams<Scalar>& p,
                           long steps) {
  if (steps < 0) throw std::invalid_argument("evolve: steps must be >= 0");
  FlavorState<Scalar> out = st;
  const Scalar n = static_cast<Scalar>(steps);
  for (int j = 0; j < 3; ++j) {
    const Scalar theta = p.theta[static_cast<size_t>(j)];
    const Scalar s = std::sin(theta), c = std::cos(theta);
    const Scalar sk = std::sin(p.ktilde);
    if (std::hypot(s, c * sk) == Scalar(0)) {
      const Scalar phi = dispersion_phase(theta, p.ktilde);  // 0 or pi
      const std::complex<Scalar> ph = std::polar(Scalar(1), -n * phi);
      out.amplitudes[2 * j] *= ph;
      out.amplitudes[2 * j + 1] *= ph;
      continue;
    }
    const auto m = mass_eigenmode(j + 1, theta, p.ktilde);
    Vector2c<Scalar> v;
    v << m.f, m.g;
    const Vector2c<Scalar> w = partner_spinor(m);
    const Vector2c<Scalar> psi = st.amplitudes.template segment<2>(2 * j);
    const std::complex<Scalar> a = v.dot(psi);  // Eigen dot conjugates the left argument
    const std::complex<Scalar> b = w.dot(psi);
    const Vector2c<Scalar> res = a * std::polar(Scalar(1), -n * m.phase) * v +
                                 b * std::polar(Scalar(1), n * m.phase) * w;
    out.amplitudes[2 * j] = res[0];
    out.amplitudes[2 * j + 1] = res[1];
  }
  return out;
}

// P(alpha -> beta, n) for a given triple of per-step phases:
// |sum_j U*_{alpha j} U_{beta j} e^{-i n phi_j}|^2.
template <typename Scalar>
Scalar phase_interference_probability(Flavor alpha, Flavor beta,
                                      const PmnsMatrix<Scalar>& u,
                                      const std::array<Scalar, 3>& phases,
                                      long steps) {
  const int a = static_cast<int>(alpha), b = static_cast<int>(beta);
  const Scalar n = static_cast<Scalar>(steps);
  std::complex<Scalar> amp(0);
  for (int j = 0; j < 3; ++j)
    amp += std::conj(u(a, j)) * u(b, j) *
           std::polar(Scalar(1), -n * phases[static_cast<size_t>(j)]);
  const Scalar p = std::norm(amp);
  return std::min(Scalar(1), std::max(Scalar(0), p));
}

template <typename Scalar>
Scalar transition_probability(Flavor alpha, Flavor beta, const PmnsMatrix<Scalar>& u,
                              const WalkParams<Scalar>& p, long steps) {
  if (steps < 0) throw std::invalid_argument("transition_probability: steps must be >= 0");
  std::array<Scalar, 3> phases{};
  for (int j = 0; j < 3; ++j)
    phases[static_cast<size_t>(j)] = dispersion_phase(p.theta[static_cast<size_t>(j)], p.ktilde);
  return phase_interference_probability(alpha, beta, u, phases, steps);
}

// 1.27 * dm^2(eV^2) * L(km) / E(GeV), the standard oscillation phase.
template <typename Scalar>
Scalar phase_argument(Scalar dm_sq, Scalar baseline_km, Scalar energy_gev) {
  if (!(energy_gev > Scalar(0)))
    throw std::invalid_argument("phase_argument: energy_gev must be > 0");
  return Scalar(1.27) * dm_sq * baseline_km / energy_gev;
}

// Continuum three-flavor formula:
//   P = delta_ab - 4 sum_{j>r} Re(q_jr) sin^2(X_jr) + 2 sum_{j>r} Im(q_jr) sin(2 X_jr)
// with q_jr = U*_{aj} U_{bj} U_{ar} U*_{br} and X_jr = 1.27 dm_jr^2 L / E.
template <typename Scalar>
Scalar continuum_probability(Flavor alpha, Flavor beta, const PmnsMatrix<Scalar>& u,
                             const PhysicalParams<Scalar>& phys) {
  validate_physical(phys);
  const int a = static_cast<int>(alpha), b = static_cast<int>(beta);
  const std::array<std::array<int, 2>, 3> pairs{{{1, 0}, {2, 0}, {2, 1}}};
  const std::array<Scalar, 3> dm{phys.dm21_sq, phys.dm31_sq, phys.dm32_sq};
  Scalar p = (alpha == beta) ? Scalar(1) : Scalar(0);
  for (size_t t = 0; t < 3; ++t) {
    const int j = pairs[t][0], r = pairs[t][1];
    const std::complex<Scalar> q =
        std::conj(u(a, j)) * u(b, j) * u(a, r) * std::conj(u(b, r));
    const Scalar x = phase_argument(dm[t], phys.baseline_km, phys.energy_gev);
    const Scalar sx = std::sin(x);
    p += Scalar(-4) * q.real() * sx * sx + Scalar(2) * q.imag() * std::sin(2 * x);
  }
  return std::min(Scalar(1), std::max(Scalar(0), p));
}

// Warnings when parameters leave the small-angle regime where the walk
// matches the continuum dispersion.
template <typename Scalar>
std::vector<std::string> dirac_regime_warnings(const WalkParams<Scalar>& p) {
  std::vector<std::string> w;
  for (int j = 0; j < 3; ++j)
    if (std::abs(p.theta[static_cast<size_t>(j)]) > Scalar(0.3)) {
      std::ostringstream os;
      os << "theta" << (j + 1) << " = " << p.theta[static_cast<size_t>(j)]
         << " rad exceeds 0.3 rad, outside the small-angle regime";
      w.push_back(os.str());
    }
  if (std::abs(p.ktilde) > Scalar(0.3)) {
    std::ostringstream os;
    os << "ktilde = " << p.ktilde
       << " rad exceeds 0.3 rad, outside the small-angle regime";
    w.push_back(os.str());
  }
  return w;
}

// theta_j = m_j c^2 dt / hbar, ktilde = k c dt / hbar. Masses are rest
// energies m c^2 in eV, momentum is k c in eV.
template <typename Scalar>
WalkParams<Scalar> map_physical_to_walk(const std::array<Scalar, 3>& masses_ev,
                                        Scalar momentum_ev, Scalar dt_seconds,
                                        std::vector<std::string>* warnings = nullptr) {
  if (!(dt_seconds > Scalar(0)))
    throw std::invalid_argument("map_physical_to_walk: dt_seconds must be > 0");
  for (Scalar m : masses_ev)
    if (!(m >= Scalar(0)))
      throw std::invalid_argument("map_physical_to_walk: masses must be >= 0");
  const Scalar rad_per_ev = Scalar(si::eV) * dt_seconds / Scalar(si::hbar);
  WalkParams<Scalar> p;
  for (size_t j = 0; j < 3; ++j) p.theta[j] = masses_ev[j] * rad_per_ev;
  p.ktilde = momentum_ev * rad_per_ev;
  p.dt_seconds = dt_seconds;
  p.a_meters = Scalar(si::c) * dt_seconds;
  if (warnings) {
    auto w = dirac_regime_warnings(p);
    warnings->insert(warnings->end(), w.begin(), w.end());
  }
  return p;
}

template <typename Scalar>
struct StepFrequencies {
  std::array<Scalar, 3> phase{};  // phi_j, radians per step
  Scalar ratio{};                 // (phi_3 - phi_1) / (phi_2 - phi_1)
};

template <typename Scalar>
StepFrequencies<Scalar> step_frequencies(const WalkParams<Scalar>& p) {
  StepFrequencies<Scalar> f;
  for (int j = 0; j < 3; ++j)
    f.phase[static_cast<size_t>(j)] =
        dispersion_phase(p.theta[static_cast<size_t>(j)], p.ktilde);
  const Scalar d21 = f.phase[1] - f.phase[0];
  if (!(std::abs(d21) > Scalar(0)))
    throw std::invalid_argument(
        "step_frequencies: phi_2 equals phi_1, frequency ratio undefined");
  f.ratio = (f.phase[2] - f.phase[0]) / d21;
  return f;
}

// Choose coin angles so that n steps of the walk accumulate the same
// interference phases as the continuum formula at the given baseline:
//   theta_1 is anchored, ktilde = E dt / hbar, and theta_2, theta_3 are
//   solved (bisection, monotone dispersion) from
//   steps * (phi_j - phi_1) / 2 = 1.27 dm_j1^2 L / E.
template <typename Scalar>
WalkParams<Scalar> solve_walk_angles(const PhysicalParams<Scalar>& phys,
                                     Scalar dt_seconds, long steps, Scalar theta1,
                                     std::vector<std::string>* warnings = nullptr) {
  validate_physical(phys);
  if (!(dt_seconds > Scalar(0)))
    throw std::invalid_argument("solve_walk_angles: dt_seconds must be > 0");
  if (steps < 1) throw std::invalid_argument("solve_walk_angles: steps must be >= 1");
  if (!(theta1 >= Scalar(0)) || !(theta1 < Scalar(M_PI / 2)))
    throw std::invalid_argument("solve_walk_angles: theta1 must be in [0, pi/2)");

  WalkParams<Scalar> p;
  p.dt_seconds = dt_seconds;
  p.a_meters = Scalar(si::c) * dt_seconds;
  p.ktilde = phys.energy_gev * Scalar(1e9) * Scalar(si::eV) * dt_seconds / Scalar(si::hbar);
  p.theta[0] = theta1;
  const Scalar phi1 = dispersion_phase(theta1, p.ktilde);
  const Scalar n = static_cast<Scalar>(steps);

  const std::array<Scalar, 2> dm{phys.dm21_sq, phys.dm31_sq};
  for (int j = 0; j < 2; ++j) {
    const Scalar target =
        phi1 + Scalar(2) * phase_argument(dm[static_cast<size_t>(j)], phys.baseline_km,
                                          phys.energy_gev) / n;
    const Scalar lo_phi = dispersion_phase(Scalar(0), p.ktilde);
    if (target < lo_phi || target > Scalar(M_PI / 2)) {
      std::ostringstream os;
      os << "solve_walk_angles: target dispersion phase " << target
         << " for sector " << (j + 2) << " is outside [" << lo_phi << ", pi/2]"
         << "; adjust steps, baseline or dt";
      throw std::invalid_argument(os.str());
    }
    Scalar lo = 0, hi = Scalar(M_PI / 2);
    while (hi - lo > Scalar(1e-12)) {
      const Scalar mid = (lo + hi) / 2;
      if (dispersion_phase(mid, p.ktilde) < target) lo = mid;
      else hi = mid;
    }
    p.theta[static_cast<size_t>(j) + 1] = (lo + hi) / 2;
  }
  if (warnings) {
    auto w = dirac_regime_warnings(p);
    warnings->insert(warnings->end(), w.begin(), w.end());
  }
  return p;
}

}  // namespace nuwalk
