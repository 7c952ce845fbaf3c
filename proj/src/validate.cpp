#include "nuwalk/validate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "nuwalk/numerics.hpp"
#include "nuwalk/oscillation.hpp"
#include "nuwalk/pmns.hpp"
#include "nuwalk/types.hpp"
#include "nuwalk/walk.hpp"
#include "nuwalk/wavepacket.hpp"

namespace nuwalk {

namespace {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

MatrixXcd random_complex(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cd(u(rng), u(rng));
  return m;
}

MatrixXcd random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const MatrixXcd b = random_complex(rng, n);
  return (b + b.adjoint()) / 2.0;
}

MatrixXcd random_density(std::mt19937_64& rng, Eigen::Index n) {
  const MatrixXcd b = random_complex(rng, n);
  MatrixXcd g = b * b.adjoint();
  return g / g.trace().real();
}

MatrixXcd random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<MatrixXcd> qr(random_complex(rng, n));
  return MatrixXcd(qr.householderQ());
}

MixingParams<double> survey_mixing() {
  MixingParams<double> m;
  m.theta12 = 0.5836;
  m.theta13 = 0.1485;
  m.theta23 = 0.7954;
  return m;
}

MixingParams<double> random_mixing(std::mt19937_64& rng, bool with_phases) {
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  MixingParams<double> m;
  m.theta12 = ang(rng);
  m.theta13 = ang(rng);
  m.theta23 = ang(rng);
  if (with_phases) {
    m.delta = ang(rng);
    m.alpha1 = ang(rng);
    m.alpha2 = ang(rng);
  }
  return m;
}

void add(std::vector<SuiteResult>& out, const std::string& name, double measured,
         double tolerance) {
  out.push_back({name, measured, tolerance, measured <= tolerance});
}

// --- numerics ---------------------------------------------------------------

void numerics_suites(std::vector<SuiteResult>& out) {
  std::mt19937_64 rng(101);
  double round_trip = 0, ortho = 0;
  for (Eigen::Index n : {2, 3, 6, 17, 64}) {
    for (int rep = 0; rep < 3; ++rep) {
      const MatrixXcd a = random_hermitian(rng, n);
      const auto es = hermitian_eigensystem(a);
      const MatrixXcd recon = es.eigenvectors *
                              es.eigenvalues.asDiagonal().toDenseMatrix().cast<cd>() *
                              es.eigenvectors.adjoint();
      round_trip = std::max(round_trip, (recon - a).cwiseAbs().maxCoeff());
      ortho = std::max(
          ortho, (es.eigenvectors.adjoint() * es.eigenvectors - MatrixXcd::Identity(n, n))
                     .cwiseAbs()
                     .maxCoeff());
    }
  }
  add(out, "numerics.eigensystem_round_trip", round_trip, 1e-10);
  add(out, "numerics.eigenvector_orthonormality", ortho, 1e-10);

  std::mt19937_64 rng2(102);
  double invariance = 0;
  for (Eigen::Index n : {2, 3, 6, 12}) {
    for (int rep = 0; rep < 3; ++rep) {
      const MatrixXcd rho = random_density(rng2, n);
      const MatrixXcd u = random_unitary(rng2, n);
      const double s0 = von_neumann_entropy(rho);
      const double s1 = von_neumann_entropy((u * rho * u.adjoint()).eval());
      invariance = std::max(invariance, std::abs(s1 - s0));
    }
  }
  add(out, "numerics.entropy_unitary_invariance", invariance, 1e-9);
}

// --- pmns -------------------------------------------------------------------

void pmns_suites(std::vector<SuiteResult>& out) {
  std::mt19937_64 rng(201);
  double unit = 0, norms = 0, det = 0, moduli = 0;
  for (int rep = 0; rep < 200; ++rep) {
    MixingParams<double> m = random_mixing(rng, true);
    const auto u = build_pmns(m);
    unit = std::max(unit, unitarity_defect(u));
    for (int i = 0; i < 3; ++i) {
      norms = std::max(norms, std::abs(u.row(i).norm() - 1.0));
      norms = std::max(norms, std::abs(u.col(i).norm() - 1.0));
    }
    det = std::max(det, std::abs(std::abs(u.determinant()) - 1.0));

    MixingParams<double> bare = m;
    bare.alpha1 = 0;
    bare.alpha2 = 0;
    moduli = std::max(
        moduli, (u.cwiseAbs() - build_pmns(bare).cwiseAbs()).cwiseAbs().maxCoeff());
  }
  add(out, "pmns.unitarity", unit, 1e-12);
  add(out, "pmns.row_col_norms", norms, 1e-12);
  add(out, "pmns.det_modulus", det, 1e-12);
  add(out, "pmns.majorana_moduli_invariance", moduli, 1e-15);

  std::mt19937_64 rng2(202);
  double imag = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto u = build_pmns(random_mixing(rng2, false));
    imag = std::max(imag, u.imag().cwiseAbs().maxCoeff());
  }
  add(out, "pmns.real_when_cp_trivial", imag, 1e-15);
}

// --- walk -------------------------------------------------------------------

void walk_suites(std::vector<SuiteResult>& out) {
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);

  std::mt19937_64 rng(301);
  double unit = 0;
  for (int rep = 0; rep < 500; ++rep) {
    WalkParams<double> p;
    p.theta = {ang(rng), ang(rng), ang(rng)};
    p.ktilde = ang(rng);
    unit = std::max(unit, unitarity_defect(six_level_walk(p)));
  }
  add(out, "walk.unitarity", unit, 1e-14);

  std::mt19937_64 rng2(302);
  double residual = 0, normdef = 0, eig = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const double theta = ang(rng2), k = ang(rng2);
    MassEigenmode<double> m;
    try {
      m = mass_eigenmode(1, theta, k);
    } catch (const degenerate_mode_error&) {
      continue;
    }
    const Matrix2c<double> w = walk_block(theta, k);
    Vector2c<double> v;
    v << m.f, m.g;
    residual = std::max(residual,
                        (w * v - std::polar(1.0, -m.phase) * v).norm());
    normdef = std::max(normdef, std::abs(std::norm(m.f) + std::norm(m.g) - 1.0));

    Eigen::ComplexEigenSolver<Matrix2c<double>> es(w);
    const cd lam0 = std::polar(1.0, -m.phase), lam1 = std::polar(1.0, m.phase);
    const cd s0 = es.eigenvalues()[0], s1 = es.eigenvalues()[1];
    const double pairing = std::min(
        std::max(std::abs(s0 - lam0), std::abs(s1 - lam1)),
        std::max(std::abs(s0 - lam1), std::abs(s1 - lam0)));
    eig = std::max(eig, pairing);
  }
  add(out, "walk.eigenmode_residual", residual, 1e-12);
  add(out, "walk.eigenmode_normalization", normdef, 1e-12);
  add(out, "walk.dispersion_eigenvalue_agreement", eig, 1e-13);

  std::mt19937_64 rng3(303);
  {
    const int half = 25;
    const Eigen::Index sites = 2 * half + 1;
    const std::array<double, 3> theta{ang(rng3), ang(rng3), ang(rng3)};
    Vector6c<double> chi;
    for (int i = 0; i < 6; ++i) {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      chi[i] = cd(u(rng3), u(rng3));
    }
    chi.normalize();
    const long n = 50;
    double defect = 0;
    for (long mom = -half; mom <= half; ++mom) {
      const double k = 2 * M_PI * static_cast<double>(mom) / static_cast<double>(sites);
      MatrixXc<double> psi(6, sites);
      for (Eigen::Index x = -half; x <= half; ++x)
        psi.col(x + half) =
            chi * std::polar(1.0 / std::sqrt(static_cast<double>(sites)),
                             k * static_cast<double>(x));
      for (long step = 0; step < n; ++step)
        psi = lattice_step(psi, theta, LatticeSpec{half});

      FlavorState<double> st;
      st.amplitudes = chi;
      st.ktilde = k;
      WalkParams<double> wp;
      wp.theta = theta;
      wp.ktilde = k;
      const Vector6c<double> evolved = evolve(st, wp, n).amplitudes;
      for (Eigen::Index x = -half; x <= half; ++x) {
        const Vector6c<double> expect =
            evolved * std::polar(1.0 / std::sqrt(static_cast<double>(sites)),
                                 k * static_cast<double>(x));
        defect = std::max(defect,
                          (psi.col(x + half) - expect).cwiseAbs().maxCoeff());
      }
    }
    add(out, "walk.fourier_equivalence", defect, 1e-10);
  }

  std::mt19937_64 rng4(304);
  {
    double defect = 0;
    WalkParams<double> p;
    p.theta = {ang(rng4), ang(rng4), ang(rng4)};
    p.ktilde = ang(rng4);
    const auto w6 = six_level_walk(p);
    for (const char* name : {"six-level", "three-qubit", "qubit-qutrit"}) {
      const auto enc = encoding_table(name);
      const auto encoded = encode_operator(w6, enc);
      defect = std::max(defect, (decode_operator(encoded, enc) - w6).cwiseAbs().maxCoeff());
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          defect = std::max(defect,
                            std::abs(encoded(i, j) - w6(enc.to_zeta[static_cast<size_t>(i)],
                                                        enc.to_zeta[static_cast<size_t>(j)])));
    }
    add(out, "walk.encoding_conjugation", defect, 0.0);
  }

  std::mt19937_64 rng5(305);
  {
    const int half = 50;
    const Eigen::Index sites = 2 * half + 1;
    const std::array<double, 3> theta{0.001, 0.00615654, 0.0664688};
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    MatrixXc<double> psi(6, sites);
    for (Eigen::Index i = 0; i < 6; ++i)
      for (Eigen::Index x = 0; x < sites; ++x) psi(i, x) = cd(amp(rng5), amp(rng5));
    psi /= psi.norm();
    double defect = 0;
    for (int step = 1; step <= 10000; ++step) {
      psi = lattice_step(psi, theta, LatticeSpec{half});
      if (step % 1000 == 0) defect = std::max(defect, std::abs(psi.norm() - 1.0));
    }
    add(out, "walk.lattice_norm_preservation", defect, 1e-10);
  }
}

// --- oscillation ------------------------------------------------------------

void oscillation_suites(std::vector<SuiteResult>& out) {
  {
    const PmnsMatrix<double> u = build_pmns(survey_mixing());
    WalkParams<double> p;
    p.theta = {0.001, 0.00615654, 0.0664688};
    p.ktilde = 0.01;
    double defect = 0;
    for (long n = 0; n <= 10000; ++n) {
      double sum = 0;
      for (int b = 0; b < 3; ++b)
        sum += transition_probability(Flavor::e, static_cast<Flavor>(b), u, p, n);
      defect = std::max(defect, std::abs(sum - 1.0));
    }
    add(out, "oscillation.probability_conservation", defect, 1e-12);
  }

  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  std::mt19937_64 rng(401);
  {
    double defect = 0;
    std::uniform_int_distribution<long> nsteps(0, 5000);
    for (int rep = 0; rep < 100; ++rep) {
      const auto u = build_pmns(random_mixing(rng, false));
      const std::array<double, 3> phases{ang(rng), ang(rng), ang(rng)};
      const long n = nsteps(rng);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double pab = phase_interference_probability(
              static_cast<Flavor>(a), static_cast<Flavor>(b), u, phases, n);
          const double pba = phase_interference_probability(
              static_cast<Flavor>(b), static_cast<Flavor>(a), u, phases, n);
          defect = std::max(defect, std::abs(pab - pba));
        }
    }
    add(out, "oscillation.reciprocity_real_mixing", defect, 1e-12);
  }

  std::mt19937_64 rng2(402);
  {
    // quartic expansion with pair phases X_jr = n (phi_j - phi_r) / 2,
    // written independently of the amplitude-sum path
    double defect = 0;
    std::uniform_real_distribution<double> ph(0.0, M_PI / 2);
    std::uniform_int_distribution<long> nsteps(1, 4500);
    for (int rep = 0; rep < 100; ++rep) {
      MixingParams<double> m = random_mixing(rng2, false);
      m.delta = ang(rng2);
      const auto u = build_pmns(m);
      const std::array<double, 3> phases{ph(rng2), ph(rng2), ph(rng2)};
      const long n = nsteps(rng2);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double walk = phase_interference_probability(
              static_cast<Flavor>(a), static_cast<Flavor>(b), u, phases, n);
          double quartic = a == b ? 1.0 : 0.0;
          const std::array<std::array<int, 2>, 3> pairs{{{1, 0}, {2, 0}, {2, 1}}};
          for (const auto& pr : pairs) {
            const int j = pr[0], r = pr[1];
            const cd q = std::conj(u(a, j)) * u(b, j) * u(a, r) * std::conj(u(b, r));
            const double x = static_cast<double>(n) *
                             (phases[static_cast<size_t>(j)] -
                              phases[static_cast<size_t>(r)]) / 2.0;
            quartic += -4.0 * q.real() * std::sin(x) * std::sin(x) +
                       2.0 * q.imag() * std::sin(2 * x);
          }
          defect = std::max(defect, std::abs(walk - quartic));
        }
    }
    add(out, "oscillation.pair_phase_identity", defect, 1e-10);
  }

  std::mt19937_64 rng3(403);
  {
    double defect = 0;
    std::uniform_int_distribution<long> nsteps(0, 5000);
    for (int rep = 0; rep < 100; ++rep) {
      const auto u = build_pmns(random_mixing(rng3, true));
      const std::array<double, 3> phases{ang(rng3), ang(rng3), ang(rng3)};
      const double shift = ang(rng3);
      const std::array<double, 3> shifted{phases[0] + shift, phases[1] + shift,
                                          phases[2] + shift};
      const long n = nsteps(rng3);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          defect = std::max(
              defect,
              std::abs(phase_interference_probability(static_cast<Flavor>(a),
                                                      static_cast<Flavor>(b), u,
                                                      phases, n) -
                       phase_interference_probability(static_cast<Flavor>(a),
                                                      static_cast<Flavor>(b), u,
                                                      shifted, n)));
    }
    // evaluated at phase arguments up to n*pi, where sin/cos carry ~n*eps
    add(out, "oscillation.global_phase_invariance", defect, 1e-11);
  }

  std::mt19937_64 rng4(404);
  {
    double defect = 0;
    std::uniform_real_distribution<double> dm21(1e-5, 1e-3), dm32(1e-4, 5e-3);
    std::uniform_real_distribution<double> energy(0.5, 5.0), baseline(0.0, 10000.0);
    for (int rep = 0; rep < 100; ++rep) {
      const auto u = build_pmns(random_mixing(rng4, true));
      PhysicalParams<double> phys;
      phys.dm21_sq = dm21(rng4);
      phys.dm32_sq = dm32(rng4);
      phys.dm31_sq = phys.dm21_sq + phys.dm32_sq;
      phys.energy_gev = energy(rng4);
      phys.baseline_km = baseline(rng4);
      for (int a = 0; a < 3; ++a) {
        double sum = 0;
        for (int b = 0; b < 3; ++b)
          sum += continuum_probability(static_cast<Flavor>(a), static_cast<Flavor>(b),
                                       u, phys);
        defect = std::max(defect, std::abs(sum - 1.0));
      }
    }
    add(out, "oscillation.continuum_conservation", defect, 1e-12);
  }
}

// --- wavepacket -------------------------------------------------------------

void wavepacket_suites(std::vector<SuiteResult>& out) {
  const PmnsMatrix<double> u = build_pmns(survey_mixing());
  const std::array<double, 3> theta{0.001, 0.00615654, 0.0664688};

  std::mt19937_64 rng(501);
  {
    double defect = 0;
    std::uniform_real_distribution<double> k0(-0.5, 0.5), xi(0.0, 500.0);
    std::uniform_int_distribution<int> cells(1, 300);
    for (int rep = 0; rep < 50; ++rep) {
      WavepacketSpec<double> spec;
      spec.ktilde0 = k0(rng);
      spec.spacing = 0.001;
      spec.epsilon = cells(rng) * spec.spacing;
      spec.xi = xi(rng);
      const auto p = gaussian_amplitudes(spec);
      defect = std::max(defect, std::abs(p.squaredNorm() - 1.0));
    }
    add(out, "wavepacket.amplitude_normalization", defect, 1e-12);
  }

  {
    double defect = 0;
    for (double mult : {10.0, 20.0, 15.5, 1.0, 150.0}) {
      WavepacketSpec<double> spec;
      spec.ktilde0 = 0.01;
      spec.spacing = 0.001;
      spec.epsilon = mult * spec.spacing;
      spec.xi = 100.0;
      const auto o = grid_offsets(spec);
      const Eigen::Index m = o.size();
      for (Eigen::Index i = 0; i < m; ++i)
        defect = std::max(defect, std::abs(o[i] + o[m - 1 - i]));
      const auto p = gaussian_amplitudes(spec);
      for (Eigen::Index i = 0; i < m; ++i)
        defect = std::max(defect, std::abs(p[i] - p[m - 1 - i]));
    }
    add(out, "wavepacket.grid_symmetry", defect, 0.0);
  }

  {
    const WavepacketSpec<double> spec{0.01, 0.05, 100.0, 0.001};
    const WavepacketEvolution<double> evo(spec, u, theta, Flavor::e);
    double herm = 0, trace = 0, psd = 0, bounds = 0;
    for (long n : {0L, 100L, 999L}) {
      const auto rho = evo.coin_density(n);
      herm = std::max(herm, hermiticity_defect(rho));
      trace = std::max(trace, std::abs(rho.trace().real() - 1.0));
      const auto es = hermitian_eigensystem(rho);
      psd = std::max(psd, std::max(0.0, -es.eigenvalues.minCoeff()));
      const double s = spin_space_entropy(rho);
      bounds = std::max(bounds, std::max(-s, s - std::log(6.0)));
    }
    add(out, "wavepacket.coin_density_hermiticity", herm, 1e-12);
    add(out, "wavepacket.coin_density_trace", trace, 1e-10);
    add(out, "wavepacket.coin_density_psd_floor", psd, 1e-10);
    add(out, "wavepacket.coin_entropy_bounds", bounds, 1e-9);
  }

  {
    const WavepacketSpec<double> spec{0.01, 0.0, 100.0, 0.001};
    const WavepacketEvolution<double> evo(spec, u, theta, Flavor::e);
    double defect = 0;
    for (long n : {0L, 1L, 10L, 100L, 1000L})
      defect = std::max(defect, std::abs(spin_space_entropy(evo.coin_density(n))));
    add(out, "wavepacket.delta_packet_purity", defect, 1e-12);
  }

  {
    WalkParams<double> p;
    p.theta = theta;
    p.ktilde = 0.01;
    const WavepacketSpec<double> spec{0.01, 0.0, 100.0, 0.001};
    double defect = 0;
    for (long n : {0L, 57L, 450L})
      for (int b = 0; b < 3; ++b)
        defect = std::max(
            defect,
            std::abs(wavepacket_probability(spec, u, theta, Flavor::e,
                                            static_cast<Flavor>(b), n) -
                     transition_probability(Flavor::e, static_cast<Flavor>(b), u, p, n)));
    add(out, "wavepacket.single_point_reduction", defect, 1e-14);
  }

  {
    const WavepacketSpec<double> spec{0.01, 0.02, 100.0, 0.001};
    const WavepacketEvolution<double> evo(spec, u, theta, Flavor::e);
    double defect = 0;
    for (long n : {0L, 450L}) {
      double sum = 0;
      for (int b = 0; b < 3; ++b) sum += evo.probability(static_cast<Flavor>(b), n);
      defect = std::max(defect, std::abs(sum - 1.0));
    }
    add(out, "wavepacket.probability_conservation", defect, 1e-12);
  }

  {
    const WavepacketSpec<double> spec{0.01, 0.002, 100.0, 0.001};  // 5-point grid
    double herm = 0, bounds = 0;
    for (int probe = 0; probe < 3; ++probe) {
      const FlavorCorrelationEvolution<double> evo(spec, u, theta, Flavor::e,
                                                   static_cast<Flavor>(probe));
      for (long n : {0L, 57L, 500L}) {
        herm = std::max(herm, hermiticity_defect(evo.raw_density(n)));
        const auto d = evo.density(n);
        const double s = flavor_correlation_entropy(d);
        const double lnm = std::log(static_cast<double>(d.rho.rows()));
        bounds = std::max(bounds, std::max(-s, s - lnm));
      }
    }
    add(out, "wavepacket.flavor_density_hermiticity", herm, 1e-10);
    add(out, "wavepacket.flavor_entropy_bounds", bounds, 1e-9);
  }
}

}  // namespace

std::vector<SuiteResult> run_validation_suites() {
  std::vector<SuiteResult> out;
  numerics_suites(out);
  pmns_suites(out);
  walk_suites(out);
  oscillation_suites(out);
  wavepacket_suites(out);
  return out;
}

}  // namespace nuwalk
