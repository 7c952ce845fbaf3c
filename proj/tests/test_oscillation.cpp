#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "nuwalk/oscillation.hpp"

using namespace nuwalk;
using cd = std::complex<double>;

namespace {

// Frozen reference values from an independent high-precision evaluation,
// all at the reference walk point theta = (0.001, 0.00615654, 0.0664688),
// ktilde = 0.01.
constexpr double kPhi1 = 0.010049873962714269789;
constexpr double kPhi2 = 0.011743156361351867759;
constexpr double kPhi3 = 0.067215727765293470922;
constexpr double kRatio = 33.76037797863747276;

// Momentum-to-angle mapping constants:
constexpr double kKtilde1GeV26 = 0.015192674488095105238;   // dt = 1e-26 s
constexpr double kKtilde1GeV23 = 15.192674488095105238;     // dt = 1e-23 s
constexpr double kKtildePlanck = 8.1906746700218331361e-20; // dt = 5.3912e-44 s
constexpr double kThetaTenthEv = 1.5192674488095105238e-12; // 0.1 eV, dt = 1e-26 s
constexpr double kDtKtilde001 = 6.5821195654760747185e-27;  // ktilde = 0.01 at 1 GeV

// Coin angles solved for dm21 = 7.5e-5, dm31 = 2.457e-3 eV^2, E = 1 GeV,
// L = 40000 km over 4500 steps with theta1 = 0.001:
constexpr double kSolvedTheta2 = 0.0061566371569440657791;
constexpr double kSolvedTheta3 = 0.064756972306844676838;

WalkParams<double> reference_walk() {
  WalkParams<double> p;
  p.theta = {0.001, 0.00615654, 0.0664688};
  p.ktilde = 0.01;
  return p;
}

MixingParams<double> survey() {
  MixingParams<double> m;
  m.theta12 = 0.5836;
  m.theta13 = 0.1485;
  m.theta23 = 0.7954;
  return m;
}

PhysicalParams<double> demo_physical() {
  PhysicalParams<double> p;
  p.dm21_sq = 7.5e-5;
  p.dm31_sq = 2.457e-3;
  p.dm32_sq = p.dm31_sq - p.dm21_sq;
  p.energy_gev = 1.0;
  p.baseline_km = 40000.0;
  return p;
}

// Pair-phase form of the interference probability,
//   P = delta_ab - 4 sum_{j>r} Re(q_jr) sin^2(X_jr) + 2 sum_{j>r} Im(q_jr) sin(2 X_jr)
// with X_jr = n (phi_j - phi_r) / 2, written out independently of the library.
double pair_phase_probability(Flavor alpha, Flavor beta, const PmnsMatrix<double>& u,
                              const std::array<double, 3>& phases, long steps) {
  const int a = static_cast<int>(alpha), b = static_cast<int>(beta);
  const std::array<std::array<int, 2>, 3> pairs{{{1, 0}, {2, 0}, {2, 1}}};
  double p = (alpha == beta) ? 1.0 : 0.0;
  for (const auto& pr : pairs) {
    const int j = pr[0], r = pr[1];
    const cd q = std::conj(u(a, j)) * u(b, j) * u(a, r) * std::conj(u(b, r));
    const double x = static_cast<double>(steps) *
                     (phases[static_cast<size_t>(j)] - phases[static_cast<size_t>(r)]) / 2;
    const double sx = std::sin(x);
    p += -4.0 * q.real() * sx * sx + 2.0 * q.imag() * std::sin(2 * x);
  }
  return p;
}

template <typename Fn>
std::string thrown_message(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

constexpr std::array<Flavor, 3> kFlavors = {Flavor::e, Flavor::mu, Flavor::tau};

}  // namespace

TEST_CASE("validate_physical rejects inconsistent or unphysical parameters") {
  PhysicalParams<double> p = demo_physical();
  CHECK_NOTHROW(validate_physical(p));

  p.dm32_sq += 1e-6;
  const std::string gap = thrown_message([&] { validate_physical(p); });
  CHECK(gap.find("dm31_sq - (dm21_sq + dm32_sq)") != std::string::npos);
  CHECK(gap.find("splittings inconsistent beyond 1e-9") != std::string::npos);

  p = demo_physical();
  p.energy_gev = 0.0;
  CHECK(thrown_message([&] { validate_physical(p); }).find("energy_gev must be > 0") !=
        std::string::npos);

  p = demo_physical();
  p.baseline_km = -1.0;
  CHECK(thrown_message([&] { validate_physical(p); }).find("baseline_km must be >= 0") !=
        std::string::npos);
}

TEST_CASE("prepare_flavor with the identity mixing puts everything in one sector") {
  const auto u = build_pmns(MixingParams<double>{});
  const auto p = reference_walk();
  const auto st = prepare_flavor(Flavor::mu, u, p);
  const auto m = mass_eigenmode(2, p.theta[1], p.ktilde);
  CHECK(st.amplitudes[2] == m.f);
  CHECK(st.amplitudes[3] == m.g);
  for (int i : {0, 1, 4, 5}) CHECK(st.amplitudes[i] == cd(0));
  CHECK(std::abs(st.amplitudes.norm() - 1.0) <= 1e-15);
  CHECK(st.ktilde == p.ktilde);
}

TEST_CASE("prepared flavor states are orthonormal") {
  const auto u = build_pmns(survey());
  const auto p = reference_walk();
  std::array<FlavorState<double>, 3> st;
  for (size_t i = 0; i < 3; ++i) st[i] = prepare_flavor(kFlavors[i], u, p);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) {
      const cd ov = st[i].amplitudes.dot(st[j].amplitudes);
      CHECK(std::abs(ov - (i == j ? cd(1) : cd(0))) <= 1e-12);
    }
}

TEST_CASE("evolve at zero steps is the identity") {
  const auto u = build_pmns(survey());
  const auto p = reference_walk();
  const auto st = prepare_flavor(Flavor::e, u, p);
  const auto out = evolve(st, p, 0);
  // round trip through the eigenbasis, so identity up to rounding
  CHECK((out.amplitudes - st.amplitudes).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("evolve agrees with repeated application of the walk unitary") {
  const auto u = build_pmns(survey());
  const auto p = reference_walk();
  const auto w = six_level_walk(p);
  const auto st = prepare_flavor(Flavor::e, u, p);

  Vector6c<double> direct = st.amplitudes;
  for (int n = 0; n < 7; ++n) direct = w * direct;
  const auto spectral = evolve(st, p, 7);
  CHECK((spectral.amplitudes - direct).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("evolve handles a pure-phase sector without throwing") {
  WalkParams<double> p;
  p.theta = {0.0, 0.0, 0.0};
  p.ktilde = 0.0;
  FlavorState<double> st;
  st.amplitudes = Vector6c<double>::Zero();
  st.amplitudes[0] = cd(1);
  st.ktilde = 0.0;
  const auto out = evolve(st, p, 12);
  CHECK((out.amplitudes - st.amplitudes).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(evolve(st, p, -1), std::invalid_argument);
}

TEST_CASE("transition probabilities conserve total probability") {
  const auto u = build_pmns(survey());
  const auto p = reference_walk();
  for (long n : {0L, 1L, 57L, 450L, 4500L}) {
    for (Flavor a : kFlavors) {
      double total = 0;
      for (Flavor b : kFlavors) total += transition_probability(a, b, u, p, n);
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("transition probability is symmetric when the mixing is real") {
  const auto u = build_pmns(survey());
  const auto p = reference_walk();
  for (long n : {1L, 57L, 450L}) {
    for (Flavor a : kFlavors)
      for (Flavor b : kFlavors)
        CHECK(std::abs(transition_probability(a, b, u, p, n) -
                       transition_probability(b, a, u, p, n)) <= 1e-12);
  }
}

TEST_CASE("transition probability equals the projection onto the evolved state") {
  const auto u = build_pmns(survey());
  const auto p = reference_walk();
  for (long n : {1L, 57L, 450L}) {
    for (Flavor a : kFlavors) {
      const auto evolved = evolve(prepare_flavor(a, u, p), p, n);
      for (Flavor b : kFlavors) {
        const auto probe = prepare_flavor(b, u, p);
        const double overlap = std::norm(probe.amplitudes.dot(evolved.amplitudes));
        CHECK(std::abs(transition_probability(a, b, u, p, n) - overlap) <= 1e-13);
      }
    }
  }
}

TEST_CASE("interference probability matches the pair-phase form") {
  const std::array<double, 3> phases = {kPhi1, kPhi2, kPhi3};
  MixingParams<double> complex_mixing = survey();
  complex_mixing.delta = 0.7;
  complex_mixing.alpha1 = 0.3;
  complex_mixing.alpha2 = 1.1;
  for (const auto& u : {build_pmns(survey()), build_pmns(complex_mixing)}) {
    for (long n : {1L, 57L, 450L, 4500L})
      for (Flavor a : kFlavors)
        for (Flavor b : kFlavors) {
          const double lhs = phase_interference_probability(a, b, u, phases, n);
          const double rhs = pair_phase_probability(a, b, u, phases, n);
          CHECK(std::abs(lhs - rhs) <= 1e-13);
        }
  }
}

TEST_CASE("phase argument reproduces the standard oscillation phases") {
  CHECK(std::abs(phase_argument(2.457e-3, 1000.0, 1.0) - 3.12039) <= 1e-12);
  CHECK(std::abs(phase_argument(7.5e-5, 1000.0, 1.0) - 0.09525) <= 1e-12);
  CHECK(std::abs(phase_argument(2.382e-3, 1000.0, 1.0) - 3.02514) <= 1e-12);
  CHECK_THROWS_AS(phase_argument(1e-3, 1000.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(phase_argument(1e-3, 1000.0, -1.0), std::invalid_argument);
}

TEST_CASE("continuum probability is exactly one with no splitting or baseline") {
  const auto u = build_pmns(survey());
  PhysicalParams<double> p;
  p.energy_gev = 1.0;
  p.baseline_km = 1000.0;
  CHECK(continuum_probability(Flavor::e, Flavor::e, u, p) == 1.0);

  PhysicalParams<double> q = demo_physical();
  q.baseline_km = 0.0;
  CHECK(continuum_probability(Flavor::mu, Flavor::mu, u, q) == 1.0);
  CHECK(continuum_probability(Flavor::mu, Flavor::tau, u, q) == 0.0);
}

TEST_CASE("continuum probabilities conserve total probability") {
  const auto u = build_pmns(survey());
  PhysicalParams<double> p = demo_physical();
  for (double L : {100.0, 1000.0, 12000.0, 40000.0}) {
    p.baseline_km = L;
    for (Flavor a : kFlavors) {
      double total = 0;
      for (Flavor b : kFlavors) total += continuum_probability(a, b, u, p);
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("regime warnings flag large angles and momenta") {
  WalkParams<double> p = reference_walk();
  CHECK(dirac_regime_warnings(p).empty());

  p.theta[0] = 0.5;
  auto w = dirac_regime_warnings(p);
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("theta1") != std::string::npos);
  CHECK(w[0].find("exceeds 0.3 rad") != std::string::npos);

  p = reference_walk();
  p.ktilde = -0.6;
  w = dirac_regime_warnings(p);
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("ktilde") != std::string::npos);
}

TEST_CASE("physical mapping reproduces the frozen angle constants") {
  std::vector<std::string> warnings;
  const auto p = map_physical_to_walk<double>({0.1, 0.0, 0.0}, 1e9, 1e-26, &warnings);
  CHECK(std::abs(p.ktilde - kKtilde1GeV26) <= 1e-16);
  CHECK(std::abs(p.theta[0] - kThetaTenthEv) / kThetaTenthEv <= 1e-15);
  CHECK(p.theta[1] == 0.0);
  CHECK(p.a_meters == si::c * 1e-26);
  CHECK(p.dt_seconds == 1e-26);
  CHECK(warnings.empty());
}

TEST_CASE("physical mapping warns once the momentum leaves the linear regime") {
  std::vector<std::string> warnings;
  const auto p = map_physical_to_walk<double>({0.0, 0.0, 0.0}, 1e9, 1e-23, &warnings);
  CHECK(std::abs(p.ktilde - kKtilde1GeV23) <= 1e-13);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("ktilde") != std::string::npos);
}

TEST_CASE("physical mapping stays accurate at Planck-scale time steps") {
  const auto p = map_physical_to_walk<double>({0.0, 0.0, 0.0}, 1e9, 5.3912e-44);
  CHECK(std::abs(p.ktilde - kKtildePlanck) / kKtildePlanck <= 1e-15);
}

TEST_CASE("physical mapping rejects bad inputs") {
  CHECK_THROWS_AS(map_physical_to_walk<double>({0.1, 0.1, 0.1}, 1e9, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(map_physical_to_walk<double>({-0.1, 0.1, 0.1}, 1e9, 1e-26),
                  std::invalid_argument);
}

TEST_CASE("step frequencies match the frozen phase ratio") {
  const auto f = step_frequencies(reference_walk());
  CHECK(std::abs(f.phase[0] - kPhi1) <= 1e-15);
  CHECK(std::abs(f.phase[1] - kPhi2) <= 1e-15);
  CHECK(std::abs(f.phase[2] - kPhi3) <= 1e-15);
  CHECK(std::abs(f.ratio - kRatio) <= 1e-12);

  WalkParams<double> degenerate;
  degenerate.theta = {0.1, 0.1, 0.2};
  degenerate.ktilde = 0.01;
  CHECK(thrown_message([&] { step_frequencies(degenerate); })
            .find("frequency ratio undefined") != std::string::npos);
}

TEST_CASE("solved walk angles hit the continuum interference targets") {
  std::vector<std::string> warnings;
  const auto p = solve_walk_angles(demo_physical(), kDtKtilde001, 4500, 0.001, &warnings);
  CHECK(std::abs(p.ktilde - 0.01) <= 1e-16);
  CHECK(p.theta[0] == 0.001);
  CHECK(std::abs(p.theta[1] - kSolvedTheta2) <= 1e-11);
  CHECK(std::abs(p.theta[2] - kSolvedTheta3) <= 1e-11);
  CHECK(p.dt_seconds == kDtKtilde001);
  CHECK(p.a_meters == si::c * kDtKtilde001);
  CHECK(warnings.empty());

  // by construction the per-step phase differences scale like the splittings
  const auto f = step_frequencies(p);
  CHECK(std::abs(f.ratio - 2.457e-3 / 7.5e-5) <= 1e-6);
}

TEST_CASE("solve_walk_angles rejects unreachable targets and bad inputs") {
  PhysicalParams<double> far = demo_physical();
  far.baseline_km = 1e9;
  const std::string msg =
      thrown_message([&] { solve_walk_angles(far, kDtKtilde001, 4500, 0.001); });
  CHECK(msg.find("outside") != std::string::npos);
  CHECK(msg.find("adjust steps, baseline or dt") != std::string::npos);

  CHECK_THROWS_AS(solve_walk_angles(demo_physical(), 0.0, 4500, 0.001),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_walk_angles(demo_physical(), kDtKtilde001, 0, 0.001),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_walk_angles(demo_physical(), kDtKtilde001, 4500, -0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_walk_angles(demo_physical(), kDtKtilde001, 4500, M_PI / 2),
                  std::invalid_argument);
}
