#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fidsus/models.hpp"
#include "fidsus/spectral.hpp"

using namespace fidsus;

namespace {

constexpr double kPi = std::numbers::pi;

RealMatrix random_bands(int n, int w, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  RealMatrix bands = RealMatrix::Zero(w + 1, n);
  for (int d = 0; d <= w; ++d)
    for (int i = 0; i + d < n; ++i) bands(d, i) = dist(gen);
  return bands;
}

void check_spectrum_quality(const HermitianMatrix& h, const Spectrum& s, double tol) {
  const Index n = h.dimension();
  REQUIRE(s.energies.size() == n);
  REQUIRE(s.states.rows() == n);
  REQUIRE(s.states.cols() == n);
  for (Index k = 0; k + 1 < n; ++k) CHECK(s.energies[k] <= s.energies[k + 1]);

  const double scale = std::max(1.0, h.infinity_norm());
  const ComplexMatrix gram = s.states.adjoint() * s.states;
  CHECK((gram - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  for (Index k = 0; k < n; ++k) {
    const ComplexVector r = h.apply(s.states.col(k)) - s.energies[k] * s.states.col(k);
    CHECK(r.norm() < tol * scale);
  }
}

}  // namespace

TEST_CASE("dense factory rejects non-Hermitian and non-square input") {
  ComplexMatrix bad(2, 2);
  bad << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(HermitianMatrix::dense(bad), std::invalid_argument);
  CHECK_THROWS_AS(HermitianMatrix::dense(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
  ComplexMatrix ok(2, 2);
  ok << 1.0, Complex(0.0, 2.0), Complex(0.0, -2.0), -1.0;
  CHECK_NOTHROW(HermitianMatrix::dense(ok));
}

TEST_CASE("band storage round trip, apply, and norms") {
  RealMatrix bands(2, 3);
  bands << 1.0, 2.0, 3.0, 4.0, 5.0, 0.0;
  const HermitianMatrix h = HermitianMatrix::banded_real(bands);
  CHECK(h.banded());
  CHECK(h.bandwidth() == 1);

  ComplexMatrix expect(3, 3);
  expect << 1.0, 4.0, 0.0, 4.0, 2.0, 5.0, 0.0, 5.0, 3.0;
  CHECK((h.to_dense() - expect).cwiseAbs().maxCoeff() == 0.0);

  ComplexVector x(3);
  x << 1.0, Complex(0.0, 1.0), -2.0;
  CHECK((h.apply(x) - expect * x).norm() < 1e-15);
  CHECK(h.infinity_norm() == 11.0);  // middle row: 4 + 2 + 5

  CHECK_THROWS_AS(HermitianMatrix::banded_real(RealMatrix::Zero(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(HermitianMatrix::banded_real(RealMatrix::Zero(5, 3)), std::invalid_argument);
}

TEST_CASE("small collective-spin matrix has a hand-checkable spectrum") {
  // two spins, h = 1, gamma = 1: diagonal {2, -1, -2}, no off-diagonal band
  const Spectrum s = eigensolve(lmg_hamiltonian(LmgParams{1.0, 1.0, 1.0, 2}));
  CHECK(s.energies[0] == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(s.energies[1] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(s.energies[2] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("banded and dense eigensolvers agree on random band matrices") {
  for (int w : {1, 2, 3, 4}) {
    for (int n : {6, 17, 40}) {
      if (w >= n) continue;
      const RealMatrix bands = random_bands(n, w, 1000u + 10u * w + n);
      const HermitianMatrix hb = HermitianMatrix::banded_real(bands);
      const HermitianMatrix hd = HermitianMatrix::dense(hb.to_dense());

      const Spectrum sb = eigensolve(hb);
      const Spectrum sd = eigensolve(hd);
      const double scale = std::max(1.0, hb.infinity_norm());

      CAPTURE(w);
      CAPTURE(n);
      CHECK((sb.energies - sd.energies).cwiseAbs().maxCoeff() < 1e-10 * scale);
      CHECK(std::abs(std::abs(compensated_dot(sb.states.col(0), sd.states.col(0))) - 1.0) < 1e-9);
      check_spectrum_quality(hb, sb, 1e-11);
    }
  }
}

TEST_CASE("banded path matches the dense path on the collective-spin matrix") {
  const HermitianMatrix hb = lmg_hamiltonian(LmgParams{2.0, 0.5, 1.0, 256});
  const HermitianMatrix hd = HermitianMatrix::dense(hb.to_dense());
  const Spectrum sb = eigensolve(hb);
  const Spectrum sd = eigensolve(hd);
  const double scale = hb.infinity_norm();
  CHECK((sb.energies - sd.energies).cwiseAbs().maxCoeff() < 1e-10 * scale);
  CHECK(std::abs(std::abs(compensated_dot(sb.states.col(0), sd.states.col(0))) - 1.0) < 1e-10);
  check_spectrum_quality(hb, sb, 1e-11);
}

TEST_CASE("eigenvector phase convention: largest component real and positive") {
  const Spectrum s = eigensolve(two_level_hamiltonian(TwoLevelParams{1.0, 0.7, 1.1}));
  for (Index j = 0; j < 2; ++j) {
    Index k = 0;
    s.states.col(j).cwiseAbs().maxCoeff(&k);
    CHECK(std::abs(s.states(k, j).imag()) < 1e-14);
    CHECK(s.states(k, j).real() > 0.0);
  }
}

TEST_CASE("overlaps and fidelity") {
  const QuantumState a = two_level_ground_state(kPi / 2, 0.0);
  const QuantumState b = two_level_ground_state(kPi / 2, 0.01);
  CHECK(fidelity(a, a) == 1.0);
  // |<a|b>| = cos(delta_phi / 2) on the equator
  CHECK(fidelity(a, b) == doctest::Approx(std::cos(0.005)).epsilon(1e-15));

  ComplexVector e0 = ComplexVector::Zero(2), e1 = ComplexVector::Zero(2);
  e0[0] = 1.0;
  e1[1] = 1.0;
  CHECK(fidelity(e0, e1) == 0.0);

  const Complex z1 = compensated_dot(a, b);
  const Complex z2 = compensated_dot(b, a);
  CHECK(std::abs(z1 - std::conj(z2)) < 1e-16);
  CHECK_THROWS_AS(compensated_dot(e0, ComplexVector::Zero(3)), std::invalid_argument);
}

TEST_CASE("perturbative susceptibility of a spin in a field") {
  for (double theta : {0.0, kPi / 6, kPi / 4, kPi / 2, 3 * kPi / 4}) {
    const double expect = 0.25 * std::sin(theta) * std::sin(theta);
    double first = -1.0;
    for (double b : {0.5, 1.0, 2.0, 8.0}) {
      const TwoLevelParams p{b, theta, 0.3};
      const double chi = chi_perturbative(eigensolve(two_level_hamiltonian(p)),
                                          two_level_phi_derivative(p));
      CHECK(std::abs(chi - expect) < 1e-10);
      if (first < 0.0) first = chi;
      CHECK(std::abs(chi - first) < 1e-10);  // independent of the field strength
    }
  }
}

TEST_CASE("perturbative susceptibility: invariances and edge cases") {
  const TwoLevelParams p{1.0, kPi / 3, 0.0};
  const Spectrum s = eigensolve(two_level_hamiltonian(p));

  // driving along the Hamiltonian itself only shifts phases: chi = 0
  CHECK(chi_perturbative(s, two_level_hamiltonian(p)) < 1e-24);

  // adding a multiple of the identity to the driving term changes nothing
  const HermitianMatrix h_i = two_level_phi_derivative(p);
  const ComplexMatrix shifted = h_i.to_dense() + 3.0 * ComplexMatrix::Identity(2, 2);
  const double chi_a = chi_perturbative(s, h_i);
  const double chi_b = chi_perturbative(s, HermitianMatrix::dense(shifted));
  CHECK(chi_a == doctest::Approx(chi_b).epsilon(1e-12));

  CHECK_THROWS_AS(chi_perturbative(s, HermitianMatrix::dense(ComplexMatrix::Identity(3, 3))),
                  std::invalid_argument);
}

TEST_CASE("perturbative susceptibility: degenerate ground states") {
  // a degenerate pair coupled by the driving term is ill-defined
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(2, 2) = 1.0;
  h(1, 1) = 1e-13;
  ComplexMatrix v = ComplexMatrix::Zero(3, 3);
  v(0, 1) = 1.0;
  v(1, 0) = 1.0;
  CHECK_THROWS_AS(chi_perturbative(eigensolve(HermitianMatrix::dense(h)),
                                   HermitianMatrix::dense(v)),
                  CriticalPointError);

  // a symmetry-protected quasi-degenerate pair is fine: deep ordered phase,
  // the near-degenerate partner has opposite parity and decouples from S_z
  const Spectrum s = eigensolve(lmg_hamiltonian(LmgParams{0.5, 0.0, 1.0, 200}));
  const double chi = chi_perturbative(s, lmg_field_derivative(200));
  CHECK(std::isfinite(chi));
  CHECK(chi > 0.0);
}

TEST_CASE("perturbative susceptibility approaches the large-N closed form") {
  const Spectrum s = eigensolve(lmg_hamiltonian(LmgParams{2.0, 0.5, 1.0, 256}));
  const double chi = chi_perturbative(s, lmg_field_derivative(256));
  const double expect = 1.0 / 288.0;
  CHECK(std::abs(chi - expect) / expect < 0.05);
}

TEST_CASE("finite-difference susceptibility on the analytic spin family") {
  for (double theta : {kPi / 6, kPi / 2, 2.0}) {
    auto ground = [theta](double phi) { return two_level_ground_state(theta, phi); };
    const double expect = 0.25 * std::sin(theta) * std::sin(theta);
    CHECK(std::abs(chi_finite_difference(ground, 0.2, 1e-3, 1) - expect) < 1e-6 * std::max(0.01, expect));
  }
}

TEST_CASE("finite-difference susceptibility through the eigensolver") {
  auto ground = [](double phi) {
    return QuantumState(
        eigensolve(two_level_hamiltonian(TwoLevelParams{1.0, kPi / 2, phi})).states.col(0));
  };
  CHECK(std::abs(chi_finite_difference(ground, 0.0, 1e-3, 1) - 0.25) < 1e-6);
}

TEST_CASE("finite-difference susceptibility: step convergence and guards") {
  auto ground = [](double phi) { return two_level_ground_state(kPi / 2, phi); };
  const double exact = 0.25;
  // base stencil error is quadratic in the step
  const double ea = std::abs(chi_finite_difference(ground, 0.0, 4e-2, 0) - exact);
  const double eb = std::abs(chi_finite_difference(ground, 0.0, 2e-2, 0) - exact);
  CHECK(ea / eb > 3.0);
  CHECK(ea / eb < 5.0);

  CHECK_THROWS_AS(chi_finite_difference(ground, 0.0, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(chi_finite_difference(ground, 0.0, 1e-3, 9), std::invalid_argument);

  // a fidelity collapse on the stencil is a physics failure, not a number
  auto fast = [](double phi) { return two_level_ground_state(kPi / 2, 3000.0 * phi); };
  CHECK_THROWS_AS(chi_finite_difference(fast, 0.0, 1e-3, 0), CriticalPointError);
}

TEST_CASE("loop phase: constant and analytic loops") {
  const QuantumState v = two_level_ground_state(0.7, 0.3);
  CHECK(pancharatnam_phase({v, v, v, v}, true) == 0.0);

  for (double theta : {kPi / 6, kPi / 2, 5 * kPi / 6}) {
    const double expect = -kPi * (1.0 - std::cos(theta));
    const double got = pancharatnam_phase(two_level_phase_loop(theta, 4096), true);
    CHECK(std::abs(got - expect) < 1e-4);
  }

  // polar loop: the state winds once, the phase is a full turn
  CHECK(std::abs(pancharatnam_phase(two_level_phase_loop(kPi, 4096), true) - (-2.0 * kPi)) < 1e-12);
}

TEST_CASE("loop phase: gauge invariance of the closed loop") {
  std::vector<QuantumState> loop = two_level_phase_loop(kPi / 3, 128);
  const double base = pancharatnam_phase(loop, true);
  loop[0] *= std::exp(Complex(0.0, 1.1));
  loop[57] *= std::exp(Complex(0.0, -2.4));
  CHECK(std::abs(pancharatnam_phase(loop, true) - base) < 1e-12);
}

TEST_CASE("loop phase: eigensolver gauge differs from the smooth gauge by full turns") {
  const double theta = 2 * kPi / 3;
  std::vector<QuantumState> loop;
  const int m = 4096;
  for (int j = 0; j < m; ++j) {
    const double phi = 2.0 * kPi * j / m;
    loop.push_back(eigensolve(two_level_hamiltonian(TwoLevelParams{1.0, theta, phi})).states.col(0));
  }
  const double got = pancharatnam_phase(loop, true);
  const double smooth = -kPi * (1.0 - std::cos(theta));
  const double turns = (got - smooth) / (2.0 * kPi);
  CHECK(std::abs(turns - std::round(turns)) < 1e-4);
}

TEST_CASE("loop phase: degenerate input is rejected") {
  ComplexVector e0 = ComplexVector::Zero(2), e1 = ComplexVector::Zero(2);
  e0[0] = 1.0;
  e1[1] = 1.0;
  CHECK_THROWS_AS(pancharatnam_phase({e0, e1, e0}, true), std::runtime_error);
  CHECK_THROWS_AS(pancharatnam_phase({e0, e0}, true), std::invalid_argument);
}

TEST_CASE("fidelity drop and perturbative sum agree on the collective-spin model") {
  const int n = 128;
  const double gamma = 0.5;
  const Spectrum s = eigensolve(lmg_hamiltonian(LmgParams{2.0, gamma, 1.0, n}));
  const double chi_p = chi_perturbative(s, lmg_field_derivative(n));
  auto ground = [&](double h) {
    return QuantumState(eigensolve(lmg_hamiltonian(LmgParams{h, gamma, 1.0, n})).states.col(0));
  };
  const double chi_f = chi_finite_difference(ground, 2.0, 1e-3, 1);
  CHECK(std::abs(chi_f - chi_p) / chi_p < 1e-6);
}
