#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "fidsus/algebra.hpp"
#include "fidsus/numerics.hpp"
#include "fidsus/spectral.hpp"
#include "fidsus/types.hpp"

namespace fidsus {

// ---------------------------------------------------------------------------
// Spin-1/2 in a field of magnitude B pointing along (theta, phi);
// H = -B (cos t sz + sin t cos p sx + sin t sin p sy), eigenvalues -B and +B.

struct TwoLevelParams {
  double field = 1.0;  // B > 0
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;
};

inline void validate(const TwoLevelParams& p) {
  if (!std::isfinite(p.field) || !(p.field > 0.0))
    throw std::invalid_argument("TwoLevelParams: field must be positive");
  if (!std::isfinite(p.theta) || p.theta < 0.0 || p.theta > std::numbers::pi)
    throw std::invalid_argument("TwoLevelParams: theta must lie in [0, pi]");
  if (!std::isfinite(p.phi)) throw std::invalid_argument("TwoLevelParams: non-finite phi");
}

inline HermitianMatrix two_level_hamiltonian(const TwoLevelParams& p) {
  validate(p);
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  const Complex off = -p.field * s * std::exp(Complex(0.0, -p.phi));
  ComplexMatrix h(2, 2);
  h << -p.field * c, off, std::conj(off), p.field * c;
  return HermitianMatrix::dense(std::move(h));
}

// dH/dphi, the driving term for an azimuthal sweep.
inline HermitianMatrix two_level_phi_derivative(const TwoLevelParams& p) {
  validate(p);
  const Complex off =
      Complex(0.0, 1.0) * p.field * std::sin(p.theta) * std::exp(Complex(0.0, -p.phi));
  ComplexMatrix h(2, 2);
  h << 0.0, off, std::conj(off), 0.0;
  return HermitianMatrix::dense(std::move(h));
}

// Ground-state spinor in the smooth gauge that follows the field direction,
// (cos(t/2), e^{i phi} sin(t/2)). Use this family for loop phases: the gauge
// is continuous in phi, so windings are meaningful.
inline QuantumState two_level_ground_state(double theta, double phi) {
  QuantumState v(2);
  v << Complex(std::cos(0.5 * theta), 0.0),
      std::exp(Complex(0.0, phi)) * std::sin(0.5 * theta);
  return v;
}

inline std::vector<QuantumState> two_level_phase_loop(double theta, int points) {
  if (points < 3) throw std::invalid_argument("two_level_phase_loop: need at least 3 points");
  std::vector<QuantumState> loop;
  loop.reserve(points);
  for (int j = 0; j < points; ++j)
    loop.push_back(two_level_ground_state(theta, 2.0 * std::numbers::pi * j / points));
  return loop;
}

// ---------------------------------------------------------------------------
// Collective spin model: N spins, maximal-spin sector S = N/2, basis |S, m>
// with m = -S..S. Pentadiagonal real symmetric matrix (m couples to m +/- 2);
// the first off-diagonal is identically zero. Second-order transition at
// h = 1 for gamma < 1.

struct LmgParams {
  double h = 2.0;        // field, > 0, != 1
  double gamma = 0.0;    // anisotropy, [0, 1]
  double coupling = 1.0; // overall ferromagnetic coupling, > 0
  int n = 2;             // number of spins, >= 2
};

inline void validate(const LmgParams& p) {
  if (!std::isfinite(p.h) || !(p.h > 0.0))
    throw std::invalid_argument("LmgParams: field must be positive");
  if (!std::isfinite(p.gamma) || p.gamma < 0.0 || p.gamma > 1.0)
    throw std::invalid_argument("LmgParams: gamma must lie in [0, 1]");
  if (!std::isfinite(p.coupling) || !(p.coupling > 0.0))
    throw std::invalid_argument("LmgParams: coupling must be positive");
  if (p.n < 2) throw std::invalid_argument("LmgParams: need at least two spins");
}

inline HermitianMatrix lmg_hamiltonian(const LmgParams& p) {
  validate(p);
  const int d = p.n + 1;
  const double s = 0.5 * p.n;
  RealMatrix bands = RealMatrix::Zero(3, d);
  for (int i = 0; i < d; ++i) {
    const double m = -s + i;
    bands(0, i) = -(p.coupling / p.n) * (1.0 + p.gamma) * (s * (s + 1.0) - m * m - 0.5 * p.n) -
                  2.0 * p.h * m;
    if (i + 2 < d)
      bands(2, i) = -(p.coupling / (2.0 * p.n)) * (1.0 - p.gamma) *
                    std::sqrt((s - m) * (s + m + 1.0)) * std::sqrt((s - m - 1.0) * (s + m + 2.0));
  }
  return HermitianMatrix::banded_real(std::move(bands));
}

// dH/dh = -2 S_z, diagonal in the |S, m> basis.
inline HermitianMatrix lmg_field_derivative(int n) {
  if (n < 2) throw std::invalid_argument("lmg_field_derivative: need at least two spins");
  RealMatrix bands(1, n + 1);
  const double s = 0.5 * n;
  for (int i = 0; i <= n; ++i) bands(0, i) = -2.0 * (-s + i);
  return HermitianMatrix::banded_real(std::move(bands));
}

namespace detail {
// tanh of the rapidity, signed. Analytic in h on either side of h = 1.
inline double lmg_tanh_rapidity(double h, double gamma) {
  return h > 1.0 ? (1.0 - gamma) / (2.0 * h - 1.0 - gamma)
                 : (h * h - gamma) / (2.0 - h * h - gamma);
}
}  // namespace detail

// Rapidity of the hyperbolic rotation diagonalizing the large-N bosonic
// reduction. A negative tanh argument is absorbed into phi = pi.
inline CosetAngles lmg_rapidity(double h, double gamma) {
  if (!std::isfinite(h) || !(h > 0.0))
    throw std::invalid_argument("lmg_rapidity: field must be positive");
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("lmg_rapidity: gamma must lie in [0, 1]");
  if (std::abs(h - 1.0) < 1e-12)
    throw CriticalPointError("lmg_rapidity: h = 1 is the critical point");
  const double t = detail::lmg_tanh_rapidity(h, gamma);
  if (!(std::abs(t) < 1.0 - 1e-15))
    throw CriticalPointError("lmg_rapidity: gapless mode (|tanh| >= 1)");
  CosetAngles a;
  a.theta = std::atanh(std::abs(t));
  a.phi = t < 0.0 ? std::numbers::pi : 0.0;
  return a;
}

// Thermodynamic-limit susceptibility for an h sweep:
//   h > 1:      (1-gamma)^2 / (32 (1-h)^2 (h-gamma)^2)
//   0 < h < 1:  h^2 / (8 (1-h^2)^2), independent of gamma
inline double lmg_chi_closed(double h, double gamma) {
  if (!std::isfinite(h) || !(h > 0.0))
    throw std::invalid_argument("lmg_chi_closed: field must be positive");
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("lmg_chi_closed: gamma must lie in [0, 1]");
  if (std::abs(h - 1.0) < 1e-12)
    throw CriticalPointError("lmg_chi_closed: h = 1 is the critical point");
  if (h > 1.0) {
    const double a = 1.0 - gamma, b = 1.0 - h, c = h - gamma;
    return a * a / (32.0 * b * b * c * c);
  }
  const double d = 1.0 - h * h;
  return h * h / (8.0 * d * d);
}

inline double lmg_geometric_phase(double h, double gamma) {
  return geometric_phase_su11(lmg_rapidity(h, gamma).theta);
}

// ---------------------------------------------------------------------------
// Anisotropic planar magnet on the square lattice (coordination 4), spin-wave
// modes. eta is the exchange anisotropy and the driving parameter; the modes
// are gapped for |eta| > 1.

struct XxzParams {
  double eta = 2.0;  // |eta| > 1
};

inline double xxz_gamma_k(double kx, double ky) {
  return 0.5 * (std::cos(kx) + std::cos(ky));
}

inline double xxz_chi_integrand(double kx, double ky, double eta) {
  const double g = xxz_gamma_k(kx, ky);
  const double d = eta * eta - g * g;
  return g * g / (32.0 * d * d);
}

inline double xxz_chi(const XxzParams& p, const QuadratureSpec& spec = {}) {
  if (!std::isfinite(p.eta) || !(std::abs(p.eta) > 1.0))
    throw std::invalid_argument("xxz_chi: need |eta| > 1 (integrand singular inside the zone)");
  const double eta = p.eta;
  return bz_integrate_2d([eta](double kx, double ky) { return xxz_chi_integrand(kx, ky, eta); },
                         spec);
}

// ---------------------------------------------------------------------------
// Single bosonic mode  2 sigma K_z + u K_+ + u* K_-  with K_+ = a^dag a^dag/2.
// Stable for sigma > |u|; the ground state is a squeezed vacuum.

struct BecModeParams {
  std::function<double(double)> sigma;   // lambda -> diagonal coefficient
  std::function<Complex(double)> u;      // lambda -> pairing amplitude
  double lambda0 = 0.0;
  double step = 0.0;                     // 0 -> default step at lambda0
};

// Susceptibility from the rapidity route: theta = artanh(|u|/sigma) and
// phi = arg u are differentiated numerically and fed to the SU(1,1) closed
// form. The phase derivative uses d(arg u) = Im(u* du)/|u|^2, which is safe
// across the arg branch cut.
inline double bec_mode_chi(const BecModeParams& p) {
  if (!p.sigma || !p.u) throw std::invalid_argument("bec_mode_chi: missing coefficient function");
  if (!std::isfinite(p.lambda0)) throw std::invalid_argument("bec_mode_chi: non-finite lambda0");
  DiffSpec spec = default_diff_spec(p.lambda0);
  if (p.step > 0.0) spec.step = p.step;

  auto theta_at = [&](double l) {
    const double s = p.sigma(l);
    const Complex uv = p.u(l);
    const double au = std::abs(uv);
    if (!std::isfinite(s) || !std::isfinite(au))
      throw std::runtime_error("bec_mode_chi: non-finite coefficient");
    if (!(s > au))
      throw CriticalPointError("bec_mode_chi: sigma <= |u| on the stencil, mode unstable");
    return std::atanh(au / s);
  };

  const double dtheta = central_diff(theta_at, p.lambda0, spec);
  const Complex u0 = p.u(p.lambda0);
  const double au0 = std::abs(u0);
  double dphi = 0.0;
  if (au0 > 0.0) {
    const double dur = central_diff([&](double l) { return p.u(l).real(); }, p.lambda0, spec);
    const double dui = central_diff([&](double l) { return p.u(l).imag(); }, p.lambda0, spec);
    dphi = (u0.real() * dui - u0.imag() * dur) / (au0 * au0);
  }
  const CosetAngles a{theta_at(p.lambda0), au0 > 0.0 ? std::arg(u0) : 0.0};
  return chi_angles(AlgebraKind::SU11, a, AngleVelocity{dtheta, dphi});
}

// Truncated Fock-space matrix of the mode Hamiltonian, basis |0..cutoff>.
// Real pairing gives a real pentadiagonal matrix; complex pairing falls back
// to dense storage.
inline HermitianMatrix bec_mode_hamiltonian(double sigma, Complex u, int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("bec_mode_hamiltonian: cutoff must be >= 2");
  if (!std::isfinite(sigma)) throw std::invalid_argument("bec_mode_hamiltonian: non-finite sigma");
  const int d = cutoff + 1;
  if (u.imag() == 0.0) {
    RealMatrix bands = RealMatrix::Zero(3, d);
    for (int n = 0; n < d; ++n) {
      bands(0, n) = sigma * (n + 0.5);
      if (n + 2 < d) bands(2, n) = 0.5 * u.real() * std::sqrt((n + 1.0) * (n + 2.0));
    }
    return HermitianMatrix::banded_real(std::move(bands));
  }
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    h(n, n) = sigma * (n + 0.5);
    if (n + 2 < d) {
      const Complex c = 0.5 * u * std::sqrt((n + 1.0) * (n + 2.0));
      h(n + 2, n) = c;
      h(n, n + 2) = std::conj(c);
    }
  }
  return HermitianMatrix::dense(std::move(h));
}

}  // namespace fidsus
