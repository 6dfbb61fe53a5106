#pragma once

#include <cmath>
#include <numbers>

#include "fidsus/types.hpp"

namespace fidsus {

// chi = -<(U^dag dU)^2> - |<U^dag dU>|^2, the variance of the anti-Hermitian
// coset connection in the reference state. Rejects moments that are not those
// of an anti-Hermitian operator.
inline double chi_from_moments(const ConnectionMoments& m) {
  if (!std::isfinite(m.m1.real()) || !std::isfinite(m.m1.imag()) || !std::isfinite(m.m2))
    throw std::invalid_argument("chi_from_moments: non-finite moment");
  const double am1 = std::abs(m.m1);
  if (am1 > 0.0 && std::abs(m.m1.real()) > 1e-9 * am1)
    throw std::invalid_argument("chi_from_moments: m1 must be purely imaginary");
  if (m.m2 > 1e-12)
    throw std::invalid_argument("chi_from_moments: m2 must be non-positive");
  double chi = -m.m2 - am1 * am1;
  if (chi < 0.0) {
    if (chi < -1e-12)
      throw std::invalid_argument("chi_from_moments: moments violate the variance bound");
    chi = 0.0;
  }
  return chi;
}

// Closed form of the susceptibility in the coset angles.
//   SU(2):   chi = 1/4 [ dtheta^2 + sin^2(theta)  dphi^2 ]
//   SU(1,1): chi = 1/8 [ dtheta^2 + sinh^2(theta) dphi^2 ]
inline double chi_angles(AlgebraKind kind, const CosetAngles& a, const AngleVelocity& v) {
  if (!std::isfinite(a.theta) || !std::isfinite(a.phi) || !std::isfinite(v.dtheta) ||
      !std::isfinite(v.dphi))
    throw std::invalid_argument("chi_angles: non-finite input");
  if (kind == AlgebraKind::SU2) {
    if (a.theta < 0.0 || a.theta > std::numbers::pi)
      throw std::invalid_argument("chi_angles: SU(2) theta must lie in [0, pi]");
    const double s = std::sin(a.theta);
    return 0.25 * (v.dtheta * v.dtheta + s * s * v.dphi * v.dphi);
  }
  if (a.theta < 0.0)
    throw std::invalid_argument("chi_angles: SU(1,1) theta must be non-negative");
  const double s = std::sinh(a.theta);
  return 0.125 * (v.dtheta * v.dtheta + s * s * v.dphi * v.dphi);
}

// Phase acquired by a spin-1/2 coherent state dragged once around the phi
// circle at fixed polar angle. The up reference picks up -pi(1 - cos theta),
// the down reference the opposite; they cancel pairwise.
inline double berry_phase_su2(double theta, SpinReference ref) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > std::numbers::pi)
    throw std::invalid_argument("berry_phase_su2: theta must lie in [0, pi]");
  const double base = std::numbers::pi * (1.0 - std::cos(theta));
  return ref == SpinReference::Up ? -base : base;
}

// SU(1,1) analogue for the lowest-weight reference: pi(1 - cosh theta) <= 0,
// unbounded below as the rapidity grows.
inline double geometric_phase_su11(double theta) {
  if (!std::isfinite(theta) || theta < 0.0)
    throw std::invalid_argument("geometric_phase_su11: theta must be non-negative");
  return std::numbers::pi * (1.0 - std::cosh(theta));
}

// Rapidity and phase diagonalizing  eps * 2K_z + c K_+ + c* K_-  by a
// hyperbolic rotation: theta = artanh(|c| / eps), phi = arg c.
inline CosetAngles bogoliubov_angle(double epsilon, Complex coupling) {
  if (!std::isfinite(epsilon) || !(epsilon > 0.0))
    throw std::invalid_argument("bogoliubov_angle: diagonal coefficient must be positive");
  if (!std::isfinite(coupling.real()) || !std::isfinite(coupling.imag()))
    throw std::invalid_argument("bogoliubov_angle: non-finite coupling");
  const double ac = std::abs(coupling);
  if (!(ac < epsilon))
    throw CriticalPointError("bogoliubov_angle: |coupling| >= epsilon, mode is gapless or unstable");
  CosetAngles a;
  a.theta = std::atanh(ac / epsilon);
  a.phi = ac > 0.0 ? std::arg(coupling) : 0.0;
  return a;
}

}  // namespace fidsus
