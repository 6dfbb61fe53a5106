#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace fidsus {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

// A normalized state vector in some finite basis.
using QuantumState = ComplexVector;

// Thrown when a computation hits a physical boundary at runtime: a gapless or
// unstable mode, a degenerate ground state, a critical parameter value.
// Distinct from std::invalid_argument, which flags malformed input.
class CriticalPointError : public std::runtime_error {
 public:
  explicit CriticalPointError(const std::string& what) : std::runtime_error(what) {}
};

enum class AlgebraKind { SU2, SU11 };

// Coset parameters of a generalized coherent state: polar-like theta and
// azimuthal phi. SU(2) restricts theta to [0, pi]; SU(1,1) needs theta >= 0.
struct CosetAngles {
  double theta = 0.0;
  double phi = 0.0;
};

// Parameter-derivatives of the coset angles along the driving direction.
struct AngleVelocity {
  double dtheta = 0.0;
  double dphi = 0.0;
};

// First and second moments of the coset connection U^dag dU in the reference
// state. m1 is purely imaginary for an anti-Hermitian connection; m2 <= 0.
struct ConnectionMoments {
  Complex m1{0.0, 0.0};
  double m2 = 0.0;
};

enum class SpinReference { Up, Down };

}  // namespace fidsus
