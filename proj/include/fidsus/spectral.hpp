#pragma once

#include <functional>
#include <vector>

#include "fidsus/numerics.hpp"
#include "fidsus/types.hpp"

namespace fidsus {

// Hermitian operator in a finite basis. Two storage forms: a dense complex
// matrix, or the lower bands of a real symmetric matrix with
// bands(d, i) = A(i + d, i) for distances d = 0..bandwidth.
class HermitianMatrix {
 public:
  static HermitianMatrix dense(ComplexMatrix a);
  static HermitianMatrix banded_real(RealMatrix bands);

  Index dimension() const { return dim_; }
  bool banded() const { return banded_; }
  int bandwidth() const;

  const ComplexMatrix& dense_matrix() const;
  const RealMatrix& bands() const;
  ComplexMatrix to_dense() const;

  ComplexVector apply(const ComplexVector& x) const;
  double infinity_norm() const;

 private:
  HermitianMatrix() = default;
  bool banded_ = false;
  Index dim_ = 0;
  ComplexMatrix dense_;
  RealMatrix bands_;
};

// Full eigendecomposition: energies ascending, states orthonormal with the
// largest-magnitude component of each state made real and positive.
struct Spectrum {
  RealVector energies;
  ComplexMatrix states;  // column n is the n-th eigenstate
};

Spectrum eigensolve(const HermitianMatrix& h);

// Compensated inner product <a|b>.
Complex compensated_dot(const ComplexVector& a, const ComplexVector& b);

// Ground-state overlap magnitude |<a|b>|, clamped into [0, 1].
double fidelity(const ComplexVector& a, const ComplexVector& b);

// Second-order perturbative susceptibility
//   chi = sum_{n>0} |<psi_n|H_I|psi_0>|^2 / (E_n - E_0)^2.
// Terms with a vanishing gap are dropped when the matrix element also
// vanishes (symmetry-protected quasi-degeneracy, e.g. parity doublets);
// a vanishing gap with a live matrix element makes chi ill-defined.
double chi_perturbative(const Spectrum& s, const HermitianMatrix& h_i);

// Susceptibility from the fidelity drop on a symmetric stencil,
//   chi(d) = [ (1 - F(l0, l0+d)) + (1 - F(l0, l0-d)) ] / d^2,
// Richardson-extrapolated over halved steps like central_diff.
double chi_finite_difference(const std::function<QuantumState(double)>& ground, double lambda0,
                             double delta, int richardson_levels = 1);

// Discrete loop phase -Im log prod_k <psi_k|psi_{k+1}>. Each hop contributes
// its principal argument, so windings accumulate as long as the loop is
// sampled finely. When closed, the wrap-around hop from the last state back
// to the first is included, which makes the result exactly invariant under a
// rephasing of any single state.
double pancharatnam_phase(const std::vector<QuantumState>& loop, bool closed);

}  // namespace fidsus
