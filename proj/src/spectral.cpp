#include "fidsus/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace fidsus {

namespace {

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) m = std::max(m, std::abs(a(i, j)));
  return m;
}

}  // namespace

HermitianMatrix HermitianMatrix::dense(ComplexMatrix a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw std::invalid_argument("HermitianMatrix: matrix must be square and non-empty");
  const double scale = max_abs(a);
  if (scale > 0.0) {
    const ComplexMatrix diff = a - a.adjoint();
    if (max_abs(diff) > 1e-12 * scale)
      throw std::invalid_argument("HermitianMatrix: matrix is not Hermitian");
  }
  HermitianMatrix h;
  h.banded_ = false;
  h.dim_ = a.rows();
  h.dense_ = std::move(a);
  return h;
}

HermitianMatrix HermitianMatrix::banded_real(RealMatrix bands) {
  if (bands.rows() < 1 || bands.cols() < 1)
    throw std::invalid_argument("HermitianMatrix: empty band storage");
  if (bands.rows() > bands.cols())
    throw std::invalid_argument("HermitianMatrix: bandwidth must be smaller than the dimension");
  if (!bands.allFinite())
    throw std::invalid_argument("HermitianMatrix: non-finite band entry");
  HermitianMatrix h;
  h.banded_ = true;
  h.dim_ = bands.cols();
  h.bands_ = std::move(bands);
  return h;
}

int HermitianMatrix::bandwidth() const {
  if (!banded_) throw std::logic_error("HermitianMatrix: bandwidth of a dense matrix");
  return static_cast<int>(bands_.rows()) - 1;
}

const ComplexMatrix& HermitianMatrix::dense_matrix() const {
  if (banded_) throw std::logic_error("HermitianMatrix: dense storage not present");
  return dense_;
}

const RealMatrix& HermitianMatrix::bands() const {
  if (!banded_) throw std::logic_error("HermitianMatrix: band storage not present");
  return bands_;
}

ComplexMatrix HermitianMatrix::to_dense() const {
  if (!banded_) return dense_;
  const Index n = dim_;
  const Index w = bands_.rows() - 1;
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    a(i, i) = bands_(0, i);
    for (Index d = 1; d <= w && i + d < n; ++d) {
      a(i + d, i) = bands_(d, i);
      a(i, i + d) = bands_(d, i);
    }
  }
  return a;
}

ComplexVector HermitianMatrix::apply(const ComplexVector& x) const {
  if (x.size() != dim_) throw std::invalid_argument("HermitianMatrix: dimension mismatch");
  if (!banded_) return dense_ * x;
  const Index n = dim_;
  const Index w = bands_.rows() - 1;
  ComplexVector y = ComplexVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    y[i] += bands_(0, i) * x[i];
    for (Index d = 1; d <= w && i + d < n; ++d) {
      y[i + d] += bands_(d, i) * x[i];
      y[i] += bands_(d, i) * x[i + d];
    }
  }
  return y;
}

double HermitianMatrix::infinity_norm() const {
  if (!banded_) return dense_.cwiseAbs().rowwise().sum().maxCoeff();
  const Index n = dim_;
  const Index w = bands_.rows() - 1;
  RealVector row_sums = RealVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    row_sums[i] += std::abs(bands_(0, i));
    for (Index d = 1; d <= w && i + d < n; ++d) {
      row_sums[i + d] += std::abs(bands_(d, i));
      row_sums[i] += std::abs(bands_(d, i));
    }
  }
  return row_sums.maxCoeff();
}

namespace {

// Givens reduction of a real symmetric band matrix to tridiagonal form,
// accumulating the orthogonal factor. Standard bulge chasing: removing the
// outermost diagonal entry (p, col) with a rotation in the (p-1, p) plane
// pushes a bulge to (p + b, p - 1), which is chased off the end in steps
// of b. One extra storage diagonal holds the transient bulge.
void band_tridiagonalize(RealMatrix& work, Index n, int b, RealMatrix& q) {
  auto entry = [&](Index r, Index c) -> double& { return work(r - c, c); };

  auto rotate = [&](Index p, double cs, double sn, int dmax) {
    // A <- G^T A G in the (p-1, p) plane, symmetric band storage.
    const Index lo = std::max<Index>(0, p - dmax);
    for (Index c = lo; c <= p - 2; ++c) {
      double& x = entry(p - 1, c);
      double& y = entry(p, c);
      const double xv = x, yv = y;
      x = cs * xv - sn * yv;
      y = sn * xv + cs * yv;
    }
    double& amm = entry(p - 1, p - 1);
    double& apm = entry(p, p - 1);
    double& app = entry(p, p);
    const double mm = amm, pm = apm, pp = app;
    amm = cs * cs * mm - 2.0 * cs * sn * pm + sn * sn * pp;
    app = sn * sn * mm + 2.0 * cs * sn * pm + cs * cs * pp;
    apm = cs * sn * (mm - pp) + (cs * cs - sn * sn) * pm;
    const Index hi = std::min(n - 1, p - 1 + dmax);
    for (Index r = p + 1; r <= hi; ++r) {
      double& x = entry(r, p - 1);
      double& y = entry(r, p);
      const double xv = x, yv = y;
      x = cs * xv - sn * yv;
      y = sn * xv + cs * yv;
    }
    // accumulate Q <- Q G
    for (Index i = 0; i < n; ++i) {
      const double xv = q(i, p - 1), yv = q(i, p);
      q(i, p - 1) = cs * xv - sn * yv;
      q(i, p) = sn * xv + cs * yv;
    }
  };

  for (int bc = b; bc >= 2; --bc) {
    const int dmax = bc + 1;
    for (Index j = 0; j + bc < n; ++j) {
      Index col = j;
      Index p = j + bc;
      while (true) {
        const double a = entry(p - 1, col);
        const double bv = entry(p, col);
        if (bv != 0.0) {
          const double r = std::hypot(a, bv);
          const double cs = a / r;
          const double sn = -bv / r;
          rotate(p, cs, sn, dmax);
          entry(p - 1, col) = r;
          entry(p, col) = 0.0;
        }
        col = p - 1;
        p += bc;
        if (p >= n) break;
        if (entry(p, col) == 0.0) break;  // no bulge was created
      }
    }
  }
}

void fix_phases(ComplexMatrix& states) {
  for (Index j = 0; j < states.cols(); ++j) {
    Index k = 0;
    states.col(j).cwiseAbs().maxCoeff(&k);
    const Complex v = states(k, j);
    const double av = std::abs(v);
    if (av > 0.0) states.col(j) *= std::conj(v) / av;
  }
}

Spectrum eigensolve_banded(const HermitianMatrix& h) {
  const Index n = h.dimension();
  const int b = h.bandwidth();
  const RealMatrix& bands = h.bands();

  RealVector diag(n), sub(std::max<Index>(n - 1, 1));
  sub.setZero();
  RealMatrix q = RealMatrix::Identity(n, n);

  if (b <= 1 || n <= 2) {
    diag = bands.row(0).transpose();
    if (b >= 1)
      for (Index i = 0; i + 1 < n; ++i) sub[i] = bands(1, i);
  } else {
    RealMatrix work = RealMatrix::Zero(b + 2, n);
    work.topRows(b + 1) = bands;
    band_tridiagonalize(work, n, b, q);
    diag = work.row(0).transpose();
    for (Index i = 0; i + 1 < n; ++i) sub[i] = work(1, i);
  }

  Eigen::SelfAdjointEigenSolver<RealMatrix> es;
  es.computeFromTridiagonal(diag, sub.head(std::max<Index>(n - 1, 0)),
                            Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolve: tridiagonal iteration did not converge");

  Spectrum s;
  s.energies = es.eigenvalues();
  RealMatrix vec = (b <= 1 || n <= 2) ? RealMatrix(es.eigenvectors())
                                      : RealMatrix(q * es.eigenvectors());
  s.states = vec.cast<Complex>();
  fix_phases(s.states);
  return s;
}

}  // namespace

Spectrum eigensolve(const HermitianMatrix& h) {
  if (h.banded()) return eigensolve_banded(h);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.dense_matrix());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolve: iteration did not converge");
  Spectrum s;
  s.energies = es.eigenvalues();
  s.states = es.eigenvectors();
  fix_phases(s.states);
  return s;
}

Complex compensated_dot(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("compensated_dot: dimension mismatch");
  CompensatedSum re, im;
  for (Index i = 0; i < a.size(); ++i) {
    const Complex t = std::conj(a[i]) * b[i];
    re.add(t.real());
    im.add(t.imag());
  }
  return {re.value(), im.value()};
}

double fidelity(const ComplexVector& a, const ComplexVector& b) {
  const Complex z = compensated_dot(a, b);
  return std::min(1.0, std::abs(z));
}

double chi_perturbative(const Spectrum& s, const HermitianMatrix& h_i) {
  const Index n = s.energies.size();
  if (n < 2) throw std::invalid_argument("chi_perturbative: need at least two levels");
  if (s.states.rows() != n || h_i.dimension() != n)
    throw std::invalid_argument("chi_perturbative: dimension mismatch");

  const double norm_h = std::max(std::abs(s.energies[0]), std::abs(s.energies[n - 1]));
  const double gap_tol = 1e-10 * norm_h;
  const double elem_tol = 1e-12 * h_i.infinity_norm();

  const ComplexVector w = h_i.apply(s.states.col(0));
  CompensatedSum acc;
  for (Index k = 1; k < n; ++k) {
    const double gap = s.energies[k] - s.energies[0];
    const double elem = std::abs(compensated_dot(s.states.col(k), w));
    if (gap < gap_tol) {
      if (elem < elem_tol) continue;  // symmetry-protected degenerate partner
      throw CriticalPointError(
          "chi_perturbative: degenerate ground state coupled by the driving term");
    }
    const double r = elem / gap;
    acc.add(r * r);
  }
  return acc.value();
}

double chi_finite_difference(const std::function<QuantumState(double)>& ground, double lambda0,
                             double delta, int richardson_levels) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("chi_finite_difference: delta must be positive and finite");
  if (richardson_levels < 0 || richardson_levels > 4)
    throw std::invalid_argument("chi_finite_difference: richardson_levels must be in [0, 4]");

  const QuantumState center = ground(lambda0);
  auto chi_at = [&](double d) {
    const double fp = fidelity(center, ground(lambda0 + d));
    const double fm = fidelity(center, ground(lambda0 - d));
    if (fp < 0.5 || fm < 0.5)
      throw CriticalPointError(
          "chi_finite_difference: fidelity below 0.5 on the stencil (step too large or a crossing)");
    return ((1.0 - fp) + (1.0 - fm)) / (d * d);
  };

  double v[5];
  double d = delta;
  for (int k = 0; k <= richardson_levels; ++k) {
    v[k] = chi_at(d);
    d *= 0.5;
  }
  double fac = 1.0;
  for (int j = 1; j <= richardson_levels; ++j) {
    fac *= 4.0;
    for (int k = richardson_levels; k >= j; --k) v[k] = (fac * v[k] - v[k - 1]) / (fac - 1.0);
  }
  return v[richardson_levels];
}

double pancharatnam_phase(const std::vector<QuantumState>& loop, bool closed) {
  const size_t m = loop.size();
  if (m < 3) throw std::invalid_argument("pancharatnam_phase: need at least three states");
  CompensatedSum acc;
  auto hop = [&](const QuantumState& a, const QuantumState& b) {
    const Complex z = compensated_dot(a, b);
    if (std::abs(z) < 1e-12)
      throw std::runtime_error("pancharatnam_phase: vanishing overlap between consecutive states");
    acc.add(std::arg(z));
  };
  for (size_t k = 0; k + 1 < m; ++k) hop(loop[k], loop[k + 1]);
  if (closed) hop(loop[m - 1], loop[0]);
  return -acc.value();
}

}  // namespace fidsus
