#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "fidsus/types.hpp"

namespace fidsus {

// Neumaier-compensated accumulator. Used wherever a sum must be reproducible
// and immune to cancellation (quadrature, perturbative sums, overlaps).
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct DiffSpec {
  double step = 1e-4;
  int richardson_levels = 1;  // 0..4
};

inline DiffSpec default_diff_spec(double x) {
  return DiffSpec{1e-4 * std::max(1.0, std::abs(x)), 1};
}

// Central difference with optional Richardson extrapolation over halved steps.
// The error of the base stencil is O(step^2); each level removes one even
// order.
template <class F>
double central_diff(F&& f, double x, const DiffSpec& spec) {
  if (!(spec.step > 0.0) || !std::isfinite(spec.step))
    throw std::invalid_argument("central_diff: step must be positive and finite");
  if (spec.richardson_levels < 0 || spec.richardson_levels > 4)
    throw std::invalid_argument("central_diff: richardson_levels must be in [0, 4]");

  const int levels = spec.richardson_levels;
  double d[5];
  double h = spec.step;
  for (int k = 0; k <= levels; ++k) {
    const double fp = f(x + h);
    const double fm = f(x - h);
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::runtime_error("central_diff: non-finite sample");
    d[k] = (fp - fm) / (2.0 * h);
    h *= 0.5;
  }
  double fac = 1.0;
  for (int j = 1; j <= levels; ++j) {
    fac *= 4.0;
    for (int k = levels; k >= j; --k) d[k] = (fac * d[k] - d[k - 1]) / (fac - 1.0);
  }
  return d[levels];
}

template <class F>
double central_diff(F&& f, double x) {
  return central_diff(std::forward<F>(f), x, default_diff_spec(x));
}

enum class QuadratureRule { Midpoint, GaussLegendre };

struct QuadratureSpec {
  QuadratureRule rule = QuadratureRule::GaussLegendre;
  int points_per_axis = 64;  // >= 2
};

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
// Legendre recurrence.
inline std::pair<RealVector, RealVector> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  RealVector x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  return {x, w};
}

// Tensor-product quadrature of f(kx, ky) over the square zone [-pi, pi]^2 with
// the measure normalized to 1. Samples are accumulated in a fixed order with
// compensation, so the result is reproducible bit for bit.
template <class F>
double bz_integrate_2d(F&& f, const QuadratureSpec& spec) {
  const int n = spec.points_per_axis;
  if (n < 2) throw std::invalid_argument("bz_integrate_2d: points_per_axis must be >= 2");

  RealVector x(n), w(n);
  const double pi = std::numbers::pi;
  if (spec.rule == QuadratureRule::Midpoint) {
    const double h = 2.0 * pi / n;
    for (int i = 0; i < n; ++i) {
      x[i] = -pi + (i + 0.5) * h;
      w[i] = h;
    }
  } else {
    auto [xi, wi] = gauss_legendre(n);
    x = pi * xi;
    w = pi * wi;
  }

  CompensatedSum num, den;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double wij = w[i] * w[j];
      const double fv = f(x[i], x[j]);
      if (!std::isfinite(fv)) throw std::runtime_error("bz_integrate_2d: non-finite sample");
      num.add(wij * fv);
      den.add(wij);
    }
  }
  return num.value() / den.value();
}

}  // namespace fidsus
