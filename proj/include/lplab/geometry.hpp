#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lplab/errors.hpp"

namespace lplab {

enum class GridKind { line_periodic, halfline };

struct DomainParams {
  double period = 32.0;        // torus period T
  double radius = 10.0;        // halfline right endpoint R
  double bessel_lambda = 0.0;  // measure exponent: dmu = x^{2 lambda} dx
};

/// Discretized one-dimensional metric-measure space.
///
/// A grid is a partition of the domain into cells [edges[i], edges[i+1]]
/// with sample points at the cell midpoints and quadrature weights equal
/// to the exact measure of each cell.  The torus grid is uniform and
/// cell-centered (so x = 0 is a cell edge, never a sample point); halfline
/// grids are geometrically graded towards the origin.
struct Grid {
  GridKind kind = GridKind::line_periodic;
  std::vector<double> points;        // strictly increasing cell midpoints
  std::vector<double> quad_weights;  // cell measures, all > 0
  std::vector<double> edges;         // size() == points.size() + 1
  double period = 0.0;               // T (torus only)
  double radius = 0.0;               // R (halfline only)
  double bessel_lambda = 0.0;        // measure exponent (halfline only)

  std::size_t size() const { return points.size(); }

  /// Metric: periodic distance on the torus, |x - y| on the halfline.
  double distance(double x, double y) const;

  /// Closed-form volume exponent n (1 on the line, 2*lambda+1 for x^{2l} dx).
  double dimension_exponent() const;
  /// Closed-form translation exponent D (0 on the line, 2*lambda for Bessel).
  double translation_exponent() const;

  /// Largest radius that decay checks should use (T/4 resp. R/4), keeping
  /// balls away from the finite truncation of the domain.
  double radius_cap() const;
};

struct DoublingConstants {
  double n_hat = 0.0;  // empirical dimension, sup log(V(x,lr)/V(x,r))/log l
  double d_hat = 0.0;  // empirical translation exponent
};

struct DecayIntegralResult {
  double lhs = 0.0;         // quadrature of (1 + rho(x,y)/t)^{-N} dmu(y)
  double bound_ratio = 0.0; // lhs / V(x, t)
};

Grid make_grid(GridKind kind, std::size_t size, const DomainParams& params);

/// mu(B(x, r)) by closed form (truncated to the finite domain).
double volume(const Grid& grid, double x, double r);

/// Indices i with rho(x, points[i]) < r.
std::vector<std::size_t> ball_indices(const Grid& grid, double x, double r);

/// Sum of values * quad_weights; realizes the integral against dmu.
double integrate(const Grid& grid, std::span<const double> values);

/// Empirical doubling exponents from sampled volume ratios.
DoublingConstants estimate_doubling(const Grid& grid);

DecayIntegralResult decay_integral_check(const Grid& grid, double x, double t, double n_exponent);

}  // namespace lplab
