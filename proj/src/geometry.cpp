#include "lplab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace lplab {

namespace {

double power_mass(double lo, double hi, double lambda) {
  // integral of x^{2 lambda} over [lo, hi]
  const double q = 2.0 * lambda + 1.0;
  return (std::pow(hi, q) - std::pow(lo, q)) / q;
}

}  // namespace

double Grid::distance(double x, double y) const {
  if (kind == GridKind::line_periodic) {
    double d = std::fmod(std::fabs(x - y), period);
    return std::min(d, period - d);
  }
  return std::fabs(x - y);
}

double Grid::dimension_exponent() const {
  return kind == GridKind::line_periodic ? 1.0 : 2.0 * bessel_lambda + 1.0;
}

double Grid::translation_exponent() const {
  return kind == GridKind::line_periodic ? 0.0 : 2.0 * bessel_lambda;
}

double Grid::radius_cap() const {
  return kind == GridKind::line_periodic ? period / 4.0 : radius / 4.0;
}

Grid make_grid(GridKind kind, std::size_t size, const DomainParams& params) {
  require(size >= 8, Errc::invalid_domain, "grid size must be at least 8");
  Grid g;
  g.kind = kind;
  g.points.resize(size);
  g.quad_weights.resize(size);
  g.edges.resize(size + 1);

  if (kind == GridKind::line_periodic) {
    require(params.period > 0.0, Errc::invalid_domain, "torus period must be positive");
    g.period = params.period;
    const double h = params.period / static_cast<double>(size);
    for (std::size_t i = 0; i <= size; ++i)
      g.edges[i] = -0.5 * params.period + static_cast<double>(i) * h;
    for (std::size_t i = 0; i < size; ++i) {
      g.points[i] = 0.5 * (g.edges[i] + g.edges[i + 1]);
      g.quad_weights[i] = h;
    }
    return g;
  }

  require(params.radius > 0.0, Errc::invalid_domain, "halfline endpoint must be positive");
  require(params.bessel_lambda >= 0.0, Errc::invalid_domain, "bessel lambda must be nonnegative");
  g.radius = params.radius;
  g.bessel_lambda = params.bessel_lambda;

  // Geometric grading: smallest cell ~ 1e-3 * R at the origin.
  const double frac = 1e-3;
  const double ratio = std::pow(1.0 / frac, 1.0 / static_cast<double>(size - 1));
  g.edges[0] = 0.0;
  for (std::size_t i = 1; i <= size; ++i)
    g.edges[i] = frac * params.radius * std::pow(ratio, static_cast<double>(i - 1));
  g.edges[size] = params.radius;
  for (std::size_t i = 0; i < size; ++i) {
    g.points[i] = 0.5 * (g.edges[i] + g.edges[i + 1]);
    g.quad_weights[i] = power_mass(g.edges[i], g.edges[i + 1], params.bessel_lambda);
  }
  return g;
}

double volume(const Grid& grid, double x, double r) {
  require(r > 0.0, Errc::invalid_domain, "ball radius must be positive");
  if (grid.kind == GridKind::line_periodic) return std::min(2.0 * r, grid.period);
  const double lo = std::max(x - r, 0.0);
  const double hi = std::min(x + r, grid.radius);
  if (hi <= lo) return 0.0;
  return power_mass(lo, hi, grid.bessel_lambda);
}

std::vector<std::size_t> ball_indices(const Grid& grid, double x, double r) {
  require(r > 0.0, Errc::invalid_domain, "ball radius must be positive");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.distance(x, grid.points[i]) < r) out.push_back(i);
  return out;
}

double integrate(const Grid& grid, std::span<const double> values) {
  require(values.size() == grid.size(), Errc::length_mismatch,
          "value array does not match grid size");
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) acc += values[i] * grid.quad_weights[i];
  return acc;
}

DoublingConstants estimate_doubling(const Grid& grid) {
  DoublingConstants out;
  const double cap = grid.radius_cap();
  const std::size_t stride = std::max<std::size_t>(1, grid.size() / 16);

  // Radii sampled geometrically from a few cells up to the cap.
  std::vector<double> radii;
  {
    double rmin = grid.kind == GridKind::line_periodic
                      ? 2.0 * grid.quad_weights.front()
                      : 1e-3 * grid.radius;
    for (double r = rmin; r < cap; r *= 2.0) radii.push_back(r);
  }
  const double factors[] = {2.0, 4.0, 8.0};

  for (std::size_t i = 0; i < grid.size(); i += stride) {
    const double x = grid.points[i];
    for (double r : radii) {
      for (double f : factors) {
        if (f * r > cap) continue;
        const double v1 = volume(grid, x, r);
        const double v2 = volume(grid, x, f * r);
        if (v1 <= 0.0) continue;
        out.n_hat = std::max(out.n_hat, std::log(v2 / v1) / std::log(f));
      }
    }
  }

  // Translation exponent: V(y,r) <= C (1 + rho(x,y)/r)^D V(x,r).
  for (std::size_t i = 0; i < grid.size(); i += stride) {
    for (std::size_t j = 0; j < grid.size(); j += stride) {
      const double x = grid.points[i];
      const double y = grid.points[j];
      const double rho = grid.distance(x, y);
      for (double r : radii) {
        const double arg = 1.0 + rho / r;
        if (arg < 4.0) continue;  // small separations leak the constant into the exponent
        const double vx = volume(grid, x, r);
        const double vy = volume(grid, y, r);
        if (vx <= 0.0 || vy <= 0.0) continue;
        out.d_hat = std::max(out.d_hat, std::log(vy / vx) / std::log(arg));
      }
    }
  }
  return out;
}

DecayIntegralResult decay_integral_check(const Grid& grid, double x, double t,
                                         double n_exponent) {
  require(t > 0.0, Errc::invalid_domain, "scale must be positive");
  const DoublingConstants dc = estimate_doubling(grid);
  require(n_exponent > dc.n_hat, Errc::exponent_too_small,
          "decay exponent must exceed the empirical dimension");
  double lhs = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = grid.distance(x, grid.points[i]);
    lhs += std::pow(1.0 + rho / t, -n_exponent) * grid.quad_weights[i];
  }
  return {lhs, lhs / volume(grid, x, t)};
}

}  // namespace lplab
