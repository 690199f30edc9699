#include "lplab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lplab {

namespace {

// Average of |u|^a over a cell with respect to the axis measure.  The cell
// never straddles the origin (0 is always a cell edge); when the combined
// exponent is not integrable the midpoint value is used instead.
double power_cell_value(double lo, double hi, double mid, double a, double measure_lambda,
                        double cell_mass) {
  const double q = a + 2.0 * measure_lambda;  // |u|^a u^{2 lam} integrand exponent
  const double alo = std::min(std::fabs(lo), std::fabs(hi));
  const double ahi = std::max(std::fabs(lo), std::fabs(hi));
  if (alo <= 0.0 && q <= -1.0 + 1e-9) return std::pow(std::fabs(mid), a);
  const double integral =
      std::fabs(q + 1.0) < 1e-9
          ? std::log(ahi / alo)
          : (std::pow(ahi, q + 1.0) - std::pow(alo, q + 1.0)) / (q + 1.0);
  return integral / cell_mass;
}

ProductWeight::Axis sample_power_axis(const Grid& g, double a) {
  ProductWeight::Axis ax;
  ax.kind = a == 0.0 ? ProductWeight::AxisKind::constant : ProductWeight::AxisKind::power;
  ax.exponent = a;
  ax.values.resize(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    ax.values(static_cast<Eigen::Index>(i)) =
        a == 0.0 ? 1.0
                 : power_cell_value(g.edges[i], g.edges[i + 1], g.points[i], a,
                                    g.bessel_lambda, g.quad_weights[i]);
  return ax;
}

// Per-cell values of w and of the dual weight w^{-1/(p-1)}.  Power
// descriptors use exact closed-form cell averages on both sides, which
// makes the interval quantities of member weights exactly scale-free; the
// divergence detector below relies on that.
struct AxisCells {
  Eigen::VectorXd w, dual;
};

AxisCells axis_cells(const Grid& g, const ProductWeight::Axis& axis, double p) {
  AxisCells cells;
  cells.w = axis.values;
  const auto n = static_cast<Eigen::Index>(g.size());
  cells.dual.resize(n);
  if (p <= 1.0) {
    cells.dual.setOnes();  // unused; the p = 1 branch uses block minima
    return cells;
  }
  if (axis.kind == ProductWeight::AxisKind::power) {
    const double b = -axis.exponent / (p - 1.0);
    for (Eigen::Index i = 0; i < n; ++i)
      cells.dual(i) = power_cell_value(g.edges[i], g.edges[i + 1], g.points[i], b,
                                       g.bessel_lambda, g.quad_weights[i]);
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      cells.dual(i) = std::pow(axis.values(i), -1.0 / (p - 1.0));
  }
  return cells;
}

double axis_supremum(const Grid& grid, const ProductWeight::Axis& axis, double p) {
  const AxisCells cells = axis_cells(grid, axis, p);
  const std::size_t n = grid.size();
  double sup = 0.0;
  for (std::size_t level = 0;; ++level) {
    const std::size_t block = std::size_t{1} << level;
    if (block > n) break;
    for (std::size_t b = 0; b * block < n; ++b) {
      const std::size_t lo = b * block;
      const std::size_t hi = std::min(lo + block, n);
      double mass = 0.0, wsum = 0.0, dual = 0.0;
      double vmin = std::numeric_limits<double>::infinity();
      for (std::size_t i = lo; i < hi; ++i) {
        const double m = grid.quad_weights[i];
        mass += m;
        wsum += cells.w(static_cast<Eigen::Index>(i)) * m;
        vmin = std::min(vmin, cells.w(static_cast<Eigen::Index>(i)));
        if (p > 1.0) dual += cells.dual(static_cast<Eigen::Index>(i)) * m;
      }
      const double avg = wsum / mass;
      const double term = p > 1.0 ? avg * std::pow(dual / mass, p - 1.0) : avg / vmin;
      sup = std::max(sup, term);
    }
  }
  return sup;
}

double characteristic_on(const ProductWeight& w, double p) {
  return axis_supremum(w.grid1, w.axis1, p) * axis_supremum(w.grid2, w.axis2, p);
}

Grid refine(const Grid& g, std::size_t factor) {
  DomainParams params;
  params.period = g.period;
  params.radius = g.radius;
  params.bessel_lambda = g.bessel_lambda;
  return make_grid(g.kind, g.size() * factor, params);
}

ProductWeight rebuild(const ProductWeight& w, std::size_t factor) {
  ProductWeight out;
  out.grid1 = refine(w.grid1, factor);
  out.grid2 = refine(w.grid2, factor);
  out.axis1 = sample_power_axis(out.grid1, w.axis1.exponent);
  out.axis2 = sample_power_axis(out.grid2, w.axis2.exponent);
  return out;
}

}  // namespace

ProductWeight make_power_weight(const Grid& g1, const Grid& g2, double a1, double a2) {
  ProductWeight w;
  w.grid1 = g1;
  w.grid2 = g2;
  w.axis1 = sample_power_axis(g1, a1);
  w.axis2 = sample_power_axis(g2, a2);
  return w;
}

ProductWeight make_constant_weight(const Grid& g1, const Grid& g2) {
  return make_power_weight(g1, g2, 0.0, 0.0);
}

ProductWeight make_tabulated_weight(const Grid& g1, const Grid& g2, Eigen::VectorXd v1,
                                    Eigen::VectorXd v2) {
  require(v1.size() == static_cast<Eigen::Index>(g1.size()) &&
              v2.size() == static_cast<Eigen::Index>(g2.size()),
          Errc::length_mismatch, "tabulated weight does not match the grids");
  require(v1.minCoeff() > 0.0 && v2.minCoeff() > 0.0, Errc::invalid_domain,
          "weights must be strictly positive");
  ProductWeight w;
  w.grid1 = g1;
  w.grid2 = g2;
  w.axis1 = {ProductWeight::AxisKind::tabulated, 0.0, std::move(v1)};
  w.axis2 = {ProductWeight::AxisKind::tabulated, 0.0, std::move(v2)};
  return w;
}

ApCharacteristic ap_characteristic(const ProductWeight& weight, double p) {
  require(p >= 1.0, Errc::invalid_p, "A_p requires p >= 1");
  ApCharacteristic out;
  out.level_values.push_back(characteristic_on(weight, p));
  if (weight.refinable()) {
    out.level_values.push_back(characteristic_on(rebuild(weight, 2), p));
    out.level_values.push_back(characteristic_on(rebuild(weight, 4), p));
    const double r1 = out.level_values[1] / out.level_values[0];
    const double r2 = out.level_values[2] / out.level_values[1];
    // Both interval factors are exact for member power weights, so their
    // characteristic is scale-free and refinement-stable to rounding; any
    // sustained growth signals divergence.  The weakest divergent signal is
    // the boundary a = p - 1 case, which grows a few percent per level.
    out.divergent = r1 > 1.02 && r2 > 1.02;
  }
  out.value = out.level_values.back();
  return out;
}

std::optional<double> critical_index(const ProductWeight& weight,
                                     std::span<const double> p_grid) {
  double lo = 1.0;
  std::optional<double> hi;
  for (double p : p_grid) {
    if (!ap_characteristic(weight, p).divergent) {
      hi = p;
      break;
    }
    lo = p;
  }
  if (!hi) return std::nullopt;
  while (*hi - lo > 0.05) {
    const double mid = 0.5 * (*hi + lo);
    if (ap_characteristic(weight, mid).divergent)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

double weighted_lp_norm(const Eigen::MatrixXd& field, const ProductWeight& weight, double p) {
  require(p > 0.0, Errc::invalid_p, "norm exponent must be positive");
  const auto n1 = static_cast<Eigen::Index>(weight.grid1.size());
  const auto n2 = static_cast<Eigen::Index>(weight.grid2.size());
  require(field.rows() == n1 && field.cols() == n2, Errc::grid_mismatch,
          "field does not match the weight grids");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < n2; ++j) {
    const double c2 = weight.axis2.values(j) * weight.grid2.quad_weights[j];
    for (Eigen::Index i = 0; i < n1; ++i) {
      acc += std::pow(std::fabs(field(i, j)), p) * weight.axis1.values(i) *
             weight.grid1.quad_weights[i] * c2;
    }
  }
  return std::pow(acc, 1.0 / p);
}

Eigen::MatrixXd strong_maximal(const Eigen::MatrixXd& field, const Grid& g1, const Grid& g2) {
  const auto n1 = static_cast<Eigen::Index>(g1.size());
  const auto n2 = static_cast<Eigen::Index>(g2.size());
  require(field.rows() == n1 && field.cols() == n2, Errc::grid_mismatch,
          "field does not match the grids");

  // Prefix sums of |f| dmu and of the cell masses over index rectangles.
  Eigen::MatrixXd num(n1 + 1, n2 + 1);
  num.setZero();
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j < n2; ++j)
      num(i + 1, j + 1) = std::fabs(field(i, j)) * g1.quad_weights[i] * g2.quad_weights[j];
  for (Eigen::Index i = 1; i <= n1; ++i) num.row(i) += num.row(i - 1);
  for (Eigen::Index j = 1; j <= n2; ++j) num.col(j) += num.col(j - 1);
  std::vector<double> mass1(n1 + 1, 0.0), mass2(n2 + 1, 0.0);
  for (Eigen::Index i = 0; i < n1; ++i) mass1[i + 1] = mass1[i] + g1.quad_weights[i];
  for (Eigen::Index j = 0; j < n2; ++j) mass2[j + 1] = mass2[j] + g2.quad_weights[j];

  auto rect_sum = [&](Eigen::Index a, Eigen::Index b, Eigen::Index c, Eigen::Index d) {
    return num(b, d) - num(a, d) - num(b, c) + num(a, c);
  };

  std::size_t levels1 = 1, levels2 = 1;
  while ((std::size_t{1} << levels1) < g1.size()) ++levels1;
  while ((std::size_t{1} << levels2) < g2.size()) ++levels2;

  Eigen::MatrixXd out(n1, n2);
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n2; ++j) {
      double best = 0.0;
      for (std::size_t l1 = 0; l1 <= levels1; ++l1) {
        const Eigen::Index a = (i >> l1) << l1;
        const Eigen::Index b = std::min<Eigen::Index>(a + (Eigen::Index{1} << l1), n1);
        const double m1 = mass1[b] - mass1[a];
        for (std::size_t l2 = 0; l2 <= levels2; ++l2) {
          const Eigen::Index c = (j >> l2) << l2;
          const Eigen::Index d = std::min<Eigen::Index>(c + (Eigen::Index{1} << l2), n2);
          best = std::max(best, rect_sum(a, b, c, d) / (m1 * (mass2[d] - mass2[c])));
        }
      }
      out(i, j) = best;
    }
  }
  return out;
}

SmfxReport smfx_domination_check(const Eigen::MatrixXd& field, const Grid& g1,
                                 const Grid& g2, std::span<const double> scales, double n1,
                                 double n2) {
  const DoublingConstants d1 = estimate_doubling(g1);
  const DoublingConstants d2 = estimate_doubling(g2);
  require(n1 > d1.n_hat + d1.d_hat && n2 > d2.n_hat + d2.d_hat, Errc::exponent_too_small,
          "smfx exponents must exceed n_hat + D_hat per axis");

  const Eigen::MatrixXd ms = strong_maximal(field, g1, g2);
  const auto m1 = static_cast<Eigen::Index>(g1.size());
  const auto m2 = static_cast<Eigen::Index>(g2.size());

  SmfxReport rep;
  const Eigen::Index step1 = std::max<Eigen::Index>(1, m1 / 8);
  const Eigen::Index step2 = std::max<Eigen::Index>(1, m2 / 8);
  for (double t1 : scales) {
    // Per-axis kernel row: 1 / (V(y, t) (1 + rho(x, y)/t)^N) with mass folded in.
    for (double t2 : scales) {
      for (Eigen::Index i = 0; i < m1; i += step1) {
        for (Eigen::Index j = 0; j < m2; j += step2) {
          double lhs = 0.0;
          for (Eigen::Index a = 0; a < m1; ++a) {
            const double k1 =
                g1.quad_weights[a] /
                (volume(g1, g1.points[a], t1) *
                 std::pow(1.0 + g1.distance(g1.points[i], g1.points[a]) / t1, n1));
            double inner = 0.0;
            for (Eigen::Index b = 0; b < m2; ++b) {
              inner += std::fabs(field(a, b)) * g2.quad_weights[b] /
                       (volume(g2, g2.points[b], t2) *
                        std::pow(1.0 + g2.distance(g2.points[j], g2.points[b]) / t2, n2));
            }
            lhs += k1 * inner;
          }
          if (ms(i, j) <= 0.0) continue;  // f vanishes identically near (i, j)
          const double ratio = lhs / ms(i, j);
          rep.sample_ratios.push_back(ratio);
          rep.max_ratio = std::max(rep.max_ratio, ratio);
        }
      }
    }
  }
  return rep;
}

double family_lpw_lq_norm(std::span<const Eigen::MatrixXd> family,
                          const ProductWeight& weight, double p, double q) {
  require(!family.empty(), Errc::empty_corpus, "empty field family");
  const auto n1 = family.front().rows();
  const auto n2 = family.front().cols();
  Eigen::MatrixXd ell(n1, n2);
  ell.setZero();
  if (std::isinf(q)) {
    for (const auto& f : family) ell = ell.cwiseMax(f.cwiseAbs());
  } else {
    for (const auto& f : family) ell += f.cwiseAbs().array().pow(q).matrix();
    ell = ell.array().pow(1.0 / q).matrix();
  }
  return weighted_lp_norm(ell, weight, p);
}

double fs_maximal_check(std::span<const Eigen::MatrixXd> fields, const ProductWeight& weight,
                        double p, double q) {
  require(p > 1.0, Errc::hypothesis_violated, "vector-valued bound requires p > 1");
  require(q > 1.0, Errc::hypothesis_violated, "vector-valued bound requires q > 1");
  require(!fields.empty(), Errc::empty_corpus, "empty field family");
  const std::vector<double> probe = {1.0, 1.2, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0};
  const auto qw = critical_index(weight, probe);
  require(qw.has_value() && *qw < p, Errc::hypothesis_violated,
          "weight critical index must be below p");

  std::vector<Eigen::MatrixXd> maximals;
  maximals.reserve(fields.size());
  for (const auto& f : fields)
    maximals.push_back(strong_maximal(f, weight.grid1, weight.grid2));
  return family_lpw_lq_norm(maximals, weight, p, q) / family_lpw_lq_norm(fields, weight, p, q);
}

}  // namespace lplab
