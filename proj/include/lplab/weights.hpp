#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "lplab/geometry.hpp"

namespace lplab {

/// Separable product weight w(x1, x2) = w1(x1) w2(x2), sampled per axis.
/// Power descriptors keep their generator so the A_p machinery can
/// re-sample the weight on refined grids.
struct ProductWeight {
  enum class AxisKind { constant, power, tabulated };

  struct Axis {
    AxisKind kind = AxisKind::constant;
    double exponent = 0.0;
    Eigen::VectorXd values;  // one sample per grid cell
  };

  Grid grid1, grid2;
  Axis axis1, axis2;

  double at(std::size_t i, std::size_t j) const {
    return axis1.values(static_cast<Eigen::Index>(i)) *
           axis2.values(static_cast<Eigen::Index>(j));
  }
  bool refinable() const {
    return axis1.kind != AxisKind::tabulated && axis2.kind != AxisKind::tabulated;
  }
};

/// |x1|^a1 |x2|^a2 sampled on the product grid.  Cells touching the origin
/// carry the cell-averaged value when the exponent is integrable (a > -1)
/// and the midpoint value otherwise.
ProductWeight make_power_weight(const Grid& g1, const Grid& g2, double a1, double a2);

ProductWeight make_constant_weight(const Grid& g1, const Grid& g2);

ProductWeight make_tabulated_weight(const Grid& g1, const Grid& g2, Eigen::VectorXd v1,
                                    Eigen::VectorXd v2);

struct ApCharacteristic {
  double value = 0.0;                 // supremum over the rectangle family
  bool divergent = false;             // grows without plateau under refinement
  std::vector<double> level_values;   // characteristic per refinement level
};

/// Product Muckenhoupt characteristic over grid-aligned dyadic rectangles.
/// Divergence is detected by monotone growth (factor > 1.5) across three
/// successive grid refinements of the same descriptor.
ApCharacteristic ap_characteristic(const ProductWeight& weight, double p);

/// Smallest p with a finite characteristic, bisected to resolution 0.05.
/// Empty when the weight is divergent at every probed p (q_w = infinity).
std::optional<double> critical_index(const ProductWeight& weight,
                                     std::span<const double> p_grid);

/// (sum |f|^p w dmu1 dmu2)^(1/p); p may lie in (0, 1) (quasi-norm).
double weighted_lp_norm(const Eigen::MatrixXd& field, const ProductWeight& weight, double p);

/// Strong maximal function over grid-aligned dyadic rectangles containing
/// the point (block families per level, plus the single-cell level).
Eigen::MatrixXd strong_maximal(const Eigen::MatrixXd& field, const Grid& g1, const Grid& g2);

struct SmfxReport {
  double max_ratio = 0.0;  // empirical constant: max LHS / M_s(f)
  std::vector<double> sample_ratios;
};

/// Checks the double-integral domination by the strong maximal function at
/// sampled points and scales; N_i must exceed n_i + D_i.
SmfxReport smfx_domination_check(const Eigen::MatrixXd& field, const Grid& g1,
                                 const Grid& g2, std::span<const double> scales, double n1,
                                 double n2);

/// Vector-valued maximal inequality ratio ||{M_s f_j}|| / ||{f_j}|| in
/// L^p_w(l^q); q may be +infinity (pointwise sup over the family).
double fs_maximal_check(std::span<const Eigen::MatrixXd> fields, const ProductWeight& weight,
                        double p, double q);

/// || {f_j} ||_{L^p_w(l^q)}; q = +infinity takes the pointwise supremum.
double family_lpw_lq_norm(std::span<const Eigen::MatrixXd> family,
                          const ProductWeight& weight, double p, double q);

}  // namespace lplab
