#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "lplab/geometry.hpp"
#include "lplab/profiles.hpp"

namespace lplab {

enum class ModelTag { laplacian, bessel, bessel_schrodinger };
enum class SpectralBackend { fourier_torus, dense_eigen };

struct KernelColumn {
  std::size_t source = 0;
  double scale = 0.0;
  Eigen::VectorXd values;  // K(x_i, y_source) for all grid points
};

/// Non-negative self-adjoint model operator with exact finite-dimensional
/// functional calculus.  The mode transform is unitary with respect to the
/// mu-weighted inner product: coefficients = to_modes * samples and
/// samples = from_modes * coefficients round-trip to machine precision.
class SpectralModel {
public:
  SpectralModel() = default;

  const Grid& grid() const { return grid_; }
  ModelTag tag() const { return tag_; }
  SpectralBackend backend() const { return backend_; }
  double model_lambda() const { return model_lambda_; }
  std::size_t size() const { return grid_.size(); }

  const Eigen::VectorXd& spectrum() const { return spectrum_; }
  const Eigen::MatrixXd& to_modes() const { return to_modes_; }
  const Eigen::MatrixXd& from_modes() const { return from_modes_; }

  /// Index of the zero mode (torus constant), or -1 when the spectrum
  /// is strictly positive.
  int zero_mode() const { return zero_mode_; }

  /// Per-mode symbol Phi(t * sqrt(eigenvalue)).
  Eigen::VectorXd multiplier_symbol(const MultiplierProfile& profile, double t) const;

  /// Applies a diagonal spectral multiplier given per-mode values.
  Eigen::VectorXd apply_spectral(const Eigen::VectorXd& per_mode,
                                 const Eigen::VectorXd& f) const;

  /// Phi(t sqrt(L)) f via the mode transform.
  Eigen::VectorXd apply_multiplier(const MultiplierProfile& profile, double t,
                                   const Eigen::VectorXd& f) const;

  /// Discrete delta at `source`, normalized by the source cell mass.
  Eigen::VectorXd delta(std::size_t source) const;

  friend SpectralModel build_operator(const Grid& grid, ModelTag tag, double model_lambda);

private:
  Grid grid_;
  ModelTag tag_ = ModelTag::laplacian;
  SpectralBackend backend_ = SpectralBackend::fourier_torus;
  double model_lambda_ = 0.0;
  int zero_mode_ = -1;
  Eigen::VectorXd spectrum_;
  Eigen::MatrixXd to_modes_;
  Eigen::MatrixXd from_modes_;
};

/// Builds the model operator for a grid.  `model_lambda` is the Bessel
/// parameter of the operator; for tag == bessel it must match the grid's
/// measure exponent, for bessel_schrodinger the grid must carry Lebesgue
/// measure and the parameter enters through the potential.
SpectralModel build_operator(const Grid& grid, ModelTag tag, double model_lambda = 0.0);

KernelColumn heat_kernel_column(const SpectralModel& model, double t, std::size_t source);
KernelColumn multiplier_kernel_column(const SpectralModel& model,
                                      const MultiplierProfile& profile, double t,
                                      std::size_t source);

enum class DecayMode { single, composed };

struct DecayReport {
  DecayMode mode = DecayMode::single;
  // single: fitted constants C(N) such that |K| <= C V(x,t)^-1 (1+rho/t)^-N
  std::vector<double> exponents;
  std::vector<double> fitted_constants;
  // composed: peak magnitude per scale pair and the fitted exponent alpha
  // in peak ~ (t/s)^alpha (worst case over sampled source columns)
  std::vector<double> scale_ratios;
  std::vector<double> peak_magnitudes;
  double fitted_alpha = 0.0;
  int inner_vanishing_order = 0;
};

/// Kernel-decay verification.  mode == single fits the smallest constant in
/// the localized kernel bound for each requested exponent; mode == composed
/// measures the vanishing-order gain of Phi_outer(s sqrt(L)) Psi_inner(t
/// sqrt(L)) as t/s -> 0.  Scale pairs are (s, t) with s >= t.
DecayReport decay_check(const SpectralModel& model, const MultiplierProfile& outer,
                        const MultiplierProfile& inner,
                        std::span<const std::pair<double, double>> scale_pairs,
                        DecayMode mode, std::span<const double> exponents = {});

struct GaussianFit {
  double constant = 0.0;  // C in |p_t| <= C V(x, sqrt t)^-1 exp(-rho^2/(c t))
  double rate = 0.0;      // c
};

/// Least-squares fit of the heat-kernel upper bound over sampled columns.
GaussianFit gaussian_domination_fit(const SpectralModel& model, std::span<const double> times);

}  // namespace lplab
