#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "lplab/spectral.hpp"
#include "lplab/weights.hpp"

namespace lplab {

/// Dyadic scale ladder discretizing the dt/t integral: octaves j in
/// [j_min, j_max] with t = 2^-j t' and t' log-midpoint-sampled in [1, 2].
/// The log weights over one octave sum to log 2 exactly.
struct ScaleLadder {
  int j_min = 0;
  int j_max = 0;
  std::size_t samples_per_octave = 4;
  std::vector<double> t_values;
  std::vector<double> log_weights;

  std::size_t size() const { return t_values.size(); }
};

ScaleLadder make_ladder(int j_min, int j_max, std::size_t samples_per_octave);

/// |Phi1(t1 sqrt L1) (x) Phi2(t2 sqrt L2) f| over the product grid and the
/// product scale ladder.  Slices are stored as moduli: every square
/// functional consumes |values| only.  Row index = axis-1 point, column =
/// axis-2 point; slice index = i1 * ladder2.size() + i2.
struct ScaleField {
  ScaleLadder ladder;
  Grid grid1, grid2;
  std::string profile1, profile2;
  std::vector<Eigen::MatrixXd> abs_slices;

  const Eigen::MatrixXd& slice(std::size_t i1, std::size_t i2) const {
    return abs_slices[i1 * ladder.size() + i2];
  }
};

/// Tensorized multiplier application, axis 1 then axis 2 (the factors
/// commute, so the order is immaterial).
ScaleField multiplier_field(const SpectralModel& m1, const SpectralModel& m2,
                            const MultiplierProfile& p1, const MultiplierProfile& p2,
                            const ScaleLadder& ladder, const Eigen::MatrixXcd& f);
ScaleField multiplier_field(const SpectralModel& m1, const SpectralModel& m2,
                            const MultiplierProfile& p1, const MultiplierProfile& p2,
                            const ScaleLadder& ladder, const Eigen::MatrixXd& f);

/// One tensor slice Phi1(t1 sqrt L1) (x) Phi2(t2 sqrt L2) f with true values.
Eigen::MatrixXcd tensor_slice(const SpectralModel& m1, const SpectralModel& m2,
                              const MultiplierProfile& p1, const MultiplierProfile& p2,
                              double t1, double t2, const Eigen::MatrixXcd& f);

/// Zeroes the per-axis zero-mode coefficients (torus constant direction).
Eigen::MatrixXd project_zero_modes(const SpectralModel& m1, const SpectralModel& m2,
                                   const Eigen::MatrixXd& f);

Eigen::MatrixXd g_function(const ScaleField& sf);
Eigen::MatrixXd area_function(const ScaleField& sf);
Eigen::MatrixXd gstar_function(const ScaleField& sf, double lambda1, double lambda2);
ScaleField peetre_field(const ScaleField& sf, double lambda1, double lambda2);
Eigen::MatrixXd vertical_peetre_norm(const ScaleField& peetre);

struct FunctionalRequest {
  double gstar_lambda1 = 3.0;
  double gstar_lambda2 = 3.0;
  double peetre_lambda1 = 4.0;
  double peetre_lambda2 = 4.0;
  bool want_g = true;
  bool want_area = true;
  bool want_gstar = true;
  bool want_peetre = true;
};

struct FunctionalFields {
  Eigen::MatrixXd g, area, gstar, peetre_vertical;
  double tail_energy = 0.0;  // relative energy outside the ladder (runtime check)
};

/// Streams the tensor slices once and feeds all requested square
/// functionals; numerically identical to composing multiplier_field with
/// the individual reductions, without materializing the 4-d field.
FunctionalFields compute_functionals(const SpectralModel& m1, const SpectralModel& m2,
                                     const MultiplierProfile& p1, const MultiplierProfile& p2,
                                     const ScaleLadder& ladder, const Eigen::MatrixXd& f,
                                     const FunctionalRequest& request);

/// Two-parameter discrete scale convolution h_j = sum_k 2^{-|k-j| sigma} g_k
/// (separable over the two index axes, truncated to the given window).
Eigen::MatrixXd ry_convolve(const Eigen::MatrixXd& g, double sigma1, double sigma2);
std::vector<Eigen::MatrixXd> ry_convolve(std::span<const Eigen::MatrixXd> g,
                                         std::size_t n_j1, std::size_t n_j2, double sigma1,
                                         double sigma2);

}  // namespace lplab
