#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lplab/errors.hpp"

namespace lplab {

/// An even, rapidly decaying multiplier profile Phi(lambda) with the
/// metadata needed by the reproducing-formula machinery: a Tauberian
/// annulus radius (if one exists), the number of derivatives vanishing
/// at the origin, and empirical decay seminorms.
struct MultiplierProfile {
  std::string label;
  std::function<double(double)> eval;
  std::optional<double> tauberian_epsilon;
  int vanishing_order = 0;  // Phi^(k)(0) = 0 for all k < vanishing_order
  double value_at_zero = 0.0;
  std::vector<double> decay_seminorms;  // sup |l|^k |Phi(l)| for k = 0..6

  double operator()(double lambda) const { return eval(lambda); }
};

struct ProfileValidation {
  double evenness_residual = 0.0;
  std::optional<double> best_epsilon;
  double annulus_min_abs = 0.0;  // min |Phi| over the chosen annulus
  int vanishing_order = 0;
  double value_at_zero = 0.0;
  bool tauberian_ok = false;
};

enum class BuiltinProfile {
  heat,        // exp(-l^2)
  lp_heat,     // l^2 exp(-l^2)
  lp_heat_2,   // l^4 exp(-l^2)
  lp_heat_3,   // l^6 exp(-l^2)
  bump_gamma,  // smooth bump supported on the annulus [eps/2, 2 eps]
};

MultiplierProfile make_profile(BuiltinProfile tag, double epsilon = 1.0);
MultiplierProfile make_profile(const std::string& label, std::function<double(double)> fn);
MultiplierProfile profile_from_tag(const std::string& tag);
std::vector<std::string> builtin_profile_tags();

ProfileValidation validate_class_A(const MultiplierProfile& profile);

enum class PartitionKind { inhomogeneous, homogeneous };

/// Discrete reproducing partition built from a Tauberian profile Phi:
///
///   homogeneous:    sum_{k in Z} Phi(2^-k l) Theta(2^-k l) = 1   (l != 0)
///   inhomogeneous:  Psi(l) Upsilon(l) + sum_{k>=1} Phi(2^-k l) Theta(2^-k l) = 1
///
/// Theta = Gamma / Xi where Gamma is an annulus bump and Xi is the
/// dilation-invariant series sum_k Phi(2^-k l) Gamma(2^-k l); Upsilon
/// completes the head against Psi(l) = exp(-l^2).  Theta and Upsilon are
/// tabulated on a dense log grid and interpolated; they vanish exactly
/// outside their stated supports.
struct CalderonPartition {
  PartitionKind kind = PartitionKind::inhomogeneous;
  double epsilon = 1.0;
  MultiplierProfile phi;      // the generating profile
  MultiplierProfile psi;      // exp(-l^2) (inhomogeneous head)
  MultiplierProfile upsilon;  // support in [-2 eps, 2 eps]
  MultiplierProfile theta;    // support in eps/2 <= |l| <= 2 eps
  int k_margin = 2;           // dilation window half-width around the annulus

  /// Value of the reproducing sum at lambda, with the k-sum adaptively
  /// truncated; k_cap (if >= 0) deliberately limits the number of terms.
  double identity_sum(double lambda, int k_cap = -1) const;
};

CalderonPartition build_calderon(const MultiplierProfile& profile, PartitionKind kind);

/// max over samples of |identity_sum - 1|.
double partition_residual(const CalderonPartition& partition,
                          std::span<const double> lambda_samples, int k_cap = -1);

}  // namespace lplab
