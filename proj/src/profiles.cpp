#include "lplab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <span>

namespace lplab {

namespace {


// Shape-preserving cubic interpolation (Fritsch-Carlson) on a uniform grid.
struct PchipTable {
  double x0 = 0.0, dx = 1.0;
  std::vector<double> y;
  std::vector<double> d;  // node derivatives

  void build(double x_first, double x_step, std::vector<double> values) {
    x0 = x_first;
    dx = x_step;
    y = std::move(values);
    const std::size_t n = y.size();
    d.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (y[i + 1] - y[i]) / dx;
    d[0] = slope[0];
    d[n - 1] = slope[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (slope[i - 1] * slope[i] <= 0.0)
        d[i] = 0.0;
      else
        d[i] = 2.0 * slope[i - 1] * slope[i] / (slope[i - 1] + slope[i]);
    }
  }

  double eval(double x) const {
    const std::size_t n = y.size();
    double s = (x - x0) / dx;
    if (s <= 0.0) return y.front();
    if (s >= static_cast<double>(n - 1)) return y.back();
    const std::size_t i = static_cast<std::size_t>(s);
    const double t = s - static_cast<double>(i);
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * y[i] + h10 * dx * d[i] + h01 * y[i + 1] + h11 * dx * d[i + 1];
  }
};

double annulus_bump(double lambda, double eps) {
  const double u = std::fabs(lambda);
  const double lo = 0.5 * eps, hi = 2.0 * eps;
  if (u <= lo || u >= hi) return 0.0;
  const double z = (u - 1.25 * eps) / (0.75 * eps);  // maps (lo, hi) to (-1, 1)
  return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

// k-th derivative at 0 by central differences with one Richardson step.
double derivative_at_zero(const std::function<double(double)>& f, int k) {
  const double h = k <= 2 ? 1e-4 : (k <= 4 ? 1e-2 : 5e-2);
  auto central = [&](double step) {
    double acc = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= k; ++i) {
      const double node = (0.5 * k - i) * step;
      acc += (i % 2 == 0 ? 1.0 : -1.0) * binom * f(node);
      binom *= static_cast<double>(k - i) / static_cast<double>(i + 1);
    }
    return acc / std::pow(step, k);
  };
  const double coarse = central(h);
  const double fine = central(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

int detect_vanishing_order(const std::function<double(double)>& f, double scale) {
  const double tol = 1e-3 * std::max(scale, 1e-30);
  for (int k = 0; k <= 6; ++k) {
    double ck = derivative_at_zero(f, k);
    for (int j = 2; j <= k; ++j) ck /= static_cast<double>(j);  // Taylor coefficient
    if (std::fabs(ck) > tol) return k;
  }
  return 7;  // vanishes at least to order 7; higher orders are not certified
}

void fill_metadata(MultiplierProfile& p) {
  // Evenness.
  double even_res = 0.0, scale = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double l = 8.0 * static_cast<double>(i) / 64.0;
    scale = std::max(scale, std::fabs(p.eval(l)));
    even_res = std::max(even_res, std::fabs(p.eval(l) - p.eval(-l)));
  }
  require(even_res <= 1e-12 * std::max(scale, 1e-30), Errc::not_even,
          "profile '" + p.label + "' is not even");

  // Empirical decay: |l|^2 Phi(l) must die out along the far tail (past any
  // admissible Tauberian annulus).
  double tail = 0.0;
  for (double l = 160.0; l <= 200.0; l += 4.0)
    tail = std::max(tail, l * l * std::fabs(p.eval(l)));
  require(tail <= std::max(scale, 1e-30), Errc::not_decaying,
          "profile '" + p.label + "' does not decay");

  p.decay_seminorms.assign(7, 0.0);
  for (double l = 0.0; l <= 40.0; l += 0.05) {
    const double a = std::fabs(p.eval(l));
    double pw = 1.0;
    for (int k = 0; k <= 6; ++k) {
      p.decay_seminorms[k] = std::max(p.decay_seminorms[k], pw * a);
      pw *= l;
    }
  }

  p.value_at_zero = p.eval(0.0);
  p.vanishing_order = detect_vanishing_order(p.eval, scale);

  // Tauberian radius: best dyadic candidate by the annulus minimum of |Phi|.
  double best_score = 0.0;
  double best_eps = 0.0;
  for (int j = -6; j <= 6; ++j) {
    const double eps = std::pow(2.0, j);
    double score = std::fabs(p.eval(0.75 * eps));
    for (int i = 0; i < 64; ++i) {
      const double l = 0.5 * eps * std::pow(4.0, (i + 0.5) / 64.0);
      score = std::min(score, std::fabs(p.eval(l)));
    }
    if (score > best_score) {
      best_score = score;
      best_eps = eps;
    }
  }
  if (best_score > 1e-10 * std::max(scale, 1e-30)) p.tauberian_epsilon = best_eps;
}

}  // namespace

MultiplierProfile make_profile(BuiltinProfile tag, double epsilon) {
  MultiplierProfile p;
  switch (tag) {
    case BuiltinProfile::heat:
      p.label = "heat";
      p.eval = [](double l) { return std::exp(-l * l); };
      break;
    case BuiltinProfile::lp_heat:
      p.label = "lp-heat";
      p.eval = [](double l) { return l * l * std::exp(-l * l); };
      break;
    case BuiltinProfile::lp_heat_2:
      p.label = "lp-heat-2";
      p.eval = [](double l) { return l * l * l * l * std::exp(-l * l); };
      break;
    case BuiltinProfile::lp_heat_3:
      p.label = "lp-heat-3";
      p.eval = [](double l) { return std::pow(l, 6.0) * std::exp(-l * l); };
      break;
    case BuiltinProfile::bump_gamma:
      p.label = "bump-gamma";
      p.eval = [epsilon](double l) { return annulus_bump(l, epsilon); };
      break;
  }
  fill_metadata(p);
  return p;
}

MultiplierProfile make_profile(const std::string& label, std::function<double(double)> fn) {
  MultiplierProfile p;
  p.label = label;
  p.eval = std::move(fn);
  fill_metadata(p);
  return p;
}

std::vector<std::string> builtin_profile_tags() {
  return {"heat", "lp-heat", "lp-heat-2", "lp-heat-3", "bump-gamma"};
}

MultiplierProfile profile_from_tag(const std::string& tag) {
  static const std::map<std::string, BuiltinProfile> table = {
      {"heat", BuiltinProfile::heat},
      {"lp-heat", BuiltinProfile::lp_heat},
      {"lp-heat-2", BuiltinProfile::lp_heat_2},
      {"lp-heat-3", BuiltinProfile::lp_heat_3},
      {"bump-gamma", BuiltinProfile::bump_gamma},
  };
  auto it = table.find(tag);
  require(it != table.end(), Errc::config_invalid, "unknown profile tag '" + tag + "'");
  return make_profile(it->second);
}

ProfileValidation validate_class_A(const MultiplierProfile& profile) {
  ProfileValidation v;
  double scale = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double l = 8.0 * static_cast<double>(i) / 64.0;
    scale = std::max(scale, std::fabs(profile.eval(l)));
    v.evenness_residual =
        std::max(v.evenness_residual, std::fabs(profile.eval(l) - profile.eval(-l)));
  }
  v.best_epsilon = profile.tauberian_epsilon;
  v.vanishing_order = profile.vanishing_order;
  v.value_at_zero = profile.value_at_zero;
  if (profile.tauberian_epsilon) {
    const double eps = *profile.tauberian_epsilon;
    double mn = std::fabs(profile.eval(0.75 * eps));
    for (int i = 0; i < 64; ++i) {
      const double l = 0.5 * eps * std::pow(4.0, (i + 0.5) / 64.0);
      mn = std::min(mn, std::fabs(profile.eval(l)));
    }
    v.annulus_min_abs = mn;
    v.tauberian_ok = mn > 1e-10 * std::max(scale, 1e-30);
  }
  return v;
}

namespace {

// Dilation-invariant normalizer Xi(l) = sum_{k in Z} Phi(2^-k l) Gamma(2^-k l).
// Only the k with 2^-k |l| inside the annulus contribute.
double xi_series(const MultiplierProfile& phi, double eps, double lambda) {
  const double u = std::fabs(lambda);
  if (u == 0.0) return 0.0;
  const int k_lo = static_cast<int>(std::floor(std::log2(u / (2.0 * eps)))) - 1;
  const int k_hi = static_cast<int>(std::ceil(std::log2(2.0 * u / eps))) + 1;
  double acc = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double arg = std::ldexp(u, -k);
    const double g = annulus_bump(arg, eps);
    if (g != 0.0) acc += phi.eval(arg) * g;
  }
  return acc;
}

double theta_direct(const MultiplierProfile& phi, double eps, double lambda) {
  const double g = annulus_bump(lambda, eps);
  if (g == 0.0) return 0.0;
  const double xi = xi_series(phi, eps, lambda);
  return g / xi;
}

}  // namespace

CalderonPartition build_calderon(const MultiplierProfile& profile, PartitionKind kind) {
  require(profile.tauberian_epsilon.has_value(), Errc::tauberian_gap_uncovered,
          "profile '" + profile.label + "' has no Tauberian annulus");
  if (kind == PartitionKind::homogeneous)
    require(profile.vanishing_order >= 1, Errc::profile_not_admissible,
            "homogeneous partition requires a profile vanishing at 0");

  CalderonPartition part;
  part.kind = kind;
  part.epsilon = *profile.tauberian_epsilon;
  part.phi = profile;
  part.psi = make_profile(BuiltinProfile::heat);
  const double eps = part.epsilon;

  // Xi must be bounded away from zero on the annulus; a sign-changing custom
  // profile can break this even though it satisfies the Tauberian condition.
  {
    double xi_min = std::fabs(xi_series(profile, eps, eps));
    double xi_max = xi_min;
    for (int i = 0; i <= 512; ++i) {
      const double l = 0.5 * eps * std::pow(4.0, static_cast<double>(i) / 512.0);
      const double xi = std::fabs(xi_series(profile, eps, l));
      xi_min = std::min(xi_min, xi);
      xi_max = std::max(xi_max, xi);
    }
    require(xi_min > 1e-13 * xi_max, Errc::tauberian_gap_uncovered,
            "normalizer series vanishes inside the Tauberian annulus");
  }

  // Tabulate Theta on a dense log grid over the annulus.  Shape-preserving
  // cubics converge at second order, so the grid must be fine enough to
  // meet the 1e-9 interpolation budget.
  const std::size_t m = 131073;
  {
    const double l0 = std::log(0.5 * eps);
    const double l1 = std::log(2.0 * eps);
    const double dl = (l1 - l0) / static_cast<double>(m - 1);
    std::vector<double> vals(m);
    for (std::size_t i = 0; i < m; ++i)
      vals[i] = theta_direct(profile, eps, std::exp(l0 + dl * static_cast<double>(i)));
    auto table = std::make_shared<PchipTable>();
    table->build(l0, dl, std::move(vals));
    MultiplierProfile theta;
    theta.label = "theta(" + profile.label + ")";
    theta.eval = [table, eps](double lambda) {
      const double u = std::fabs(lambda);
      if (u <= 0.5 * eps || u >= 2.0 * eps) return 0.0;
      return table->eval(std::log(u));
    };
    theta.tauberian_epsilon = eps;
    theta.vanishing_order = 7;
    theta.value_at_zero = 0.0;
    part.theta = std::move(theta);
  }

  // Upsilon completes the inhomogeneous head: Psi Upsilon = 1 - sum_{k>=1}.
  // The table stores the product Psi * Upsilon, which is bounded and smooth;
  // the exp(l^2) factor is attached at evaluation so it cancels exactly
  // against Psi in the reproducing sum.
  {
    const double dl = 2.0 * eps / static_cast<double>(m - 1);
    std::vector<double> vals(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double l = dl * static_cast<double>(i);
      double head = 0.0;
      for (int k = 1; k <= 3; ++k) {  // 2^-k l <= eps for l <= 2 eps, k >= 1
        const double arg = std::ldexp(l, -k);
        head += profile.eval(arg) * theta_direct(profile, eps, arg);
      }
      vals[i] = 1.0 - head;
    }
    auto table = std::make_shared<PchipTable>();
    table->build(0.0, dl, std::move(vals));
    MultiplierProfile ups;
    ups.label = "upsilon(" + profile.label + ")";
    ups.eval = [table, eps](double lambda) {
      const double u = std::fabs(lambda);
      if (u >= 2.0 * eps) return 0.0;
      return table->eval(u) * std::exp(u * u);
    };
    ups.value_at_zero = ups.eval(0.0);
    part.upsilon = std::move(ups);
  }

  return part;
}

double CalderonPartition::identity_sum(double lambda, int k_cap) const {
  const double u = std::fabs(lambda);
  double acc = 0.0;
  int k_lo, k_hi;
  if (u == 0.0) {
    k_lo = 1;
    k_hi = 0;  // no annulus terms at the origin
  } else {
    k_lo = static_cast<int>(std::floor(std::log2(u / (2.0 * epsilon)))) - k_margin;
    k_hi = static_cast<int>(std::ceil(std::log2(2.0 * u / epsilon))) + k_margin;
  }
  if (kind == PartitionKind::inhomogeneous) {
    k_lo = std::max(k_lo, 1);
    acc += psi.eval(lambda) * upsilon.eval(lambda);
  }
  if (k_cap >= 0) k_hi = std::min(k_hi, k_cap);
  for (int k = k_lo; k <= k_hi; ++k) {
    const double arg = std::ldexp(u, -k);
    const double th = theta.eval(arg);
    if (th != 0.0) acc += phi.eval(arg) * th;
  }
  return acc;
}

double partition_residual(const CalderonPartition& partition,
                          std::span<const double> lambda_samples, int k_cap) {
  double worst = 0.0;
  for (double l : lambda_samples)
    worst = std::max(worst, std::fabs(partition.identity_sum(l, k_cap) - 1.0));
  return worst;
}

}  // namespace lplab
