#include "lplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lplab {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct BackendParts {
  SpectralBackend backend = SpectralBackend::fourier_torus;
  int zero_mode = -1;
  Eigen::VectorXd spectrum;
  Eigen::MatrixXd to_modes;
  Eigen::MatrixXd from_modes;
};

BackendParts build_torus(const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  require(n % 2 == 0, Errc::invalid_domain, "torus backend requires an even grid size");
  const double T = grid.period;
  const double h = grid.quad_weights.front();

  Eigen::MatrixXd basis(n, n);
  Eigen::VectorXd spec(n);
  // Mode 0: constant.  Modes 2k-1, 2k: cos/sin at frequency 2 pi k / T.
  // Last mode: the alternating Nyquist vector.
  for (Eigen::Index i = 0; i < n; ++i) basis(i, 0) = 1.0 / std::sqrt(T);
  spec(0) = 0.0;
  for (Eigen::Index k = 1; k < n / 2; ++k) {
    const double omega = 2.0 * kPi * static_cast<double>(k) / T;
    for (Eigen::Index i = 0; i < n; ++i) {
      basis(i, 2 * k - 1) = std::sqrt(2.0 / T) * std::cos(omega * grid.points[i]);
      basis(i, 2 * k) = std::sqrt(2.0 / T) * std::sin(omega * grid.points[i]);
    }
    spec(2 * k - 1) = omega * omega;
    spec(2 * k) = omega * omega;
  }
  {
    const double omega = kPi * static_cast<double>(n) / T;
    for (Eigen::Index i = 0; i < n; ++i)
      basis(i, n - 1) = (i % 2 == 0 ? 1.0 : -1.0) / std::sqrt(T);
    spec(n - 1) = omega * omega;
  }
  BackendParts parts;
  parts.backend = SpectralBackend::fourier_torus;
  parts.zero_mode = 0;
  parts.spectrum = std::move(spec);
  parts.to_modes = h * basis.transpose();
  parts.from_modes = std::move(basis);
  return parts;
}

BackendParts build_dense(const Grid& grid, bool dirichlet_origin,
                         const Eigen::VectorXd& potential) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double lam = grid.bessel_lambda;
  const auto& e = grid.edges;
  const auto& p = grid.points;
  const auto& w = grid.quad_weights;

  // Conservative flux form: L = W^-1 K with K symmetric tridiagonal, so the
  // symmetrized operator is W^-1/2 K W^-1/2.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off = Eigen::VectorXd::Zero(n - 1);
  auto edge_coeff = [&](Eigen::Index k) { return std::pow(e[k], 2.0 * lam); };
  for (Eigen::Index k = 0; k < n; ++k) {
    double left;
    if (k == 0) {
      left = dirichlet_origin ? edge_coeff(0) / (p[0] - e[0]) : 0.0;
      if (lam > 0.0) left = 0.0;  // measure degenerates, no flux through 0
    } else {
      left = edge_coeff(k) / (p[k] - p[k - 1]);
    }
    double right;
    if (k == n - 1) {
      right = edge_coeff(n) / (e[n] - p[n - 1]);  // Dirichlet at x = R
    } else {
      right = edge_coeff(k + 1) / (p[k + 1] - p[k]);
    }
    diag(k) = left + right;
    if (k < n - 1) off(k) = -edge_coeff(k + 1) / (p[k + 1] - p[k]);
  }

  Eigen::VectorXd sw(n);
  for (Eigen::Index k = 0; k < n; ++k) sw(k) = std::sqrt(w[k]);
  Eigen::VectorXd sdiag(n), soff(n - 1);
  for (Eigen::Index k = 0; k < n; ++k)
    sdiag(k) = diag(k) / w[k] + (potential.size() ? potential(k) : 0.0);
  for (Eigen::Index k = 0; k < n - 1; ++k) soff(k) = off(k) / (sw(k) * sw(k + 1));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(sdiag, soff, Eigen::ComputeEigenvectors);
  require(solver.info() == Eigen::Success, Errc::eigen_failure,
          "tridiagonal eigendecomposition failed");

  Eigen::VectorXd spec = solver.eigenvalues();
  const double lam_max = spec.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < n; ++k) {
    require(spec(k) >= -1e-10 * lam_max, Errc::eigen_failure,
            "operator has a genuinely negative eigenvalue");
    spec(k) = std::max(spec(k), 0.0);
  }

  const Eigen::MatrixXd& q = solver.eigenvectors();
  BackendParts parts;
  parts.backend = SpectralBackend::dense_eigen;
  parts.zero_mode = -1;
  parts.spectrum = std::move(spec);
  parts.to_modes = q.transpose() * sw.asDiagonal();
  parts.from_modes = sw.cwiseInverse().asDiagonal() * q;
  return parts;
}

}  // namespace

SpectralModel build_operator(const Grid& grid, ModelTag tag, double model_lambda) {
  SpectralModel m;
  m.grid_ = grid;
  m.tag_ = tag;
  m.model_lambda_ = model_lambda;

  BackendParts parts;
  switch (tag) {
    case ModelTag::laplacian:
      require(grid.kind == GridKind::line_periodic, Errc::incompatible_model,
              "laplacian model requires a periodic line grid");
      parts = build_torus(grid);
      break;
    case ModelTag::bessel: {
      require(grid.kind == GridKind::halfline, Errc::incompatible_model,
              "bessel model requires a halfline grid");
      require(std::fabs(grid.bessel_lambda - model_lambda) < 1e-12, Errc::incompatible_model,
              "bessel parameter must match the grid measure exponent");
      parts = build_dense(grid, /*dirichlet_origin=*/model_lambda == 0.0, Eigen::VectorXd());
      break;
    }
    case ModelTag::bessel_schrodinger: {
      require(grid.kind == GridKind::halfline && grid.bessel_lambda == 0.0,
              Errc::incompatible_model,
              "bessel-schrodinger model requires a Lebesgue halfline grid");
      const auto n = static_cast<Eigen::Index>(grid.size());
      Eigen::VectorXd potential(n);
      const double c = model_lambda * model_lambda - model_lambda;
      for (Eigen::Index k = 0; k < n; ++k)
        potential(k) = c / (grid.points[k] * grid.points[k]);
      require(c >= 0.0, Errc::incompatible_model,
              "bessel-schrodinger potential must be nonnegative (lambda outside (0,1))");
      parts = build_dense(grid, /*dirichlet_origin=*/true, potential);
      break;
    }
  }
  m.backend_ = parts.backend;
  m.zero_mode_ = parts.zero_mode;
  m.spectrum_ = std::move(parts.spectrum);
  m.to_modes_ = std::move(parts.to_modes);
  m.from_modes_ = std::move(parts.from_modes);
  return m;
}

Eigen::VectorXd SpectralModel::multiplier_symbol(const MultiplierProfile& profile,
                                                 double t) const {
  require(t > 0.0, Errc::scale_nonpositive, "multiplier scale must be positive");
  Eigen::VectorXd sym(spectrum_.size());
  for (Eigen::Index k = 0; k < spectrum_.size(); ++k)
    sym(k) = profile.eval(t * std::sqrt(spectrum_(k)));
  return sym;
}

Eigen::VectorXd SpectralModel::apply_spectral(const Eigen::VectorXd& per_mode,
                                              const Eigen::VectorXd& f) const {
  require(f.size() == static_cast<Eigen::Index>(size()), Errc::grid_mismatch,
          "field does not live on the model grid");
  return from_modes_ * (per_mode.asDiagonal() * (to_modes_ * f));
}

Eigen::VectorXd SpectralModel::apply_multiplier(const MultiplierProfile& profile, double t,
                                                const Eigen::VectorXd& f) const {
  return apply_spectral(multiplier_symbol(profile, t), f);
}

Eigen::VectorXd SpectralModel::delta(std::size_t source) const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
  d(static_cast<Eigen::Index>(source)) = 1.0 / grid_.quad_weights[source];
  return d;
}

KernelColumn heat_kernel_column(const SpectralModel& model, double t, std::size_t source) {
  require(t > 0.0, Errc::scale_nonpositive, "heat time must be positive");
  Eigen::VectorXd sym(model.spectrum().size());
  for (Eigen::Index k = 0; k < sym.size(); ++k) sym(k) = std::exp(-t * model.spectrum()(k));
  return {source, t, model.apply_spectral(sym, model.delta(source))};
}

KernelColumn multiplier_kernel_column(const SpectralModel& model,
                                      const MultiplierProfile& profile, double t,
                                      std::size_t source) {
  return {source, t, model.apply_multiplier(profile, t, model.delta(source))};
}

DecayReport decay_check(const SpectralModel& model, const MultiplierProfile& outer,
                        const MultiplierProfile& inner,
                        std::span<const std::pair<double, double>> scale_pairs,
                        DecayMode mode, std::span<const double> exponents) {
  DecayReport rep;
  rep.mode = mode;
  rep.inner_vanishing_order = inner.vanishing_order;
  const auto& grid = model.grid();
  const std::size_t n = grid.size();
  const std::size_t sources[] = {n / 5, 2 * n / 5, n / 2, 3 * n / 5, 4 * n / 5};

  if (mode == DecayMode::single) {
    rep.exponents.assign(exponents.begin(), exponents.end());
    rep.fitted_constants.assign(rep.exponents.size(), 0.0);
    for (auto [s, t_unused] : scale_pairs) {
      (void)t_unused;
      for (std::size_t src : sources) {
        const KernelColumn col = multiplier_kernel_column(model, outer, s, src);
        const double y = grid.points[src];
        for (std::size_t i = 0; i < n; ++i) {
          const double v = volume(grid, grid.points[i], s);
          const double rho = grid.distance(grid.points[i], y);
          for (std::size_t q = 0; q < rep.exponents.size(); ++q) {
            const double c =
                std::fabs(col.values(static_cast<Eigen::Index>(i))) * v *
                std::pow(1.0 + rho / s, rep.exponents[q]);
            rep.fitted_constants[q] = std::max(rep.fitted_constants[q], c);
          }
        }
      }
    }
    return rep;
  }

  // Composed mode: kernel of Phi(s sqrt L) Psi(t sqrt L), peak decay in t/s.
  require(inner.vanishing_order >= 1, Errc::profile_not_admissible,
          "composed decay requires an inner profile vanishing at 0");
  for (auto [s, t] : scale_pairs)
    require(t <= s, Errc::scale_order_violation, "composed mode requires t <= s");

  rep.scale_ratios.reserve(scale_pairs.size());
  rep.peak_magnitudes.assign(scale_pairs.size(), 0.0);
  std::vector<std::vector<double>> per_source(std::size(sources));
  for (std::size_t si = 0; si < std::size(sources); ++si) {
    const Eigen::VectorXd d = model.delta(sources[si]);
    for (std::size_t q = 0; q < scale_pairs.size(); ++q) {
      const auto [s, t] = scale_pairs[q];
      const Eigen::VectorXd col =
          model.apply_multiplier(outer, s, model.apply_multiplier(inner, t, d));
      const double peak = col.cwiseAbs().maxCoeff();
      per_source[si].push_back(peak);
      rep.peak_magnitudes[q] = std::max(rep.peak_magnitudes[q], peak);
    }
  }
  for (auto [s, t] : scale_pairs) rep.scale_ratios.push_back(t / s);

  // Least-squares slope of log peak against log(t/s), worst case over sources.
  double alpha_min = std::numeric_limits<double>::infinity();
  for (const auto& peaks : per_source) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto m = static_cast<double>(peaks.size());
    for (std::size_t q = 0; q < peaks.size(); ++q) {
      const double x = std::log(rep.scale_ratios[q]);
      const double y = std::log(std::max(peaks[q], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    alpha_min = std::min(alpha_min, (m * sxy - sx * sy) / (m * sxx - sx * sx));
  }
  rep.fitted_alpha = alpha_min;
  return rep;
}

GaussianFit gaussian_domination_fit(const SpectralModel& model,
                                    std::span<const double> times) {
  const auto& grid = model.grid();
  const std::size_t n = grid.size();
  const std::size_t sources[] = {n / 5, n / 2, 4 * n / 5};
  // Regress log(|p_t(x,y)| V(x, sqrt t)) on rho^2 / t; slope = -1/c.  The
  // constant is then the smallest C making the bound hold on every sample.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (double t : times) {
    for (std::size_t src : sources) {
      const KernelColumn col = heat_kernel_column(model, t, src);
      const double peak = col.values.cwiseAbs().maxCoeff();
      for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(col.values(static_cast<Eigen::Index>(i)));
        const double rho = grid.distance(grid.points[i], grid.points[src]);
        if (a < 1e-10 * peak || rho > grid.radius_cap()) continue;
        const double x = rho * rho / t;
        const double y = std::log(a * volume(grid, grid.points[i], std::sqrt(t)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        cnt += 1.0;
      }
    }
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  GaussianFit fit;
  fit.rate = slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::infinity();
  for (double t : times) {
    for (std::size_t src : sources) {
      const KernelColumn col = heat_kernel_column(model, t, src);
      const double peak = col.values.cwiseAbs().maxCoeff();
      for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(col.values(static_cast<Eigen::Index>(i)));
        const double rho = grid.distance(grid.points[i], grid.points[src]);
        if (a < 1e-10 * peak || rho > grid.radius_cap()) continue;
        const double envelope =
            a * volume(grid, grid.points[i], std::sqrt(t)) *
            std::exp(rho * rho / (fit.rate * t));
        fit.constant = std::max(fit.constant, envelope);
      }
    }
  }
  return fit;
}

}  // namespace lplab
