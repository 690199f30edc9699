#include "lplab/equivalence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>

#include "parallel.hpp"

namespace lplab {

namespace {

std::atomic<std::size_t> g_workers{2};

double field_l2(const Grid& g1, const Grid& g2, const Eigen::MatrixXd& f) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < f.cols(); ++j)
    for (Eigen::Index i = 0; i < f.rows(); ++i)
      acc += f(i, j) * f(i, j) * g1.quad_weights[i] * g2.quad_weights[j];
  return std::sqrt(acc);
}

std::vector<Eigen::Index> band_modes(const SpectralModel& m, double lo, double hi) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index k = 0; k < m.spectrum().size(); ++k) {
    const double s = std::sqrt(m.spectrum()(k));
    if (s >= lo && s <= hi && k != m.zero_mode()) idx.push_back(k);
  }
  return idx;
}

}  // namespace

void set_worker_count(std::size_t n) { g_workers.store(std::max<std::size_t>(1, n)); }
std::size_t worker_count() { return g_workers.load(); }

Corpus generate_corpus(const SpectralModel& m1, const SpectralModel& m2,
                       const CorpusSpec& spec) {
  const auto band1 = band_modes(m1, spec.band_lo, spec.band_hi);
  const auto band2 = band_modes(m2, spec.band_lo, spec.band_hi);
  require(!band1.empty() && !band2.empty(), Errc::band_limit_exceeded,
          "requested band contains no resolvable modes");
  require(!spec.families.empty(), Errc::empty_corpus, "no corpus families requested");

  const auto n1 = static_cast<Eigen::Index>(m1.size());
  const auto n2 = static_cast<Eigen::Index>(m2.size());
  const auto nm1 = m1.spectrum().size();
  const auto nm2 = m2.spectrum().size();

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto pick = [&](const std::vector<Eigen::Index>& v) {
    return v[static_cast<std::size_t>(unif(rng) * 0.999999 * v.size())];
  };

  auto band_project = [&](const Eigen::MatrixXd& f) {
    Eigen::MatrixXd c = m1.to_modes() * f * m2.to_modes().transpose();
    Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(nm1, nm2);
    for (auto a : band1)
      for (auto b : band2) mask(a, b) = 1.0;
    c = c.cwiseProduct(mask);
    return (m1.from_modes() * c * m2.from_modes().transpose()).eval();
  };

  Corpus corpus;
  corpus.seed = spec.seed;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const std::string& family = spec.families[i % spec.families.size()];
    Eigen::MatrixXd f;
    if (family == "single-mode") {
      const auto a = pick(band1);
      const auto b = pick(band2);
      f = m1.from_modes().col(a) * m2.from_modes().col(b).transpose();
    } else if (family == "random-band") {
      Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nm1, nm2);
      for (auto a : band1)
        for (auto b : band2) c(a, b) = gauss(rng);
      f = m1.from_modes() * c * m2.from_modes().transpose();
    } else if (family == "bump") {
      const auto& g1 = m1.grid();
      const auto& g2 = m2.grid();
      auto center = [&](const Grid& g) {
        if (g.kind == GridKind::line_periodic) return (unif(rng) - 0.5) * 0.4 * g.period;
        return (0.35 + 0.3 * unif(rng)) * g.radius;
      };
      auto width = [](const Grid& g) {
        return 0.125 * (g.kind == GridKind::line_periodic ? g.period : g.radius);
      };
      const double c1 = center(g1), s1 = width(g1);
      const double c2 = center(g2), s2 = width(g2);
      const double xi1 = 0.5 * (spec.band_lo + spec.band_hi) * (0.8 + 0.4 * unif(rng));
      const double xi2 = 0.5 * (spec.band_lo + spec.band_hi) * (0.8 + 0.4 * unif(rng));
      f.resize(n1, n2);
      for (Eigen::Index a = 0; a < n1; ++a) {
        const double u = g1.distance(g1.points[a], c1);
        const double e1 = std::exp(-u * u / (s1 * s1)) * std::cos(xi1 * u);
        for (Eigen::Index b = 0; b < n2; ++b) {
          const double v = g2.distance(g2.points[b], c2);
          f(a, b) = e1 * std::exp(-v * v / (s2 * s2)) * std::cos(xi2 * v);
        }
      }
      f = band_project(f);
    } else if (family == "mixture") {
      f = Eigen::MatrixXd::Zero(n1, n2);
      const int terms = 3 + static_cast<int>(i % 3);
      for (int t = 0; t < terms; ++t) {
        const auto a = pick(band1);
        const auto b = pick(band2);
        f += gauss(rng) * (m1.from_modes().col(a) * m2.from_modes().col(b).transpose());
      }
    } else {
      fail(Errc::config_invalid, "unknown corpus family '" + family + "'");
    }

    const double norm = field_l2(m1.grid(), m2.grid(), f);
    require(norm > 1e-12, Errc::band_limit_exceeded,
            "corpus entry '" + family + "' vanishes after band projection");
    f /= norm;
    corpus.entries.push_back({family + "-" + std::to_string(i), std::move(f)});
  }
  return corpus;
}

RatioStats ratio_experiment(const Corpus& corpus, const FieldFunctional& a,
                            const FieldFunctional& b, const ProductWeight& weight,
                            double p) {
  require(!corpus.entries.empty(), Errc::empty_corpus, "corpus is empty");
  RatioStats stats;
  std::vector<std::pair<double, double>> norms(corpus.entries.size());
  detail::parallel_for(corpus.entries.size(), worker_count(), [&](std::size_t i) {
    const auto& f = corpus.entries[i].field;
    norms[i] = {weighted_lp_norm(a(f), weight, p), weighted_lp_norm(b(f), weight, p)};
  });
  stats.c_low = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const auto [na, nb] = norms[i];
    if (nb <= 0.0) {
      stats.excluded.push_back(corpus.entries[i].label);
      continue;
    }
    const double r = na / nb;
    stats.ratios.push_back(r);
    stats.c_low = std::min(stats.c_low, r);
    stats.c_high = std::max(stats.c_high, r);
  }
  return stats;
}

EquivalenceReport theorem_suite(const SpectralModel& m1, const SpectralModel& m2,
                                const Corpus& corpus, const MultiplierProfile& p1,
                                const MultiplierProfile& p2, const ScaleLadder& ladder,
                                const ProductWeight& weight, double p, double lambda1,
                                double lambda2, double lambda1p, double lambda2p) {
  require(!corpus.entries.empty(), Errc::empty_corpus, "corpus is empty");
  EquivalenceReport rep;

  // Hypothesis record (violations are flagged, not fatal).
  rep.hypotheses.p = p;
  rep.hypotheses.lambda1 = lambda1;
  rep.hypotheses.lambda2 = lambda2;
  rep.hypotheses.lambda1p = lambda1p;
  rep.hypotheses.lambda2p = lambda2p;
  {
    const std::vector<double> probe = {1.0, 1.2, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0};
    std::optional<double> qw =
        weight.refinable() ? critical_index(weight, probe) : std::optional<double>(1.0);
    rep.hypotheses.q_w_finite = qw.has_value();
    rep.hypotheses.q_w = qw.value_or(std::numeric_limits<double>::infinity());
    const DoublingConstants d1 = estimate_doubling(m1.grid());
    const DoublingConstants d2 = estimate_doubling(m2.grid());
    const double denom = std::min(p, 2.0);
    rep.hypotheses.lambda_bound = 2.0 * rep.hypotheses.q_w / denom;
    rep.hypotheses.lambda_prime_bound1 = (d1.n_hat + d1.d_hat) * rep.hypotheses.q_w / denom;
    rep.hypotheses.lambda_prime_bound2 = (d2.n_hat + d2.d_hat) * rep.hypotheses.q_w / denom;
    rep.hypotheses.satisfied = rep.hypotheses.q_w_finite &&
                               lambda1 > rep.hypotheses.lambda_bound &&
                               lambda2 > rep.hypotheses.lambda_bound &&
                               lambda1p > rep.hypotheses.lambda_prime_bound1 &&
                               lambda2p > rep.hypotheses.lambda_prime_bound2;
  }

  const std::size_t n = corpus.entries.size();
  std::array<std::vector<double>, 4> norms;
  for (auto& v : norms) v.assign(n, 0.0);
  std::vector<double> tails(n, 0.0);

  FunctionalRequest req;
  req.gstar_lambda1 = lambda1;
  req.gstar_lambda2 = lambda2;
  req.peetre_lambda1 = lambda1p;
  req.peetre_lambda2 = lambda2p;

  detail::parallel_for(n, worker_count(), [&](std::size_t i) {
    const FunctionalFields ff =
        compute_functionals(m1, m2, p1, p2, ladder, corpus.entries[i].field, req);
    norms[0][i] = weighted_lp_norm(ff.area, weight, p);
    norms[1][i] = weighted_lp_norm(ff.g, weight, p);
    norms[2][i] = weighted_lp_norm(ff.gstar, weight, p);
    norms[3][i] = weighted_lp_norm(ff.peetre_vertical, weight, p);
    tails[i] = ff.tail_energy;
  });

  rep.norms = norms;
  for (std::size_t i = 0; i < n; ++i) {
    rep.entry_labels.push_back(corpus.entries[i].label);
    rep.max_tail_energy = std::max(rep.max_tail_energy, tails[i]);
  }

  for (std::size_t i = 0; i < n; ++i) {
    bool zero = false;
    for (const auto& per_functional : norms) zero = zero || per_functional[i] <= 0.0;
    if (zero) rep.excluded.push_back(rep.entry_labels[i]);
  }
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (norms[b][i] <= 0.0) continue;
        const double r = norms[a][i] / norms[b][i];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      rep.ratio_low[a][b] = lo;
      rep.ratio_high[a][b] = hi;
    }
  }
  return rep;
}

PointwiseChecks pointwise_checks(const SpectralModel& m1, const SpectralModel& m2,
                                 const MultiplierProfile& p1, const MultiplierProfile& p2,
                                 const ScaleLadder& ladder, const Eigen::MatrixXd& f,
                                 double lambda1, double lambda2) {
  PointwiseChecks out;
  const ScaleField sf = multiplier_field(m1, m2, p1, p2, ladder, f);
  const ScaleField pe = peetre_field(sf, lambda1, lambda2);
  for (std::size_t k = 0; k < sf.abs_slices.size(); ++k)
    out.peetre_vs_field =
        std::max(out.peetre_vs_field, (sf.abs_slices[k] - pe.abs_slices[k]).maxCoeff());

  const Eigen::MatrixXd area = area_function(sf);
  const Eigen::MatrixXd gstar = gstar_function(sf, lambda1, lambda2);
  const Eigen::MatrixXd vert = vertical_peetre_norm(pe);
  const double c_gstar = std::exp2(0.5 * (m1.grid().dimension_exponent() * lambda1 +
                                          m2.grid().dimension_exponent() * lambda2));
  const double c_peetre = std::exp2(lambda1 + lambda2);
  out.area_vs_gstar = (area - c_gstar * gstar).maxCoeff();
  out.area_vs_peetre = (area - c_peetre * vert).maxCoeff();
  return out;
}

std::vector<InequalityItem> inequality_suite(const SpectralModel& m1,
                                             const SpectralModel& m2, const Corpus& corpus,
                                             const MultiplierProfile& p1,
                                             const MultiplierProfile& p2,
                                             const ScaleLadder& ladder,
                                             const ProductWeight& weight,
                                             const InequalityConfig& cfg) {
  require(!corpus.entries.empty(), Errc::empty_corpus, "corpus is empty");
  const std::size_t n = corpus.entries.size();
  const DoublingConstants d1 = estimate_doubling(m1.grid());
  const DoublingConstants d2 = estimate_doubling(m2.grid());

  struct PerEntry {
    double area = 0, g = 0, gstar = 0, peetre = 0;
    double peetre_alt = 0;
    double peetre_shift = 0, gstar_scaled = 0;
    double area_peetre_violation = 0;
  };
  std::vector<PerEntry> rows(n);

  FunctionalRequest base;
  base.gstar_lambda1 = cfg.lambda1;
  base.gstar_lambda2 = cfg.lambda2;
  base.peetre_lambda1 = cfg.lambda1;
  base.peetre_lambda2 = cfg.lambda2;

  // Second exponent set: Peetre at lambda + D/2 against g* at (2/n) lambda.
  FunctionalRequest shifted;
  shifted.want_g = shifted.want_area = false;
  shifted.gstar_lambda1 = 2.0 / m1.grid().dimension_exponent() * cfg.lambda1;
  shifted.gstar_lambda2 = 2.0 / m2.grid().dimension_exponent() * cfg.lambda2;
  shifted.peetre_lambda1 = cfg.lambda1 + 0.5 * d1.d_hat;
  shifted.peetre_lambda2 = cfg.lambda2 + 0.5 * d2.d_hat;

  FunctionalRequest alt;
  alt.want_g = alt.want_area = alt.want_gstar = false;
  alt.peetre_lambda1 = cfg.lambda1;
  alt.peetre_lambda2 = cfg.lambda2;

  detail::parallel_for(n, worker_count(), [&](std::size_t i) {
    const auto& f = corpus.entries[i].field;
    const FunctionalFields ff = compute_functionals(m1, m2, p1, p2, ladder, f, base);
    rows[i].area = weighted_lp_norm(ff.area, weight, cfg.p);
    rows[i].g = weighted_lp_norm(ff.g, weight, cfg.p);
    rows[i].gstar = weighted_lp_norm(ff.gstar, weight, cfg.p);
    rows[i].peetre = weighted_lp_norm(ff.peetre_vertical, weight, cfg.p);
    rows[i].area_peetre_violation =
        (ff.area - std::exp2(cfg.lambda1 + cfg.lambda2) * ff.peetre_vertical).maxCoeff();

    const FunctionalFields fs = compute_functionals(m1, m2, p1, p2, ladder, f, shifted);
    rows[i].peetre_shift = weighted_lp_norm(fs.peetre_vertical, weight, cfg.p);
    rows[i].gstar_scaled = weighted_lp_norm(fs.gstar, weight, cfg.p);

    const FunctionalFields fa =
        compute_functionals(m1, m2, cfg.alt_profile1, cfg.alt_profile2, ladder, f, alt);
    rows[i].peetre_alt = weighted_lp_norm(fa.peetre_vertical, weight, cfg.p);
  });

  auto max_ratio = [&](auto num, auto den) {
    double worst = 0.0;
    for (const auto& r : rows)
      if (den(r) > 0.0) worst = std::max(worst, num(r) / den(r));
    return worst;
  };

  std::vector<InequalityItem> items;
  items.push_back({"gstar_vs_area",
                   max_ratio([](const PerEntry& r) { return r.gstar; },
                             [](const PerEntry& r) { return r.area; }),
                   0.0, false});
  {
    InequalityItem pointwise{"area_vs_peetre_pointwise", 0.0, 0.0, true};
    for (const auto& r : rows)
      pointwise.worst_violation = std::max(pointwise.worst_violation, r.area_peetre_violation);
    items.push_back(pointwise);
  }
  items.push_back({"peetre_generator_change",
                   std::max(max_ratio([](const PerEntry& r) { return r.peetre_alt; },
                                      [](const PerEntry& r) { return r.peetre; }),
                            max_ratio([](const PerEntry& r) { return r.peetre; },
                                      [](const PerEntry& r) { return r.peetre_alt; })),
                   0.0, false});
  items.push_back({"peetre_vs_g",
                   max_ratio([](const PerEntry& r) { return r.peetre; },
                             [](const PerEntry& r) { return r.g; }),
                   0.0, false});
  items.push_back({"peetre_shift_vs_gstar",
                   max_ratio([](const PerEntry& r) { return r.peetre_shift; },
                             [](const PerEntry& r) { return r.gstar_scaled; }),
                   0.0, false});
  return items;
}

SubmeanResult submean_check(const SpectralModel& m1, const SpectralModel& m2,
                            const MultiplierProfile& p1, const MultiplierProfile& p2,
                            const Eigen::MatrixXd& f, double r, double sigma, double lambda1,
                            double lambda2, std::span<const std::pair<int, int>> j_pairs,
                            int k_top) {
  require(r > 0.0, Errc::hypothesis_violated, "submean exponent r must be positive");
  require(sigma > 0.0, Errc::nonpositive_sigma, "submean rate sigma must be positive");
  const DoublingConstants d1 = estimate_doubling(m1.grid());
  const DoublingConstants d2 = estimate_doubling(m2.grid());
  require(lambda1 > 0.5 * d1.d_hat && lambda2 > 0.5 * d2.d_hat, Errc::hypothesis_violated,
          "submean requires lambda_i > D_i / 2");

  const auto& g1 = m1.grid();
  const auto& g2 = m2.grid();
  const auto n1 = static_cast<Eigen::Index>(g1.size());
  const auto n2 = static_cast<Eigen::Index>(g2.size());

  // Fixed 8-point lattice per axis.
  std::vector<Eigen::Index> xs1, xs2;
  for (int a = 0; a < 8; ++a) {
    xs1.push_back(static_cast<Eigen::Index>((2 * a + 1) * n1 / 16));
    xs2.push_back(static_cast<Eigen::Index>((2 * a + 1) * n2 / 16));
  }
  const double t_samples[] = {std::pow(2.0, 0.25), std::pow(2.0, 0.75)};

  SubmeanResult res;
  const Eigen::MatrixXd c1 = m1.to_modes() * f;

  auto slice_at = [&](double s1, double s2) {
    const Eigen::MatrixXd row = m1.from_modes() * (m1.multiplier_symbol(p1, s1).asDiagonal() * c1);
    return ((row * m2.to_modes().transpose()) * m2.multiplier_symbol(p2, s2).asDiagonal() *
            m2.from_modes().transpose())
        .eval();
  };

  for (double t : t_samples) {
    for (auto [j1, j2] : j_pairs) {
      const double s1 = std::ldexp(t, -j1);
      const double s2 = std::ldexp(t, -j2);
      const Eigen::MatrixXd base = slice_at(s1, s2).cwiseAbs();

      // LHS: Peetre maximal value at the sample lattice, to the power r.
      Eigen::MatrixXd lhs(xs1.size(), xs2.size());
      {
        Eigen::MatrixXd m1max(xs1.size(), n2);
        for (std::size_t a = 0; a < xs1.size(); ++a) {
          Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(n2);
          for (Eigen::Index z = 0; z < n1; ++z) {
            const double k =
                std::pow(1.0 + g1.distance(g1.points[xs1[a]], g1.points[z]) / s1, -lambda1);
            acc = acc.cwiseMax(k * base.row(z));
          }
          m1max.row(a) = acc;
        }
        for (std::size_t a = 0; a < xs1.size(); ++a)
          for (std::size_t b = 0; b < xs2.size(); ++b) {
            double best = 0.0;
            for (Eigen::Index z = 0; z < n2; ++z) {
              const double k = std::pow(
                  1.0 + g2.distance(g2.points[xs2[b]], g2.points[z]) / s2, -lambda2);
              best = std::max(best, k * m1max(a, z));
            }
            lhs(a, b) = std::pow(best, r);
          }
      }

      // RHS: weighted double sum over finer scales of localized r-th moments.
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(xs1.size(), xs2.size());
      for (int k1 = j1; k1 <= k_top; ++k1) {
        const double sk1 = std::ldexp(t, -k1);
        Eigen::MatrixXd kern1(xs1.size(), n1);
        for (std::size_t a = 0; a < xs1.size(); ++a)
          for (Eigen::Index z = 0; z < n1; ++z)
            kern1(a, z) =
                g1.quad_weights[z] /
                (volume(g1, g1.points[z], sk1) *
                 std::pow(1.0 + g1.distance(g1.points[xs1[a]], g1.points[z]) / sk1,
                          lambda1 * r));
        for (int k2 = j2; k2 <= k_top; ++k2) {
          const double sk2 = std::ldexp(t, -k2);
          Eigen::MatrixXd kern2(xs2.size(), n2);
          for (std::size_t b = 0; b < xs2.size(); ++b)
            for (Eigen::Index z = 0; z < n2; ++z)
              kern2(b, z) =
                  g2.quad_weights[z] /
                  (volume(g2, g2.points[z], sk2) *
                   std::pow(1.0 + g2.distance(g2.points[xs2[b]], g2.points[z]) / sk2,
                            lambda2 * r));
          const Eigen::MatrixXd pw =
              slice_at(sk1, sk2).cwiseAbs().array().pow(r).matrix();
          const double decay = std::exp2((j1 - k1) * sigma + (j2 - k2) * sigma);
          rhs += decay * (kern1 * pw * kern2.transpose());
        }
      }

      for (Eigen::Index a = 0; a < lhs.rows(); ++a)
        for (Eigen::Index b = 0; b < lhs.cols(); ++b) {
          if (rhs(a, b) <= 0.0) {
            ++res.excluded;
            continue;
          }
          const double ratio = lhs(a, b) / rhs(a, b);
          res.sample_ratios.push_back(ratio);
          res.best_constant = std::max(res.best_constant, ratio);
        }
    }
  }
  return res;
}

double hardy_norm(const SpectralModel& m1, const SpectralModel& m2,
                  const MultiplierProfile& p1, const MultiplierProfile& p2,
                  const ScaleLadder& ladder, const Eigen::MatrixXd& f,
                  const ProductWeight& weight, double p) {
  for (const auto* prof : {&p1, &p2}) {
    const ProfileValidation v = validate_class_A(*prof);
    require(v.tauberian_ok, Errc::profile_not_admissible,
            "profile '" + prof->label + "' fails the Tauberian condition");
    require(std::fabs(v.value_at_zero) < 1e-12, Errc::profile_not_admissible,
            "profile '" + prof->label + "' must vanish at 0");
  }
  FunctionalRequest req;
  req.want_g = req.want_gstar = req.want_peetre = false;
  const FunctionalFields ff = compute_functionals(m1, m2, p1, p2, ladder, f, req);
  return weighted_lp_norm(ff.area, weight, p);
}

}  // namespace lplab
