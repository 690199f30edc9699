#include "lplab/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include "lplab/equivalence.hpp"
#include "parallel.hpp"

namespace lplab {

namespace {

Grid build_grid(const ModelConfig& mc) {
  DomainParams params;
  params.period = mc.period;
  params.radius = mc.radius;
  // Schrodinger-type models live on a Lebesgue halfline grid.
  params.bessel_lambda = mc.model == "bessel" ? mc.bessel_lambda : 0.0;
  return make_grid(mc.kind == "torus" ? GridKind::line_periodic : GridKind::halfline,
                   mc.size, params);
}

SpectralModel build_model(const ModelConfig& mc, const Grid& grid) {
  if (mc.model == "laplacian") return build_operator(grid, ModelTag::laplacian);
  if (mc.model == "bessel")
    return build_operator(grid, ModelTag::bessel, mc.bessel_lambda);
  return build_operator(grid, ModelTag::bessel_schrodinger, mc.bessel_lambda);
}

// Oracle-grade value of the per-axis constant:  integral over (0, inf) of
// Phi(s)^2 ds/s, by fine log-trapezoid.  Finite for profiles vanishing at 0.
double profile_square_dtt(const MultiplierProfile& p) {
  const double du = 1.0 / 256.0;
  double acc = 0.0;
  for (double u = -40.0; u <= 16.0; u += du) {
    const double s = std::exp2(u);
    const double v = p.eval(s);
    acc += v * v;
  }
  return acc * du * std::log(2.0);
}

struct SuiteTimer {
  RunReport& report;
  std::string name;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ~SuiteTimer() {
    const auto dt = std::chrono::steady_clock::now() - start;
    report.timings_ms.emplace_back(
        name, std::chrono::duration<double, std::milli>(dt).count());
  }
};

struct Lab {
  const ExperimentConfig& cfg;
  RunReport& report;
  Grid grid1, grid2;
  SpectralModel model1, model2;
  MultiplierProfile prof1, prof2, alt1, alt2;
  ScaleLadder ladder;
  Corpus corpus;

  Lab(const ExperimentConfig& c, RunReport& r) : cfg(c), report(r) {
    grid1 = build_grid(c.axis1);
    grid2 = build_grid(c.axis2);
    model1 = build_model(c.axis1, grid1);
    model2 = build_model(c.axis2, grid2);
    prof1 = profile_from_tag(c.profile1);
    prof2 = profile_from_tag(c.profile2);
    alt1 = profile_from_tag(c.comparison_profile1);
    alt2 = profile_from_tag(c.comparison_profile2);
    ladder = make_ladder(c.ladder.j_min, c.ladder.j_max, c.ladder.samples_per_octave);
    CorpusSpec spec;
    spec.families = c.corpus.families;
    spec.count = c.corpus.count;
    spec.seed = c.corpus.seed;
    spec.band_lo = c.corpus.band_lo;
    spec.band_hi = c.corpus.band_hi;
    corpus = generate_corpus(model1, model2, spec);
  }

  void add(CheckResult r) { report.results.push_back(std::move(r)); }

  ProductWeight weight_of(const WeightConfig& wc) const {
    return make_power_weight(grid1, grid2, wc.a1, wc.a2);
  }

  void identities() {
    SuiteTimer timer{report, "identities"};
    const bool both_line = grid1.kind == GridKind::line_periodic &&
                           grid2.kind == GridKind::line_periodic;
    const double ref_g =
        std::sqrt(profile_square_dtt(prof1) * profile_square_dtt(prof2));
    const double l1 = cfg.exponents.lambda1, l2 = cfg.exponents.lambda2;
    const double ref_gstar =
        std::sqrt(1.0 / (grid1.dimension_exponent() * l1 - 1.0) /
                  (grid2.dimension_exponent() * l2 - 1.0));
    const ProductWeight unit = make_constant_weight(grid1, grid2);

    FunctionalRequest req;
    req.want_peetre = false;
    req.gstar_lambda1 = l1;
    req.gstar_lambda2 = l2;

    const std::size_t n = corpus.entries.size();
    struct Row {
      double g, area, gstar, fnorm, tail;
    };
    std::vector<Row> rows(n);
    std::vector<FunctionalFields> keep(cfg.output.dump_fields ? 1 : 0);
    detail::parallel_for(n, worker_count(), [&](std::size_t i) {
      const auto& f = corpus.entries[i].field;
      const FunctionalFields ff =
          compute_functionals(model1, model2, prof1, prof2, ladder, f, req);
      rows[i] = {weighted_lp_norm(ff.g, unit, 2.0), weighted_lp_norm(ff.area, unit, 2.0),
                 weighted_lp_norm(ff.gstar, unit, 2.0), weighted_lp_norm(f, unit, 2.0),
                 ff.tail_energy};
      if (i == 0 && cfg.output.dump_fields) keep[0] = ff;
    });

    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = corpus.entries[i];
      const double rg = rows[i].g / rows[i].fnorm;
      add({"identities", "g_l2_ratio", e.label, rg, rg / ref_g, 0.0,
           std::fabs(rg / ref_g - 1.0) <= 0.02 ? "pass" : "fail"});
      const double rs = rows[i].area / rows[i].g;
      add({"identities", "area_vs_g", e.label, rs, rs, 0.0,
           both_line ? (std::fabs(rs - 1.0) <= 0.02 ? "pass" : "fail") : "info"});
      const double rgs = rows[i].gstar / rows[i].g;
      add({"identities", "gstar_vs_g", e.label, rgs, rgs / ref_gstar, 0.0,
           both_line ? (std::fabs(rgs / ref_gstar - 1.0) <= 0.03 ? "pass" : "fail")
                     : "info"});
      add({"identities", "ladder_tail_energy", e.label, rows[i].tail, 0.0, 0.0,
           rows[i].tail <= 1e-3 ? "pass" : "flag"});
    }
    if (cfg.output.dump_fields && !keep.empty()) {
      report.field_dumps.emplace_back("field_g_entry0.bin", keep[0].g);
      report.field_dumps.emplace_back("field_area_entry0.bin", keep[0].area);
      report.field_dumps.emplace_back("field_gstar_entry0.bin", keep[0].gstar);
    }
  }

  void decay() {
    SuiteTimer timer{report, "decay"};
    int axis = 1;
    for (const SpectralModel* m : {&model1, &model2}) {
      const Grid& g = m->grid();
      const DoublingConstants dc = estimate_doubling(g);
      add({"decay", "doubling_n_hat", "axis" + std::to_string(axis), dc.n_hat, 0.0, 0.0,
           "info"});
      add({"decay", "doubling_d_hat", "axis" + std::to_string(axis), dc.d_hat, 0.0, 0.0,
           dc.d_hat <= dc.n_hat + 0.1 ? "pass" : "fail"});

      // Localization integral at a few scales.
      const double n_exp = std::ceil(dc.n_hat) + 1.0;
      double worst = 0.0;
      for (double t : {g.radius_cap() / 16.0, g.radius_cap() / 4.0}) {
        const auto res = decay_integral_check(g, g.points[g.size() / 2], t, n_exp);
        worst = std::max(worst, res.bound_ratio);
      }
      add({"decay", "localization_ratio", "axis" + std::to_string(axis), worst, 0.0, 0.0,
           "info"});

      // Composed-kernel vanishing-order gain, alt profile inside.
      std::vector<std::pair<double, double>> pairs;
      for (int q = 1; q <= 6; ++q) pairs.emplace_back(1.0, std::ldexp(1.0, -q));
      const DecayReport rep =
          decay_check(*m, prof1, alt1, pairs, DecayMode::composed);
      const double threshold = static_cast<double>(rep.inner_vanishing_order) - 0.3;
      add({"decay", "composed_alpha", "axis" + std::to_string(axis), rep.fitted_alpha,
           rep.fitted_alpha / threshold, 0.0,
           rep.fitted_alpha >= threshold ? "pass" : "fail"});
      ++axis;
    }
  }

  void partition() {
    SuiteTimer timer{report, "partition"};
    std::vector<double> samples;
    for (int i = 0; i < 10000; ++i)
      samples.push_back(1e-3 * std::pow(1e6, i / 9999.0));
    for (auto kind : {PartitionKind::inhomogeneous, PartitionKind::homogeneous}) {
      const CalderonPartition part = build_calderon(prof1, kind);
      const double res = partition_residual(part, samples);
      const char* name = kind == PartitionKind::inhomogeneous ? "residual_inhomogeneous"
                                                              : "residual_homogeneous";
      add({"partition", name, "-", res, 0.0, 0.0, res < 1e-8 ? "pass" : "fail"});
    }

    // Operator-level reconstruction through the homogeneous partition.
    const CalderonPartition part = build_calderon(prof1, PartitionKind::homogeneous);
    int axis = 1;
    for (const SpectralModel* m : {&model1, &model2}) {
      Eigen::VectorXd f(m->size());
      for (std::size_t i = 0; i < m->size(); ++i)
        f(static_cast<Eigen::Index>(i)) = std::sin(0.7 * static_cast<double>(i) + 0.3);
      Eigen::VectorXd coeff = m->to_modes() * f;
      if (m->zero_mode() >= 0) coeff(m->zero_mode()) = 0.0;
      f = m->from_modes() * coeff;

      const double t = 1.3;
      Eigen::VectorXd symbol(m->spectrum().size());
      for (Eigen::Index k = 0; k < symbol.size(); ++k) {
        const double s = t * std::sqrt(m->spectrum()(k));
        symbol(k) = s == 0.0 ? 0.0 : part.identity_sum(s);
      }
      const Eigen::VectorXd rec = m->apply_spectral(symbol, f);
      const double rel = (rec - f).norm() / f.norm();
      add({"partition", "operator_reconstruction", "axis" + std::to_string(axis), rel, 0.0,
           0.0, rel < 1e-6 ? "pass" : "fail"});
      ++axis;
    }
  }

  void weights() {
    SuiteTimer timer{report, "weights"};
    for (const auto& wc : cfg.weights) {
      const ProductWeight w = weight_of(wc);
      const std::string tag =
          "power(" + std::to_string(wc.a1) + "," + std::to_string(wc.a2) + ")";
      for (double p : cfg.exponents.p) {
        if (p < 1.0) continue;
        const ApCharacteristic ap = ap_characteristic(w, p);
        // |x|^a membership: -1 < a < p-1 for p > 1, and -1 < a <= 0 at p = 1
        auto axis_member = [&](double a) {
          return p > 1.0 ? (a > -1.0 && a < p - 1.0) : (a > -1.0 && a <= 0.0);
        };
        const bool member_rule = axis_member(wc.a1) && axis_member(wc.a2);
        add({"weights", "ap_characteristic", tag + "@p=" + std::to_string(p), ap.value,
             0.0, 0.0, ap.divergent == !member_rule ? "pass" : "fail"});
      }
      const std::vector<double> probe = {1.0, 1.2, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0};
      const auto qw = critical_index(w, probe);
      add({"weights", "critical_index", tag,
           qw.value_or(std::numeric_limits<double>::infinity()), 0.0, 0.0, "info"});
    }
  }

  EquivalenceReport theorem_for(const SpectralModel& m1, const SpectralModel& m2,
                                const Corpus& corp, const ProductWeight& w,
                                double p) const {
    return theorem_suite(m1, m2, corp, prof1, prof2, ladder, w, p, cfg.exponents.lambda1,
                         cfg.exponents.lambda2, cfg.exponents.lambda1p,
                         cfg.exponents.lambda2p);
  }

  void theorem() {
    SuiteTimer timer{report, "theorem"};
    // Optional refinement pass: doubled grids, same physical corpus spec.
    Grid rg1, rg2;
    SpectralModel rm1, rm2;
    Corpus rcorpus;
    if (cfg.checks.refine) {
      ModelConfig a1 = cfg.axis1, a2 = cfg.axis2;
      a1.size *= 2;
      a2.size *= 2;
      rg1 = build_grid(a1);
      rg2 = build_grid(a2);
      rm1 = build_model(a1, rg1);
      rm2 = build_model(a2, rg2);
      CorpusSpec spec;
      spec.families = cfg.corpus.families;
      spec.count = cfg.corpus.count;
      spec.seed = cfg.corpus.seed;
      spec.band_lo = cfg.corpus.band_lo;
      spec.band_hi = cfg.corpus.band_hi;
      rcorpus = generate_corpus(rm1, rm2, spec);
    }

    for (const auto& wc : cfg.weights) {
      const ProductWeight w = weight_of(wc);
      for (double p : cfg.exponents.p) {
        const EquivalenceReport rep = theorem_for(model1, model2, corpus, w, p);
        EquivalenceReport fine;
        if (cfg.checks.refine) {
          const ProductWeight wf = make_power_weight(rg1, rg2, wc.a1, wc.a2);
          fine = theorem_for(rm1, rm2, rcorpus, wf, p);
        }
        const std::string tag = "p=" + std::to_string(p) + ",w=(" +
                                std::to_string(wc.a1) + "," + std::to_string(wc.a2) + ")";
        add({"theorem", "hypotheses_satisfied", tag,
             rep.hypotheses.satisfied ? 1.0 : 0.0, 0.0, 0.0,
             rep.hypotheses.satisfied ? "pass" : "flag"});
        for (std::size_t a = 0; a < 4; ++a) {
          for (std::size_t b = a + 1; b < 4; ++b) {
            const double spread = rep.spread(a, b);
            double drift = 0.0;
            std::string status = spread < 10.0 ? "pass" : "flag";
            if (cfg.checks.refine) {
              drift = std::fabs(fine.spread(a, b) / spread - 1.0);
              if (drift >= 0.2) status = "flag";
            }
            add({"theorem",
                 rep.functional_names[a] + "_vs_" + rep.functional_names[b], tag, spread,
                 rep.ratio_high[a][b] / std::max(rep.ratio_low[a][b], 1e-300), drift,
                 status});
          }
        }
      }
    }
  }

  void inequalities() {
    SuiteTimer timer{report, "inequalities"};
    InequalityConfig icfg;
    icfg.p = cfg.exponents.p.front();
    icfg.lambda1 = cfg.exponents.lambda1;
    icfg.lambda2 = cfg.exponents.lambda2;
    icfg.alt_profile1 = alt1;
    icfg.alt_profile2 = alt2;
    const ProductWeight w = weight_of(cfg.weights.front());
    const auto items =
        inequality_suite(model1, model2, corpus, prof1, prof2, ladder, w, icfg);
    for (const auto& item : items) {
      if (item.pointwise) {
        add({"inequalities", item.name, "-", item.worst_violation, 0.0, 0.0,
             item.worst_violation <= 1e-9 ? "pass" : "fail"});
      } else {
        add({"inequalities", item.name, "-", item.max_ratio, 0.0, 0.0, "info"});
      }
    }
  }

  void submean() {
    SuiteTimer timer{report, "submean"};
    const std::vector<std::pair<int, int>> j_pairs = {{0, 0}, {1, 2}, {2, 1}};
    const int k_top = std::min(cfg.ladder.j_max, 8);
    for (double r : {1.0, 2.0}) {
      const SubmeanResult res = submean_check(
          model1, model2, prof1, prof2, corpus.entries.front().field, r, 1.0,
          cfg.exponents.lambda1p, cfg.exponents.lambda2p, j_pairs, k_top);
      add({"submean", "best_constant_r" + std::to_string(static_cast<int>(r)), "-",
           res.best_constant, 0.0, 0.0, "info"});
    }
  }
};

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
  RunReport report;
  report.config_echo = config_to_json(config);
  set_worker_count(config.threads);

  Lab lab(config, report);
  if (config.checks.identities) lab.identities();
  if (config.checks.decay) lab.decay();
  if (config.checks.partition) lab.partition();
  if (config.checks.weights) lab.weights();
  if (config.checks.theorem) lab.theorem();
  if (config.checks.inequalities) lab.inequalities();
  if (config.checks.submean) lab.submean();
  return report;
}

std::vector<std::string> execute_and_write(const ExperimentConfig& config,
                                           RunReport* report_out) {
  const RunReport report = run_experiment(config);
  std::vector<std::string> files =
      write_report(report, config.output.dir, config.output.formats);
  namespace fs = std::filesystem;
  for (const auto& [name, field] : report.field_dumps) {
    const std::string path = (fs::path(config.output.dir) / name).string();
    dump_field_binary(path, field);
    files.push_back(path);
  }
  if (report_out) *report_out = report;
  return files;
}

}  // namespace lplab
