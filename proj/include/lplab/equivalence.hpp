#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lplab/squarefns.hpp"

namespace lplab {

struct CorpusEntry {
  std::string label;
  Eigen::MatrixXd field;
};

struct Corpus {
  std::uint64_t seed = 0;
  std::vector<CorpusEntry> entries;
};

struct CorpusSpec {
  std::vector<std::string> families = {"single-mode", "random-band", "bump", "mixture"};
  std::size_t count = 20;
  std::uint64_t seed = 1234;
  // Spectral band per axis in sqrt-eigenvalue units; fixed physically so
  // corpora on refined grids stay comparable.
  double band_lo = 0.35;
  double band_hi = 1.6;
};

/// Deterministic corpus of normalized, per-axis mean-zero fields.
Corpus generate_corpus(const SpectralModel& m1, const SpectralModel& m2,
                       const CorpusSpec& spec);

using FieldFunctional = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

struct RatioStats {
  double c_low = 0.0;
  double c_high = 0.0;
  std::vector<double> ratios;            // per included entry
  std::vector<std::string> excluded;     // zero-denominator entries
};

/// ||A(f)||_{L^p_w} / ||B(f)||_{L^p_w} over the corpus.
RatioStats ratio_experiment(const Corpus& corpus, const FieldFunctional& a,
                            const FieldFunctional& b, const ProductWeight& weight, double p);

struct TheoremHypotheses {
  double p = 2.0;
  double q_w = 1.0;                  // estimated critical index (inf -> flagged)
  bool q_w_finite = true;
  double lambda1 = 0, lambda2 = 0;   // g* exponents
  double lambda1p = 0, lambda2p = 0; // Peetre exponents
  double lambda_bound = 0;           // 2 q_w / min(p, 2)
  double lambda_prime_bound1 = 0;    // (n1 + D1) q_w / min(p, 2)
  double lambda_prime_bound2 = 0;
  bool satisfied = true;
};

/// The four functional (quasi-)norms per corpus entry plus pairwise
/// equivalence spreads.  Functional order: S, g, g*, vertical Peetre.
struct EquivalenceReport {
  std::array<std::string, 4> functional_names = {"area", "g", "gstar", "peetre"};
  std::vector<std::string> entry_labels;
  std::array<std::vector<double>, 4> norms;
  std::array<std::array<double, 4>, 4> ratio_low{};
  std::array<std::array<double, 4>, 4> ratio_high{};
  TheoremHypotheses hypotheses;
  std::vector<std::string> excluded;
  double max_tail_energy = 0.0;

  /// C_high / c_low for a functional pair (spread of the equivalence).
  double spread(std::size_t i, std::size_t j) const {
    return ratio_high[i][j] / ratio_low[i][j];
  }
};

EquivalenceReport theorem_suite(const SpectralModel& m1, const SpectralModel& m2,
                                const Corpus& corpus, const MultiplierProfile& p1,
                                const MultiplierProfile& p2, const ScaleLadder& ladder,
                                const ProductWeight& weight, double p, double lambda1,
                                double lambda2, double lambda1p, double lambda2p);

struct PointwiseChecks {
  // worst signed violations (positive = violated by that much)
  double peetre_vs_field = 0.0;   // |slice| - Peetre slice
  double area_vs_gstar = 0.0;     // S - 2^{(n1 l1 + n2 l2)/2} g*
  double area_vs_peetre = 0.0;    // S - 2^{l1 + l2} vertical Peetre
};

/// Discrete-exact pointwise inequalities for one field, streamed over all
/// scale pairs.  Violations are reported relative to the field scale.
PointwiseChecks pointwise_checks(const SpectralModel& m1, const SpectralModel& m2,
                                 const MultiplierProfile& p1, const MultiplierProfile& p2,
                                 const ScaleLadder& ladder, const Eigen::MatrixXd& f,
                                 double lambda1, double lambda2);

struct InequalityItem {
  std::string name;
  double max_ratio = 0.0;
  double worst_violation = 0.0;  // pointwise checks only
  bool pointwise = false;
};

struct InequalityConfig {
  double p = 2.0;
  double lambda1 = 3.0, lambda2 = 3.0;
  MultiplierProfile alt_profile1, alt_profile2;  // generator-change comparison
};

std::vector<InequalityItem> inequality_suite(const SpectralModel& m1,
                                             const SpectralModel& m2, const Corpus& corpus,
                                             const MultiplierProfile& p1,
                                             const MultiplierProfile& p2,
                                             const ScaleLadder& ladder,
                                             const ProductWeight& weight,
                                             const InequalityConfig& cfg);

struct SubmeanResult {
  double best_constant = 0.0;          // smallest C with LHS <= C RHS on samples
  std::vector<double> sample_ratios;   // LHS / RHS per sample
  std::size_t excluded = 0;            // zero-RHS samples
};

SubmeanResult submean_check(const SpectralModel& m1, const SpectralModel& m2,
                            const MultiplierProfile& p1, const MultiplierProfile& p2,
                            const Eigen::MatrixXd& f, double r, double sigma, double lambda1,
                            double lambda2, std::span<const std::pair<int, int>> j_pairs,
                            int k_top);

/// Hardy (quasi-)norm ||S(f)||_{L^p_w}; requires admissible profiles
/// (Tauberian, even, vanishing at 0).
double hardy_norm(const SpectralModel& m1, const SpectralModel& m2,
                  const MultiplierProfile& p1, const MultiplierProfile& p2,
                  const ScaleLadder& ladder, const Eigen::MatrixXd& f,
                  const ProductWeight& weight, double p);

/// Worker count used by corpus-parallel loops (persistent, process-wide).
void set_worker_count(std::size_t n);
std::size_t worker_count();

}  // namespace lplab
