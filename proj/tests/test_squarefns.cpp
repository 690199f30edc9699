#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "lplab/squarefns.hpp"

using namespace lplab;

namespace {

constexpr double kPi = 3.14159265358979323846;

Grid torus(std::size_t n, double T = 32.0) {
  DomainParams p;
  p.period = T;
  return make_grid(GridKind::line_periodic, n, p);
}

// Scalar oracle: integral over (0, inf) of Phi(s)^2 ds/s by fine
// log-trapezoid, independent of the ladder quadrature.
double square_dtt_oracle(const MultiplierProfile& p) {
  const double du = 1.0 / 512.0;
  double acc = 0.0;
  for (double u = -44.0; u <= 16.0; u += du) {
    const double v = p.eval(std::exp2(u));
    acc += v * v;
  }
  return acc * du * std::log(2.0);
}

Eigen::MatrixXcd complex_mode(const Grid& g1, const Grid& g2, int k1, int k2) {
  const auto n1 = static_cast<Eigen::Index>(g1.size());
  const auto n2 = static_cast<Eigen::Index>(g2.size());
  Eigen::VectorXcd u1(n1), u2(n2);
  const std::complex<double> im(0.0, 1.0);
  for (Eigen::Index i = 0; i < n1; ++i)
    u1(i) = std::exp(im * (2.0 * kPi * k1 / g1.period) * g1.points[i]);
  for (Eigen::Index j = 0; j < n2; ++j)
    u2(j) = std::exp(im * (2.0 * kPi * k2 / g2.period) * g2.points[j]);
  return u1 * u2.transpose();
}

Eigen::MatrixXd random_band_field(const SpectralModel& m1, const SpectralModel& m2,
                                  unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m1.spectrum().size(), m2.spectrum().size());
  for (Eigen::Index a = 0; a < c.rows(); ++a)
    for (Eigen::Index b = 0; b < c.cols(); ++b) {
      const double s1 = std::sqrt(m1.spectrum()(a));
      const double s2 = std::sqrt(m2.spectrum()(b));
      if (s1 >= 0.35 && s1 <= 1.6 && s2 >= 0.35 && s2 <= 1.6) c(a, b) = gauss(rng);
    }
  return m1.from_modes() * c * m2.from_modes().transpose();
}

double l2_norm(const Grid& g1, const Grid& g2, const Eigen::MatrixXd& f) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < f.cols(); ++j)
    for (Eigen::Index i = 0; i < f.rows(); ++i)
      acc += f(i, j) * f(i, j) * g1.quad_weights[i] * g2.quad_weights[j];
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("scale ladder construction") {
  const ScaleLadder one = make_ladder(0, 0, 4);
  REQUIRE(one.size() == 4);
  for (double t : one.t_values) {
    CHECK(t >= 1.0);
    CHECK(t <= 2.0);
  }
  for (double w : one.log_weights) CHECK(w == doctest::Approx(std::log(2.0) / 4.0));

  const ScaleLadder five = make_ladder(-2, 2, 1);
  CHECK(five.size() == 5);

  // doubling the sampling halves each weight; octave weights sum to log 2
  const ScaleLadder dense = make_ladder(0, 0, 8);
  CHECK(dense.log_weights.front() == doctest::Approx(0.5 * one.log_weights.front()));
  double octave = 0.0;
  for (double w : dense.log_weights) octave += w;
  CHECK(octave == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(make_ladder(3, 1, 4), Error);
  CHECK_THROWS_AS(make_ladder(0, 0, 0), Error);
}

TEST_CASE("multiplier field on a complex tensor mode has constant modulus") {
  const Grid g = torus(32);
  const SpectralModel m = build_operator(g, ModelTag::laplacian);
  const MultiplierProfile lp = make_profile(BuiltinProfile::lp_heat);
  const ScaleLadder ladder = make_ladder(-2, 4, 2);
  const int k1 = 3, k2 = 5;
  const Eigen::MatrixXcd f = complex_mode(g, g, k1, k2);
  const ScaleField sf = multiplier_field(m, m, lp, lp, ladder, f);

  const double xi1 = 2.0 * kPi * k1 / 32.0;
  const double xi2 = 2.0 * kPi * k2 / 32.0;
  for (std::size_t i1 = 0; i1 < ladder.size(); i1 += 5) {
    for (std::size_t i2 = 0; i2 < ladder.size(); i2 += 5) {
      const double expect =
          std::fabs(lp.eval(ladder.t_values[i1] * xi1) * lp.eval(ladder.t_values[i2] * xi2));
      const auto& s = sf.slice(i1, i2);
      CHECK(s.maxCoeff() == doctest::Approx(expect).epsilon(1e-10));
      CHECK(s.minCoeff() == doctest::Approx(expect).epsilon(1e-10));
    }
  }
}

TEST_CASE("multiplier field: zero input, axis order, grid mismatch") {
  const Grid g = torus(16);
  const SpectralModel m = build_operator(g, ModelTag::laplacian);
  const MultiplierProfile lp = make_profile(BuiltinProfile::lp_heat);
  const ScaleLadder ladder = make_ladder(0, 1, 1);

  const ScaleField zero =
      multiplier_field(m, m, lp, lp, ladder, Eigen::MatrixXd::Zero(16, 16).eval());
  for (const auto& s : zero.abs_slices) CHECK(s.cwiseAbs().maxCoeff() == 0.0);

  // axis order: apply axis 2 first, then axis 1, and compare
  std::mt19937 rng(2);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd f(16, 16);
  for (Eigen::Index i = 0; i < 16; ++i)
    for (Eigen::Index j = 0; j < 16; ++j) f(i, j) = {gauss(rng), gauss(rng)};
  const double t1 = 0.7, t2 = 1.9;
  const Eigen::MatrixXcd one_way = tensor_slice(m, m, lp, lp, t1, t2, f);
  const Eigen::MatrixXcd other =
      tensor_slice(m, m, lp, lp, t2, t1, f.transpose().eval()).transpose();
  CHECK((one_way - other).cwiseAbs().maxCoeff() < 1e-12 * one_way.cwiseAbs().maxCoeff());

  CHECK_THROWS_AS(
      multiplier_field(m, m, lp, lp, ladder, Eigen::MatrixXd::Zero(8, 16).eval()), Error);
}

TEST_CASE("g-function: pointwise constant on tensor modes, L2 identity") {
  const Grid g = torus(64);
  const SpectralModel m = build_operator(g, ModelTag::laplacian);
  const MultiplierProfile lp = make_profile(BuiltinProfile::lp_heat);
  const ScaleLadder ladder = make_ladder(-4, 8, 4);
  const double per_axis = square_dtt_oracle(lp);  // = 1/8 for lp-heat
  CHECK(per_axis == doctest::Approx(0.125).epsilon(1e-6));

  const Eigen::MatrixXcd mode = complex_mode(g, g, 2, 5);
  const ScaleField sf = multiplier_field(m, m, lp, lp, ladder, mode);
  const Eigen::MatrixXd gf = g_function(sf);
  const double expect = std::sqrt(per_axis * per_axis);
  CHECK(gf.maxCoeff() == doctest::Approx(expect).epsilon(0.01));
  CHECK(gf.minCoeff() == doctest::Approx(expect).epsilon(0.01));

  // ||g(f)||_2 = (1/8) ||f||_2 for mean-zero band-limited real fields
  const Eigen::MatrixXd f = random_band_field(m, m, 17);
  const ScaleField sff = multiplier_field(m, m, lp, lp, ladder, f);
  const Eigen::MatrixXd gff = g_function(sff);
  CHECK(l2_norm(g, g, gff) / l2_norm(g, g, f) == doctest::Approx(0.125).epsilon(0.02));
}

TEST_CASE("area function matches g in L2 on the line and is x-constant on modes") {
  const Grid g = torus(64);
  const SpectralModel m = build_operator(g, ModelTag::laplacian);
  const MultiplierProfile lp = make_profile(BuiltinProfile::lp_heat);
  const ScaleLadder ladder = make_ladder(-4, 8, 2);

  const Eigen::MatrixXd f = random_band_field(m, m, 23);
  const ScaleField sf = multiplier_field(m, m, lp, lp, ladder, f);
  const Eigen::MatrixXd gf = g_function(sf);
  const Eigen::MatrixXd af = area_function(sf);
  CHECK(l2_norm(g, g, af) / l2_norm(g, g, gf) == doctest::Approx(1.0).epsilon(1e-10));

  const ScaleField sm = multiplier_field(m, m, lp, lp, ladder, complex_mode(g, g, 3, 4));
  const Eigen::MatrixXd am = area_function(sm);
  CHECK((am.maxCoeff() - am.minCoeff()) / am.maxCoeff() < 0.01);

  const ScaleField zero =
      multiplier_field(m, m, lp, lp, ladder, Eigen::MatrixXd::Zero(64, 64).eval());
  CHECK(area_function(zero).maxCoeff() == 0.0);
}

TEST_CASE("g*: closed-form ratio at lambda = 3 and cone domination") {
  const Grid g = torus(64);
  const SpectralModel m = build_operator(g, ModelTag::laplacian);
  const MultiplierProfile lp = make_profile(BuiltinProfile::lp_heat);
  const ScaleLadder ladder = make_ladder(-4, 8, 2);

  const Eigen::MatrixXd f = random_band_field(m, m, 29);
  const ScaleField sf = multiplier_field(m, m, lp, lp, ladder, f);
  const Eigen::MatrixXd gf = g_function(sf);
  const Eigen::MatrixXd gs = gstar_function(sf, 3.0, 3.0);
  // per-axis factor: integral of (1+|u|)^{-3} du / 2 = 1/2
  CHECK(l2_norm(g, g, gs) / l2_norm(g, g, gf) == doctest::Approx(0.5).epsilon(0.03));

  // pointwise: g* >= 2^{-(n1 l1 + n2 l2)/2} S (the cone carries weight >= 2^{-n l})
  const Eigen::MatrixXd af = area_function(sf);
  const double cone = std::exp2(-0.5 * (3.0 + 3.0));
  CHECK(((gs - cone * af).minCoeff()) >= -1e-12 * gs.maxCoeff());

  // monotone nonincreasing in lambda
  const Eigen::MatrixXd gs4 = gstar_function(sf, 4.0, 4.0);
  CHECK((gs - gs4).minCoeff() >= -1e-12 * gs.maxCoeff());

  CHECK_THROWS_AS(gstar_function(sf, 0.0, 3.0), Error);
}

TEST_CASE("peetre field dominates the modulus and attains it on modes") {
  const Grid g = torus(32);
  const SpectralModel m = build_operator(g, ModelTag::laplacian);
  const MultiplierProfile lp = make_profile(BuiltinProfile::lp_heat);
  const ScaleLadder ladder = make_ladder(-1, 3, 2);

  const Eigen::MatrixXd f = random_band_field(m, m, 31);
  const ScaleField sf = multiplier_field(m, m, lp, lp, ladder, f);
  const ScaleField pe = peetre_field(sf, 2.0, 2.0);
  for (std::size_t k = 0; k < sf.abs_slices.size(); ++k)
    CHECK((pe.abs_slices[k] - sf.abs_slices[k]).minCoeff() >= -1e-14);

  // constant-modulus slices: the supremum is attained at y = x
  const ScaleField sm = multiplier_field(m, m, lp, lp, ladder, complex_mode(g, g, 2, 3));
  const ScaleField pm = peetre_field(sm, 2.0, 2.0);
  for (std::size_t k = 0; k < sm.abs_slices.size(); k += 7)
    CHECK((pm.abs_slices[k] - sm.abs_slices[k]).cwiseAbs().maxCoeff() <
          1e-12 * (sm.abs_slices[k].maxCoeff() + 1e-300));

  // very large exponents collapse the supremum onto the grid point
  const ScaleField plarge = peetre_field(sf, 400.0, 400.0);
  for (std::size_t k = 0; k < sf.abs_slices.size(); k += 7)
    CHECK((plarge.abs_slices[k] - sf.abs_slices[k]).cwiseAbs().maxCoeff() <
          1e-6 * (sf.abs_slices[k].maxCoeff() + 1e-300));

  CHECK_THROWS_AS(peetre_field(sf, -1.0, 1.0), Error);
}

TEST_CASE("vertical peetre norm dominates g and matches it on tensor modes") {
  const Grid g = torus(32);
  const SpectralModel m = build_operator(g, ModelTag::laplacian);
  const MultiplierProfile lp = make_profile(BuiltinProfile::lp_heat);
  const ScaleLadder ladder = make_ladder(-2, 6, 2);

  const Eigen::MatrixXd f = random_band_field(m, m, 37);
  const ScaleField sf = multiplier_field(m, m, lp, lp, ladder, f);
  const Eigen::MatrixXd gf = g_function(sf);
  const Eigen::MatrixXd vp = vertical_peetre_norm(peetre_field(sf, 3.0, 3.0));
  CHECK((vp - gf).minCoeff() >= -1e-12 * vp.maxCoeff());

  const ScaleField sm = multiplier_field(m, m, lp, lp, ladder, complex_mode(g, g, 3, 3));
  const Eigen::MatrixXd gm = g_function(sm);
  const Eigen::MatrixXd vm = vertical_peetre_norm(peetre_field(sm, 3.0, 3.0));
  CHECK((vm - gm).cwiseAbs().maxCoeff() < 1e-12 * gm.maxCoeff());

  // zero field maps to zero
  const ScaleField zero =
      multiplier_field(m, m, lp, lp, ladder, Eigen::MatrixXd::Zero(32, 32).eval());
  CHECK(vertical_peetre_norm(peetre_field(zero, 3.0, 3.0)).maxCoeff() == 0.0);
}

TEST_CASE("square functionals are absolutely homogeneous") {
  const Grid g = torus(32);
  const SpectralModel m = build_operator(g, ModelTag::laplacian);
  const MultiplierProfile lp = make_profile(BuiltinProfile::lp_heat);
  const ScaleLadder ladder = make_ladder(-1, 4, 2);
  const Eigen::MatrixXd f = random_band_field(m, m, 41);

  FunctionalRequest req;  // all four functionals
  const FunctionalFields base = compute_functionals(m, m, lp, lp, ladder, f, req);
  const FunctionalFields scaled =
      compute_functionals(m, m, lp, lp, ladder, (-2.5 * f).eval(), req);
  CHECK((scaled.g - 2.5 * base.g).cwiseAbs().maxCoeff() < 1e-12 * base.g.maxCoeff());
  CHECK((scaled.area - 2.5 * base.area).cwiseAbs().maxCoeff() <
        1e-12 * base.area.maxCoeff());
  CHECK((scaled.gstar - 2.5 * base.gstar).cwiseAbs().maxCoeff() <
        1e-12 * base.gstar.maxCoeff());
  CHECK((scaled.peetre_vertical - 2.5 * base.peetre_vertical).cwiseAbs().maxCoeff() <
        1e-12 * base.peetre_vertical.maxCoeff());
}

TEST_CASE("streaming evaluator equals the composed reductions") {
  const Grid g = torus(32);
  const SpectralModel m = build_operator(g, ModelTag::laplacian);
  const MultiplierProfile lp = make_profile(BuiltinProfile::lp_heat);
  const ScaleLadder ladder = make_ladder(-2, 4, 2);
  const Eigen::MatrixXd f = random_band_field(m, m, 43);

  FunctionalRequest req;
  req.gstar_lambda1 = req.gstar_lambda2 = 3.0;
  req.peetre_lambda1 = req.peetre_lambda2 = 4.0;
  const FunctionalFields ff = compute_functionals(m, m, lp, lp, ladder, f, req);

  const ScaleField sf = multiplier_field(m, m, lp, lp, ladder, f);
  CHECK((ff.g - g_function(sf)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ff.area - area_function(sf)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ff.gstar - gstar_function(sf, 3.0, 3.0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ff.peetre_vertical - vertical_peetre_norm(peetre_field(sf, 4.0, 4.0)))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK(ff.tail_energy < 1e-3);
}

TEST_CASE("g-function is stable when the octave sampling refines") {
  const Grid g = torus(64);
  const SpectralModel m = build_operator(g, ModelTag::laplacian);
  const MultiplierProfile lp = make_profile(BuiltinProfile::lp_heat);
  const Eigen::MatrixXd f = random_band_field(m, m, 47);
  Eigen::MatrixXd coarse;
  for (std::size_t s : {4u, 8u}) {
    const ScaleLadder ladder = make_ladder(-4, 8, s);
    const ScaleField sf = multiplier_field(m, m, lp, lp, ladder, f);
    const Eigen::MatrixXd gf = g_function(sf);
    if (s == 4u)
      coarse = gf;
    else
      CHECK((gf - coarse).cwiseAbs().maxCoeff() < 0.005 * coarse.maxCoeff());
  }
}

TEST_CASE("scale convolution: delta kernel, monotone limit, Young bound") {
  // scalar sequence with unit mass at the center
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(9, 9);
  g(4, 4) = 1.0;
  const Eigen::MatrixXd h = ry_convolve(g, 1.0, 2.0);
  for (Eigen::Index a = 0; a < 9; ++a)
    for (Eigen::Index b = 0; b < 9; ++b)
      CHECK(h(a, b) ==
            doctest::Approx(std::exp2(-std::fabs(a - 4.0) - 2.0 * std::fabs(b - 4.0)))
                .epsilon(1e-14));

  // sigma -> infinity reproduces the input
  const Eigen::MatrixXd hs = ry_convolve(g, 60.0, 60.0);
  CHECK((hs - g).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(ry_convolve(g, 0.0, 1.0), Error);

  // Young bound for field families in L^2_w(l^2)
  const Grid grid = torus(16);
  const ProductWeight one = make_power_weight(grid, grid, 0.0, 0.0);
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double sigma : {0.5, 1.0, 2.0}) {
    double kernel_sum = 1.0;
    for (int mm = 1; mm <= 200; ++mm) kernel_sum += 2.0 * std::exp2(-mm * sigma);
    const double young = kernel_sum * kernel_sum;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Eigen::MatrixXd> fam;
      for (int k = 0; k < 25; ++k) {
        Eigen::MatrixXd f(16, 16);
        for (Eigen::Index i = 0; i < 16; ++i)
          for (Eigen::Index j = 0; j < 16; ++j) f(i, j) = u(rng);
        fam.push_back(std::move(f));
      }
      const auto conv = ry_convolve(fam, 5, 5, sigma, sigma);
      const double ratio = family_lpw_lq_norm(conv, one, 2.0, 2.0) /
                           family_lpw_lq_norm(fam, one, 2.0, 2.0);
      CHECK(ratio <= young * (1.0 + 1e-12));
    }
  }
}
