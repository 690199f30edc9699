#include "lplab/squarefns.hpp"

#include <algorithm>
#include <cmath>

namespace lplab {

namespace {

// --- scale-ladder axis caches ------------------------------------------

// Contiguous window of cells lying entirely inside B(x, t), center always
// included; `mass` is the discrete measure of the window.  Torus windows
// are circular: lo may be negative, hi may exceed n.
struct BallWindows {
  std::vector<long> lo, hi;  // half-open index ranges, per output point
  std::vector<double> mass;
};

BallWindows ball_windows(const Grid& g, double t) {
  const long n = static_cast<long>(g.size());
  BallWindows w;
  w.lo.resize(n);
  w.hi.resize(n);
  w.mass.resize(n);
  if (g.kind == GridKind::line_periodic) {
    const double h = g.quad_weights.front();
    long m = t > 0.5 * h ? static_cast<long>(std::floor((t - 0.5 * h) / h)) : 0;
    m = std::min(m, (n - 1) / 2);
    for (long i = 0; i < n; ++i) {
      w.lo[i] = i - m;
      w.hi[i] = i + m + 1;
      w.mass[i] = static_cast<double>(2 * m + 1) * h;
    }
    return w;
  }
  for (long i = 0; i < n; ++i) {
    const double x = g.points[i];
    long lo = i, hi = i + 1;  // center cell is always part of the window
    while (lo > 0 && g.edges[lo - 1] >= x - t) --lo;
    while (hi < n && g.edges[hi + 1] <= x + t) ++hi;
    double mass = 0.0;
    for (long j = lo; j < hi; ++j) mass += g.quad_weights[j];
    w.lo[i] = lo;
    w.hi[i] = hi;
    w.mass[i] = mass;
  }
  return w;
}

// Ball average along axis 1: out(i, c) = sum_{j in win(i)} v(j, c) w1_j / mass(i).
Eigen::MatrixXd ball_average_rows(const Eigen::MatrixXd& v, const Grid& g,
                                  const BallWindows& w) {
  const long n = static_cast<long>(g.size());
  Eigen::MatrixXd scaled = v;
  for (long i = 0; i < n; ++i) scaled.row(i) *= g.quad_weights[i];
  Eigen::MatrixXd prefix(n + 1, v.cols());
  prefix.row(0).setZero();
  for (long i = 0; i < n; ++i) prefix.row(i + 1) = prefix.row(i) + scaled.row(i);
  const auto range_sum = [&](long a, long b) {  // [a, b) with circular wrap
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(v.cols());
    if (b - a >= n) return Eigen::RowVectorXd(prefix.row(n));
    auto clamp_add = [&](long p, long q) {
      if (p < q) acc += prefix.row(q) - prefix.row(p);
    };
    if (a < 0) {
      clamp_add(a + n, n);
      clamp_add(0, b);
    } else if (b > n) {
      clamp_add(a, n);
      clamp_add(0, b - n);
    } else {
      clamp_add(a, b);
    }
    return acc;
  };
  Eigen::MatrixXd out(n, v.cols());
  for (long i = 0; i < n; ++i) out.row(i) = range_sum(w.lo[i], w.hi[i]) / w.mass[i];
  return out;
}

// Exact integral of (1 + dist(u)/t)^{-p} du over [a, b] on the torus of
// period T, where dist(u) = min(|u|, T - |u|) and [a, b] lies in [-T/2, T].
double torus_kernel_cell_integral(double a, double b, double t, double p, double T) {
  auto F = [&](double u) {  // integral from 0 to u of (1 + v/t)^{-p} dv
    return t / (p - 1.0) * (1.0 - std::pow(1.0 + u / t, 1.0 - p));
  };
  double acc = 0.0;
  if (a < 0.0) {
    const double b0 = std::min(b, 0.0);
    acc += F(-a) - F(-b0);
    a = b0;
  }
  if (a < b) {
    const double half = 0.5 * T;
    if (a < half) acc += F(std::min(b, half)) - F(a);
    if (b > half) acc += F(T - std::max(a, half)) - F(T - b);
  }
  return acc;
}

// Kernel matrices K(i, j) realizing the g*-type contraction
//   out(i) = sum_j K(i, j) v(j),
// i.e. K folds in the off-ball weight, the source cell measure and the
// 1 / V(x_i, t) normalizer.  On the torus the kernel is integrated exactly
// over the source cell so that row sums match the continuum integral.
Eigen::MatrixXd gstar_kernel(const Grid& g, double t, double exponent) {
  const long n = static_cast<long>(g.size());
  Eigen::MatrixXd k(n, n);
  if (g.kind == GridKind::line_periodic) {
    const double h = g.quad_weights.front();
    const double vol = std::min(2.0 * t, g.period);
    Eigen::VectorXd row(n);
    for (long d = 0; d < n; ++d) {
      const double center = static_cast<double>(d) * h;
      row(d) = torus_kernel_cell_integral(center - 0.5 * h, center + 0.5 * h, t, exponent,
                                          g.period) /
               vol;
    }
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) k(i, j) = row((j - i + n) % n);
    return k;
  }
  for (long i = 0; i < n; ++i) {
    const double vol = volume(g, g.points[i], t);
    for (long j = 0; j < n; ++j)
      k(i, j) = std::pow(1.0 + g.distance(g.points[i], g.points[j]) / t, -exponent) *
                g.quad_weights[j] / vol;
  }
  return k;
}

// Peetre damping kernel (1 + rho/t)^{-lambda}; max-contraction weights.
Eigen::MatrixXd peetre_kernel(const Grid& g, double t, double lambda) {
  const long n = static_cast<long>(g.size());
  Eigen::MatrixXd k(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      k(i, j) = std::pow(1.0 + g.distance(g.points[i], g.points[j]) / t, -lambda);
  return k;
}

// out(i, c) = max_j k(i, j) v(j, c); operates on transposed buffers so the
// inner scan is contiguous.
Eigen::MatrixXd max_contract_rows(const Eigen::MatrixXd& v, const Eigen::MatrixXd& k) {
  const long n = k.rows();
  const long cols = v.cols();
  Eigen::MatrixXd vt = v.transpose();  // cols x n
  Eigen::MatrixXd out_t(cols, n);
  for (long i = 0; i < n; ++i) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(cols);  // inputs are moduli
    for (long j = 0; j < n; ++j) acc = acc.cwiseMax(k(i, j) * vt.col(j));
    out_t.col(i) = acc;
  }
  return out_t.transpose();
}

Eigen::MatrixXd pairwise_sum(std::vector<Eigen::MatrixXd>& parts) {
  if (parts.empty()) return {};
  std::size_t count = parts.size();
  while (count > 1) {
    std::size_t half = count / 2;
    for (std::size_t i = 0; i < half; ++i) parts[i] += parts[count - 1 - i];
    count -= half;
  }
  return parts.front();
}

// Per-slice square-functional accumulators; shared between the materialized
// reductions and the streaming evaluator so both paths are bit-identical.
struct SliceAccumulator {
  const ScaleLadder* ladder;
  const Grid *g1, *g2;
  FunctionalRequest req;

  SliceAccumulator(const ScaleLadder* l, const Grid* a, const Grid* b, FunctionalRequest r)
      : ladder(l), g1(a), g2(b), req(r) {}

  std::vector<BallWindows> win1, win2;
  std::vector<Eigen::MatrixXd> kg1, kg2;  // g* kernels per scale
  std::vector<Eigen::MatrixXd> kp1, kp2;  // Peetre kernels per scale

  std::vector<Eigen::MatrixXd> g_parts, area_parts, gstar_parts, peetre_parts;

  void prepare() {
    const std::size_t nt = ladder->size();
    if (req.want_area) {
      win1.reserve(nt);
      win2.reserve(nt);
      for (double t : ladder->t_values) {
        win1.push_back(ball_windows(*g1, t));
        win2.push_back(ball_windows(*g2, t));
      }
    }
    if (req.want_gstar) {
      for (double t : ladder->t_values) {
        kg1.push_back(gstar_kernel(*g1, t, g1->dimension_exponent() * req.gstar_lambda1));
        kg2.push_back(gstar_kernel(*g2, t, g2->dimension_exponent() * req.gstar_lambda2));
      }
    }
    if (req.want_peetre) {
      for (double t : ladder->t_values) {
        kp1.push_back(peetre_kernel(*g1, t, req.peetre_lambda1));
        kp2.push_back(peetre_kernel(*g2, t, req.peetre_lambda2));
      }
    }
    const auto n1 = static_cast<Eigen::Index>(g1->size());
    const auto n2 = static_cast<Eigen::Index>(g2->size());
    auto zeros = [&] { return Eigen::MatrixXd::Zero(n1, n2).eval(); };
    const std::size_t nparts = ladder->size();
    if (req.want_g) g_parts.assign(nparts, zeros());
    if (req.want_area) area_parts.assign(nparts, zeros());
    if (req.want_gstar) gstar_parts.assign(nparts, zeros());
    if (req.want_peetre) peetre_parts.assign(nparts, zeros());
  }

  // Feed |slice| at scale pair (i1, i2).
  void feed(std::size_t i1, std::size_t i2, const Eigen::MatrixXd& abs_slice) {
    const double w2 = ladder->log_weights[i2];
    const Eigen::MatrixXd sq = abs_slice.array().square();
    if (req.want_g) g_parts[i1] += w2 * sq;
    if (req.want_area) {
      Eigen::MatrixXd b = ball_average_rows(sq, *g1, win1[i1]);
      b = ball_average_rows(b.transpose(), *g2, win2[i2]).transpose();
      area_parts[i1] += w2 * b;
    }
    if (req.want_gstar)
      gstar_parts[i1] += w2 * (kg1[i1] * sq * kg2[i2].transpose());
    if (req.want_peetre) {
      Eigen::MatrixXd pe = max_contract_rows(abs_slice, kp1[i1]);
      pe = max_contract_rows(pe.transpose(), kp2[i2]).transpose();
      peetre_parts[i1] += w2 * pe.array().square().matrix();
    }
  }

  // Peetre value slices for the materializing op.
  Eigen::MatrixXd peetre_slice(std::size_t i1, std::size_t i2,
                               const Eigen::MatrixXd& abs_slice) const {
    Eigen::MatrixXd pe = max_contract_rows(abs_slice, kp1[i1]);
    return max_contract_rows(pe.transpose(), kp2[i2]).transpose();
  }

  static Eigen::MatrixXd finish(std::vector<Eigen::MatrixXd>& parts,
                                const ScaleLadder& ladder) {
    for (std::size_t i1 = 0; i1 < parts.size(); ++i1) parts[i1] *= ladder.log_weights[i1];
    return pairwise_sum(parts).cwiseSqrt();
  }
};

}  // namespace

ScaleLadder make_ladder(int j_min, int j_max, std::size_t samples_per_octave) {
  require(j_min <= j_max, Errc::empty_range, "empty octave range");
  require(samples_per_octave >= 1, Errc::empty_range, "need at least one sample per octave");
  ScaleLadder ladder;
  ladder.j_min = j_min;
  ladder.j_max = j_max;
  ladder.samples_per_octave = samples_per_octave;
  const double w = std::log(2.0) / static_cast<double>(samples_per_octave);
  for (int j = j_min; j <= j_max; ++j) {
    for (std::size_t m = 0; m < samples_per_octave; ++m) {
      const double tp = std::pow(
          2.0, (static_cast<double>(m) + 0.5) / static_cast<double>(samples_per_octave));
      ladder.t_values.push_back(std::ldexp(tp, -j));
      ladder.log_weights.push_back(w);
    }
  }
  return ladder;
}

Eigen::MatrixXcd tensor_slice(const SpectralModel& m1, const SpectralModel& m2,
                              const MultiplierProfile& p1, const MultiplierProfile& p2,
                              double t1, double t2, const Eigen::MatrixXcd& f) {
  require(f.rows() == static_cast<Eigen::Index>(m1.size()) &&
              f.cols() == static_cast<Eigen::Index>(m2.size()),
          Errc::grid_mismatch, "field does not match the model grids");
  const Eigen::VectorXd s1 = m1.multiplier_symbol(p1, t1);
  const Eigen::VectorXd s2 = m2.multiplier_symbol(p2, t2);
  const Eigen::MatrixXcd c1 = m1.to_modes().cast<std::complex<double>>() * f;
  const Eigen::MatrixXcd r1 =
      m1.from_modes().cast<std::complex<double>>() * (s1.asDiagonal() * c1);
  const Eigen::MatrixXcd c2 = r1 * m2.to_modes().transpose().cast<std::complex<double>>();
  return (c2 * s2.asDiagonal()) * m2.from_modes().transpose().cast<std::complex<double>>();
}

namespace {

template <typename Mat>
ScaleField multiplier_field_impl(const SpectralModel& m1, const SpectralModel& m2,
                                 const MultiplierProfile& p1, const MultiplierProfile& p2,
                                 const ScaleLadder& ladder, const Mat& f) {
  require(f.rows() == static_cast<Eigen::Index>(m1.size()) &&
              f.cols() == static_cast<Eigen::Index>(m2.size()),
          Errc::grid_mismatch, "field does not match the model grids");
  ScaleField sf;
  sf.ladder = ladder;
  sf.grid1 = m1.grid();
  sf.grid2 = m2.grid();
  sf.profile1 = p1.label;
  sf.profile2 = p2.label;
  const std::size_t nt = ladder.size();
  sf.abs_slices.reserve(nt * nt);

  using Scalar = typename Mat::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to1 =
      m1.to_modes().template cast<Scalar>();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> from1 =
      m1.from_modes().template cast<Scalar>();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to2t =
      m2.to_modes().transpose().template cast<Scalar>();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> from2t =
      m2.from_modes().transpose().template cast<Scalar>();

  std::vector<Eigen::VectorXd> sym1, sym2;
  for (double t : ladder.t_values) {
    sym1.push_back(m1.multiplier_symbol(p1, t));
    sym2.push_back(m2.multiplier_symbol(p2, t));
  }

  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c1 = to1 * f;
  for (std::size_t i1 = 0; i1 < nt; ++i1) {
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> r1 =
        from1 * (sym1[i1].template cast<Scalar>().asDiagonal() * c1);
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c2 = r1 * to2t;
    for (std::size_t i2 = 0; i2 < nt; ++i2) {
      const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> slice =
          (c2 * sym2[i2].template cast<Scalar>().asDiagonal()) * from2t;
      sf.abs_slices.push_back(slice.cwiseAbs());
    }
  }
  return sf;
}

}  // namespace

ScaleField multiplier_field(const SpectralModel& m1, const SpectralModel& m2,
                            const MultiplierProfile& p1, const MultiplierProfile& p2,
                            const ScaleLadder& ladder, const Eigen::MatrixXcd& f) {
  return multiplier_field_impl(m1, m2, p1, p2, ladder, f);
}

ScaleField multiplier_field(const SpectralModel& m1, const SpectralModel& m2,
                            const MultiplierProfile& p1, const MultiplierProfile& p2,
                            const ScaleLadder& ladder, const Eigen::MatrixXd& f) {
  return multiplier_field_impl(m1, m2, p1, p2, ladder, f);
}

Eigen::MatrixXd project_zero_modes(const SpectralModel& m1, const SpectralModel& m2,
                                   const Eigen::MatrixXd& f) {
  Eigen::MatrixXd coeff = m1.to_modes() * f * m2.to_modes().transpose();
  if (m1.zero_mode() >= 0) coeff.row(m1.zero_mode()).setZero();
  if (m2.zero_mode() >= 0) coeff.col(m2.zero_mode()).setZero();
  return m1.from_modes() * coeff * m2.from_modes().transpose();
}

Eigen::MatrixXd g_function(const ScaleField& sf) {
  SliceAccumulator acc{&sf.ladder, &sf.grid1, &sf.grid2, FunctionalRequest{}};
  acc.req = {};
  acc.req.want_g = true;
  acc.req.want_area = acc.req.want_gstar = acc.req.want_peetre = false;
  acc.prepare();
  const std::size_t nt = sf.ladder.size();
  for (std::size_t i1 = 0; i1 < nt; ++i1)
    for (std::size_t i2 = 0; i2 < nt; ++i2) acc.feed(i1, i2, sf.slice(i1, i2));
  return SliceAccumulator::finish(acc.g_parts, sf.ladder);
}

Eigen::MatrixXd area_function(const ScaleField& sf) {
  SliceAccumulator acc{&sf.ladder, &sf.grid1, &sf.grid2, FunctionalRequest{}};
  acc.req = {};
  acc.req.want_area = true;
  acc.req.want_g = acc.req.want_gstar = acc.req.want_peetre = false;
  acc.prepare();
  const std::size_t nt = sf.ladder.size();
  for (std::size_t i1 = 0; i1 < nt; ++i1)
    for (std::size_t i2 = 0; i2 < nt; ++i2) acc.feed(i1, i2, sf.slice(i1, i2));
  return SliceAccumulator::finish(acc.area_parts, sf.ladder);
}

Eigen::MatrixXd gstar_function(const ScaleField& sf, double lambda1, double lambda2) {
  require(lambda1 > 0.0 && lambda2 > 0.0, Errc::nonpositive_lambda,
          "g* exponents must be positive");
  SliceAccumulator acc{&sf.ladder, &sf.grid1, &sf.grid2, FunctionalRequest{}};
  acc.req = {};
  acc.req.want_gstar = true;
  acc.req.want_g = acc.req.want_area = acc.req.want_peetre = false;
  acc.req.gstar_lambda1 = lambda1;
  acc.req.gstar_lambda2 = lambda2;
  acc.prepare();
  const std::size_t nt = sf.ladder.size();
  for (std::size_t i1 = 0; i1 < nt; ++i1)
    for (std::size_t i2 = 0; i2 < nt; ++i2) acc.feed(i1, i2, sf.slice(i1, i2));
  return SliceAccumulator::finish(acc.gstar_parts, sf.ladder);
}

ScaleField peetre_field(const ScaleField& sf, double lambda1, double lambda2) {
  require(lambda1 > 0.0 && lambda2 > 0.0, Errc::nonpositive_lambda,
          "Peetre exponents must be positive");
  SliceAccumulator acc{&sf.ladder, &sf.grid1, &sf.grid2, FunctionalRequest{}};
  acc.req = {};
  acc.req.want_peetre = true;
  acc.req.want_g = acc.req.want_area = acc.req.want_gstar = false;
  acc.req.peetre_lambda1 = lambda1;
  acc.req.peetre_lambda2 = lambda2;
  acc.prepare();
  ScaleField out;
  out.ladder = sf.ladder;
  out.grid1 = sf.grid1;
  out.grid2 = sf.grid2;
  out.profile1 = sf.profile1 + "*";
  out.profile2 = sf.profile2 + "*";
  const std::size_t nt = sf.ladder.size();
  out.abs_slices.reserve(nt * nt);
  for (std::size_t i1 = 0; i1 < nt; ++i1)
    for (std::size_t i2 = 0; i2 < nt; ++i2)
      out.abs_slices.push_back(acc.peetre_slice(i1, i2, sf.slice(i1, i2)));
  return out;
}

Eigen::MatrixXd vertical_peetre_norm(const ScaleField& peetre) { return g_function(peetre); }

FunctionalFields compute_functionals(const SpectralModel& m1, const SpectralModel& m2,
                                     const MultiplierProfile& p1, const MultiplierProfile& p2,
                                     const ScaleLadder& ladder, const Eigen::MatrixXd& f,
                                     const FunctionalRequest& request) {
  require(f.rows() == static_cast<Eigen::Index>(m1.size()) &&
              f.cols() == static_cast<Eigen::Index>(m2.size()),
          Errc::grid_mismatch, "field does not match the model grids");
  SliceAccumulator acc{&ladder, &m1.grid(), &m2.grid(), request};
  acc.prepare();

  std::vector<Eigen::VectorXd> sym1, sym2;
  for (double t : ladder.t_values) {
    sym1.push_back(m1.multiplier_symbol(p1, t));
    sym2.push_back(m2.multiplier_symbol(p2, t));
  }

  const std::size_t nt = ladder.size();
  const Eigen::MatrixXd c1 = m1.to_modes() * f;
  for (std::size_t i1 = 0; i1 < nt; ++i1) {
    const Eigen::MatrixXd r1 = m1.from_modes() * (sym1[i1].asDiagonal() * c1);
    const Eigen::MatrixXd c2 = r1 * m2.to_modes().transpose();
    for (std::size_t i2 = 0; i2 < nt; ++i2) {
      const Eigen::MatrixXd slice =
          (c2 * sym2[i2].asDiagonal()) * m2.from_modes().transpose();
      acc.feed(i1, i2, slice.cwiseAbs());
    }
  }

  FunctionalFields out;
  if (request.want_g) out.g = SliceAccumulator::finish(acc.g_parts, ladder);
  if (request.want_area) out.area = SliceAccumulator::finish(acc.area_parts, ladder);
  if (request.want_gstar) out.gstar = SliceAccumulator::finish(acc.gstar_parts, ladder);
  if (request.want_peetre)
    out.peetre_vertical = SliceAccumulator::finish(acc.peetre_parts, ladder);

  // Energy of the field seen by multipliers just outside the ladder; the
  // truncation of the dt/t integral is benign when this is small.
  {
    const double fnorm2 = f.squaredNorm();
    double tail = 0.0;
    if (fnorm2 > 0.0) {
      const auto [tmin_it, tmax_it] =
          std::minmax_element(ladder.t_values.begin(), ladder.t_values.end());
      for (double t : {*tmin_it * 0.5, *tmax_it * 2.0}) {
        const Eigen::MatrixXd a1 =
            m1.from_modes() * (m1.multiplier_symbol(p1, t).asDiagonal() * c1);
        const Eigen::MatrixXd a2 =
            (f * m2.to_modes().transpose() * m2.multiplier_symbol(p2, t).asDiagonal()) *
            m2.from_modes().transpose();
        tail = std::max({tail, a1.squaredNorm() / fnorm2, a2.squaredNorm() / fnorm2});
      }
    }
    out.tail_energy = tail;
  }
  return out;
}

Eigen::MatrixXd ry_convolve(const Eigen::MatrixXd& g, double sigma1, double sigma2) {
  require(sigma1 > 0.0 && sigma2 > 0.0, Errc::nonpositive_sigma,
          "convolution rates must be positive");
  const Eigen::Index n1 = g.rows(), n2 = g.cols();
  Eigen::MatrixXd mid(n1, n2);
  for (Eigen::Index j = 0; j < n1; ++j) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(n2);
    for (Eigen::Index k = 0; k < n1; ++k)
      acc += std::exp2(-std::fabs(static_cast<double>(k - j)) * sigma1) * g.row(k);
    mid.row(j) = acc;
  }
  Eigen::MatrixXd out(n1, n2);
  for (Eigen::Index j = 0; j < n2; ++j) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n1);
    for (Eigen::Index k = 0; k < n2; ++k)
      acc += std::exp2(-std::fabs(static_cast<double>(k - j)) * sigma2) * mid.col(k);
    out.col(j) = acc;
  }
  return out;
}

std::vector<Eigen::MatrixXd> ry_convolve(std::span<const Eigen::MatrixXd> g,
                                         std::size_t n_j1, std::size_t n_j2, double sigma1,
                                         double sigma2) {
  require(sigma1 > 0.0 && sigma2 > 0.0, Errc::nonpositive_sigma,
          "convolution rates must be positive");
  require(g.size() == n_j1 * n_j2, Errc::length_mismatch,
          "family size does not match the index window");
  auto at = [&](std::size_t a, std::size_t b) -> const Eigen::MatrixXd& {
    return g[a * n_j2 + b];
  };
  std::vector<Eigen::MatrixXd> out(g.size());
  for (std::size_t a = 0; a < n_j1; ++a) {
    for (std::size_t b = 0; b < n_j2; ++b) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(g.front().rows(), g.front().cols());
      for (std::size_t k1 = 0; k1 < n_j1; ++k1) {
        const double w1 =
            std::exp2(-std::fabs(static_cast<double>(k1) - static_cast<double>(a)) * sigma1);
        for (std::size_t k2 = 0; k2 < n_j2; ++k2) {
          const double w2 = std::exp2(
              -std::fabs(static_cast<double>(k2) - static_cast<double>(b)) * sigma2);
          acc += w1 * w2 * at(k1, k2);
        }
      }
      out[a * n_j2 + b] = std::move(acc);
    }
  }
  return out;
}

}  // namespace lplab
