#include "harper/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "harper/parallel.hpp"

namespace harper {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kRescaleStride = 32;

double abs_c_real(const Coupling& lam, const Frequency& freq, double x) {
  return std::abs(eval_c(lam, freq, cdouble{x, 0.0}));
}
}  // namespace

Mat2 transfer_matrix(const Coupling& lam, const Frequency& freq, double E, double x,
                     CocycleKind kind) {
  const double a = freq.value;
  const double d = E - 2.0 * std::cos(kTwoPi * x);
  if (kind == CocycleKind::raw) {
    cdouble c = eval_c(lam, freq, cdouble{x, 0.0});
    if (std::abs(c) < 1e-300)
      throw std::domain_error("transfer_matrix: c vanishes at x=" + std::to_string(x));
    cdouble cb = eval_cbar(lam, freq, cdouble{x - a, 0.0});
    cdouble inv = 1.0 / c;
    return {inv * d, -inv * cb, cdouble{1.0, 0.0}, cdouble{0.0, 0.0}};
  }
  if (kind == CocycleKind::renormalized) {
    double c0 = abs_c_real(lam, freq, x);
    double c1 = abs_c_real(lam, freq, x - a);
    if (c0 < 1e-300 || c1 < 1e-300)
      throw std::domain_error("transfer_matrix: |c| vanishes at x=" + std::to_string(x));
    double s = 1.0 / std::sqrt(c0 * c1);
    return {cdouble{s * d, 0.0}, cdouble{-s * c1, 0.0}, cdouble{s * c0, 0.0}, cdouble{0.0, 0.0}};
  }
  throw std::invalid_argument("transfer_matrix: kind must be raw or renormalized");
}

MatrixCocycle MatrixCocycle::raw(const Coupling& lam, const Frequency& freq, double E) {
  MatrixCocycle c;
  c.freq_ = freq;
  c.kind_ = CocycleKind::raw;
  c.lam_ = lam;
  c.energy_ = E;
  c.closed_form_ = true;
  return c;
}

MatrixCocycle MatrixCocycle::renormalized(const Coupling& lam, const Frequency& freq, double E) {
  MatrixCocycle c;
  c.freq_ = freq;
  c.kind_ = CocycleKind::renormalized;
  c.lam_ = lam;
  c.energy_ = E;
  c.closed_form_ = true;
  return c;
}

MatrixCocycle MatrixCocycle::from_series(const Frequency& freq, Mat2Series entries) {
  MatrixCocycle c;
  c.freq_ = freq;
  c.kind_ = CocycleKind::conjugated;
  c.entries_ = std::move(entries);
  return c;
}

MatrixCocycle MatrixCocycle::identity(const Frequency& freq) {
  Mat2Series id;
  id.a11 = FourierSeries::constant(1.0);
  id.a22 = FourierSeries::constant(1.0);
  return from_series(freq, std::move(id));
}

Mat2 MatrixCocycle::at(double x) const {
  if (closed_form_) return transfer_matrix(lam_, freq_, energy_, x, kind_);
  return entries_.eval(x);
}

Mat2 ScaledMat2::dense() const {
  if (log_scale > 690.0) throw std::overflow_error("ScaledMat2::dense: scale exceeds double range");
  return std::exp(cdouble{log_scale, 0.0}) * m;
}

ScaledMat2 cocycle_product(const MatrixCocycle& coc, double x, long long k) {
  if (k < 1) throw std::invalid_argument("cocycle_product: k must be >= 1");
  const double a = coc.freq().value;
  ScaledMat2 out{Mat2::identity(), 0.0};
  for (long long l = 1; l <= k; ++l) {
    out.m = coc.at(x + static_cast<double>(l - 1) * a) * out.m;
    if (l % kRescaleStride == 0) {
      double f = out.m.norm_fro();
      if (f > 0.0) {
        out.m = cdouble{1.0 / f, 0.0} * out.m;
        out.log_scale += std::log(f);
      }
    }
  }
  return out;
}

namespace {

// One phase's contribution: ln||A_k(x)|| and the k/2 snapshot.
void product_log_norms(const MatrixCocycle& coc, double x, long long k, double& full,
                       double& half) {
  const double a = coc.freq().value;
  const long long kh = std::max<long long>(1, k / 2);
  Mat2 m = Mat2::identity();
  double ls = 0.0;
  half = 0.0;
  for (long long l = 1; l <= k; ++l) {
    m = coc.at(x + static_cast<double>(l - 1) * a) * m;
    if (l % kRescaleStride == 0) {
      double f = m.norm_fro();
      if (f > 0.0) {
        m = cdouble{1.0 / f, 0.0} * m;
        ls += std::log(f);
      }
    }
    if (l == kh) half = ls + std::log(m.norm2());
  }
  full = ls + std::log(m.norm2());
}

}  // namespace

LyapunovEstimate lyapunov_numeric(const MatrixCocycle& coc, long long k, int phase_count,
                                  int workers) {
  if (k < 1) throw std::invalid_argument("lyapunov_numeric: k must be >= 1");
  if (phase_count < 1) throw std::invalid_argument("lyapunov_numeric: phase_count must be >= 1");
  std::vector<double> full(static_cast<size_t>(phase_count));
  std::vector<double> half(static_cast<size_t>(phase_count));
  parallel_for(phase_count, workers, [&](long long j) {
    double x = static_cast<double>(j) / phase_count;
    product_log_norms(coc, x, k, full[static_cast<size_t>(j)], half[static_cast<size_t>(j)]);
  });
  LyapunovEstimate est;
  est.k = k;
  est.phase_count = phase_count;
  double sf = 0.0, sh = 0.0;  // fixed-order reduction
  for (int j = 0; j < phase_count; ++j) {
    sf += full[static_cast<size_t>(j)];
    sh += half[static_cast<size_t>(j)];
  }
  est.value = sf / (static_cast<double>(k) * phase_count);
  est.half_value = sh / (static_cast<double>(std::max<long long>(1, k / 2)) * phase_count);
  return est;
}

LyapunovEstimate lyapunov_numeric_reference(const MatrixCocycle& coc, long long k,
                                            int phase_count) {
  LyapunovEstimate est;
  est.k = k;
  est.phase_count = phase_count;
  double sf = 0.0, sh = 0.0;
  for (int j = 0; j < phase_count; ++j) {
    double x = static_cast<double>(j) / phase_count;
    double f, h;
    product_log_norms(coc, x, k, f, h);
    sf += f;
    sh += h;
  }
  est.value = sf / (static_cast<double>(k) * phase_count);
  est.half_value = sh / (static_cast<double>(std::max<long long>(1, k / 2)) * phase_count);
  return est;
}

double lyapunov_closed_form(const Coupling& lam) {
  if (classify_region(lam) != RegionTag::II)
    throw std::domain_error("lyapunov_closed_form: coupling must lie in region II");
  return dual_lyapunov(lam);
}

QConjugation build_q_conjugation(const Coupling& lam, const Frequency& freq, int cutoff,
                                 int grid) {
  if (cutoff < 1) throw std::invalid_argument("build_q_conjugation: cutoff must be >= 1");
  if (grid < 4 * cutoff) grid = 4 * cutoff;
  int g = 1;
  while (g < std::max(grid, 4096)) g <<= 1;

  const bool amo = lam.amo_degenerate() && lam.l2 > 0.0;
  if (!amo && classify_region(lam) != RegionTag::II)
    throw std::domain_error("build_q_conjugation: coupling must lie in region II");

  QConjugation qc;
  const double a = freq.value;
  const double L = dual_lyapunov(lam);
  qc.hypothesis_ok = (L >= 5.0 * freq.beta_hat);

  // Continuous log branches.  In region II Re c > 0 on the real line, so the
  // principal branch is already continuous; assert zero winding anyway.
  std::vector<cdouble> g1s(static_cast<size_t>(g)), g2s(static_cast<size_t>(g));
  double wind1 = 0.0, wind2 = 0.0, int1 = 0.0, int2 = 0.0;
  double prev1 = 0.0, prev2 = 0.0;
  for (int j = 0; j < g; ++j) {
    double x = static_cast<double>(j) / g;
    cdouble c = eval_c(lam, freq, cdouble{x, 0.0});
    cdouble cb = eval_cbar(lam, freq, cdouble{x, 0.0});
    if (std::abs(c) < 1e-300 || std::abs(cb) < 1e-300)
      throw std::domain_error("build_q_conjugation: symbol vanishes on the real line");
    g1s[static_cast<size_t>(j)] = std::log(c);
    g2s[static_cast<size_t>(j)] = std::log(cb);
    double a1 = std::arg(c), a2 = std::arg(cb);
    if (j > 0) {
      wind1 += std::remainder(a1 - prev1, kTwoPi);
      wind2 += std::remainder(a2 - prev2, kTwoPi);
    }
    prev1 = a1;
    prev2 = a2;
    int1 += a1;
    int2 += a2;
  }
  qc.arg_c_integral = int1 / g;
  qc.arg_cbar_integral = int2 / g;
  if (std::fabs(wind1) > 0.5 || std::fabs(wind2) > 0.5)
    throw std::domain_error("build_q_conjugation: symbol winds around zero");
  if (std::fabs(qc.arg_c_integral) > 1e-8 || std::fabs(qc.arg_cbar_integral) > 1e-8)
    throw std::domain_error("build_q_conjugation: mean argument of the symbol is not zero");

  qc.g1 = series_from_grid(g1s, cutoff);
  qc.g2 = series_from_grid(g2s, cutoff);

  // Cohomological equation 2 f(x+a) - 2 f(x) = g1(x) - g2(x).
  qc.f = FourierSeries(cutoff);
  for (int k = -cutoff; k <= cutoff; ++k) {
    if (k == 0) continue;
    cdouble num = qc.g1.coeff(k) - qc.g2.coeff(k);
    cdouble den = 2.0 * (std::polar(1.0, kTwoPi * k * a) - 1.0);
    if (std::abs(den) < 2e-13)
      throw std::domain_error("build_q_conjugation: resonant Fourier divisor at k=" +
                              std::to_string(k));
    qc.f.set(k, num / den);
  }

  // Q = e^f sqrt(|c|(x-a)) diag(1, sqrt(cbar(x-a)/c(x-a))) assembled from the
  // log data: diag entries exp(F1), exp(F2) with
  //   F1 = f + (g1+g2)(x-a)/4,  F2 = f + (3 g2 - g1)(x-a)/4.
  FourierSeries sum_shift = (qc.g1 + qc.g2).shifted(-a);
  FourierSeries diff_shift = ((qc.g2 * cdouble{3.0, 0.0}) - qc.g1).shifted(-a);
  FourierSeries F1 = qc.f + sum_shift * cdouble{0.25, 0.0};
  FourierSeries F2 = qc.f + diff_shift * cdouble{0.25, 0.0};

  std::vector<cdouble> f1g = grid_from_series(F1, g);
  std::vector<cdouble> f2g = grid_from_series(F2, g);
  std::vector<cdouble> q1g(static_cast<size_t>(g)), q2g(static_cast<size_t>(g)),
      q1ig(static_cast<size_t>(g)), q2ig(static_cast<size_t>(g));
  for (int j = 0; j < g; ++j) {
    auto s = static_cast<size_t>(j);
    q1g[s] = std::exp(f1g[s]);
    q2g[s] = std::exp(f2g[s]);
    q1ig[s] = 1.0 / q1g[s];
    q2ig[s] = 1.0 / q2g[s];
  }
  qc.Q.a11 = series_from_grid(q1g, cutoff);
  qc.Q.a22 = series_from_grid(q2g, cutoff);
  qc.Q.a12 = FourierSeries(0);
  qc.Q.a21 = FourierSeries(0);
  qc.Qinv.a11 = series_from_grid(q1ig, cutoff);
  qc.Qinv.a22 = series_from_grid(q2ig, cutoff);
  qc.Qinv.a12 = FourierSeries(0);
  qc.Qinv.a21 = FourierSeries(0);

  // Real-grid conjugation residual, measured at two energies (the identity is
  // linear in E entrywise, so two values pin it down).
  std::vector<cdouble> q1sg = grid_from_series(qc.Q.a11.shifted(a), g);
  std::vector<cdouble> q2sg = grid_from_series(qc.Q.a22.shifted(a), g);
  std::vector<cdouble> q1i = grid_from_series(qc.Qinv.a11, g);
  std::vector<cdouble> q2i = grid_from_series(qc.Qinv.a22, g);
  double res = 0.0;
  for (int j = 0; j < g; ++j) {
    auto s = static_cast<size_t>(j);
    double x = static_cast<double>(j) / g;
    for (double E : {0.0, 1.0}) {
      Mat2 A = transfer_matrix(lam, freq, E, x, CocycleKind::raw);
      Mat2 Abar = transfer_matrix(lam, freq, E, x, CocycleKind::renormalized);
      Mat2 Qs{q1sg[s], 0.0, 0.0, q2sg[s]};
      Mat2 Qi{q1i[s], 0.0, 0.0, q2i[s]};
      Mat2 R = Qs * A * Qi - Abar;
      res = std::max(res, R.norm_fro());
    }
  }
  qc.residual = res;

  // Largest strip half-width (among a geometric sweep under L/(4 pi)) where
  // the conjugation identity still holds to 1e-6, using the constructed
  // branches for |c| off the real line.
  const int sg = 256;
  double s_best = 0.0;
  for (int step = 0; step < 24 && s_best == 0.0; ++step) {
    double s = L / (4.0 * std::numbers::pi) * std::pow(0.85, step);
    double worst = 0.0;
    for (int j = 0; j < sg && worst < 1e-6; ++j) {
      double x = static_cast<double>(j) / sg;
      for (double sg_im : {s, -s}) {
        cdouble z{x, sg_im};
        cdouble c = eval_c(lam, freq, z);
        cdouble absc = std::exp(0.5 * (qc.g1.eval(z) + qc.g2.eval(z)));
        cdouble absca = std::exp(0.5 * (qc.g1.eval(z - a) + qc.g2.eval(z - a)));
        cdouble d = -2.0 * std::cos(kTwoPi * z);  // E = 0
        Mat2 A{d / c, -eval_cbar(lam, freq, z - a) / c, cdouble{1.0, 0.0}, cdouble{0.0, 0.0}};
        cdouble rn = 1.0 / std::sqrt(absc * absca);
        Mat2 Abar{rn * d, -rn * absca, rn * absc, cdouble{0.0, 0.0}};
        Mat2 Qs{qc.Q.a11.eval(z + a), 0.0, 0.0, qc.Q.a22.eval(z + a)};
        Mat2 Qi{qc.Qinv.a11.eval(z), 0.0, 0.0, qc.Qinv.a22.eval(z)};
        Mat2 R = Qs * A * Qi - Abar;
        worst = std::max(worst, R.norm_fro());
      }
    }
    if (worst < 1e-6) s_best = s;
  }
  qc.strip = s_best;
  return qc;
}

}  // namespace harper
