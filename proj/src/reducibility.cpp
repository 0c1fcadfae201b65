#include "harper/reducibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "harper/parallel.hpp"
#include "harper/tridiag.hpp"

namespace harper {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDivisorGuard = 1e-12;

struct DualTruncation {
  std::vector<double> diag;
  std::vector<cdouble> off;
  std::vector<double> absoff;
};

// Dual operator truncation on sites -M..M at phase theta.
DualTruncation dual_truncation(const Coupling& dual, const Frequency& freq, double theta, int M) {
  DualTruncation t;
  const int n = 2 * M + 1;
  t.diag.resize(static_cast<size_t>(n));
  t.off.resize(static_cast<size_t>(n) - 1);
  t.absoff.resize(static_cast<size_t>(n) - 1);
  for (int k = -M; k <= M; ++k) {
    double xk = theta + static_cast<double>(k) * freq.value;
    t.diag[static_cast<size_t>(k + M)] = 2.0 * std::cos(kTwoPi * xk);
    if (k < M) {
      cdouble c = eval_c(dual, freq, cdouble{xk, 0.0});
      t.off[static_cast<size_t>(k + M)] = c;
      t.absoff[static_cast<size_t>(k + M)] = std::abs(c);
    }
  }
  return t;
}

double eigen_gap_at(const Coupling& dual, const Frequency& freq, double theta, int M,
                    double target) {
  DualTruncation t = dual_truncation(dual, freq, theta, M);
  return std::fabs(nearest_eigenvalue(t.diag, t.absoff, target, 1e-12) - target);
}

// Complex eigenvector of the dual truncation at (theta, mu): inverse iteration
// on the gauged real matrix, phases restored afterwards.
std::vector<cdouble> dual_eigenvector(const DualTruncation& t, double mu) {
  const size_t n = t.diag.size();
  std::vector<double> v = tridiag_eigenvector(t.diag, t.absoff, mu);
  // Gauge diag(e^{i phi_k}) with phi_0 = 0, phi_{k+1} = phi_k + arg(c_k) maps
  // the complex matrix to the real one; invert it on the eigenvector.
  std::vector<cdouble> u(n);
  double phi = 0.0;
  u[0] = v[0];
  for (size_t k = 1; k < n; ++k) {
    phi += std::arg(t.off[k - 1]);
    u[k] = std::polar(1.0, phi) * v[k];
  }
  return u;
}

double dual_residual(const Coupling& dual, const Frequency& freq, double theta, double target,
                     const std::vector<cdouble>& u, int M) {
  // Apply the infinite operator to the zero-padded coefficients; rows
  // -M-1..M+1 all contribute.
  double worst = 0.0;
  auto at = [&](int k) -> cdouble {
    return (k < -M || k > M) ? cdouble{0.0, 0.0} : u[static_cast<size_t>(k + M)];
  };
  for (int k = -M - 1; k <= M + 1; ++k) {
    double xk = theta + static_cast<double>(k) * freq.value;
    cdouble c = eval_c(dual, freq, cdouble{xk, 0.0});
    cdouble cbm = eval_cbar(dual, freq, cdouble{xk - freq.value, 0.0});
    cdouble r = c * at(k + 1) + cbm * at(k - 1) + 2.0 * std::cos(kTwoPi * xk) * at(k) -
                target * at(k);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

BlochWave bloch_from_theta(const Coupling& lam, const Coupling& dual, const Frequency& freq,
                           double E, int M, double theta) {
  const double target = E / lam.l2;
  BlochWave w;
  w.energy = E;
  w.M = M;

  // u_0 = 1 with |u_k| <= 1 + tol requires the localization center at site 0;
  // otherwise shift theta by center * alpha (the shifted family is unitarily
  // equivalent) and retry.
  const double center_tol = 1.05;
  for (int attempt = 0; attempt < 4; ++attempt) {
    DualTruncation t = dual_truncation(dual, freq, theta, M);
    double mu = nearest_eigenvalue(t.diag, t.absoff, target, 1e-12);
    std::vector<cdouble> u = dual_eigenvector(t, mu);
    size_t kmax = 0;
    double best = 0.0;
    for (size_t k = 0; k < u.size(); ++k)
      if (std::abs(u[k]) > best) { best = std::abs(u[k]); kmax = k; }
    cdouble u0 = u[static_cast<size_t>(M)];
    if (std::abs(u0) * center_tol < best) {
      if (std::abs(u0) / best < 1e-6 && attempt == 3)
        break;  // hopelessly off-center, normalization ill-conditioned
      int shift = static_cast<int>(kmax) - M;
      if (shift == 0) break;
      theta += static_cast<double>(shift) * freq.value;
      theta -= std::floor(theta);
      w.recentered = true;
      w.recenter_shift += shift;
      continue;
    }
    for (auto& x : u) x /= u0;
    w.theta = theta;
    w.coeffs = std::move(u);
    w.eigen_gap = std::fabs(mu - target);
    w.dual_eigen_residual = dual_residual(dual, freq, theta, target, w.coeffs, M);
    return w;
  }
  throw std::domain_error("dual_bloch_wave: eigenvector will not center (|u_0| degenerate)");
}

BlochWave bloch_scan(const Coupling& lam, const Frequency& freq, double E, int M, int theta_grid,
                     int workers, bool parallel) {
  if (classify_region(lam) != RegionTag::II)
    throw std::domain_error("dual_bloch_wave: coupling must lie in region II");
  if (M < 2 || theta_grid < 8)
    throw std::invalid_argument("dual_bloch_wave: need M >= 2 and theta_grid >= 8");
  const Coupling dual = dual_coupling(lam);
  const double target = E / lam.l2;

  std::vector<double> gaps(static_cast<size_t>(theta_grid));
  auto body = [&](long long i) {
    double theta = (static_cast<double>(i) + 0.5) / (2.0 * theta_grid);  // [0, 1/2)
    gaps[static_cast<size_t>(i)] = eigen_gap_at(dual, freq, theta, M, target);
  };
  if (parallel)
    parallel_for(theta_grid, workers, body);
  else
    for (long long i = 0; i < theta_grid; ++i) body(i);

  size_t ibest = 0;
  for (size_t i = 1; i < gaps.size(); ++i)
    if (gaps[i] < gaps[ibest]) ibest = i;

  // Golden-section refinement around the best grid candidate.
  const double step = 0.5 / theta_grid;
  double a = (static_cast<double>(ibest) + 0.5) / (2.0 * theta_grid) - step;
  double b = a + 2.0 * step;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = eigen_gap_at(dual, freq, c, M, target);
  double fd = eigen_gap_at(dual, freq, d, M, target);
  for (int it = 0; it < 48; ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = eigen_gap_at(dual, freq, c, M, target);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = eigen_gap_at(dual, freq, d, M, target);
    }
  }
  double theta = fc < fd ? c : d;

  BlochWave w = bloch_from_theta(lam, dual, freq, E, M, theta);

  // Resolvability: the refined eigenvalue gap must sit within 10x of the
  // truncation-error scale (boundary leak of the localized eigenvector,
  // floored at the eigenvalue-refinement resolution).
  double leak = std::max(
      std::abs(eval_c(dual, freq, cdouble{w.theta + M * freq.value, 0.0}) * w.coeffs.back()),
      std::abs(eval_c(dual, freq, cdouble{w.theta - (M + 1) * freq.value, 0.0}) * w.coeffs.front()));
  double trunc_scale = std::max(leak / std::max(1.0, std::abs(w.coeffs[static_cast<size_t>(M)])),
                                1e-9 * (1.0 + std::fabs(target)));
  if (w.eigen_gap > 10.0 * trunc_scale) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "dual_bloch_wave: E not resolvable at this M (gap %.3e vs truncation scale %.3e)",
                  w.eigen_gap, trunc_scale);
    throw std::domain_error(msg);
  }
  return w;
}

}  // namespace

ReducibilityConfig make_config(const Coupling& lam, const Frequency& freq,
                               const ResonanceSet& res, int M, int fourier_cutoff,
                               double strip_s) {
  ReducibilityConfig cfg;
  cfg.h = dual_lyapunov(lam) / (200.0 * std::numbers::pi);
  if (cfg.h <= 0.0) throw std::domain_error("make_config: nonpositive h (coupling outside II)");
  cfg.epsilon0 = res.epsilon0;
  cfg.n_res = res.last_abs();
  cfg.N_sentinel = res.horizon;  // n_{j+1} = infinity within the horizon
  cfg.window_half = static_cast<int>(std::min<long long>(res.horizon / 9, M));
  cfg.fourier_cutoff = fourier_cutoff;
  cfg.strip_s = strip_s > 0.0 ? strip_s : std::max(freq.beta_hat, 1e-3);
  return cfg;
}

BlochWave dual_bloch_wave(const Coupling& lam, const Frequency& freq, double E, int M,
                          int theta_grid, int workers) {
  return bloch_scan(lam, freq, E, M, theta_grid, workers, true);
}

BlochWave dual_bloch_wave_reference(const Coupling& lam, const Frequency& freq, double E, int M,
                                    int theta_grid) {
  return bloch_scan(lam, freq, E, M, theta_grid, 1, false);
}

WindowedVectors build_windowed_vector(const BlochWave& wave, const QConjugation& qc,
                                      const Coupling& lam, const Frequency& freq,
                                      const ReducibilityConfig& cfg, int grid) {
  const int W = std::min(cfg.window_half, wave.M);
  if (W < 1) throw std::invalid_argument("build_windowed_vector: empty window");
  const double a = freq.value;
  const cdouble phase = std::polar(1.0, kTwoPi * wave.theta);

  WindowedVectors out;
  out.theta = wave.theta;
  out.U.v1 = FourierSeries(W);
  out.U.v2 = FourierSeries(W);
  for (int k = -W; k <= W; ++k) {
    out.U.v1.set(k, phase * wave.u(k));
    out.U.v2.set(k, wave.u(k) * std::polar(1.0, -kTwoPi * k * a));
  }
  out.Ustar.v1 = multiply(qc.Q.a11, out.U.v1);
  out.Ustar.v2 = multiply(qc.Q.a22, out.U.v2);

  int g = 1;
  while (g < std::max(grid, 4 * (out.Ustar.v1.cutoff() + 1))) g <<= 1;
  std::vector<cdouble> s1 = grid_from_series(out.Ustar.v1, g);
  std::vector<cdouble> s2 = grid_from_series(out.Ustar.v2, g);
  std::vector<cdouble> t1 = grid_from_series(out.Ustar.v1.shifted(a), g);
  std::vector<cdouble> t2 = grid_from_series(out.Ustar.v2.shifted(a), g);

  double mn = std::numeric_limits<double>::infinity(), mx = 0.0, defect = 0.0;
  for (int j = 0; j < g; ++j) {
    auto i = static_cast<size_t>(j);
    double x = static_cast<double>(j) / g;
    Mat2 Abar = transfer_matrix(lam, freq, wave.energy, x, CocycleKind::renormalized);
    Vec2 u{s1[i], s2[i]};
    Vec2 G = (Abar * u) - Vec2{phase * t1[i], phase * t2[i]};
    defect = std::max(defect, G.norm());
    double nu = u.norm();
    mn = std::min(mn, nu);
    mx = std::max(mx, nu);
  }
  out.defect_sup = defect;
  out.min_norm = mn;
  out.max_norm = mx;
  return out;
}

CompletedB complete_to_sl2(const Vec2Series& U, int grid) {
  int g = 1;
  while (g < std::max(grid, 4 * (U.v1.cutoff() + 1))) g <<= 1;
  std::vector<cdouble> u1 = grid_from_series(U.v1, g);
  std::vector<cdouble> u2 = grid_from_series(U.v2, g);

  CompletedB out;
  out.grid = g;
  std::vector<cdouble> b12(static_cast<size_t>(g)), b22(static_cast<size_t>(g));
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (size_t j = 0; j < static_cast<size_t>(g); ++j) {
    double n2 = std::norm(u1[j]) + std::norm(u2[j]);
    double n = std::sqrt(n2);
    mn = std::min(mn, n);
    mx = std::max(mx, n);
    if (n < 1e-10) throw std::domain_error("complete_to_sl2: ||U|| collapses below 1e-10 on the grid");
    b12[j] = -std::conj(u2[j]) / n2;
    b22[j] = std::conj(u1[j]) / n2;
  }
  out.min_norm = mn;
  // Columns of the completion are orthogonal with norms ||U|| and 1/||U||,
  // so cond(B(x)) = max(||U||^2, ||U||^-2) pointwise.
  out.cond_bound = std::max(mx * mx, 1.0 / (mn * mn));
  const int cutoff = g / 2 - 1;
  out.B.a11 = series_from_grid(u1, cutoff);
  out.B.a21 = series_from_grid(u2, cutoff);
  out.B.a12 = series_from_grid(b12, cutoff);
  out.B.a22 = series_from_grid(b22, cutoff);
  return out;
}

namespace {

struct GridMats {
  std::vector<Mat2> at;         // S(x_j)
  std::vector<Mat2> shifted;    // S(x_j + a)
};

GridMats sample_series(const Mat2Series& S, double a, int g) {
  GridMats out;
  out.at.resize(static_cast<size_t>(g));
  out.shifted.resize(static_cast<size_t>(g));
  std::vector<cdouble> e11 = grid_from_series(S.a11, g), e12 = grid_from_series(S.a12, g),
                       e21 = grid_from_series(S.a21, g), e22 = grid_from_series(S.a22, g);
  std::vector<cdouble> s11 = grid_from_series(S.a11.shifted(a), g),
                       s12 = grid_from_series(S.a12.shifted(a), g),
                       s21 = grid_from_series(S.a21.shifted(a), g),
                       s22 = grid_from_series(S.a22.shifted(a), g);
  for (size_t j = 0; j < static_cast<size_t>(g); ++j) {
    out.at[j] = {e11[j], e12[j], e21[j], e22[j]};
    out.shifted[j] = {s11[j], s12[j], s21[j], s22[j]};
  }
  return out;
}

}  // namespace

ConjugationReport conjugation_residuals(const Mat2Series& S, const MatrixCocycle& coc,
                                        double theta, int grid, int cutoff, double strip_s,
                                        const std::string& stage) {
  int g = 1;
  while (g < std::max({grid, 4 * (cutoff + 1), 2 * (S.a11.cutoff() + 1)})) g <<= 1;
  const double a = coc.freq().value;
  GridMats sm = sample_series(S, a, g);

  ConjugationReport rep;
  rep.stage = stage;
  const cdouble rot11 = std::polar(1.0, kTwoPi * theta);
  const cdouble rot22 = std::polar(1.0, -kTwoPi * theta);

  std::vector<cdouble> r11(static_cast<size_t>(g)), r12(static_cast<size_t>(g)),
      r21(static_cast<size_t>(g)), r22(static_cast<size_t>(g));
  for (int j = 0; j < g; ++j) {
    auto i = static_cast<size_t>(j);
    double x = static_cast<double>(j) / g;
    Mat2 M = sm.shifted[i].inverse() * coc.at(x) * sm.at[i];
    rep.det_err = std::max(rep.det_err, std::abs(M.det() - 1.0));
    r11[i] = M.a11 - rot11;
    r12[i] = M.a12;
    r21[i] = M.a21;
    r22[i] = M.a22 - rot22;
    rep.beta1 = std::max(rep.beta1, std::abs(r11[i]));
    rep.offdiag_b = std::max(rep.offdiag_b, std::abs(r12[i]));
    rep.beta2 = std::max(rep.beta2, std::abs(r21[i]));
    rep.beta3 = std::max(rep.beta3, std::abs(r22[i]));
  }
  rep.b_series = series_from_grid(r12, cutoff);
  rep.beta1_strip = strip_norm(series_from_grid(r11, cutoff), strip_s);
  rep.beta2_strip = strip_norm(series_from_grid(r21, cutoff), strip_s);
  rep.beta3_strip = strip_norm(series_from_grid(r22, cutoff), strip_s);
  rep.offdiag_b_strip = strip_norm(rep.b_series, strip_s);
  rep.beta3_slack = rep.offdiag_b * rep.beta2 + rep.beta1 + 1e-10 - rep.beta3;
  rep.beta3_inequality_ok = rep.beta3_slack >= 0.0;
  return rep;
}

PhiStage homological_eliminate(const ConjugationReport& bstage, const Mat2Series& B,
                               const MatrixCocycle& coc, double theta, const Frequency& freq,
                               const ReducibilityConfig& cfg, int grid) {
  const double a = freq.value;
  const int cutoff = std::min(cfg.fourier_cutoff, bstage.b_series.cutoff());
  if (cutoff < 1) throw std::invalid_argument("homological_eliminate: empty mode range");

  ResonanceSet res = find_resonances(theta, freq, cfg.epsilon0,
                                     std::max<long long>(1, cutoff));
  PhiStage out;
  out.excluded_modes.assign(res.resonances.begin(), res.resonances.end());

  auto is_excluded = [&](long long k) {
    for (long long r : out.excluded_modes)
      if (r == k) return true;
    return false;
  };

  const cdouble emt = std::polar(1.0, -kTwoPi * theta);
  FourierSeries w(cutoff), bl(cutoff);
  int eliminated = 0;
  for (int k = -cutoff; k <= cutoff; ++k) {
    cdouble bk = bstage.b_series.coeff(k);
    if (is_excluded(k)) continue;
    cdouble den = 1.0 - std::exp(cdouble{0.0, -kTwoPi} * (2.0 * theta - k * a));
    if (std::abs(den) < kDivisorGuard) {
      // Near-resonance at the divisor guard: treat like the resonant mode.
      out.excluded_modes.push_back(k);
      continue;
    }
    w.set(k, -bk * emt / den);
    bl.set(k, bk);
    ++eliminated;
  }
  if (eliminated == 0)
    throw std::domain_error("homological_eliminate: theta too resonant for elimination at this cutoff");
  out.w = w;

  // Exactness of the retained-mode identity
  // W^{-1}(x+a) [rot + b^l E12] W(x) = rot.
  {
    const int gc = 512;
    const cdouble rot11 = std::polar(1.0, kTwoPi * theta);
    const cdouble rot22 = std::polar(1.0, -kTwoPi * theta);
    double worst = 0.0;
    for (int j = 0; j < gc; ++j) {
      double x = static_cast<double>(j) / gc;
      cdouble wx = w.eval(x), wxa = w.eval(x + a);
      Mat2 Wm{1.0, wx, 0.0, 1.0};
      Mat2 Wi{1.0, -wxa, 0.0, 1.0};
      Mat2 Z{rot11, bl.eval(x), 0.0, rot22};
      Mat2 R = Wi * Z * Wm;
      worst = std::max(worst, std::abs(R.a11 - rot11));
      worst = std::max(worst, std::abs(R.a12));
      worst = std::max(worst, std::abs(R.a21));
      worst = std::max(worst, std::abs(R.a22 - rot22));
    }
    out.homological_identity_err = worst;
  }

  // Phi = B W on the grid.
  int g = 1;
  while (g < std::max(grid, 2 * (B.a11.cutoff() + 1))) g <<= 1;
  std::vector<cdouble> b11 = grid_from_series(B.a11, g), b12g = grid_from_series(B.a12, g),
                       b21 = grid_from_series(B.a21, g), b22 = grid_from_series(B.a22, g);
  std::vector<cdouble> wg = grid_from_series(w, g);
  std::vector<cdouble> p11(static_cast<size_t>(g)), p12(static_cast<size_t>(g)),
      p21(static_cast<size_t>(g)), p22(static_cast<size_t>(g));
  for (size_t j = 0; j < static_cast<size_t>(g); ++j) {
    p11[j] = b11[j];
    p21[j] = b21[j];
    p12[j] = b11[j] * wg[j] + b12g[j];
    p22[j] = b21[j] * wg[j] + b22[j];
  }
  const int pc = g / 2 - 1;
  out.Phi.a11 = series_from_grid(p11, pc);
  out.Phi.a12 = series_from_grid(p12, pc);
  out.Phi.a21 = series_from_grid(p21, pc);
  out.Phi.a22 = series_from_grid(p22, pc);

  out.report = conjugation_residuals(out.Phi, coc, theta, g, bstage.b_series.cutoff(),
                                     cfg.strip_s, "Phi-stage");

  // Improvement on the eliminated modes.
  FourierSeries bl_after(cutoff);
  for (int k = -cutoff; k <= cutoff; ++k)
    if (!is_excluded(k)) bl_after.set(k, out.report.b_series.coeff(k));
  const int gm = 1024;
  double before = 0.0, after = 0.0;
  for (int j = 0; j < gm; ++j) {
    double x = static_cast<double>(j) / gm;
    before = std::max(before, std::abs(bl.eval(x)));
    after = std::max(after, std::abs(bl_after.eval(x)));
  }
  out.eliminable_before = before;
  out.eliminable_after = after;
  return out;
}

Certificate holder_certificate(const PhiStage& phi, const MatrixCocycle& coc, double eps,
                               int grid, double intercept) {
  if (eps <= 0.0) throw std::invalid_argument("holder_certificate: eps must be positive");
  int g = 1;
  while (g < std::max(grid, 2 * (phi.Phi.a11.cutoff() + 1))) g <<= 1;
  const double a = coc.freq().value;
  GridMats pm = sample_series(phi.Phi, a, g);

  double phinorm = 0.0;
  for (const auto& m : pm.at) phinorm = std::max(phinorm, m.norm2());

  Certificate cert;
  cert.eps = eps;
  cert.d = phinorm * std::pow(eps, 0.25);
  const double d2 = cert.d * cert.d;
  double sup = 0.0;
  for (int j = 0; j < g; ++j) {
    auto i = static_cast<size_t>(j);
    double x = static_cast<double>(j) / g;
    Mat2 M = pm.shifted[i].inverse() * coc.at(x) * pm.at[i];
    Mat2 Bp{M.a11, d2 * M.a12, M.a21 / d2, M.a22};
    cert.det_err = std::max(cert.det_err, std::abs(Bp.det() - 1.0));
    sup = std::max(sup, Bp.norm2());
  }
  cert.bound = std::log(sup);
  cert.ratio = cert.bound / std::sqrt(eps);
  if (intercept < 0.0) intercept = cert.ratio;
  cert.valid = cert.bound <= 2.0 * std::sqrt(eps) * intercept + 1e-300;
  return cert;
}

std::vector<Certificate> certificate_sweep(const PhiStage& phi, const MatrixCocycle& coc,
                                           const std::vector<double>& epsilons, int grid) {
  std::vector<Certificate> out;
  out.reserve(epsilons.size());
  for (double e : epsilons) out.push_back(holder_certificate(phi, coc, e, grid));
  double intercept = std::numeric_limits<double>::infinity();
  for (const auto& c : out) intercept = std::min(intercept, c.ratio);
  for (auto& c : out) c.valid = c.bound <= 2.0 * std::sqrt(c.eps) * intercept + 1e-300;
  return out;
}

ReduceOutcome run_reducibility(const Coupling& lam, const Frequency& freq, double E,
                               const ReduceOptions& opt) {
  ReduceOutcome out;
  // The paper never pins epsilon0 numerically (it scales like beta(alpha)
  // times an unspecified absolute constant); 0 selects the 10 beta_hat proxy.
  double eps0 = opt.epsilon0 > 0.0 ? opt.epsilon0 : std::max(10.0 * freq.beta_hat, 1e-8);
  out.wave = dual_bloch_wave(lam, freq, E, opt.M, opt.theta_grid, opt.workers);
  out.qc = build_q_conjugation(lam, freq, std::max(16, opt.fourier_cutoff), opt.grid);
  out.resonances = find_resonances(out.wave.theta, freq, eps0, opt.resonance_horizon);
  out.cfg = make_config(lam, freq, out.resonances, opt.M, opt.fourier_cutoff, opt.strip_s);
  out.wv = build_windowed_vector(out.wave, out.qc, lam, freq, out.cfg, opt.grid);
  out.completed = complete_to_sl2(out.wv.Ustar, opt.grid);
  MatrixCocycle coc = MatrixCocycle::renormalized(lam, freq, E);
  out.bstage = conjugation_residuals(out.completed.B, coc, out.wave.theta, opt.grid,
                                     std::max(4 * opt.fourier_cutoff, 64), out.cfg.strip_s);
  out.phi = homological_eliminate(out.bstage, out.completed.B, coc, out.wave.theta, freq,
                                  out.cfg, opt.grid);
  out.sweep = certificate_sweep(out.phi, coc, opt.epsilons, opt.grid);
  return out;
}

}  // namespace harper
