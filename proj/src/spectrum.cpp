#include "harper/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "harper/parallel.hpp"

namespace harper {

namespace {

double frac(double x) { return x - std::floor(x); }

double circular_distance(double a, double b) {
  double d = std::fabs(frac(a) - frac(b));
  return std::min(d, 1.0 - d);
}

}  // namespace

SpectrumCloud SpectrumCloud::from_samples(CloudParams params, std::vector<double> sorted_samples,
                                          std::vector<std::vector<double>> per_phase) {
  if (sorted_samples.empty()) throw std::invalid_argument("SpectrumCloud: empty sample set");
  if (!std::is_sorted(sorted_samples.begin(), sorted_samples.end()))
    std::sort(sorted_samples.begin(), sorted_samples.end());
  SpectrumCloud c;
  c.params_ = std::move(params);
  c.samples_ = std::move(sorted_samples);
  c.per_phase_ = std::move(per_phase);
  return c;
}

double SpectrumCloud::energy_resolution() const {
  return (e_max() - e_min()) / static_cast<double>(samples_.size());
}

double SpectrumCloud::ids_step(double E) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), E);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double SpectrumCloud::ids(double E) const {
  const auto& s = samples_;
  const double T = static_cast<double>(s.size());
  if (E < s.front()) return 0.0;
  if (E >= s.back()) return 1.0;
  auto it = std::upper_bound(s.begin(), s.end(), E);
  size_t i = static_cast<size_t>(it - s.begin());  // s[i-1] <= E < s[i]
  double lo = s[i - 1], hi = s[i];
  double base = static_cast<double>(i) / T;
  if (hi <= lo) return base;
  return base + (E - lo) / (hi - lo) / T;
}

SpectrumCloud build_cloud(const Coupling& lam, const Frequency& freq, int n, int phase_count,
                          int workers) {
  if (n < 1 || phase_count < 1)
    throw std::invalid_argument("build_cloud: n and phase_count must be >= 1");
  if (static_cast<long long>(n) * phase_count > 100'000'000LL)
    throw std::domain_error("build_cloud: n * phase_count exceeds the 1e8 guard");

  CloudParams params{lam, freq, n, phase_count};
  std::vector<std::vector<double>> per_phase(static_cast<size_t>(phase_count));
  parallel_for(phase_count, workers, [&](long long j) {
    double x = static_cast<double>(j) / phase_count;
    per_phase[static_cast<size_t>(j)] = eigenvalues(build_truncation(lam, freq, x, n));
  });
  std::vector<double> all;
  all.reserve(params.total());
  for (const auto& v : per_phase) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end());
  return SpectrumCloud::from_samples(std::move(params), std::move(all), std::move(per_phase));
}

SpectrumCloud build_cloud_reference(const Coupling& lam, const Frequency& freq, int n,
                                    int phase_count) {
  if (n < 1 || phase_count < 1)
    throw std::invalid_argument("build_cloud_reference: n and phase_count must be >= 1");
  if (static_cast<long long>(n) * phase_count > 100'000'000LL)
    throw std::domain_error("build_cloud_reference: n * phase_count exceeds the 1e8 guard");
  CloudParams params{lam, freq, n, phase_count};
  std::vector<std::vector<double>> per_phase;
  per_phase.reserve(static_cast<size_t>(phase_count));
  std::vector<double> all;
  for (int j = 0; j < phase_count; ++j) {
    double x = static_cast<double>(j) / phase_count;
    per_phase.push_back(eigenvalues(build_truncation(lam, freq, x, n)));
    all.insert(all.end(), per_phase.back().begin(), per_phase.back().end());
  }
  std::sort(all.begin(), all.end());
  return SpectrumCloud::from_samples(std::move(params), std::move(all), std::move(per_phase));
}

double ids(const SpectrumCloud& cloud, double E) { return cloud.ids(E); }

ThoulessResult thouless_residual(const SpectrumCloud& cloud, const Coupling& lam, double E,
                                 double lyap) {
  const auto& s = cloud.samples();
  ThoulessResult out;
  out.lyap = lyap;

  auto atomic = [&](double e) {
    auto it = std::lower_bound(s.begin(), s.end(), e);
    return it != s.end() && *it == e;
  };
  if (atomic(E)) {
    E += 1e-9;
    out.perturbed = true;
  }

  const double delta = 1e-4;  // singular window, linearized locally
  auto lo = std::lower_bound(s.begin(), s.end(), E - delta);
  auto hi = std::upper_bound(s.begin(), s.end(), E + delta);
  double acc = 0.0;
  for (auto it = s.begin(); it != lo; ++it) acc += std::log(E - *it);
  for (auto it = hi; it != s.end(); ++it) acc += std::log(*it - E);
  // Uniform local density inside the window: integral of ln|t| is ln(d) - 1.
  acc += static_cast<double>(hi - lo) * (std::log(delta) - 1.0);
  out.log_integral = acc / static_cast<double>(s.size());

  MeanLogC mlc = mean_log_c(lam, cloud.params().freq);
  out.mean_log_c = mlc.value();
  out.residual = lyap - (-out.mean_log_c + out.log_integral);
  return out;
}

GapReport detect_gaps(const SpectrumCloud& cloud, int max_label, double plateau_tol) {
  const auto& s = cloud.samples();
  const long long T = static_cast<long long>(s.size());
  const long long P = std::max(1, cloud.params().phase_count);
  GapReport rep;
  rep.max_label = max_label;
  rep.plateau_tol = plateau_tol > 0.0 ? plateau_tol : 1.0 / (2.0 * cloud.params().n);
  const long long budget = std::max<long long>(1, static_cast<long long>(rep.plateau_tol * T));
  const double wmin = 2.0 * cloud.energy_resolution();
  const double alpha = cloud.params().freq.value;

  auto spacing = [&](long long i) {
    return s[static_cast<size_t>(i + 1)] - s[static_cast<size_t>(i)];
  };
  // maximal run of spacings >= wmin starting at i; returns its last sample index
  auto run_end = [&](long long i) {
    long long b = i + 1;
    while (b < T - 1 && spacing(b) >= wmin) ++b;
    return b;
  };

  // Candidate plateaus: chains of empty intervals (spacings >= wmin) merged
  // across isolated stray samples (Dirichlet edge eigenvalues inside a true
  // gap).  The IDS variation across a chain stays below plateau_tol.
  const long long max_sep = 4;  // strays allowed per junction

  struct Chain {
    long long l, r, inside;
  };
  std::vector<Chain> chains;
  long long i = 0;
  while (i + 1 < T) {
    if (spacing(i) < wmin) {
      ++i;
      continue;
    }
    long long l = i;
    long long r = run_end(i);
    long long inside = 0;
    for (;;) {
      long long j = r, cnt = 0;
      while (j < T - 1 && cnt < max_sep && spacing(j) < wmin) {
        ++j;
        ++cnt;
      }
      if (j >= T - 1 || cnt == 0 || spacing(j) < wmin) break;
      if (inside + cnt > budget) break;
      inside += cnt;
      r = run_end(j);
    }
    chains.push_back({l, r, inside});
    i = r;
  }

  // Resolvability against the finite-size lattice: the union of P phase
  // spectra leaves voids of width ~ (per-phase level spacing) between
  // consecutive eigenvalue branches; those are not spectral gaps and shrink
  // like 1/n.  A credible gap must be wide against the spans of the 2P
  // samples flanking it on either side.
  std::vector<Chain> accepted;
  for (const auto& ch : chains) {
    const double width = s[static_cast<size_t>(ch.r)] - s[static_cast<size_t>(ch.l)];
    if (width < wmin) continue;
    long long lo = std::max<long long>(0, ch.l - 2 * P);
    long long hi = std::min<long long>(T - 1, ch.r + 2 * P);
    double window_l = s[static_cast<size_t>(ch.l)] - s[static_cast<size_t>(lo)];
    double window_r = s[static_cast<size_t>(hi)] - s[static_cast<size_t>(ch.r)];
    if (window_l + window_r <= 3.2 * width) accepted.push_back(ch);
  }

  // Plateau heights straight from the midpoint rank.  Stray gap states
  // above and below a plateau shift the rank in opposite directions and
  // largely cancel; the label residual reports whatever bias remains.
  struct Plateau {
    long long l, r;
    double ids;
  };
  std::vector<Plateau> plateaus;
  for (const auto& ch : accepted) {
    double h = static_cast<double>(ch.l + 1 + ch.r - ch.inside) / (2.0 * static_cast<double>(T));
    plateaus.push_back({ch.l, ch.r, h});
  }
  // Label each plateau; duplicates keep the smaller residual.
  std::vector<std::pair<GapRecord, double>> labeled;  // record + residual for dedupe
  for (const auto& p : plateaus) {
    long long best_m = 0;
    double best = std::numeric_limits<double>::infinity();
    for (long long m = 1; m <= max_label; ++m) {
      double fm = frac(static_cast<double>(m) * alpha);
      double d1 = circular_distance(p.ids, fm);
      double d2 = circular_distance(p.ids, 1.0 - fm);
      if (d1 < best) { best = d1; best_m = m; }
      if (d2 < best) { best = d2; best_m = -m; }
    }
    if (best <= 3.0 * rep.plateau_tol && best_m != 0) {
      GapRecord g;
      g.label = best_m;
      g.lower = s[static_cast<size_t>(p.l)];
      g.upper = s[static_cast<size_t>(p.r)];
      g.ids_value = p.ids;
      g.label_residual = best;
      labeled.push_back({g, best});
    } else {
      rep.unlabeled.push_back({s[static_cast<size_t>(p.l)], s[static_cast<size_t>(p.r)], p.ids, best});
    }
  }
  std::sort(labeled.begin(), labeled.end(),
            [](const auto& a, const auto& b) { return a.first.lower < b.first.lower; });
  for (size_t a = 0; a < labeled.size(); ++a) {
    bool dup = false;
    for (size_t b = 0; b < labeled.size(); ++b) {
      if (a != b && labeled[b].first.label == labeled[a].first.label &&
          labeled[b].second < labeled[a].second) {
        dup = true;
        break;
      }
    }
    if (dup)
      rep.unlabeled.push_back({labeled[a].first.lower, labeled[a].first.upper,
                               labeled[a].first.ids_value, labeled[a].second});
    else
      rep.gaps.push_back(labeled[a].first);
  }
  return rep;
}

DecayFit gap_decay_report(const std::vector<GapRecord>& gaps, const Coupling& lam) {
  if (gaps.size() < 5)
    throw std::invalid_argument("gap_decay_report: need at least 5 labeled gaps, have " +
                                std::to_string(gaps.size()));
  DecayFit fit;
  fit.points = static_cast<int>(gaps.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& g : gaps) {
    double x = static_cast<double>(std::llabs(g.label));
    double y = std::log(g.length());
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
  }
  double n = static_cast<double>(gaps.size());
  double vx = sxx - sx * sx / n;
  double vy = syy - sy * sy / n;
  double cxy = sxy - sx * sy / n;
  if (vx <= 0.0) throw std::invalid_argument("gap_decay_report: degenerate label set");
  fit.slope = cxy / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r2 = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
  try {
    fit.dual_lyapunov = dual_lyapunov(lam);
  } catch (const std::domain_error&) {
    fit.dual_lyapunov = 0.0;
  }
  return fit;
}

HolderFit holder_modulus(const SpectrumCloud& cloud, int pair_count, double delta_min,
                         double delta_max, std::uint64_t seed) {
  if (!(delta_min > 0.0 && delta_max > delta_min))
    throw std::invalid_argument("holder_modulus: need 0 < delta_min < delta_max");
  if (delta_min < 10.0 * cloud.energy_resolution())
    throw std::invalid_argument("holder_modulus: delta_min below 10x the cloud energy resolution " +
                                std::to_string(cloud.energy_resolution()));

  const auto& s = cloud.samples();
  const int nbins = 16;
  const double lmin = std::log(delta_min), lmax = std::log(delta_max);

  for (int attempt = 0; attempt < 5; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::uniform_real_distribution<double> ulog(lmin, lmax);
    std::uniform_int_distribution<int> usign(0, 1);

    std::vector<double> env(nbins, 0.0);
    int used = 0;
    for (int p = 0; p < pair_count; ++p) {
      // E1 sweeps the measure quantiles of the cloud (stratified, so the
      // envelope beats the per-bin capture bias of independent draws);
      // the pair scale and side stay random.
      size_t idx = static_cast<size_t>((static_cast<double>(p) + 0.5) /
                                       pair_count * static_cast<double>(s.size()));
      double e1 = s[std::min(idx, s.size() - 1)];
      double d = std::exp(ulog(rng));
      double e2 = usign(rng) ? e1 + d : e1 - d;
      if (e2 < cloud.e_min() || e2 > cloud.e_max()) e2 = (e2 < cloud.e_min()) ? e1 + d : e1 - d;
      if (e2 < cloud.e_min() || e2 > cloud.e_max()) continue;
      double dn = std::fabs(cloud.ids(e2) - cloud.ids(e1));
      int b = std::min(nbins - 1, static_cast<int>((std::log(d) - lmin) / (lmax - lmin) * nbins));
      env[static_cast<size_t>(b)] = std::max(env[static_cast<size_t>(b)], dn);
      ++used;
    }

    HolderFit fit;
    fit.pairs_used = used;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int b = 0; b < nbins; ++b) {
      if (env[static_cast<size_t>(b)] <= 0.0) continue;
      double x = lmin + (b + 0.5) * (lmax - lmin) / nbins;
      double y = std::log(env[static_cast<size_t>(b)]);
      fit.envelope.push_back({std::exp(x), env[static_cast<size_t>(b)]});
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++fit.bins_used;
    }
    if (fit.bins_used < 4) continue;  // degenerate sampling (all pairs in one gap): resample
    double n = static_cast<double>(fit.bins_used);
    double vx = sxx - sx * sx / n;
    fit.exponent = (sxy - sx * sy / n) / vx;
    fit.constant = std::exp((sy - fit.exponent * sx) / n);
    return fit;
  }
  throw std::runtime_error("holder_modulus: degenerate sampling after 5 attempts");
}

std::vector<std::pair<double, double>> empirical_spectrum(const SpectrumCloud& cloud,
                                                          const GapReport& report) {
  std::vector<std::pair<double, double>> open;
  for (const auto& g : report.gaps) open.push_back({g.lower, g.upper});
  for (const auto& p : report.unlabeled) open.push_back({p.lower, p.upper});
  std::sort(open.begin(), open.end());

  std::vector<std::pair<double, double>> out;
  double cur = cloud.e_min();
  for (const auto& [lo, hi] : open) {
    if (lo > cur) out.push_back({cur, lo});
    cur = std::max(cur, hi);
  }
  if (cur < cloud.e_max()) out.push_back({cur, cloud.e_max()});
  return out;
}

namespace {

double distance_to_set(double x, const std::vector<std::pair<double, double>>& B) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [lo, hi] : B) {
    if (x < lo)
      best = std::min(best, lo - x);
    else if (x > hi)
      best = std::min(best, x - hi);
    else
      return 0.0;
  }
  return best;
}

double directed_hausdorff(const std::vector<std::pair<double, double>>& A,
                          const std::vector<std::pair<double, double>>& B) {
  // sup over A of d(., B) is attained at an endpoint of A or at the midpoint
  // of a B-gap clipped to an A-interval.
  std::vector<double> candidates;
  for (const auto& [lo, hi] : A) {
    candidates.push_back(lo);
    candidates.push_back(hi);
  }
  for (size_t i = 0; i + 1 < B.size(); ++i) {
    double glo = B[i].second, ghi = B[i + 1].first;
    double mid = 0.5 * (glo + ghi);
    for (const auto& [lo, hi] : A) {
      if (mid >= lo && mid <= hi) candidates.push_back(mid);
      if (glo >= lo && glo <= hi && ghi >= lo && ghi <= hi) continue;
      // clipped gap: farthest reachable point inside the A-interval
      double c = std::clamp(mid, lo, hi);
      candidates.push_back(c);
    }
  }
  double worst = 0.0;
  for (double x : candidates) worst = std::max(worst, distance_to_set(x, B));
  return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<std::pair<double, double>>& A,
                          const std::vector<std::pair<double, double>>& B) {
  if (A.empty() || B.empty()) throw std::invalid_argument("hausdorff_distance: empty set");
  return std::max(directed_hausdorff(A, B), directed_hausdorff(B, A));
}

double homogeneity(const SpectrumCloud& cloud, const GapReport& report, double E, double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("homogeneity: sigma must be positive");
  if (sigma > cloud.e_max() - cloud.e_min())
    throw std::invalid_argument("homogeneity: sigma exceeds the spectrum diameter");

  const double wl = E - sigma, wr = E + sigma;
  double covered = 0.0;
  auto clip = [&](double lo, double hi) {
    double a = std::max(lo, wl), b = std::min(hi, wr);
    return std::max(0.0, b - a);
  };
  covered += clip(-std::numeric_limits<double>::infinity(), cloud.e_min());  // G_0
  covered += clip(cloud.e_max(), std::numeric_limits<double>::infinity());
  for (const auto& g : report.gaps) covered += clip(g.lower, g.upper);
  for (const auto& p : report.unlabeled) covered += clip(p.lower, p.upper);
  return 2.0 * sigma - covered;
}

DualityResult duality_check(const Coupling& lam, const Frequency& freq, int n, int phase_count,
                            int workers) {
  Coupling dual = dual_coupling(lam);
  SpectrumCloud a = build_cloud(lam, freq, n, phase_count, workers);
  SpectrumCloud b = build_cloud(dual, freq, n, phase_count, workers);
  GapReport ra = detect_gaps(a);
  GapReport rb = detect_gaps(b);
  auto sa = empirical_spectrum(a, ra);
  auto sb = empirical_spectrum(b, rb);
  for (auto& [lo, hi] : sb) {
    lo *= lam.l2;
    hi *= lam.l2;
  }
  DualityResult out;
  out.n = n;
  out.phase_count = phase_count;
  out.hausdorff = hausdorff_distance(sa, sb);
  return out;
}

}  // namespace harper
