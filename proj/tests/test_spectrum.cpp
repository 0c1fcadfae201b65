#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "harper/cocycle.hpp"
#include "harper/spectrum.hpp"

using namespace harper;

namespace {

const Frequency kGolden = golden_mean();

// Quantile fixture: samples realizing a prescribed IDS N on [0,1].
SpectrumCloud fixture_from_ids(double (*inv)(double), int count, int n_for_tol = 200) {
  std::vector<double> s(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    s[static_cast<size_t>(i)] = inv((static_cast<double>(i) + 0.5) / count);
  CloudParams p{{0.0, 2.0, 0.0}, kGolden, n_for_tol, count / n_for_tol};
  return SpectrumCloud::from_samples(p, std::move(s));
}

double inv_sqrt(double y) { return y * y; }       // N(E) = sqrt(E)
double inv_linear(double y) { return y; }         // N(E) = E

// Step-plateau fixture with gaps at IDS heights frac(m alpha), m in {2,-1,1,-2}.
SpectrumCloud gap_fixture(int total) {
  double a = kGolden.value;
  auto fr = [](double x) { return x - std::floor(x); };
  std::vector<double> heights{fr(2 * a), fr(-a), fr(a), fr(-2 * a)};  // ascending
  std::vector<double> s;
  double prev = 0.0;
  double band_lo = 0.0;
  for (size_t b = 0; b <= heights.size(); ++b) {
    double h = b < heights.size() ? heights[b] : 1.0;
    int cnt = static_cast<int>(std::lround((h - prev) * total));
    for (int i = 0; i < cnt; ++i)
      s.push_back(band_lo + (static_cast<double>(i) + 0.5) / cnt);
    prev = h;
    band_lo += 2.0;  // band [k, k+1], gap [k+1, k+2]
  }
  CloudParams p{{0.0, 2.0, 0.0}, kGolden, 100, static_cast<int>(s.size()) / 100};
  return SpectrumCloud::from_samples(p, std::move(s));
}

}  // namespace

TEST_CASE("ids step and interpolation") {
  CloudParams p{{0.0, 2.0, 0.0}, kGolden, 2, 2};
  SpectrumCloud c = SpectrumCloud::from_samples(p, {0.0, 1.0, 2.0, 3.0});
  CHECK(c.ids_step(-1.0) == 0.0);
  CHECK(c.ids_step(0.0) == doctest::Approx(0.25));
  CHECK(c.ids_step(2.5) == doctest::Approx(0.75));
  CHECK(c.ids_step(5.0) == 1.0);
  CHECK(c.ids(-1.0) == 0.0);
  CHECK(c.ids(5.0) == 1.0);
  // monotone
  double prev = -1.0;
  for (double e = -0.5; e < 3.5; e += 0.01) {
    double v = c.ids(e);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
}

TEST_CASE("AMO cloud is symmetric: N(0) = 1/2") {
  SpectrumCloud c = build_cloud({0.0, 0.5, 0.0}, kGolden, 500, 64);
  CHECK(c.ids(0.0) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(c.ids_step(0.0) >= 0.49);
  CHECK(c.ids_step(0.0) <= 0.51);
}

TEST_CASE("ids stability under doubling n") {
  SpectrumCloud a = build_cloud({0.0, 0.5, 0.0}, kGolden, 100, 16);
  SpectrumCloud b = build_cloud({0.0, 0.5, 0.0}, kGolden, 200, 16);
  for (double e : {-1.7, -0.5, 0.3, 1.1, 1.9})
    CHECK(std::fabs(a.ids_step(e) - b.ids_step(e)) <= 5.0 / 100.0);
}

TEST_CASE("parallel and serial clouds agree bitwise") {
  SpectrumCloud a = build_cloud({0.1, 2.0, 0.2}, kGolden, 120, 12, 2);
  SpectrumCloud b = build_cloud_reference({0.1, 2.0, 0.2}, kGolden, 120, 12);
  REQUIRE(a.samples().size() == b.samples().size());
  for (size_t i = 0; i < a.samples().size(); ++i) CHECK(a.samples()[i] == b.samples()[i]);
}

TEST_CASE("cloud guard rejects oversized requests") {
  CHECK_THROWS_AS(build_cloud({0.0, 2.0, 0.0}, kGolden, 100000, 10000), std::domain_error);
}

TEST_CASE("thouless residual far outside the spectrum") {
  SpectrumCloud c = build_cloud({0.0, 2.0, 0.0}, kGolden, 300, 32);
  // off spectrum both sides are dominated by ln|E|; lyap(E) for the
  // renormalized AMO cocycle at E = 100 is ln(|E|/2) + o(1)
  double E = 100.0;
  double lyap = std::log(E / 2.0);
  ThoulessResult th = thouless_residual(c, {0.0, 2.0, 0.0}, E, lyap);
  CHECK(std::fabs(th.residual) < 0.05);
}

TEST_CASE("thouless residual is continuous across a gap") {
  SpectrumCloud c = build_cloud({0.0, 2.0, 0.0}, kGolden, 300, 32);
  GapReport rep = detect_gaps(c);
  REQUIRE(!rep.gaps.empty());
  const GapRecord& g = rep.gaps.front();
  double mid = 0.5 * (g.lower + g.upper);
  double w = 0.05 * g.length();
  ThoulessResult r1 = thouless_residual(c, {0.0, 2.0, 0.0}, mid - w, 0.0);
  ThoulessResult r2 = thouless_residual(c, {0.0, 2.0, 0.0}, mid + w, 0.0);
  CHECK(std::fabs(r1.residual - r2.residual) < 0.05);
}

TEST_CASE("synthetic plateaus recover their gap labels exactly") {
  SpectrumCloud c = gap_fixture(20000);
  GapReport rep = detect_gaps(c, 10);
  REQUIRE(rep.gaps.size() == 4);
  std::vector<long long> labels;
  for (const auto& g : rep.gaps) labels.push_back(g.label);
  // ascending IDS heights: frac(2a)=0.236 -> m=2, frac(-a)=0.382 -> m=-1,
  // frac(a)=0.618 -> m=1, frac(-2a)=0.764 -> m=-2
  CHECK(labels == std::vector<long long>{2, -1, 1, -2});
  for (const auto& g : rep.gaps) CHECK(g.label_residual < 1e-3);
}

TEST_CASE("labels are unique") {
  SpectrumCloud c = build_cloud({0.0, 2.0, 0.0}, kGolden, 600, 48);
  GapReport rep = detect_gaps(c);
  for (size_t i = 0; i < rep.gaps.size(); ++i)
    for (size_t j = i + 1; j < rep.gaps.size(); ++j)
      CHECK(rep.gaps[i].label != rep.gaps[j].label);
}

TEST_CASE("gap decay fit on synthetic exponential lengths") {
  std::vector<GapRecord> gaps;
  for (long long m = 1; m <= 6; ++m) {
    GapRecord g;
    g.label = (m % 2 == 0) ? m : -m;
    g.lower = static_cast<double>(m);
    g.upper = g.lower + std::exp(-static_cast<double>(m));
    gaps.push_back(g);
  }
  DecayFit fit = gap_decay_report(gaps, {0.0, 2.0, 0.0});
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(gap_decay_report(std::vector<GapRecord>(gaps.begin(), gaps.begin() + 4),
                                   {0.0, 2.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("holder calibration fixtures") {
  SpectrumCloud sq = fixture_from_ids(inv_sqrt, 200000);
  HolderFit f1 = holder_modulus(sq, 40000, 1e-4, 1e-2, 7);
  CHECK(f1.exponent == doctest::Approx(0.5).epsilon(0.04));

  SpectrumCloud lin = fixture_from_ids(inv_linear, 200000);
  HolderFit f2 = holder_modulus(lin, 40000, 1e-4, 1e-2, 7);
  CHECK(f2.exponent == doctest::Approx(1.0).epsilon(0.02));
  CHECK(f2.exponent >= 0.95);
}

TEST_CASE("holder guard on delta range") {
  SpectrumCloud sq = fixture_from_ids(inv_sqrt, 1000);
  CHECK_THROWS_AS(holder_modulus(sq, 100, 1e-6, 1e-2, 1), std::invalid_argument);
}

TEST_CASE("homogeneity inside a band and additivity") {
  SpectrumCloud c = gap_fixture(20000);
  GapReport rep = detect_gaps(c, 10);
  // window wholly inside the first band [0,1]
  double m = homogeneity(c, rep, 0.5, 0.01);
  CHECK(m == doctest::Approx(0.02).epsilon(1e-12));

  // additivity: measure + gap overlaps = 2 sigma
  double E = rep.gaps.front().upper + 0.3;
  double sigma = 0.6;
  double meas = homogeneity(c, rep, E, sigma);
  double overlap = 0.0;
  auto clip = [&](double lo, double hi) {
    double a = std::max(lo, E - sigma), b = std::min(hi, E + sigma);
    return std::max(0.0, b - a);
  };
  for (const auto& g : rep.gaps) overlap += clip(g.lower, g.upper);
  for (const auto& p : rep.unlabeled) overlap += clip(p.lower, p.upper);
  overlap += clip(-1e30, c.e_min());
  overlap += clip(c.e_max(), 1e30);
  CHECK(meas + overlap == doctest::Approx(2.0 * sigma).epsilon(1e-12));
}

TEST_CASE("homogeneity at a gap edge keeps one side") {
  SpectrumCloud c = gap_fixture(20000);
  GapReport rep = detect_gaps(c, 10);
  const GapRecord& g = rep.gaps.front();
  double sigma = 0.5 * g.length();
  double m = homogeneity(c, rep, g.upper, sigma);
  CHECK(m >= sigma * 0.999 - 1e-9);
}

TEST_CASE("homogeneity guard on sigma") {
  SpectrumCloud c = gap_fixture(2000);
  GapReport rep = detect_gaps(c, 10);
  CHECK_THROWS_AS(homogeneity(c, rep, 0.5, 1e9), std::invalid_argument);
}

TEST_CASE("hausdorff distance against a grid oracle") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    auto make = [&]() {
      std::vector<std::pair<double, double>> v;
      double x = u(rng);
      for (int i = 0; i < 4; ++i) {
        double w = 0.05 + 0.3 * u(rng);
        v.push_back({x, x + w});
        x += w + 0.05 + 0.4 * u(rng);
      }
      return v;
    };
    auto A = make(), B = make();
    double d = hausdorff_distance(A, B);
    // dense grid oracle
    auto dist = [](double x, const std::vector<std::pair<double, double>>& S) {
      double best = 1e18;
      for (auto& [lo, hi] : S)
        best = std::min(best, x < lo ? lo - x : (x > hi ? x - hi : 0.0));
      return best;
    };
    double oracle = 0.0;
    const int G = 20000;
    for (auto& [lo, hi] : A)
      for (int i = 0; i <= G / 100; ++i) {
        double x = lo + (hi - lo) * i / (G / 100);
        oracle = std::max(oracle, dist(x, B));
      }
    for (auto& [lo, hi] : B)
      for (int i = 0; i <= G / 100; ++i) {
        double x = lo + (hi - lo) * i / (G / 100);
        oracle = std::max(oracle, dist(x, A));
      }
    CHECK(d == doctest::Approx(oracle).epsilon(0.02));
  }
}

TEST_CASE("duality smoke test on the AMO pair") {
  DualityResult d = duality_check({0.0, 2.0, 0.0}, kGolden, 400, 32);
  CHECK(d.hausdorff <= 0.05);
}

TEST_CASE("empirical spectrum complements the detected gaps") {
  SpectrumCloud c = gap_fixture(20000);
  GapReport rep = detect_gaps(c, 10);
  auto bands = empirical_spectrum(c, rep);
  REQUIRE(bands.size() == rep.gaps.size() + rep.unlabeled.size() + 1);
  for (size_t i = 0; i + 1 < bands.size(); ++i) CHECK(bands[i].second < bands[i + 1].first);
  CHECK(bands.front().first == doctest::Approx(c.e_min()));
  CHECK(bands.back().second == doctest::Approx(c.e_max()));
}

TEST_CASE("gap labels are stable under phase doubling") {
  SpectrumCloud coarse = build_cloud({0.0, 2.0, 0.0}, kGolden, 800, 32);
  SpectrumCloud fine = build_cloud({0.0, 2.0, 0.0}, kGolden, 800, 64);
  GapReport rc = detect_gaps(coarse);
  GapReport rf = detect_gaps(fine);
  int compared = 0;
  for (const auto& g : rc.gaps) {
    if (g.length() <= 4.0 * coarse.energy_resolution()) continue;
    for (const auto& h : rf.gaps) {
      double lo = std::max(g.lower, h.lower), hi = std::min(g.upper, h.upper);
      if (hi - lo > 0.5 * g.length()) {
        CHECK(g.label == h.label);
        ++compared;
      }
    }
  }
  CHECK(compared >= 5);
}

TEST_CASE("thouless residual shrinks when n and phases double") {
  SpectrumCloud small = build_cloud({0.0, 2.0, 0.0}, kGolden, 500, 32);
  SpectrumCloud big = build_cloud({0.0, 2.0, 0.0}, kGolden, 1000, 64);
  const double E = 1.63;  // interior of the m = 1 gap
  MatrixCocycle coc = MatrixCocycle::renormalized({0.0, 2.0, 0.0}, kGolden, E);
  double lyap = lyapunov_numeric(coc, 8000, 32).value;
  double r1 = std::fabs(thouless_residual(small, {0.0, 2.0, 0.0}, E, lyap).residual);
  double r2 = std::fabs(thouless_residual(big, {0.0, 2.0, 0.0}, E, lyap).residual);
  CHECK(r1 >= 1.5 * r2);
}

TEST_CASE("duality holds in the self-dual regime") {
  DualityResult d = duality_check({0.5, 0.5, 0.7}, kGolden, 600, 64);
  CHECK(d.hausdorff <= 0.02);
}

TEST_CASE("duality distance shrinks under n-doubling once gaps resolve") {
  DualityResult a = duality_check({0.0, 2.0, 0.0}, kGolden, 400, 64);
  DualityResult b = duality_check({0.0, 2.0, 0.0}, kGolden, 800, 64);
  CHECK(a.hausdorff >= 1.5 * b.hausdorff);
}

TEST_CASE("gap decay slope magnitude follows the dual exponent") {
  DecayFit strong, weak;
  {
    SpectrumCloud c = build_cloud({0.0, 2.0, 0.0}, kGolden, 1000, 64);
    strong = gap_decay_report(detect_gaps(c).gaps, {0.0, 2.0, 0.0});
  }
  {
    SpectrumCloud c = build_cloud({0.0, 1.6, 0.0}, kGolden, 1000, 64);
    weak = gap_decay_report(detect_gaps(c).gaps, {0.0, 1.6, 0.0});
  }
  CHECK(strong.dual_lyapunov > weak.dual_lyapunov);
  CHECK(std::fabs(weak.slope) <= std::fabs(strong.slope) + 0.05);
  CHECK(weak.slope < -0.3);
}
