// Acceptance suite: one quantitative desk-scale check per criterion, each
// printed as a [PASS]/[FAIL] line with its runtime.  Exit code is the number
// of failed criteria.
//
// Usage: harper_acceptance [--cli PATH] [--only N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "harper/arithmetic.hpp"
#include "harper/cocycle.hpp"
#include "harper/config.hpp"
#include "harper/io.hpp"
#include "harper/reducibility.hpp"
#include "harper/spectrum.hpp"

using namespace harper;
namespace chrono = std::chrono;
namespace fs = std::filesystem;

namespace {

struct Check {
  std::string name;
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("FAILED: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

int g_failures = 0;

void run(int index, const std::string& name, double budget_s,
         const std::function<void(Check&)>& body, int only) {
  if (only > 0 && only != index) return;
  Check c;
  c.name = name;
  auto t0 = chrono::high_resolution_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes.push_back(std::string("exception: ") + e.what());
  }
  double secs = chrono::duration<double>(chrono::high_resolution_clock::now() - t0).count();
  if (secs > budget_s) {
    c.ok = false;
    c.notes.push_back("runtime " + std::to_string(secs) + " s exceeds budget " +
                      std::to_string(budget_s) + " s");
  }
  std::printf("[%s] %2d. %-28s (%6.1f s / budget %4.0f s)\n", c.ok ? "PASS" : "FAIL", index,
              name.c_str(), secs, budget_s);
  for (const auto& n : c.notes) std::printf("        %s\n", n.c_str());
  if (!c.ok) ++g_failures;
  std::fflush(stdout);
}

const Frequency& golden() {
  static Frequency f = golden_mean();
  return f;
}

const Coupling kAmo{0.0, 2.0, 0.0};

// Shared clouds (built lazily, reused across criteria).
const SpectrumCloud& amo_cloud() {  // n=2000, 128 phases
  static SpectrumCloud c = build_cloud(kAmo, golden(), 2000, 128);
  return c;
}
const GapReport& amo_gaps() {
  static GapReport r = detect_gaps(amo_cloud());
  return r;
}
const SpectrumCloud& holder_cloud() {  // finer sampling for the modulus fit
  static SpectrumCloud c = build_cloud(kAmo, golden(), 1000, 896);
  return c;
}

// On-spectrum energies: midpoints of adjacent samples inside bands, kept away
// from atoms and from detected gap edges.
std::vector<double> on_spectrum_energies(const SpectrumCloud& cloud, const GapReport& rep,
                                         int count, std::uint64_t seed) {
  auto bands = empirical_spectrum(cloud, rep);
  const auto& s = cloud.samples();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(1, s.size() - 2);
  std::vector<double> out;
  int guard = 0;
  while (out.size() < static_cast<size_t>(count) && ++guard < 1000000) {
    size_t i = pick(rng);
    double e = 0.5 * (s[i] + s[i + 1]);
    if (s[i + 1] - s[i] < 4e-6) continue;  // too close to the atoms
    bool inside = false;
    for (const auto& [lo, hi] : bands) {
      double margin = 0.02 * (hi - lo);
      if (e > lo + margin && e < hi - margin) inside = true;
    }
    if (inside) out.push_back(e);
  }
  return out;
}

std::string slurp(const std::string& p) { return read_text(p); }

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--cli") && i + 1 < argc) cli = argv[++i];
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  // 1. Unimodularity of the renormalized cocycle.
  run(1, "unimodularity", 1.0, [](Check& c) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
      double l2 = 1.02 + 2.5 * u(rng);
      Coupling lam{u(rng) * (l2 - 1.0) * 0.49, l2, u(rng) * (l2 - 1.0) * 0.49};
      double E = -6.0 + 12.0 * u(rng);
      Mat2 m = transfer_matrix(lam, golden(), E, u(rng), CocycleKind::renormalized);
      worst = std::max(worst, std::abs(m.det() - 1.0));
    }
    c.note("max |det - 1| = " + std::to_string(worst));
    c.require(worst <= 1e-12, "det Abar within 1e-12 over 1e4 samples");
  }, only);

  // 2. Closed-form Lyapunov exponent and the dual cocycle at spectrum energies.
  run(2, "closed-form lyapunov", 30.0, [](Check& c) {
    c.require(lyapunov_closed_form(kAmo) == std::log(2.0), "L(0,2,0) = ln 2 exactly");
    Coupling dual = dual_coupling(kAmo);
    SpectrumCloud cloud = build_cloud(dual, golden(), 500, 48);
    GapReport rep = detect_gaps(cloud);
    std::vector<double> energies = on_spectrum_energies(cloud, rep, 20, 77);
    double target = std::log(2.0);
    double worst = 0.0;
    for (double e : energies) {
      MatrixCocycle coc = MatrixCocycle::renormalized(dual, golden(), e);
      LyapunovEstimate le = lyapunov_numeric(coc, 10000, 64);
      worst = std::max(worst, std::fabs(le.value - target) / target);
    }
    c.note("max relative deviation from ln 2 = " + std::to_string(worst));
    c.require(worst <= 0.02, "20 spectrum energies within 2% at k = 1e4");
  }, only);

  // 3. Thouless formula consistency.
  run(3, "thouless consistency", 120.0, [](Check& c) {
    const SpectrumCloud& cloud = amo_cloud();
    const GapReport& rep = amo_gaps();
    std::vector<double> on = on_spectrum_energies(cloud, rep, 10, 3);
    double worst_on = 0.0;
    for (double e : on)
      worst_on = std::max(worst_on, std::fabs(thouless_residual(cloud, kAmo, e, 0.0).residual));
    c.note("max |residual| on-spectrum = " + std::to_string(worst_on));
    c.require(worst_on <= 0.02, "on-spectrum residual <= 0.02");

    // off-spectrum: interiors of the widest labeled gaps plus points beyond
    // the spectrum edges
    std::vector<GapRecord> gaps = rep.gaps;
    std::sort(gaps.begin(), gaps.end(),
              [](const GapRecord& a, const GapRecord& b) { return a.length() > b.length(); });
    std::vector<double> off;
    for (size_t i = 0; i < gaps.size() && off.size() < 3; ++i)
      off.push_back(0.5 * (gaps[i].lower + gaps[i].upper));
    off.push_back(cloud.e_max() + 0.5);
    off.push_back(cloud.e_min() - 0.5);
    double worst_off = 0.0;
    for (double e : off) {
      MatrixCocycle coc = MatrixCocycle::renormalized(kAmo, golden(), e);
      LyapunovEstimate le = lyapunov_numeric(coc, 10000, 64);
      worst_off = std::max(worst_off,
                           std::fabs(thouless_residual(cloud, kAmo, e, le.value).residual));
    }
    c.note("max |residual| off-spectrum = " + std::to_string(worst_off));
    c.require(worst_off <= 0.05, "off-spectrum residual <= 0.05");
  }, only);

  // 4. Q-conjugation residuals.
  run(4, "q-conjugation", 5.0, [](Check& c) {
    QConjugation desk = build_q_conjugation({0.1, 2.0, 0.2}, golden(), 64, 4096);
    c.note("desk residual = " + std::to_string(desk.residual));
    c.require(desk.residual <= 1e-8, "residual <= 1e-8 for (0.1, 2, 0.2), K = 64");
    QConjugation amo = build_q_conjugation(kAmo, golden(), 64, 4096);
    c.note("AMO residual = " + std::to_string(amo.residual));
    c.require(amo.residual <= 1e-14, "AMO residual <= 1e-14");
  }, only);

  // 5. Gap labelling and decay.
  run(5, "gap labelling + decay", 120.0, [](Check& c) {
    const GapReport& rep = amo_gaps();
    double tol = 1.0 / (2.0 * amo_cloud().params().n);
    int good = 0;
    for (const auto& g : rep.gaps)
      if (g.label_residual < tol) ++good;
    c.note(std::to_string(rep.gaps.size()) + " labeled gaps, " + std::to_string(good) +
           " with residual < 1/(2n)");
    c.require(good >= 8, ">= 8 gaps labeled with residual < 1/(2n)");
    DecayFit fit = gap_decay_report(rep.gaps, kAmo);
    c.note("slope = " + std::to_string(fit.slope) + ", r2 = " + std::to_string(fit.r2));
    c.require(fit.slope <= -0.3, "log-length slope <= -0.3");
    c.require(fit.r2 >= 0.8, "r^2 >= 0.8");
  }, only);

  // 6. Hoelder calibration and measurement.
  run(6, "hoelder modulus", 60.0, [](Check& c) {
    // calibration fixture N(E) = sqrt(E)
    const int T = 200000;
    std::vector<double> s(T);
    for (int i = 0; i < T; ++i) {
      double y = (static_cast<double>(i) + 0.5) / T;
      s[static_cast<size_t>(i)] = y * y;
    }
    CloudParams p{kAmo, golden(), 200, T / 200};
    SpectrumCloud fixture = SpectrumCloud::from_samples(p, std::move(s));
    HolderFit cal = holder_modulus(fixture, 40000, 1e-4, 1e-2, 11);
    c.note("sqrt fixture exponent = " + std::to_string(cal.exponent));
    c.require(std::fabs(cal.exponent - 0.5) <= 0.02, "sqrt fixture exponent = 0.5 +- 0.02");

    HolderFit fit = holder_modulus(holder_cloud(), 60000, 1e-4, 1e-2, 13);
    c.note("measured envelope exponent = " + std::to_string(fit.exponent));
    c.require(fit.exponent >= 0.45, "computed IDS envelope exponent >= 0.45");
  }, only);

  // 7. Homogeneity of the empirical spectrum.
  run(7, "homogeneity", 60.0, [](Check& c) {
    const SpectrumCloud& cloud = amo_cloud();
    const GapReport& rep = amo_gaps();
    auto bands = empirical_spectrum(cloud, rep);
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<size_t> pick(0, cloud.samples().size() - 1);
    const double sigma = 1e-3;
    int tested = 0;
    double worst = 1e18;
    int guard = 0;
    while (tested < 50 && ++guard < 1000000) {
      double e = cloud.samples()[pick(rng)];
      bool inside = false;
      for (const auto& [lo, hi] : bands)
        if (e >= lo && e <= hi) inside = true;
      if (!inside) continue;
      double m = homogeneity(cloud, rep, e, sigma);
      worst = std::min(worst, m / sigma);
      ++tested;
    }
    c.note("min measure / sigma over 50 spectrum points = " + std::to_string(worst));
    c.require(tested == 50, "sampled 50 energies in the empirical spectrum");
    c.require(worst >= 0.5, "measure >= 0.5 sigma in every window");
  }, only);

  // 8. Aubry duality at matched resolution.
  run(8, "duality", 120.0, [](Check& c) {
    DualityResult d1 = duality_check(kAmo, golden(), 1000, 64);
    DualityResult d2 = duality_check(kAmo, golden(), 2000, 64);
    c.note("hausdorff(n=1000) = " + std::to_string(d1.hausdorff) +
           ", hausdorff(n=2000) = " + std::to_string(d2.hausdorff));
    c.require(d1.hausdorff <= 0.02, "distance <= 0.02 at n = 1000");
    c.require(d2.hausdorff < d1.hausdorff, "distance decreases under n-doubling");
  }, only);

  // 9. Reducibility pipeline.
  run(9, "reducibility pipeline", 300.0, [](Check& c) {
    const SpectrumCloud& cloud = amo_cloud();
    const GapReport& rep = amo_gaps();
    auto bands = empirical_spectrum(cloud, rep);
    size_t best = 0;
    for (size_t i = 1; i < bands.size(); ++i)
      if (bands[i].second - bands[i].first > bands[best].second - bands[best].first) best = i;
    double E = 0.5 * (bands[best].first + bands[best].second);

    ReduceOptions opt;
    opt.M = 400;
    opt.theta_grid = 512;
    opt.grid = 2048;
    opt.fourier_cutoff = 48;
    opt.epsilon0 = 1.0;
    opt.resonance_horizon = 10000;
    opt.epsilons = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
    ReduceOutcome out = run_reducibility(kAmo, golden(), E, opt);

    c.note("beta1 = " + std::to_string(out.bstage.beta1) +
           ", beta2 = " + std::to_string(out.bstage.beta2));
    c.require(out.bstage.beta1 <= 1e-2, "B-stage ||beta1|| <= 1e-2");
    c.require(out.bstage.beta2 <= 1e-2, "B-stage ||beta2|| <= 1e-2");

    double improvement = out.phi.eliminable_before /
                         std::max(out.phi.eliminable_after, 1e-300);
    c.note("elimination improvement = " + std::to_string(improvement) + "x");
    c.require(improvement >= 10.0, "homological elimination reduces the eliminable residual >= 10x");

    c.require(out.bstage.beta3_inequality_ok, "beta3 determinant inequality (B-stage)");
    c.require(out.phi.report.beta3_inequality_ok, "beta3 determinant inequality (Phi-stage)");

    double rmin = 1e300, rmax = 0.0;
    for (const auto& cert : out.sweep) {
      rmin = std::min(rmin, cert.ratio);
      rmax = std::max(rmax, cert.ratio);
    }
    c.note("certificate bound/sqrt(eps) in [" + std::to_string(rmin) + ", " +
           std::to_string(rmax) + "]");
    c.require(rmax <= 3.0 * rmin, "bound/sqrt(eps) stable within factor 3 over eps in [1e-6, 1e-2]");
  }, only);

  // 10. Arithmetic oracles.
  run(10, "arithmetic oracles", 30.0, [](Check& c) {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> uth(0.0, 1.0), ueps(0.3, 3.0);
    std::uniform_int_distribution<long long> uk(100, 10000);
    Frequency liou = liouville_frequency(0.4, 6);
    int mismatches = 0;
    for (int t = 0; t < 100; ++t) {
      const Frequency& f = (t % 2 == 0) ? golden() : liou;
      double theta = uth(rng);
      double eps0 = ueps(rng);
      long long K = uk(rng);
      ResonanceSet a = find_resonances(theta, f, eps0, K);
      // independent naive rescan
      long double th2 = 2.0L * static_cast<long double>(theta);
      long double al = static_cast<long double>(f.value);
      std::vector<long long> brute;
      for (long long m = 1; m <= K; ++m) {
        for (long long n : {m, -m}) {
          long double nn = torus_norm_l(th2 - static_cast<long double>(n) * al);
          if (static_cast<double>(nn) > std::exp(-eps0 * static_cast<double>(m))) continue;
          bool is_min = true;
          for (long long k = -m; k <= m && is_min; ++k)
            if (torus_norm_l(th2 - static_cast<long double>(k) * al) < nn) is_min = false;
          if (is_min) brute.push_back(n);
        }
      }
      if (a.resonances != brute) ++mismatches;
    }
    c.note(std::to_string(mismatches) + " mismatches over 100 instances");
    c.require(mismatches == 0, "resonance sets equal brute-force rescans");

    for (double target : {0.3, 0.5}) {
      Frequency f = liouville_frequency(target, 8);
      c.require(f.depth() >= 4, "liouville depth >= 4 at target " + std::to_string(target));
      BetaEstimate b = beta_estimate(f, f.convergents.back().q);
      c.note("target " + std::to_string(target) + " -> estimate " + std::to_string(b.estimate));
      c.require(std::fabs(b.estimate - target) <= 0.1 * target,
                "liouville construction within 10% of target beta");
    }
  }, only);

  // 11. CLI determinism across worker counts.
  run(11, "cli determinism", 120.0, [&cli](Check& c) {
    if (cli.empty()) {
      c.require(false, "path to the CLI binary not provided (--cli)");
      return;
    }
    fs::path tmp = fs::temp_directory_path() / "harper_acceptance_cli";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    auto shell = [&](const std::string& args, const std::string& outdir) {
      std::string cmd = cli + " " + args + " --out " + (tmp / outdir).string() +
                        " >" + (tmp / (outdir + ".log")).string() + " 2>&1";
      return std::system(cmd.c_str());
    };
    std::string base = "--coupling 0 2 0 --alpha 0.618033988749894848 --n 200 --phases 8 --seed 42";
    int r1 = shell("lyapunov " + base + " --egrid 5 --k 500 --workers 1", "w1");
    int r2 = shell("lyapunov " + base + " --egrid 5 --k 500 --workers 2", "w2");
    int r3 = shell("lyapunov " + base + " --egrid 5 --k 500 --workers 2", "w2b");
    c.require(r1 == 0 && r2 == 0 && r3 == 0, "lyapunov runs exit 0");
    if (r1 == 0 && r2 == 0 && r3 == 0) {
      std::string a = slurp((tmp / "w1/lyapunov.csv").string());
      std::string b = slurp((tmp / "w2/lyapunov.csv").string());
      std::string d = slurp((tmp / "w2b/lyapunov.csv").string());
      c.require(a == b, "identical CSV for workers 1 vs 2");
      c.require(b == d, "identical CSV across repeated runs");
    }
    int r4 = shell("holder " + base + " --pairs 2000 --dmin 0.08 --dmax 0.8 --workers 1", "h1");
    int r5 = shell("holder " + base + " --pairs 2000 --dmin 0.08 --dmax 0.8 --workers 2", "h2");
    c.require(r4 == 0 && r5 == 0, "holder runs exit 0");
    if (r4 == 0 && r5 == 0) {
      auto j1 = nlohmann::json::parse(slurp((tmp / "h1/holder.json").string()));
      auto j2 = nlohmann::json::parse(slurp((tmp / "h2/holder.json").string()));
      c.require(j1["content_hash"] == j2["content_hash"],
                "holder content hash identical across worker counts");
      c.require(j1["schema"] == "v1", "schema field present");
    }
    // config errors exit with code 2, tripped numeric guards with code 3
    int bad = std::system((cli + " spectrum --coupling -1 2 0 --out " + (tmp / "bad").string() +
                           " >/dev/null 2>&1").c_str());
    c.require(WEXITSTATUS(bad) == 2, "invalid coupling exits with code 2");
    int guard = std::system((cli + " spectrum --n 100000 --phases 10000 --out " +
                             (tmp / "guard").string() + " >/dev/null 2>&1").c_str());
    c.require(WEXITSTATUS(guard) == 3, "tripped numeric guard exits with code 3");
  }, only);

  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              g_failures);
  return g_failures;
}
