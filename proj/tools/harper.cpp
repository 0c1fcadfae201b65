// Command-line front end: desk-scale experiments over the extended Harper
// model, emitting CSV for curves and JSON (schema v1) for structured reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "harper/config.hpp"
#include "harper/cocycle.hpp"
#include "harper/io.hpp"
#include "harper/reducibility.hpp"
#include "harper/spectrum.hpp"
#include "harper/parallel.hpp"

using namespace harper;
namespace fs = std::filesystem;

namespace {

struct CliOverrides {
  std::string config_path;
  std::vector<double> coupling;
  double alpha = -1.0;
  std::vector<long long> cf;
  std::vector<double> liouville;  // target_beta, depth
  int n = -1, phases = -1, cutoff = -1, M = -1, workers = -1;
  long long seed = -1;
  std::string out;
  bool cache = false;
};

void add_common(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file; flags override its keys");
  cmd->add_option("--coupling", o.coupling, "coupling l1 l2 l3")->expected(3);
  cmd->add_option("--alpha", o.alpha, "frequency as a literal value in (0,1)");
  cmd->add_option("--cf", o.cf, "frequency as continued-fraction coefficients");
  cmd->add_option("--liouville", o.liouville, "frequency as target_beta depth")->expected(2);
  cmd->add_option("--n", o.n, "truncation size");
  cmd->add_option("--phases", o.phases, "phase grid count");
  cmd->add_option("--cutoff", o.cutoff, "Fourier cutoff");
  cmd->add_option("--M", o.M, "dual truncation half-width");
  cmd->add_option("--seed", o.seed, "RNG seed for sampled quantities");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--cache", o.cache, "cache clouds (content-addressed)");
  cmd->add_option("--workers", o.workers, "worker threads (0 = hardware default)");
}

RunConfig resolve(const CliOverrides& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text(o.config_path));
    } catch (const std::exception& e) {
      throw config_error(std::string("config file: ") + e.what());
    }
    cfg = RunConfig::from_json(j);
  }
  if (!o.coupling.empty()) cfg.coupling = {o.coupling[0], o.coupling[1], o.coupling[2]};
  if (o.alpha >= 0.0) {
    cfg.frequency.kind = FrequencySpec::Kind::value;
    cfg.frequency.value = o.alpha;
  }
  if (!o.cf.empty()) {
    cfg.frequency.kind = FrequencySpec::Kind::coefficients;
    cfg.frequency.coeffs = o.cf;
  }
  if (!o.liouville.empty()) {
    cfg.frequency.kind = FrequencySpec::Kind::liouville;
    cfg.frequency.target_beta = o.liouville[0];
    cfg.frequency.depth = static_cast<int>(o.liouville[1]);
  }
  if (o.n > 0) cfg.n = o.n;
  if (o.phases > 0) cfg.phase_count = o.phases;
  if (o.cutoff > 0) cfg.fourier_cutoff = o.cutoff;
  if (o.M > 0) cfg.M = o.M;
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.cache) cfg.cache = true;
  if (o.workers >= 0) cfg.workers = o.workers;
  cfg.validate();
  return cfg;
}

SpectrumCloud obtain_cloud(const RunConfig& cfg, const Frequency& freq) {
  std::string dir = cache_dir(cfg.output_dir);
  std::string key = cfg.cloud_cache_key();
  CloudParams params{cfg.coupling, freq, cfg.n, cfg.phase_count};
  if (cfg.cache) {
    SpectrumCloud cached;
    if (cache_load_cloud(dir, key, params, cached)) return cached;
  }
  SpectrumCloud cloud = build_cloud(cfg.coupling, freq, cfg.n, cfg.phase_count, cfg.workers);
  if (cfg.cache) cache_store_cloud(dir, key, cloud);
  return cloud;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

nlohmann::json base_body(const RunConfig& cfg, const Frequency& freq) {
  nlohmann::json j;
  j["config"] = cfg.to_json();
  // runtime environment, not part of the numeric result identity
  j["config"].erase("output_dir");
  j["config"].erase("workers");
  j["config"].erase("cache");
  j["frequency_data"] = frequency_to_json(freq);
  return j;
}

int cmd_spectrum(const RunConfig& cfg) {
  Frequency freq = cfg.frequency.realize();
  SpectrumCloud cloud = obtain_cloud(cfg, freq);
  GapReport rep = detect_gaps(cloud);
  write_cloud_csv(out_path(cfg, "cloud.csv"), cloud);
  nlohmann::json body = base_body(cfg, freq);
  body["gap_report"] = gap_report_to_json(rep);
  body["e_min"] = cloud.e_min();
  body["e_max"] = cloud.e_max();
  write_text(out_path(cfg, "gaps.json"), finalize_report(body).dump(2) + "\n");
  std::printf("spectrum: %lld samples, %zu labeled gaps -> %s\n",
              cloud.params().total(), rep.gaps.size(), cfg.output_dir.c_str());
  return 0;
}

int cmd_ids(const RunConfig& cfg, double emin, double emax, int egrid) {
  Frequency freq = cfg.frequency.realize();
  SpectrumCloud cloud = obtain_cloud(cfg, freq);
  if (emin >= emax) {
    emin = cloud.e_min() - 0.1;
    emax = cloud.e_max() + 0.1;
  }
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < egrid; ++i) {
    double e = emin + (emax - emin) * i / (egrid - 1);
    rows.push_back({e, cloud.ids(e)});
  }
  write_csv(out_path(cfg, "ids.csv"), "E,ids", rows);
  std::printf("ids: %d points -> %s\n", egrid, out_path(cfg, "ids.csv").c_str());
  return 0;
}

int cmd_lyapunov(const RunConfig& cfg, double emin, double emax, int egrid, long long k) {
  Frequency freq = cfg.frequency.realize();
  SpectrumCloud cloud = obtain_cloud(cfg, freq);
  if (emin >= emax) {
    emin = cloud.e_min();
    emax = cloud.e_max();
  }
  double closed = std::numeric_limits<double>::quiet_NaN();
  try {
    closed = lyapunov_closed_form(cfg.coupling);
  } catch (const std::domain_error&) {
  }
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < egrid; ++i) {
    double e = emin + (emax - emin) * i / (egrid - 1);
    MatrixCocycle coc = MatrixCocycle::renormalized(cfg.coupling, freq, e);
    LyapunovEstimate le = lyapunov_numeric(coc, k, cfg.phase_count, cfg.workers);
    ThoulessResult th = thouless_residual(cloud, cfg.coupling, e, le.value);
    rows.push_back({e, le.value, closed, th.residual});
  }
  write_csv(out_path(cfg, "lyapunov.csv"), "E,lyapunov_numeric,lyapunov_closed_form,thouless_residual",
            rows);
  std::printf("lyapunov: %d energies, k=%lld -> %s\n", egrid, k,
              out_path(cfg, "lyapunov.csv").c_str());
  return 0;
}

int cmd_holder(const RunConfig& cfg, int pairs, double dmin, double dmax) {
  Frequency freq = cfg.frequency.realize();
  SpectrumCloud cloud = obtain_cloud(cfg, freq);
  if (dmin <= 0.0) dmin = std::max(1e-4, 10.0 * cloud.energy_resolution());
  if (dmax <= dmin) dmax = 1e-2;
  HolderFit fit = holder_modulus(cloud, pairs, dmin, dmax, cfg.seed);
  nlohmann::json body = base_body(cfg, freq);
  body["exponent"] = fit.exponent;
  body["constant"] = fit.constant;
  body["pairs_used"] = fit.pairs_used;
  body["bins_used"] = fit.bins_used;
  nlohmann::json env = nlohmann::json::array();
  for (auto& [d, dn] : fit.envelope) env.push_back({{"delta_e", d}, {"max_delta_n", dn}});
  body["envelope"] = env;
  body["delta_range"] = {dmin, dmax};
  write_text(out_path(cfg, "holder.json"), finalize_report(body).dump(2) + "\n");
  std::printf("holder: exponent %.4f constant %.4f -> %s\n", fit.exponent, fit.constant,
              out_path(cfg, "holder.json").c_str());
  return 0;
}

int cmd_homogeneity(const RunConfig& cfg, std::vector<double> sigmas, int samples) {
  Frequency freq = cfg.frequency.realize();
  SpectrumCloud cloud = obtain_cloud(cfg, freq);
  GapReport rep = detect_gaps(cloud);
  if (sigmas.empty()) sigmas = {1e-3};
  auto bands = empirical_spectrum(cloud, rep);

  // Seeded sampling of E inside the empirical spectrum.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<size_t> pick(0, cloud.samples().size() - 1);
  auto in_bands = [&](double e) {
    for (auto& [lo, hi] : bands)
      if (e >= lo && e <= hi) return true;
    return false;
  };
  std::vector<double> energies;
  while (energies.size() < static_cast<size_t>(samples)) {
    double e = cloud.samples()[pick(rng)];
    if (in_bands(e)) energies.push_back(e);
  }

  nlohmann::json body = base_body(cfg, freq);
  nlohmann::json meas = nlohmann::json::array();
  for (double sigma : sigmas) {
    for (double e : energies) {
      double m = homogeneity(cloud, rep, e, sigma);
      meas.push_back({{"E", e}, {"sigma", sigma}, {"measure", m}, {"ratio", m / sigma}});
    }
  }
  body["measurements"] = meas;
  write_text(out_path(cfg, "homogeneity.json"), finalize_report(body).dump(2) + "\n");
  std::printf("homogeneity: %zu measurements -> %s\n", meas.size(),
              out_path(cfg, "homogeneity.json").c_str());
  return 0;
}

int cmd_duality(const RunConfig& cfg) {
  Frequency freq = cfg.frequency.realize();
  DualityResult d1 = duality_check(cfg.coupling, freq, cfg.n, cfg.phase_count, cfg.workers);
  DualityResult d2 = duality_check(cfg.coupling, freq, 2 * cfg.n, cfg.phase_count, cfg.workers);
  nlohmann::json body = base_body(cfg, freq);
  body["hausdorff"] = d1.hausdorff;
  body["trend"] = {{{"n", d1.n}, {"hausdorff", d1.hausdorff}},
                   {{"n", d2.n}, {"hausdorff", d2.hausdorff}}};
  write_text(out_path(cfg, "duality.json"), finalize_report(body).dump(2) + "\n");
  std::printf("duality: distance %.5f (n=%d), %.5f (n=%d) -> %s\n", d1.hausdorff, d1.n,
              d2.hausdorff, d2.n, out_path(cfg, "duality.json").c_str());
  return 0;
}

nlohmann::json report_to_json(const ConjugationReport& r) {
  auto strip = [](const StripNorm& s) {
    return nlohmann::json{{"lower", s.lower}, {"upper", s.upper}};
  };
  nlohmann::json j;
  j["stage"] = r.stage;
  j["beta1"] = r.beta1;
  j["beta2"] = r.beta2;
  j["beta3"] = r.beta3;
  j["offdiag_b"] = r.offdiag_b;
  j["beta1_strip"] = strip(r.beta1_strip);
  j["beta2_strip"] = strip(r.beta2_strip);
  j["beta3_strip"] = strip(r.beta3_strip);
  j["offdiag_b_strip"] = strip(r.offdiag_b_strip);
  j["det_err"] = r.det_err;
  j["beta3_inequality_ok"] = r.beta3_inequality_ok;
  return j;
}

int cmd_reduce(const RunConfig& cfg, double E, bool have_E, double eps0, long long horizon) {
  Frequency freq = cfg.frequency.realize();
  if (!have_E) {
    // Default: mid-spectrum energy of a coarse cloud.
    SpectrumCloud coarse = build_cloud(cfg.coupling, freq, 400, 16, cfg.workers);
    E = coarse.samples()[coarse.samples().size() / 2];
  }
  ReduceOptions opt;
  opt.M = cfg.M;
  opt.fourier_cutoff = cfg.fourier_cutoff;
  opt.workers = cfg.workers;
  opt.epsilon0 = eps0;
  if (horizon > 0) opt.resonance_horizon = horizon;
  ReduceOutcome out = run_reducibility(cfg.coupling, freq, E, opt);

  nlohmann::json body = base_body(cfg, freq);
  body["E"] = E;
  body["theta"] = out.wave.theta;
  body["dual_eigen_residual"] = out.wave.dual_eigen_residual;
  body["recentered"] = out.wave.recentered;
  body["resonances"] = out.resonances.resonances;
  body["config_scales"] = {{"h", out.cfg.h},
                           {"epsilon0", out.cfg.epsilon0},
                           {"window_half", out.cfg.window_half},
                           {"fourier_cutoff", out.cfg.fourier_cutoff},
                           {"strip_s", out.cfg.strip_s}};
  body["q_conjugation_residual"] = out.qc.residual;
  body["defect_sup"] = out.wv.defect_sup;
  body["ustar_min_norm"] = out.wv.min_norm;
  body["b_stage"] = report_to_json(out.bstage);
  body["b_stage"]["b_series"] = fourier_series_to_json(out.bstage.b_series.truncated(out.cfg.fourier_cutoff));
  body["phi_stage"] = report_to_json(out.phi.report);
  body["eliminable_before"] = out.phi.eliminable_before;
  body["eliminable_after"] = out.phi.eliminable_after;
  nlohmann::json sweep = nlohmann::json::array();
  for (const auto& c : out.sweep)
    sweep.push_back({{"eps", c.eps},
                     {"bound", c.bound},
                     {"ratio", c.ratio},
                     {"d", c.d},
                     {"valid", c.valid},
                     {"det_err", c.det_err}});
  body["certificate_sweep"] = sweep;
  write_text(out_path(cfg, "reduce.json"), finalize_report(body).dump(2) + "\n");
  std::printf("reduce: E=%.6f theta=%.6f b-stage(b1=%.2e b2=%.2e) -> %s\n", E, out.wave.theta,
              out.bstage.beta1, out.bstage.beta2, out_path(cfg, "reduce.json").c_str());
  return 0;
}

int cmd_butterfly(const RunConfig& cfg, int alpha_count, double amin, double amax) {
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<std::vector<double>>> per_alpha(static_cast<size_t>(alpha_count));
  parallel_for(alpha_count, cfg.workers, [&](long long i) {
    double a = amin + (amax - amin) * (static_cast<double>(i) + 0.5) / alpha_count;
    Frequency f = Frequency::raw(a);
    auto ev = eigenvalues(build_truncation(cfg.coupling, f, 0.0, cfg.n));
    auto& slot = per_alpha[static_cast<size_t>(i)];
    for (double e : ev) slot.push_back({a, e});
  });
  for (auto& block : per_alpha)
    for (auto& r : block) rows.push_back(std::move(r));
  write_csv(out_path(cfg, "butterfly.csv"), "alpha,eigenvalue", rows);
  std::printf("butterfly: %d frequencies x n=%d -> %s\n", alpha_count, cfg.n,
              out_path(cfg, "butterfly.csv").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extended Harper model toolkit"};
  app.require_subcommand(1);

  CliOverrides o;
  double emin = 0.0, emax = -1.0;
  int egrid = 200;
  long long lyap_k = 1000;
  int pairs = 40000;
  double dmin = 0.0, dmax = 0.0;
  std::vector<double> sigmas;
  int samples = 50;
  double energy = 0.0;
  bool have_E = false;
  int alpha_count = 50;
  double amin = 0.0, amax = 1.0;

  auto* sp = app.add_subcommand("spectrum", "cloud CSV + labeled gaps JSON");
  add_common(sp, o);
  auto* id = app.add_subcommand("ids", "integrated density of states on an energy grid");
  add_common(id, o);
  id->add_option("--emin", emin);
  id->add_option("--emax", emax);
  id->add_option("--egrid", egrid);
  auto* ly = app.add_subcommand("lyapunov", "numeric + closed-form Lyapunov and Thouless residual");
  add_common(ly, o);
  ly->add_option("--emin", emin);
  ly->add_option("--emax", emax);
  ly->add_option("--egrid", egrid);
  ly->add_option("--k", lyap_k);
  auto* ho = app.add_subcommand("holder", "empirical Hoelder modulus of the IDS");
  add_common(ho, o);
  ho->add_option("--pairs", pairs);
  ho->add_option("--dmin", dmin);
  ho->add_option("--dmax", dmax);
  auto* hm = app.add_subcommand("homogeneity", "window measures of the empirical spectrum");
  add_common(hm, o);
  hm->add_option("--sigma", sigmas);
  hm->add_option("--samples", samples);
  auto* du = app.add_subcommand("duality", "Hausdorff distance to the scaled dual spectrum");
  add_common(du, o);
  auto* re = app.add_subcommand("reduce", "almost-reducibility pipeline report");
  add_common(re, o);
  auto* eopt = re->add_option("--E", energy, "energy (default: mid-spectrum)");
  double eps0 = 0.0;
  long long horizon = 0;
  re->add_option("--eps0", eps0, "resonance threshold (default: 10 * beta_hat)");
  re->add_option("--horizon", horizon, "resonance scan horizon");
  auto* bu = app.add_subcommand("butterfly", "long-form (alpha, eigenvalue) sweep");
  add_common(bu, o);
  bu->add_option("--alpha-count", alpha_count);
  bu->add_option("--alpha-min", amin);
  bu->add_option("--alpha-max", amax);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = resolve(o);
    fs::create_directories(cfg.output_dir);
    if (sp->parsed()) return cmd_spectrum(cfg);
    if (id->parsed()) return cmd_ids(cfg, emin, emax, egrid);
    if (ly->parsed()) return cmd_lyapunov(cfg, emin, emax, egrid, lyap_k);
    if (ho->parsed()) return cmd_holder(cfg, pairs, dmin, dmax);
    if (hm->parsed()) return cmd_homogeneity(cfg, sigmas, samples);
    if (du->parsed()) return cmd_duality(cfg);
    if (re->parsed()) {
      have_E = eopt->count() > 0;
      return cmd_reduce(cfg, energy, have_E, eps0, horizon);
    }
    if (bu->parsed()) return cmd_butterfly(cfg, alpha_count, amin, amax);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_guard_error& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
