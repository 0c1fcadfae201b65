#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "harper/arithmetic.hpp"
#include "harper/model.hpp"

namespace harper {

struct CloudParams {
  Coupling lam;
  Frequency freq;
  int n = 0;
  int phase_count = 0;

  long long total() const { return static_cast<long long>(n) * phase_count; }
};

/// Phase-averaged truncated eigenvalue data.  samples holds all eigenvalues
/// across the phase grid, sorted; per_phase keeps the raw per-phase lists for
/// persistence.  The IDS is the normalized counting function of samples.
class SpectrumCloud {
 public:
  SpectrumCloud() = default;

  static SpectrumCloud from_samples(CloudParams params, std::vector<double> sorted_samples,
                                    std::vector<std::vector<double>> per_phase = {});

  const CloudParams& params() const { return params_; }
  const std::vector<double>& samples() const { return samples_; }
  const std::vector<std::vector<double>>& per_phase() const { return per_phase_; }

  double e_min() const { return samples_.front(); }
  double e_max() const { return samples_.back(); }
  /// Mean sample spacing, (e_max - e_min) / total.
  double energy_resolution() const;

  /// Exact right-continuous step function (#samples <= E) / total.
  double ids_step(double E) const;
  /// Monotone piecewise-linear interpolation through the step corners.
  double ids(double E) const;

 private:
  CloudParams params_;
  std::vector<double> samples_;
  std::vector<std::vector<double>> per_phase_;
};

/// Eigenvalues of the Dirichlet truncation at every phase x_j = j/P, merged
/// and sorted.  Parallel over phases with deterministic merge order; guarded
/// by n * phase_count <= 1e8.
SpectrumCloud build_cloud(const Coupling& lam, const Frequency& freq, int n, int phase_count,
                          int workers = 0);
/// Serial reference implementation (tests compare it bitwise against the
/// parallel kernel).
SpectrumCloud build_cloud_reference(const Coupling& lam, const Frequency& freq, int n,
                                    int phase_count);

double ids(const SpectrumCloud& cloud, double E);

struct ThoulessResult {
  double residual = 0.0;      // lyap - (-mean_log_c + int ln|E'-E| dN)
  double log_integral = 0.0;  // the cloud approximation of int ln|E'-E| dN(E')
  double mean_log_c = 0.0;
  double lyap = 0.0;
  bool perturbed = false;  // E collided with a sample atom and was nudged by 1e-9
};

/// Thouless-formula defect at energy E.  The singular window |E'-E| < 1e-4 is
/// handled by local linearization of the IDS (uniform density inside).
ThoulessResult thouless_residual(const SpectrumCloud& cloud, const Coupling& lam, double E,
                                 double lyap);

struct GapRecord {
  long long label = 0;  // nonzero integer m with IDS = frac(m alpha) on the gap
  double lower = 0.0;   // E_m^-
  double upper = 0.0;   // E_m^+
  double ids_value = 0.0;
  double label_residual = 0.0;

  double length() const { return upper - lower; }
};

struct PlateauRecord {
  double lower = 0.0, upper = 0.0, ids_value = 0.0, best_residual = 0.0;
};

struct GapReport {
  std::vector<GapRecord> gaps;           // labeled, unique labels
  std::vector<PlateauRecord> unlabeled;  // plateaus whose best residual exceeded the threshold
  double plateau_tol = 0.0;
  int max_label = 0;
};

/// Scan the IDS for plateaus (intervals of width >= 2 * resolution where the
/// IDS varies by < plateau_tol), tolerating stray Dirichlet edge eigenvalues
/// inside true gaps, and label each plateau with the integer m (|m| <=
/// max_label) minimizing the circular distance |plateau - frac(m alpha)|.
/// plateau_tol <= 0 selects the default 1/(2n).
GapReport detect_gaps(const SpectrumCloud& cloud, int max_label = 50, double plateau_tol = 0.0);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
  double dual_lyapunov = 0.0;  // closed-form comparison scale
};

/// Least-squares fit of ln(gap length) against |label|; requires >= 5 gaps.
DecayFit gap_decay_report(const std::vector<GapRecord>& gaps, const Coupling& lam);

struct HolderFit {
  double exponent = 0.0;
  double constant = 0.0;
  int pairs_used = 0;
  int bins_used = 0;
  std::vector<std::pair<double, double>> envelope;  // (|dE| bin center, max |dN|)
};

/// Empirical Hoelder modulus of the IDS: sample energy pairs with |dE|
/// log-uniform in [delta_min, delta_max] (endpoints measure-uniform over the
/// cloud), fit the log-log upper envelope per |dE| bin.
HolderFit holder_modulus(const SpectrumCloud& cloud, int pair_count, double delta_min,
                         double delta_max, std::uint64_t seed);

/// Lebesgue measure of (E-sigma, E+sigma) intersected with the empirical
/// spectrum (hull minus detected plateaus, with G_0 and the top ray removed).
double homogeneity(const SpectrumCloud& cloud, const GapReport& report, double E, double sigma);

/// Closed intervals forming the empirical spectrum: [min sample, max sample]
/// minus all detected plateaus.
std::vector<std::pair<double, double>> empirical_spectrum(const SpectrumCloud& cloud,
                                                          const GapReport& report);

/// Hausdorff distance between two finite unions of closed intervals.
double hausdorff_distance(const std::vector<std::pair<double, double>>& A,
                          const std::vector<std::pair<double, double>>& B);

struct DualityResult {
  double hausdorff = 0.0;
  int n = 0;
  int phase_count = 0;
};

/// Hausdorff distance between the empirical spectrum of lam and l2 times the
/// empirical spectrum of the dual coupling, at matched resolution.
DualityResult duality_check(const Coupling& lam, const Frequency& freq, int n, int phase_count,
                            int workers = 0);

}  // namespace harper
