#pragma once

#include <cstdint>
#include <vector>

namespace harper {

/// Distance to the nearest integer, min_k |x - k|.  Always in [0, 1/2].
double torus_norm(double x);
long double torus_norm_l(long double x);

struct Convergent {
  long long p = 0;
  long long q = 1;
};

/// An irrational frequency together with its continued-fraction data.
/// cf_coeffs holds a_1..a_D of alpha = [0; a_1, a_2, ...]; convergents[k-1]
/// is p_k/q_k from the standard recurrence p_k = a_k p_{k-1} + p_{k-2},
/// q_k = a_k q_{k-1} + q_{k-2}.
struct Frequency {
  double value = 0.0;
  std::vector<long long> cf_coeffs;
  std::vector<Convergent> convergents;
  double beta_hat = 0.0;
  bool truncated = false;  // coefficient stream cut by precision exhaustion or the denominator cap

  int depth() const { return static_cast<int>(cf_coeffs.size()); }
  long long q(int k) const { return convergents.at(static_cast<size_t>(k) - 1).q; }  // 1-based
  long long p(int k) const { return convergents.at(static_cast<size_t>(k) - 1).p; }

  /// Bare frequency with no continued-fraction data (alpha sweeps over a
  /// grid that may contain rationals, where the CF machinery is meaningless).
  static Frequency raw(double value);
};

/// Expand alpha in (0,1) to the given depth.  Stops early with the truncated
/// flag when the floating-point remainder drops below 1e-14 or denominators
/// exceed 1e8 (beyond that the double input carries no CF information).
Frequency continued_fraction(double alpha, int depth);

/// Reconstruct a Frequency from coefficients a_1..a_D; value is the finite
/// continued fraction p_D/q_D.
Frequency frequency_from_coefficients(const std::vector<long long>& coeffs);

/// Golden mean (sqrt(5)-1)/2, all CF coefficients 1.
Frequency golden_mean(int depth = 32);

struct BetaEstimate {
  double estimate = 0.0;     // -ln||q_k alpha|| / q_k at the deepest usable convergent <= K
  double running_max = 0.0;  // max of the same quantity over all usable convergent denominators <= K
  double scan_max = 0.0;     // brute-force max over all 1 <= k <= min(K, 1e5)
  long long deepest_q = 0;
  int levels_used = 0;
};

/// Estimate beta(alpha) = limsup -ln||k alpha|| / k from the convergent
/// denominators (the minimizers of ||k alpha|| among k <= q_D).  The headline
/// estimate is the deepest-level value, which converges to beta along the
/// construction of liouville_frequency; running_max is monotone in K.
/// Throws if K < q_2.
BetaEstimate beta_estimate(const Frequency& freq, long long K);

/// Build a frequency with beta(alpha) close to target_beta by forcing
/// a_{k+1} = max(1, ceil(exp(target_beta * q_k) / q_k)) from the seed a_1 = 1,
/// so that ln(q_{k+1})/q_k -> target_beta.  Denominators are capped at 1e9;
/// hitting the cap truncates the expansion and sets the flag.
Frequency liouville_frequency(double target_beta, int depth);

/// The set of epsilon0-resonances of theta within |n| <= K: integers n with
/// min_{|k|<=|n|} ||2 theta - k alpha|| = ||2 theta - n alpha|| <= e^{-eps0 |n|},
/// ordered by |n|, positive index first on ties.  A consumer that needs
/// n_{j+1} past the last entry should treat the horizon K as the effective N.
struct ResonanceSet {
  double theta = 0.0;
  double epsilon0 = 0.0;
  long long horizon = 0;
  std::vector<long long> resonances;
  std::vector<double> norms;

  bool empty() const { return resonances.empty(); }
  long long last_abs() const { return resonances.empty() ? 0 : std::abs(resonances.back()); }
};

ResonanceSet find_resonances(double theta, const Frequency& freq, double epsilon0, long long K);

struct SmallDivisorRow {
  long long k = 0;
  double norm = 0.0;    // ||k alpha||
  double scaled = 0.0;  // ||k alpha|| * e^{1.5 beta_hat k}, clamped at exp(700)
};

struct SmallDivisorProfile {
  std::vector<SmallDivisorRow> rows;
  double c_hat = 0.0;         // min over k of the scaled column; positive on any finite scan
  double c_hat_scaled = 0.0;  // min over k of k * ||k alpha|| * e^{1.5 beta_hat k}
};

/// Empirical constant in ||k alpha|| >= C(alpha) e^{-1.5 beta |k|}.  Rejects
/// frequencies that are rational at the scanned scale (a torus norm below
/// 1e-14 breaks the bound).  c_hat_scaled compensates the 1/k decay of
/// bounded-type frequencies, for which the unscaled constant shrinks with K.
SmallDivisorProfile small_divisor_profile(const Frequency& freq, long long K);

}  // namespace harper
