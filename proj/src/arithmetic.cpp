#include "harper/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace harper {

namespace {

constexpr long long kDenominatorCap = 1'000'000'000LL;  // liouville_frequency overflow cap
constexpr long long kCfPrecisionCap = 100'000'000LL;    // CF of a double is noise past this
constexpr double kExhaustionTol = 1e-14;

double beta_level(const Frequency& freq, long long qk) {
  long double t = torus_norm_l(static_cast<long double>(qk) * static_cast<long double>(freq.value));
  // Below q_k * eps the norm is representation noise (the value is rational
  // at this scale, e.g. the deepest convergent of a finite CF): unusable.
  if (t < static_cast<long double>(qk) * 1e-14L) return -1.0;
  return static_cast<double>(-std::log(t) / static_cast<long double>(qk));
}

// beta_hat carried by the Frequency itself: deepest usable convergent level.
void set_beta_hat(Frequency& f) {
  f.beta_hat = 0.0;
  for (auto it = f.convergents.rbegin(); it != f.convergents.rend(); ++it) {
    double v = beta_level(f, it->q);
    if (v >= 0.0) {
      f.beta_hat = v;
      return;
    }
  }
}

}  // namespace

double torus_norm(double x) {
  if (!std::isfinite(x)) throw std::domain_error("torus_norm: non-finite input");
  double r = std::fabs(x - std::nearbyint(x));
  return r;
}

long double torus_norm_l(long double x) {
  return std::fabs(x - std::nearbyintl(x));
}

Frequency Frequency::raw(double value) {
  Frequency f;
  f.value = value;
  f.truncated = true;
  return f;
}

Frequency continued_fraction(double alpha, int depth) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("continued_fraction: alpha must lie in (0,1)");
  if (depth < 1) throw std::invalid_argument("continued_fraction: depth must be >= 1");

  Frequency f;
  f.value = alpha;
  long double r = static_cast<long double>(alpha);
  long long pm1 = 1, pm0 = 0;  // p_{-1}, p_0
  long long qm1 = 0, qm0 = 1;  // q_{-1}, q_0
  for (int k = 1; k <= depth; ++k) {
    if (r < kExhaustionTol) {
      f.truncated = true;
      break;
    }
    long double inv = 1.0L / r;
    long long a = static_cast<long long>(std::floor(inv));
    if (a < 1) a = 1;
    long long p = a * pm0 + pm1;
    long long q = a * qm0 + qm1;
    if (q > kCfPrecisionCap) {
      f.truncated = true;
      break;
    }
    f.cf_coeffs.push_back(a);
    f.convergents.push_back({p, q});
    pm1 = pm0; pm0 = p;
    qm1 = qm0; qm0 = q;
    r = inv - static_cast<long double>(a);
  }
  if (f.cf_coeffs.empty())
    throw std::invalid_argument("continued_fraction: no coefficients recoverable from alpha");
  set_beta_hat(f);
  return f;
}

Frequency frequency_from_coefficients(const std::vector<long long>& coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("frequency_from_coefficients: empty coefficient list");
  Frequency f;
  long long pm1 = 1, pm0 = 0, qm1 = 0, qm0 = 1;
  for (long long a : coeffs) {
    if (a < 1) throw std::invalid_argument("frequency_from_coefficients: coefficients must be positive");
    long long p = a * pm0 + pm1;
    long long q = a * qm0 + qm1;
    if (q > kDenominatorCap) {
      f.truncated = true;
      break;
    }
    f.cf_coeffs.push_back(a);
    f.convergents.push_back({p, q});
    pm1 = pm0; pm0 = p;
    qm1 = qm0; qm0 = q;
  }
  f.value = static_cast<double>(static_cast<long double>(pm0) / static_cast<long double>(qm0));
  set_beta_hat(f);
  return f;
}

Frequency golden_mean(int depth) {
  return continued_fraction((std::sqrt(5.0) - 1.0) / 2.0, depth);
}

BetaEstimate beta_estimate(const Frequency& freq, long long K) {
  if (freq.convergents.size() < 2)
    throw std::invalid_argument("beta_estimate: frequency carries fewer than two convergents");
  long long q2 = freq.convergents[1].q;
  if (K < q2)
    throw std::invalid_argument("beta_estimate: horizon K=" + std::to_string(K) +
                                " below minimum usable K=" + std::to_string(q2) + " (= q_2)");

  BetaEstimate out;
  for (const auto& cv : freq.convergents) {
    if (cv.q > K) break;
    double v = beta_level(freq, cv.q);
    if (v < 0.0) continue;  // exact rational hit (deepest level of a finite CF)
    out.estimate = v;
    out.deepest_q = cv.q;
    out.running_max = std::max(out.running_max, v);
    ++out.levels_used;
  }
  if (out.levels_used == 0)
    throw std::invalid_argument("beta_estimate: no usable convergent level within horizon");

  long long kmax = std::min<long long>(K, 100'000);
  long double a = static_cast<long double>(freq.value);
  double smax = 0.0;
  for (long long k = 1; k <= kmax; ++k) {
    long double t = torus_norm_l(static_cast<long double>(k) * a);
    if (t < static_cast<long double>(k) * 1e-14L) continue;
    double v = static_cast<double>(-std::log(t) / static_cast<long double>(k));
    smax = std::max(smax, v);
  }
  out.scan_max = smax;
  return out;
}

Frequency liouville_frequency(double target_beta, int depth) {
  if (!(target_beta > 0.0 && target_beta <= 5.0))
    throw std::invalid_argument("liouville_frequency: target_beta must lie in (0, 5]");
  if (depth < 1 || depth > 12)
    throw std::invalid_argument("liouville_frequency: depth must lie in [1, 12]");

  std::vector<long long> coeffs{1};
  long long qm1 = 0, qm0 = 1, q1 = 1;  // q_1 = a_1 = 1
  qm1 = qm0; qm0 = q1;
  bool truncated = false;
  for (int k = 2; k <= depth; ++k) {
    // a_{k} = max(1, ceil(exp(beta q_{k-1}) / q_{k-1})), in log space to dodge overflow;
    // the tolerant ceil keeps the target->0 limit at the golden mean.
    double la = target_beta * static_cast<double>(qm0) - std::log(static_cast<double>(qm0));
    long long a;
    if (la > std::log(static_cast<double>(kDenominatorCap))) {
      truncated = true;
      break;
    }
    a = std::max<long long>(1, static_cast<long long>(std::ceil(std::exp(la) - 1e-9)));
    long long q = a * qm0 + qm1;
    if (q > kDenominatorCap) {
      truncated = true;
      break;
    }
    coeffs.push_back(a);
    qm1 = qm0; qm0 = q;
  }
  Frequency f = frequency_from_coefficients(coeffs);
  f.truncated = f.truncated || truncated;
  return f;
}

ResonanceSet find_resonances(double theta, const Frequency& freq, double epsilon0, long long K) {
  if (epsilon0 <= 0.0) throw std::invalid_argument("find_resonances: epsilon0 must be positive");
  if (K < 1 || K > 1'000'000) throw std::invalid_argument("find_resonances: horizon must lie in [1, 1e6]");

  ResonanceSet rs;
  rs.theta = theta;
  rs.epsilon0 = epsilon0;
  rs.horizon = K;

  long double th2 = 2.0L * static_cast<long double>(theta);
  long double a = static_cast<long double>(freq.value);
  long double running = torus_norm_l(th2);  // k = 0
  for (long long m = 1; m <= K; ++m) {
    long double npos = torus_norm_l(th2 - static_cast<long double>(m) * a);
    long double nneg = torus_norm_l(th2 + static_cast<long double>(m) * a);
    long double mn = std::min(running, std::min(npos, nneg));
    double thr = std::exp(-epsilon0 * static_cast<double>(m));
    if (npos == mn && static_cast<double>(npos) <= thr) {
      rs.resonances.push_back(m);
      rs.norms.push_back(static_cast<double>(npos));
    }
    if (nneg == mn && nneg != npos && static_cast<double>(nneg) <= thr) {
      rs.resonances.push_back(-m);
      rs.norms.push_back(static_cast<double>(nneg));
    }
    running = mn;
  }
  return rs;
}

SmallDivisorProfile small_divisor_profile(const Frequency& freq, long long K) {
  if (K < 1 || K > 1'000'000)
    throw std::invalid_argument("small_divisor_profile: horizon must lie in [1, 1e6]");

  SmallDivisorProfile prof;
  prof.rows.reserve(static_cast<size_t>(K));
  long double a = static_cast<long double>(freq.value);
  double beta = freq.beta_hat;
  double log_min = std::numeric_limits<double>::infinity();
  double log_min_scaled = std::numeric_limits<double>::infinity();
  for (long long k = 1; k <= K; ++k) {
    long double t = torus_norm_l(static_cast<long double>(k) * a);
    if (t < 1e-14L)
      throw std::domain_error("small_divisor_profile: ||k alpha|| vanishes at k=" + std::to_string(k) +
                              " (alpha rational at this scale)");
    double lt = static_cast<double>(std::log(t));
    double ls = lt + 1.5 * beta * static_cast<double>(k);
    log_min = std::min(log_min, ls);
    log_min_scaled = std::min(log_min_scaled, ls + std::log(static_cast<double>(k)));
    prof.rows.push_back({k, static_cast<double>(t), std::exp(std::min(ls, 700.0))});
  }
  prof.c_hat = std::exp(std::min(log_min, 700.0));
  prof.c_hat_scaled = std::exp(std::min(log_min_scaled, 700.0));
  return prof;
}

}  // namespace harper
