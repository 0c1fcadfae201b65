#include "harper/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "harper/tridiag.hpp"

namespace harper {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

const char* to_string(RegionTag t) {
  switch (t) {
    case RegionTag::I: return "I";
    case RegionTag::II: return "II";
    case RegionTag::III: return "III";
    default: return "Boundary";
  }
}

RegionTag classify_region(const Coupling& lam, double tol) {
  const double m13 = lam.l1 + lam.l3;
  const double big = std::max(m13, lam.l2);
  if (big > tol && big < 1.0 - tol) return RegionTag::I;
  if (lam.l2 > 1.0 + tol && lam.l2 > m13 + tol) return RegionTag::II;
  if (m13 > 1.0 + tol && m13 > lam.l2 + tol) return RegionTag::III;
  return RegionTag::Boundary;
}

Coupling dual_coupling(const Coupling& lam) {
  if (lam.l2 <= 0.0) throw std::domain_error("dual_coupling: l2 must be positive");
  return {lam.l3 / lam.l2, 1.0 / lam.l2, lam.l1 / lam.l2};
}

cdouble eval_c(const Coupling& lam, const Frequency& freq, cdouble z) {
  cdouble w = std::exp(cdouble{0.0, kTwoPi} * (z + freq.value / 2.0));
  return lam.l1 / w + lam.l2 + lam.l3 * w;
}

cdouble eval_cbar(const Coupling& lam, const Frequency& freq, cdouble z) {
  cdouble w = std::exp(cdouble{0.0, kTwoPi} * (z + freq.value / 2.0));
  return lam.l1 * w + lam.l2 + lam.l3 / w;
}

double dual_lyapunov(const Coupling& lam) {
  const double disc = lam.l2 * lam.l2 - 4.0 * lam.l1 * lam.l3;
  const double m = std::max(lam.l1 + lam.l3, 1.0);
  const double mdisc = m * m - 4.0 * lam.l1 * lam.l3;
  if (disc < 0.0 || mdisc < 0.0)
    throw std::domain_error("dual_lyapunov: negative discriminant, formula undefined");
  return std::log((lam.l2 + std::sqrt(disc)) / (m + std::sqrt(mdisc)));
}

double zero_free_strip(const Coupling& lam) {
  const double lmax = std::max(lam.l1, lam.l3);
  if (lmax == 0.0) return std::numeric_limits<double>::infinity();
  const double disc = lam.l2 * lam.l2 - 4.0 * lam.l1 * lam.l3;
  if (disc < 0.0) return 0.0;
  const double t = (lam.l2 + std::sqrt(disc)) / (2.0 * lmax);
  return t <= 1.0 ? 0.0 : std::log(t) / kTwoPi;
}

cdouble eval_abs_c(const Coupling& lam, const Frequency& freq, cdouble z) {
  if (z.imag() == 0.0) return std::abs(eval_c(lam, freq, z));
  if (lam.amo_degenerate()) return lam.l2;
  if (classify_region(lam) != RegionTag::II)
    throw std::domain_error("eval_abs_c: complex argument requires region II (zero-free symbol)");
  const double strip = dual_lyapunov(lam) / kTwoPi;
  if (std::fabs(z.imag()) >= strip)
    throw std::domain_error("eval_abs_c: |Im z| = " + std::to_string(std::fabs(z.imag())) +
                            " outside the guaranteed zero-free strip |Im z| < " +
                            std::to_string(strip));
  // Re c, Re cbar > 0 on the strip, so the principal square root has no
  // branch crossing and agrees with e^{(g1+g2)/2}.
  return std::sqrt(eval_c(lam, freq, z) * eval_cbar(lam, freq, z));
}

TridiagonalOperator build_truncation(const Coupling& lam, const Frequency& freq, double x, int n) {
  if (n < 1) throw std::invalid_argument("build_truncation: n must be >= 1");
  TridiagonalOperator op;
  op.size = n;
  op.phase = x;
  op.lam = lam;
  op.freq = freq;
  op.diag.resize(static_cast<size_t>(n));
  op.offdiag.resize(static_cast<size_t>(n) - 1);
  for (int k = 0; k < n; ++k) {
    double xk = x + static_cast<double>(k) * freq.value;
    op.diag[static_cast<size_t>(k)] = 2.0 * std::cos(kTwoPi * xk);
    if (k + 1 < n) op.offdiag[static_cast<size_t>(k)] = eval_c(lam, freq, cdouble{xk, 0.0});
  }
  return op;
}

std::vector<double> eigenvalues(const TridiagonalOperator& op, double tol) {
  // Gauge away the off-diagonal phases; eigenvalues are invariant under the
  // diagonal unitary conjugation.
  std::vector<double> off(op.offdiag.size());
  for (size_t i = 0; i < off.size(); ++i) off[i] = std::abs(op.offdiag[i]);
  return sturm_eigenvalues(op.diag, off, tol);
}

double spectral_radius_bound(const Coupling& lam) { return 2.0 + 2.0 * lam.sum(); }

MeanLogC mean_log_c(const Coupling& lam, const Frequency& freq) {
  MeanLogC out;
  const double disc = lam.l2 * lam.l2 - 4.0 * lam.l1 * lam.l3;
  RegionTag tag = classify_region(lam);
  out.closed_form_valid = (tag == RegionTag::II) || (lam.amo_degenerate() && lam.l2 > 0.0);
  if (disc >= 0.0 && lam.l2 > 0.0) out.closed_form = std::log((lam.l2 + std::sqrt(disc)) / 2.0);

  const int n = 1 << 14;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    double x = static_cast<double>(j) / n;
    double v = std::abs(eval_c(lam, freq, cdouble{x, 0.0}));
    if (v < 1e-300) throw std::domain_error("mean_log_c: symbol vanishes on the sample grid");
    acc += std::log(v);
  }
  out.quadrature = acc / n;
  return out;
}

}  // namespace harper
