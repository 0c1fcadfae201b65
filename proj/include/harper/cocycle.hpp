#pragma once

#include <functional>

#include "harper/arithmetic.hpp"
#include "harper/fourier.hpp"
#include "harper/model.hpp"

namespace harper {

enum class CocycleKind { raw, renormalized, conjugated };

/// Transfer-matrix evaluation at one phase.
///   raw:          A(x) = (1/c(x)) [E - 2cos 2 pi x, -cbar(x-a); c(x), 0]
///   renormalized: Abar(x), same display with |c| entries and unit determinant.
Mat2 transfer_matrix(const Coupling& lam, const Frequency& freq, double E, double x,
                     CocycleKind kind);

/// A cocycle (alpha, A): closed-form evaluators for the raw and renormalized
/// kinds, or a matrix of Fourier series for conjugated ones.
class MatrixCocycle {
 public:
  static MatrixCocycle raw(const Coupling& lam, const Frequency& freq, double E);
  static MatrixCocycle renormalized(const Coupling& lam, const Frequency& freq, double E);
  static MatrixCocycle from_series(const Frequency& freq, Mat2Series entries);
  static MatrixCocycle identity(const Frequency& freq);

  Mat2 at(double x) const;
  const Frequency& freq() const { return freq_; }
  CocycleKind kind() const { return kind_; }

 private:
  MatrixCocycle() = default;
  Frequency freq_;
  CocycleKind kind_ = CocycleKind::conjugated;
  Coupling lam_;
  double energy_ = 0.0;
  bool closed_form_ = false;
  Mat2Series entries_;
};

/// k-step product A(x+(k-1)a) ... A(x), renormalized every 32 factors with the
/// log of the scale accumulated separately; safe up to k ~ 1e7.
struct ScaledMat2 {
  Mat2 m;               // scaled so that ||m||_F stays O(1)
  double log_scale = 0.0;

  double log_norm2() const { return std::log(m.norm2()) + log_scale; }
  Mat2 dense() const;  // m * e^{log_scale}; throws if it would overflow
};

ScaledMat2 cocycle_product(const MatrixCocycle& coc, double x, long long k);

struct LyapunovEstimate {
  double value = 0.0;       // (1/(k P)) sum_j ln ||A_k(x_j)||
  double half_value = 0.0;  // same at k/2, for the subadditive trend
  long long k = 0;
  int phase_count = 0;
};

/// Phase-averaged finite-k Lyapunov exponent over an equispaced grid.
/// Parallel over phases; the reduction runs in fixed order, so the result is
/// identical for any worker count.
LyapunovEstimate lyapunov_numeric(const MatrixCocycle& coc, long long k, int phase_count,
                                  int workers = 0);
/// Plain serial loop, kept as the reference implementation for tests and the
/// benchmark.
LyapunovEstimate lyapunov_numeric_reference(const MatrixCocycle& coc, long long k,
                                            int phase_count);

/// Closed form for the dual Lyapunov exponent; requires region II, where it
/// is positive.
double lyapunov_closed_form(const Coupling& lam);

/// The conjugation Q with Q(x+a) A_{lam,E}(x) Q(x)^{-1} = Abar_{lam,E}(x):
/// Q(x) = e^{f(x)} sqrt(|c|(x-a)) diag(1, sqrt(cbar(x-a)/c(x-a))), where
/// 2 f(x+a) - 2 f(x) = g1(x) - g2(x) and g1, g2 are the continuous log
/// branches of c, cbar.
struct QConjugation {
  FourierSeries f, g1, g2;
  Mat2Series Q, Qinv;  // diagonal matrices of series
  double strip = 0.0;     // largest tested half-width with residual < 1e-6
  double residual = 0.0;  // max over the real grid of ||Q(x+a) A(x) Q^{-1}(x) - Abar(x)||
  double arg_c_integral = 0.0;
  double arg_cbar_integral = 0.0;
  bool hypothesis_ok = true;  // L_dual >= 5 beta_hat (warn-only)
};

/// Solves the cohomological equation by Fourier division
/// (f_k = (g1-g2)_k / (2(e^{2 pi i k a} - 1)), f_0 = 0) and assembles Q.
/// cutoff: retained modes; grid: sampling grid (power of two).
QConjugation build_q_conjugation(const Coupling& lam, const Frequency& freq, int cutoff,
                                 int grid);

}  // namespace harper
