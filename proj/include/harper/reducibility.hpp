#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "harper/arithmetic.hpp"
#include "harper/cocycle.hpp"
#include "harper/fourier.hpp"
#include "harper/model.hpp"

namespace harper {

/// Dual Bloch wave: eigenvector u of the dual operator truncation at phase
/// theta with H_dual u = (E/l2) u, normalized to u_0 = 1, coefficients on
/// sites -M..M.
struct BlochWave {
  double theta = 0.0;
  double energy = 0.0;  // E of the primal model; dual eigenvalue is E/l2
  int M = 0;
  std::vector<cdouble> coeffs;  // index k + M
  double dual_eigen_residual = 0.0;
  double eigen_gap = 0.0;  // |nearest truncation eigenvalue - E/l2| at the refined theta
  bool recentered = false;
  int recenter_shift = 0;

  cdouble u(int k) const { return coeffs.at(static_cast<size_t>(k + M)); }
};

/// Derived scales of the almost-reducibility construction.
struct ReducibilityConfig {
  double h = 0.0;           // L_dual / (200 pi)
  double epsilon0 = 0.0;    // resonance threshold (user proxy for C1^2 beta)
  int window_half = 0;      // I2 = [-floor(N/9), floor(N/9)] clipped to [-M, M]
  int fourier_cutoff = 64;  // retained modes in the homological step
  double strip_s = 0.0;     // strip half-width for reported norm pairs
  long long n_res = 0;      // |n_j| of the deepest resonance found (0 if none)
  long long N_sentinel = 0; // horizon standing in for |n_{j+1}| = infinity
};

ReducibilityConfig make_config(const Coupling& lam, const Frequency& freq,
                               const ResonanceSet& res, int M, int fourier_cutoff,
                               double strip_s);

/// Scan theta over [0, 1/2] (the theta -> -theta symmetry halves the range),
/// refine the best candidate by golden-section on the eigenvalue gap
/// |nearest dual eigenvalue - E/l2|, and return the eigenvector normalized to
/// u_0 = 1.  Re-centers the truncation window when the eigenvector localizes
/// away from site 0 (|u_0| < 1e-6 before normalization).
BlochWave dual_bloch_wave(const Coupling& lam, const Frequency& freq, double E, int M,
                          int theta_grid, int workers = 0);
/// Serial theta scan, reference for tests and the benchmark.
BlochWave dual_bloch_wave_reference(const Coupling& lam, const Frequency& freq, double E, int M,
                                    int theta_grid);

/// Windowed duality vectors
///   U(x)     = (e^{2 pi i theta} sum_{k in I2} u_k e^{2 pi i k x};
///               sum_{k in I2} u_k e^{2 pi i k (x - a)})
///   Ustar(x) = Q(x) U(x)
/// plus the defect G(x) = Abar(x) Ustar(x) - e^{2 pi i theta} Ustar(x + a).
struct WindowedVectors {
  Vec2Series U, Ustar;
  double defect_sup = 0.0;  // max over the real grid of ||G||
  double min_norm = 0.0;    // min over the real grid of ||Ustar||
  double max_norm = 0.0;
  double theta = 0.0;
};

WindowedVectors build_windowed_vector(const BlochWave& wave, const QConjugation& qc,
                                      const Coupling& lam, const Frequency& freq,
                                      const ReducibilityConfig& cfg, int grid);

/// Pointwise SL(2,C) completion B(x) = (U(x), V(x)) with
/// V = (-conj(U2), conj(U1))^T / ||U(x)||^2, det B = 1 at every grid point.
/// Real-analytic but not strip-holomorphic; all downstream norms are measured
/// on the real torus.
struct CompletedB {
  Mat2Series B;
  int grid = 0;
  double min_norm = 0.0;   // min ||U|| over the grid
  double cond_bound = 0.0; // max(max ||U||^2, 1 / min ||U||^2); the columns are orthogonal
};

CompletedB complete_to_sl2(const Vec2Series& U, int grid);

struct ConjugationReport {
  std::string stage;  // "B-stage" or "Phi-stage"
  double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0, offdiag_b = 0.0;  // grid sup norms
  StripNorm beta1_strip, beta2_strip, beta3_strip, offdiag_b_strip;
  FourierSeries b_series;  // off-diagonal residual coefficients up to the cutoff
  double det_err = 0.0;    // max |det(conjugated) - 1| on the grid
  bool beta3_inequality_ok = false;  // ||beta3|| <= ||b|| ||beta2|| + ||beta1|| + 1e-10
  double beta3_slack = 0.0;
};

/// Residual block of S^{-1}(x+a) Abar(x) S(x) minus the rotation
/// diag(e^{2 pi i theta}, e^{-2 pi i theta}), measured on the grid.
ConjugationReport conjugation_residuals(const Mat2Series& S, const MatrixCocycle& coc,
                                        double theta, int grid, int cutoff, double strip_s,
                                        const std::string& stage = "B-stage");

struct PhiStage {
  Mat2Series Phi;
  FourierSeries w;
  ConjugationReport report;               // Phi-stage residuals
  double eliminable_before = 0.0;         // sup norm of b^l before the step
  double eliminable_after = 0.0;          // sup norm of the same modes in b'
  double homological_identity_err = 0.0;  // exactness of the retained-mode conjugation
  std::vector<long long> excluded_modes;  // resonant + divisor-guard modes (the b^r carrier)
};

/// Solve the homological equation w_k = -b_k e^{-2 pi i theta} /
/// (1 - e^{-2 pi i (2 theta - k a)}) for the non-resonant low modes of b,
/// form W = [1, w; 0, 1], Phi = B W, and report the new residual block.
/// Near-resonant divisors (below 1e-12) are excluded like the resonant mode.
PhiStage homological_eliminate(const ConjugationReport& bstage, const Mat2Series& B,
                               const MatrixCocycle& coc, double theta, const Frequency& freq,
                               const ReducibilityConfig& cfg, int grid);

struct Certificate {
  double eps = 0.0;
  double bound = 0.0;  // ln sup ||B'(x)||
  double ratio = 0.0;  // bound / sqrt(eps)
  double d = 0.0;      // diagonal scale ||Phi|| eps^{1/4}
  bool valid = false;
  double det_err = 0.0;
};

/// Diagonal rescaling step of the Hoelder argument: D = diag(d^{-1}, d) with
/// d = ||Phi|| eps^{1/4}, Phi' = Phi D, bound = ln sup ||Phi'^{-1}(x+a) Abar
/// Phi'(x)||.  The intercept calibrating `valid` is min(bound/sqrt(eps)) over
/// the sweep.
Certificate holder_certificate(const PhiStage& phi, const MatrixCocycle& coc, double eps,
                               int grid, double intercept = -1.0);
std::vector<Certificate> certificate_sweep(const PhiStage& phi, const MatrixCocycle& coc,
                                           const std::vector<double>& epsilons, int grid);

/// End-to-end pipeline on one (coupling, frequency, energy) instance.
struct ReduceOptions {
  int M = 400;
  int theta_grid = 512;
  int grid = 2048;
  int fourier_cutoff = 48;
  double epsilon0 = 0.0;  // <= 0: use 10 * beta_hat
  long long resonance_horizon = 10000;
  double strip_s = 0.0;
  std::vector<double> epsilons = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  int workers = 0;
};

struct ReduceOutcome {
  BlochWave wave;
  QConjugation qc;
  ResonanceSet resonances;
  ReducibilityConfig cfg;
  WindowedVectors wv;
  CompletedB completed;
  ConjugationReport bstage;
  PhiStage phi;
  std::vector<Certificate> sweep;
};

ReduceOutcome run_reducibility(const Coupling& lam, const Frequency& freq, double E,
                               const ReduceOptions& opt);

}  // namespace harper
