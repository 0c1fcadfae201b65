#pragma once

#include <complex>
#include <vector>

#include "harper/arithmetic.hpp"
#include "harper/fourier.hpp"

namespace harper {

/// Coupling triple (l1, l2, l3).  l1 = l3 = 0 is the almost Mathieu
/// degeneration (constant hopping l2); all operations remain valid there.
struct Coupling {
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;

  bool amo_degenerate() const { return l1 == 0.0 && l3 == 0.0; }
  double sum() const { return l1 + l2 + l3; }
};

enum class RegionTag { I, II, III, Boundary };

const char* to_string(RegionTag t);

/// I:   0 < max(l1+l3, l2) < 1
/// II:  0 < max(l1+l3, 1)  < l2
/// III: 0 < max(l2, 1)     < l1+l3
/// Boundary when any defining inequality degenerates within tol.
RegionTag classify_region(const Coupling& lam, double tol = 1e-12);

/// Duality map (l1,l2,l3) -> (l3/l2, 1/l2, l1/l2); an involution exchanging
/// regions I and II.  Requires l2 > 0.
Coupling dual_coupling(const Coupling& lam);

/// Hopping symbol c(x) = l1 e^{-2 pi i (x + a/2)} + l2 + l3 e^{2 pi i (x + a/2)}
/// and its analytic-extension partner cbar; on the real line cbar = conj(c).
cdouble eval_c(const Coupling& lam, const Frequency& freq, cdouble z);
cdouble eval_cbar(const Coupling& lam, const Frequency& freq, cdouble z);

/// |c|(x) for real x; on complex strips defined as sqrt(c(z) cbar(z)), valid
/// in region II inside the zero-free strip |Im z| < L_dual/(2 pi).
cdouble eval_abs_c(const Coupling& lam, const Frequency& freq, cdouble z);

/// Closed form of the dual Lyapunov exponent,
///   L = ln[(l2 + sqrt(l2^2-4 l1 l3)) / (max(l1+l3,1) + sqrt(max(l1+l3,1)^2-4 l1 l3))].
/// Pure formula; positivity corresponds to region II.
double dual_lyapunov(const Coupling& lam);

/// Half-width of the strip where c and cbar are guaranteed zero-free
/// (infinite for the AMO degeneration).
double zero_free_strip(const Coupling& lam);

/// Dirichlet truncation of the operator on sites 0..n-1 at phase x:
/// diagonal 2 cos 2 pi (x + k a), off-diagonal c(x + k a) coupling k to k+1.
struct TridiagonalOperator {
  int size = 0;
  std::vector<double> diag;
  std::vector<cdouble> offdiag;
  double phase = 0.0;
  Coupling lam;
  Frequency freq;
};

TridiagonalOperator build_truncation(const Coupling& lam, const Frequency& freq, double x, int n);

/// All eigenvalues, ascending.  The phase-gauge unitary diag(e^{i phi_k})
/// turns the matrix into a real symmetric tridiagonal with off-diagonals
/// |c(x + k a)| >= 0, solved by Sturm bisection to absolute tolerance tol.
std::vector<double> eigenvalues(const TridiagonalOperator& op, double tol = 1e-10);

/// 2 + 2(l1+l2+l3), a bound on the spectral radius of any truncation.
double spectral_radius_bound(const Coupling& lam);

struct MeanLogC {
  double quadrature = 0.0;   // trapezoid on 2^14 points, spectrally accurate
  double closed_form = 0.0;  // ln((l2 + sqrt(l2^2 - 4 l1 l3)) / 2)
  bool closed_form_valid = false;  // region II or AMO-degenerate root layout
  double value() const { return closed_form_valid ? closed_form : quadrature; }
};

/// Mean of ln|c(x)| over the torus.
MeanLogC mean_log_c(const Coupling& lam, const Frequency& freq);

}  // namespace harper
