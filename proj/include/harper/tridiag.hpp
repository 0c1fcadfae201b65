#pragma once

#include <span>
#include <vector>

namespace harper {

/// Eigensolver for real symmetric tridiagonal matrices via Sturm-sequence
/// bisection.  Zero off-diagonal entries split the matrix into independent
/// blocks; the count recurrence handles that natively.

/// Number of eigenvalues strictly below mu.
int sturm_count(std::span<const double> diag, std::span<const double> off2, double mu);

/// Batched counts for many shifts in one matrix pass (the inner loop runs
/// over shifts, which vectorizes; bisection drivers below feed whole
/// frontier levels through here).
void sturm_count_batch(std::span<const double> diag, std::span<const double> off2,
                       std::span<const double> shifts, std::span<int> counts);

/// All eigenvalues, ascending, to absolute tolerance tol.
std::vector<double> sturm_eigenvalues(std::span<const double> diag, std::span<const double> off,
                                      double tol = 1e-10);

/// The j-th eigenvalue (0-based, ascending) to absolute tolerance tol.
double sturm_eigenvalue_at(std::span<const double> diag, std::span<const double> off, int j,
                           double tol = 1e-12);

/// Eigenvalue closest to target.
double nearest_eigenvalue(std::span<const double> diag, std::span<const double> off, double target,
                          double tol = 1e-12);

/// Eigenvector by inverse iteration at an approximate eigenvalue; returned
/// with unit sup norm.  Deterministic start vector.
std::vector<double> tridiag_eigenvector(std::span<const double> diag, std::span<const double> off,
                                        double lambda);

/// Gershgorin bounds [lo, hi] containing all eigenvalues.
void gershgorin_bounds(std::span<const double> diag, std::span<const double> off, double& lo,
                       double& hi);

}  // namespace harper
