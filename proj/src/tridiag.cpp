#include "harper/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace harper {

namespace {

constexpr double kPivmin = 1e-280;  // fallback for vanishing Sturm pivots
constexpr int kShiftBlock = 128;    // shifts kept resident per matrix pass

std::vector<double> squares(std::span<const double> off) {
  std::vector<double> off2(off.size());
  for (size_t i = 0; i < off.size(); ++i) off2[i] = off[i] * off[i];
  return off2;
}

}  // namespace

void gershgorin_bounds(std::span<const double> diag, std::span<const double> off, double& lo,
                       double& hi) {
  const size_t n = diag.size();
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (size_t i = 0; i < n; ++i) {
    double r = (i > 0 ? std::fabs(off[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  if (n == 0) { lo = 0.0; hi = 0.0; }
}

int sturm_count(std::span<const double> diag, std::span<const double> off2, double mu) {
  int cnt = 0;
  double d = 1.0;
  const size_t n = diag.size();
  for (size_t i = 0; i < n; ++i) {
    d = diag[i] - mu - (i > 0 ? off2[i - 1] / d : 0.0);
    if (std::fabs(d) < kPivmin) d = -kPivmin;
    if (d < 0.0) ++cnt;
  }
  return cnt;
}

void sturm_count_batch(std::span<const double> diag, std::span<const double> off2,
                       std::span<const double> shifts, std::span<int> counts) {
  const size_t n = diag.size();
  const size_t m = shifts.size();
  double d[kShiftBlock];
  int cnt[kShiftBlock];
  for (size_t base = 0; base < m; base += kShiftBlock) {
    const size_t b = std::min<size_t>(kShiftBlock, m - base);
    for (size_t j = 0; j < b; ++j) { d[j] = 1.0; cnt[j] = 0; }
    for (size_t i = 0; i < n; ++i) {
      const double a = diag[i];
      const double e2 = i > 0 ? off2[i - 1] : 0.0;
      for (size_t j = 0; j < b; ++j) {
        double v = a - shifts[base + j] - e2 / d[j];
        if (std::fabs(v) < kPivmin) v = -kPivmin;
        d[j] = v;
        cnt[j] += v < 0.0;
      }
    }
    for (size_t j = 0; j < b; ++j) counts[base + j] = cnt[j];
  }
}

std::vector<double> sturm_eigenvalues(std::span<const double> diag, std::span<const double> off,
                                      double tol) {
  const size_t n = diag.size();
  std::vector<double> eig;
  if (n == 0) return eig;
  eig.reserve(n);
  std::vector<double> off2 = squares(off);

  double glo, ghi;
  gershgorin_bounds(diag, off, glo, ghi);
  glo -= tol;
  ghi += tol;

  struct Interval {
    double lo, hi;
    int clo, chi;  // eigenvalue counts below lo / hi
  };
  // Level-synchronous bisection: all midpoints of a frontier level are
  // evaluated in one batched pass over the matrix.
  std::vector<Interval> frontier{{glo, ghi, 0, static_cast<int>(n)}};
  std::vector<Interval> next;
  std::vector<double> mids;
  std::vector<int> cmid;
  std::vector<std::pair<double, int>> done;  // (value, multiplicity), emitted in order

  while (!frontier.empty()) {
    mids.clear();
    for (const auto& iv : frontier) mids.push_back(0.5 * (iv.lo + iv.hi));
    cmid.resize(mids.size());
    sturm_count_batch(diag, off2, mids, cmid);

    next.clear();
    for (size_t i = 0; i < frontier.size(); ++i) {
      const auto& iv = frontier[i];
      const double mid = mids[i];
      const int cm = std::clamp(cmid[i], iv.clo, iv.chi);
      auto emit_or_push = [&](double lo, double hi, int clo, int chi) {
        if (chi == clo) return;
        if (hi - lo < tol) {
          done.emplace_back(0.5 * (lo + hi), chi - clo);
        } else {
          next.push_back({lo, hi, clo, chi});
        }
      };
      emit_or_push(iv.lo, mid, iv.clo, cm);
      emit_or_push(mid, iv.hi, cm, iv.chi);
    }
    frontier.swap(next);
  }

  std::sort(done.begin(), done.end());
  for (const auto& [v, mult] : done)
    for (int r = 0; r < mult; ++r) eig.push_back(v);
  return eig;
}

double sturm_eigenvalue_at(std::span<const double> diag, std::span<const double> off, int j,
                           double tol) {
  const int n = static_cast<int>(diag.size());
  if (j < 0 || j >= n) throw std::invalid_argument("sturm_eigenvalue_at: index out of range");
  std::vector<double> off2 = squares(off);
  double lo, hi;
  gershgorin_bounds(diag, off, lo, hi);
  lo -= tol;
  hi += tol;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, off2, mid) <= j)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double nearest_eigenvalue(std::span<const double> diag, std::span<const double> off, double target,
                          double tol) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) throw std::invalid_argument("nearest_eigenvalue: empty matrix");
  std::vector<double> off2 = squares(off);
  int c = sturm_count(diag, off2, target);
  double best = std::numeric_limits<double>::infinity();
  double val = 0.0;
  for (int j : {c - 1, c}) {
    if (j < 0 || j >= n) continue;
    double e = sturm_eigenvalue_at(diag, off, j, tol);
    if (std::fabs(e - target) < best) {
      best = std::fabs(e - target);
      val = e;
    }
  }
  return val;
}

std::vector<double> tridiag_eigenvector(std::span<const double> diag, std::span<const double> off,
                                        double lambda) {
  const size_t n = diag.size();
  if (n == 0) return {};
  if (n == 1) return {1.0};

  // LU with partial pivoting of (T - lambda I); bands: dl (sub), dd, du, du2.
  std::vector<double> dl(n - 1), dd(n), du(n - 1), du2(n > 2 ? n - 2 : 0);
  std::vector<int> piv(n, 0);
  auto factor = [&]() {
    for (size_t i = 0; i < n; ++i) dd[i] = diag[i] - lambda;
    for (size_t i = 0; i + 1 < n; ++i) { dl[i] = off[i]; du[i] = off[i]; }
    std::fill(du2.begin(), du2.end(), 0.0);
    const double eps = 1e-290;
    for (size_t i = 0; i + 1 < n; ++i) {
      if (std::fabs(dd[i]) >= std::fabs(dl[i])) {
        piv[i] = 0;
        if (std::fabs(dd[i]) < eps) dd[i] = eps;
        double m = dl[i] / dd[i];
        dd[i + 1] -= m * du[i];
        dl[i] = m;  // store multiplier
        if (i + 2 < n) du2[i] = 0.0;
      } else {
        piv[i] = 1;
        double m = dd[i] / dl[i];
        dd[i] = dl[i];
        double t = dd[i + 1];
        dd[i + 1] = du[i] - m * t;
        if (i + 2 < n) { du2[i] = du[i + 1]; du[i + 1] = -m * du[i + 1]; }
        du[i] = t;
        dl[i] = m;
      }
    }
    if (std::fabs(dd[n - 1]) < eps) dd[n - 1] = eps;
  };
  auto solve = [&](std::vector<double>& b) {
    for (size_t i = 0; i + 1 < n; ++i) {
      if (piv[i] == 0) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        std::swap(b[i], b[i + 1]);
        b[i + 1] -= dl[i] * b[i];
      }
    }
    b[n - 1] /= dd[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
    for (size_t ii = n - 1; ii-- > 1;) {
      size_t i = ii - 1;
      double v = b[i] - du[i] * b[i + 1];
      if (i + 2 < n) v -= du2[i] * b[i + 2];
      b[i] = v / dd[i];
    }
  };

  factor();
  // Deterministic pseudo-random start vector.
  std::vector<double> v(n);
  uint64_t s = 0x9e3779b97f4a7c15ULL;
  for (size_t i = 0; i < n; ++i) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    v[i] = static_cast<double>(static_cast<int64_t>(s >> 1)) / 4.6e18 + 0.1;
  }
  for (int it = 0; it < 4; ++it) {
    solve(v);
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::fabs(x));
    if (mx == 0.0) break;
    for (double& x : v) x /= mx;
  }
  return v;
}

}  // namespace harper
