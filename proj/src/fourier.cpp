#include "harper/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace harper {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

FourierSeries FourierSeries::constant(cdouble v) {
  FourierSeries f(0);
  f.set(0, v);
  return f;
}

cdouble FourierSeries::eval(double x) const {
  // Horner in w = e^{2 pi i x}: sum_{k=-K}^{K} c_k w^k = w^{-K} * poly(w).
  cdouble w = std::polar(1.0, kTwoPi * x);
  cdouble acc{0.0, 0.0};
  for (size_t i = c_.size(); i-- > 0;) acc = acc * w + c_[i];
  return acc * std::pow(w, -cutoff_);
}

cdouble FourierSeries::eval(cdouble z) const {
  cdouble iw = cdouble{0.0, 1.0} * kTwoPi * z;
  cdouble acc{0.0, 0.0};
  for (int k = -cutoff_; k <= cutoff_; ++k) {
    cdouble term = coeff(k);
    if (term == cdouble{0.0, 0.0}) continue;
    acc += term * std::exp(iw * static_cast<double>(k));
  }
  return acc;
}

FourierSeries FourierSeries::shifted(double delta) const {
  FourierSeries out(cutoff_);
  for (int k = -cutoff_; k <= cutoff_; ++k)
    out.set(k, coeff(k) * std::polar(1.0, kTwoPi * static_cast<double>(k) * delta));
  return out;
}

FourierSeries FourierSeries::conjugated() const {
  FourierSeries out(cutoff_);
  for (int k = -cutoff_; k <= cutoff_; ++k) out.set(k, std::conj(coeff(-k)));
  return out;
}

FourierSeries FourierSeries::truncated(int new_cutoff) const {
  FourierSeries out(new_cutoff);
  int m = std::min(new_cutoff, cutoff_);
  for (int k = -m; k <= m; ++k) out.set(k, coeff(k));
  return out;
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& o) {
  if (o.cutoff_ > cutoff_) *this = truncated(o.cutoff_);
  for (int k = -o.cutoff_; k <= o.cutoff_; ++k) set(k, coeff(k) + o.coeff(k));
  return *this;
}

FourierSeries& FourierSeries::operator-=(const FourierSeries& o) {
  if (o.cutoff_ > cutoff_) *this = truncated(o.cutoff_);
  for (int k = -o.cutoff_; k <= o.cutoff_; ++k) set(k, coeff(k) - o.coeff(k));
  return *this;
}

FourierSeries& FourierSeries::operator*=(cdouble s) {
  for (auto& v : c_) v *= s;
  return *this;
}

double FourierSeries::coeff_abs_sum() const {
  double s = 0.0;
  for (const auto& v : c_) s += std::abs(v);
  return s;
}

FourierSeries operator+(FourierSeries a, const FourierSeries& b) { return a += b; }
FourierSeries operator-(FourierSeries a, const FourierSeries& b) { return a -= b; }
FourierSeries operator*(FourierSeries a, cdouble s) { return a *= s; }

FourierSeries multiply(const FourierSeries& a, const FourierSeries& b, int out_cutoff) {
  if (out_cutoff < 0) out_cutoff = a.cutoff() + b.cutoff();
  FourierSeries out(out_cutoff);
  for (int k = -out_cutoff; k <= out_cutoff; ++k) {
    cdouble s{0.0, 0.0};
    int lo = std::max(-a.cutoff(), k - b.cutoff());
    int hi = std::min(a.cutoff(), k + b.cutoff());
    for (int j = lo; j <= hi; ++j) s += a.coeff(j) * b.coeff(k - j);
    out.set(k, s);
  }
  return out;
}

StripNorm strip_norm(const FourierSeries& f, double s, int grid_points) {
  StripNorm out;
  double up = 0.0;
  for (int k = -f.cutoff(); k <= f.cutoff(); ++k)
    up += std::abs(f.coeff(k)) * std::exp(kTwoPi * s * std::abs(static_cast<double>(k)));
  out.upper = up;
  double lo = 0.0;
  for (int j = 0; j < grid_points; ++j) {
    double x = static_cast<double>(j) / grid_points;
    lo = std::max(lo, std::abs(f.eval(cdouble{x, s})));
    if (s != 0.0) lo = std::max(lo, std::abs(f.eval(cdouble{x, -s})));
  }
  out.lower = lo;
  return out;
}

void fft(std::vector<cdouble>& a, int sign) {
  const size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = sign * kTwoPi / static_cast<double>(len);
    cdouble wl = std::polar(1.0, ang);
    for (size_t i = 0; i < n; i += len) {
      cdouble w{1.0, 0.0};
      for (size_t j = 0; j < len / 2; ++j) {
        cdouble u = a[i + j];
        cdouble v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

FourierSeries series_from_grid(const std::vector<cdouble>& samples, int cutoff) {
  const size_t g = samples.size();
  if (!is_pow2(g)) throw std::invalid_argument("series_from_grid: grid size must be a power of two");
  if (2 * static_cast<size_t>(cutoff) >= g)
    throw std::invalid_argument("series_from_grid: cutoff too large for grid");
  std::vector<cdouble> a = samples;
  fft(a, -1);
  FourierSeries f(cutoff);
  for (int k = -cutoff; k <= cutoff; ++k) {
    size_t idx = static_cast<size_t>((k + static_cast<int>(g)) % static_cast<int>(g));
    f.set(k, a[idx] / static_cast<double>(g));
  }
  return f;
}

std::vector<cdouble> grid_from_series(const FourierSeries& f, int grid_size) {
  const size_t g = static_cast<size_t>(grid_size);
  if (!is_pow2(g)) throw std::invalid_argument("grid_from_series: grid size must be a power of two");
  if (2 * static_cast<size_t>(f.cutoff()) >= g)
    throw std::invalid_argument("grid_from_series: grid too small for cutoff");
  std::vector<cdouble> a(g, cdouble{0.0, 0.0});
  for (int k = -f.cutoff(); k <= f.cutoff(); ++k) {
    size_t idx = static_cast<size_t>((k + static_cast<int>(g)) % static_cast<int>(g));
    a[idx] = f.coeff(k);
  }
  fft(a, +1);
  return a;
}

Mat2 Mat2::inverse() const {
  cdouble d = det();
  if (std::abs(d) < 1e-300) throw std::domain_error("Mat2::inverse: singular matrix");
  cdouble s = 1.0 / d;
  return {a22 * s, -a12 * s, -a21 * s, a11 * s};
}

double Mat2::norm_fro() const {
  return std::sqrt(std::norm(a11) + std::norm(a12) + std::norm(a21) + std::norm(a22));
}

double Mat2::norm2() const {
  // sigma_max^2 = (f + sqrt(f^2 - 4 d^2)) / 2 with f = ||A||_F^2, d = |det A|.
  double f = std::norm(a11) + std::norm(a12) + std::norm(a21) + std::norm(a22);
  double d = std::abs(det());
  double disc = std::max(0.0, f * f - 4.0 * d * d);
  return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

Mat2 operator*(const Mat2& l, const Mat2& r) {
  return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
          l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
}

Mat2 operator-(const Mat2& l, const Mat2& r) {
  return {l.a11 - r.a11, l.a12 - r.a12, l.a21 - r.a21, l.a22 - r.a22};
}

Mat2 operator*(cdouble s, const Mat2& m) {
  return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
}

double Vec2::norm() const { return std::sqrt(std::norm(v1) + std::norm(v2)); }

Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m.a11 * v.v1 + m.a12 * v.v2, m.a21 * v.v1 + m.a22 * v.v2};
}

Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.v1 - b.v1, a.v2 - b.v2}; }

Mat2 Mat2Series::eval(double x) const {
  return {a11.eval(x), a12.eval(x), a21.eval(x), a22.eval(x)};
}

Mat2 Mat2Series::eval(cdouble z) const {
  return {a11.eval(z), a12.eval(z), a21.eval(z), a22.eval(z)};
}

Mat2Series Mat2Series::shifted(double delta) const {
  return {a11.shifted(delta), a12.shifted(delta), a21.shifted(delta), a22.shifted(delta)};
}

Vec2 Vec2Series::eval(double x) const { return {v1.eval(x), v2.eval(x)}; }
Vec2 Vec2Series::eval(cdouble z) const { return {v1.eval(z), v2.eval(z)}; }

StripNorm strip_norm(const Mat2Series& m, double s, int grid_points) {
  StripNorm n11 = strip_norm(m.a11, s, grid_points);
  StripNorm n12 = strip_norm(m.a12, s, grid_points);
  StripNorm n21 = strip_norm(m.a21, s, grid_points);
  StripNorm n22 = strip_norm(m.a22, s, grid_points);
  StripNorm out;
  out.upper = std::sqrt(n11.upper * n11.upper + n12.upper * n12.upper + n21.upper * n21.upper +
                        n22.upper * n22.upper);
  for (int j = 0; j < grid_points; ++j) {
    double x = static_cast<double>(j) / grid_points;
    out.lower = std::max(out.lower, m.eval(cdouble{x, s}).norm2());
    if (s != 0.0) out.lower = std::max(out.lower, m.eval(cdouble{x, -s}).norm2());
  }
  return out;
}

}  // namespace harper
