#pragma once

#include <complex>
#include <vector>

namespace harper {

using cdouble = std::complex<double>;

/// Finitely supported Fourier series sum_{|k|<=cutoff} c_k e^{2 pi i k x},
/// evaluable at real x and at complex z in any strip (the sum is finite).
class FourierSeries {
 public:
  FourierSeries() : cutoff_(0), c_(1, cdouble{0.0, 0.0}) {}
  explicit FourierSeries(int cutoff) : cutoff_(cutoff), c_(2 * static_cast<size_t>(cutoff) + 1) {}

  static FourierSeries constant(cdouble v);

  int cutoff() const { return cutoff_; }
  cdouble coeff(int k) const {
    return (k < -cutoff_ || k > cutoff_) ? cdouble{0.0, 0.0} : c_[static_cast<size_t>(k + cutoff_)];
  }
  void set(int k, cdouble v) { c_.at(static_cast<size_t>(k + cutoff_)) = v; }

  cdouble eval(double x) const;
  cdouble eval(cdouble z) const;

  /// Series of f(x + delta): coefficients multiplied by e^{2 pi i k delta}.
  FourierSeries shifted(double delta) const;
  /// Series of conj(f(x)) for real x: conjugated, index-reversed coefficients.
  FourierSeries conjugated() const;
  /// Truncate (or zero-pad) to a new cutoff.
  FourierSeries truncated(int new_cutoff) const;

  FourierSeries& operator+=(const FourierSeries& o);
  FourierSeries& operator-=(const FourierSeries& o);
  FourierSeries& operator*=(cdouble s);

  double coeff_abs_sum() const;

 private:
  int cutoff_;
  std::vector<cdouble> c_;
};

FourierSeries operator+(FourierSeries a, const FourierSeries& b);
FourierSeries operator-(FourierSeries a, const FourierSeries& b);
FourierSeries operator*(FourierSeries a, cdouble s);

/// Convolution product truncated at out_cutoff (default: sum of cutoffs).
FourierSeries multiply(const FourierSeries& a, const FourierSeries& b, int out_cutoff = -1);

struct StripNorm {
  double lower = 0.0;  // max over a boundary grid at Im z = +-s
  double upper = 0.0;  // sum_k |c_k| e^{2 pi s |k|}

  bool consistent() const { return lower <= upper * (1.0 + 1e-12) + 1e-300; }
};

/// Two-sided bracket for sup_{|Im z| < s} |f(z)|; lower <= true norm <= upper.
StripNorm strip_norm(const FourierSeries& f, double s, int grid_points = 1024);

/// In-place radix-2 FFT; size must be a power of two.  sign=-1 forward.
void fft(std::vector<cdouble>& a, int sign);

/// Fourier coefficients |k| <= cutoff of the function sampled at x_j = j/G.
FourierSeries series_from_grid(const std::vector<cdouble>& samples, int cutoff);

/// Evaluate on the uniform grid x_j = j/G via padded inverse FFT.
std::vector<cdouble> grid_from_series(const FourierSeries& f, int grid_size);

// --- small dense 2x2 blocks used by cocycles and conjugations ---

struct Mat2 {
  cdouble a11{0.0, 0.0}, a12{0.0, 0.0}, a21{0.0, 0.0}, a22{0.0, 0.0};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  cdouble det() const { return a11 * a22 - a12 * a21; }
  Mat2 inverse() const;

  double norm_fro() const;
  /// Spectral norm (largest singular value).
  double norm2() const;
};

Mat2 operator*(const Mat2& l, const Mat2& r);
Mat2 operator-(const Mat2& l, const Mat2& r);
Mat2 operator*(cdouble s, const Mat2& m);

struct Vec2 {
  cdouble v1{0.0, 0.0}, v2{0.0, 0.0};
  double norm() const;
};

Vec2 operator*(const Mat2& m, const Vec2& v);
Vec2 operator-(const Vec2& a, const Vec2& b);

/// 2x2 matrix of Fourier series.
struct Mat2Series {
  FourierSeries a11, a12, a21, a22;

  Mat2 eval(double x) const;
  Mat2 eval(cdouble z) const;
  Mat2Series shifted(double delta) const;
};

/// 2-vector of Fourier series.
struct Vec2Series {
  FourierSeries v1, v2;

  Vec2 eval(double x) const;
  Vec2 eval(cdouble z) const;
};

/// Entrywise strip-norm bracket combined into a matrix-norm bracket
/// (lower: grid max of ||.||_2; upper: Frobenius combination of entry uppers).
StripNorm strip_norm(const Mat2Series& m, double s, int grid_points = 1024);

}  // namespace harper
