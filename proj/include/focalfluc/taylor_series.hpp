#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace focalfluc {

/// Truncated power series c₀ + c₁x + … + c_{n−1}x^{n−1}.
///
/// All arithmetic is truncated to the shorter operand's length. This is the
/// workhorse behind the partner-angle expansion about a critical angle, the
/// Laurent coefficients of 1/h^p, and the local derivative jets used by the
/// integration-by-parts route.
class TaylorSeries {
 public:
  TaylorSeries() = default;
  explicit TaylorSeries(std::size_t size, double constant = 0.0);
  explicit TaylorSeries(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  /// x ↦ value + x, i.e. the independent variable around `value`.
  static TaylorSeries variable(std::size_t size, double value = 0.0);

  std::size_t size() const noexcept { return c_.size(); }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  std::span<const double> coeffs() const noexcept { return c_; }

  TaylorSeries& operator+=(const TaylorSeries& o);
  TaylorSeries& operator-=(const TaylorSeries& o);
  TaylorSeries& operator*=(double s);
  TaylorSeries& operator+=(double s);

  friend TaylorSeries operator+(TaylorSeries a, const TaylorSeries& b) { return a += b; }
  friend TaylorSeries operator-(TaylorSeries a, const TaylorSeries& b) { return a -= b; }
  friend TaylorSeries operator*(TaylorSeries a, double s) { return a *= s; }
  friend TaylorSeries operator*(double s, TaylorSeries a) { return a *= s; }
  friend TaylorSeries operator+(TaylorSeries a, double s) { return a += s; }
  friend TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b);
  friend TaylorSeries operator/(const TaylorSeries& a, const TaylorSeries& b);
  TaylorSeries operator-() const { return (*this) * -1.0; }

  /// 1/s; requires a nonzero constant term.
  TaylorSeries reciprocal() const;
  /// s^n for integer n (negative n requires a nonzero constant term).
  TaylorSeries pow(int n) const;
  /// Divides by x; the constant term must already be (numerically) zero.
  /// The result is one coefficient shorter.
  TaylorSeries shift_down() const;
  /// Truncates or zero-pads to `size` coefficients.
  TaylorSeries resized(std::size_t size) const;

  /// Evaluates Σ c_k t^k.
  double evaluate(double t) const;
  /// j-th derivative at t.
  double derivative(double t, int order) const;

 private:
  std::vector<double> c_;
};

/// sin and cos of a series (any constant term).
std::pair<TaylorSeries, TaylorSeries> sin_cos(const TaylorSeries& s);

/// Σ_k outer[k]·inner^k with inner having a zero constant term.
TaylorSeries compose(std::span<const double> outer, const TaylorSeries& inner);

}  // namespace focalfluc
