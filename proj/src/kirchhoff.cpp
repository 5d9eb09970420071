#include "focalfluc/kirchhoff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "focalfluc/errors.hpp"

namespace focalfluc {

namespace {

constexpr double kSeriesLimit = 16.0;
constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

struct SeriesPair {
  long double j, y;
};

// J_n and the part of Y_n that is not the ln(x/2)·J_n term, n ∈ {0, 1}.
SeriesPair small_x(double xd, int n) {
  const long double x = xd;
  const long double q = -0.25L * x * x;
  long double term = (n == 0) ? 1.0L : 0.5L * x;  // (x/2)^n / n!
  long double j = 0.0L, tail = 0.0L;
  long double hk = 0.0L, hkn = (n == 0) ? 0.0L : 1.0L;  // H_k and H_{k+n}
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      term *= q / (static_cast<long double>(k) * static_cast<long double>(k + n));
      hk += 1.0L / k;
      hkn += 1.0L / (k + n);
    }
    j += term;
    tail += (hk + hkn) * term;
    if (std::fabs(term) < 1e-22L * std::fabs(j) && k > 2) break;
  }
  const long double lg = std::log(0.5L * x) + kEulerGamma;
  long double y = (2.0L / kPiL) * lg * j - tail / kPiL;
  if (n == 1) y -= 2.0L / (kPiL * x);
  return {j, y};
}

// Hankel's expansion: J = A(P cosχ − Q sinχ), Y = A(P sinχ + Q cosχ),
// summed until the terms stop shrinking.
SeriesPair large_x(double x, int n) {
  const double mu = 4.0 * n * n;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) >= last) break;
    last = std::abs(term);
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (last < 1e-17) break;
  }
  // χ = x − (2n+1)π/4, expanded so the large x is never shifted
  const double s = std::sin(x), c = std::cos(x);
  const double r = std::numbers::sqrt2 / 2.0;
  const double cos_chi = (n == 0) ? r * (c + s) : r * (s - c);
  const double sin_chi = (n == 0) ? r * (s - c) : -r * (s + c);
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  return {amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi)};
}

SeriesPair bessel_pair(double x, int n) {
  if (!(x > 0.0)) throw DomainError("Bessel Y and Hankel functions need x > 0");
  return x < kSeriesLimit ? small_x(x, n) : large_x(x, n);
}

constexpr std::array<double, 4> kGaussX = {0.1834346424956498049394761, 0.5255324099163289858177390,
                                           0.7966664774136267395915539, 0.9602898564975362316835609};
constexpr std::array<double, 4> kGaussW = {0.3626837833783619829651504, 0.3137066458778872873379622,
                                           0.2223810344533744705443560, 0.1012285362903762591525314};

std::complex<double> integrand(const DiffractionSetup& s, double y) {
  const double sn = std::sin(s.theta);
  return std::polar(1.0, -s.k * sn * y) * hankel_h0(s.k * std::hypot(y, s.b));
}

// ∫_lo^hi of the strip integrand with `panels` equal Gauss panels.
std::complex<double> panel_sum(const DiffractionSetup& s, double lo, double hi, long panels) {
  std::complex<double> total = 0.0;
  const double w = (hi - lo) / static_cast<double>(panels);
  for (long i = 0; i < panels; ++i) {
    const double c = lo + (static_cast<double>(i) + 0.5) * w;
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < kGaussX.size(); ++j) {
      const double dx = 0.5 * w * kGaussX[j];
      acc += kGaussW[j] * (integrand(s, c - dx) + integrand(s, c + dx));
    }
    total += 0.5 * w * acc;
  }
  return total;
}

double max_panel_width(const DiffractionSetup& s) {
  return std::min(s.wavelength() / 8.0, 0.5 * s.b);
}

long panels_for(const DiffractionSetup& s, double length) {
  return std::max(1L, static_cast<long>(std::ceil(length / max_panel_width(s))));
}

std::complex<double> prefactor(const DiffractionSetup& s) {
  return -0.5 * s.k * std::cos(s.theta);
}

std::complex<double> infinite_strip(const DiffractionSetup& s) {
  return -std::polar(1.0, s.k * s.b * std::cos(s.theta));
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  if (x == 0.0) return 1.0;
  return static_cast<double>(bessel_pair(x, 0).j);
}

double bessel_j1(double x) {
  if (x == 0.0) return 0.0;
  const double v = static_cast<double>(bessel_pair(std::abs(x), 1).j);
  return x < 0.0 ? -v : v;
}

double bessel_y0(double x) { return static_cast<double>(bessel_pair(x, 0).y); }
double bessel_y1(double x) { return static_cast<double>(bessel_pair(x, 1).y); }

std::complex<double> hankel_h0(double x) {
  const auto p = bessel_pair(x, 0);
  return {static_cast<double>(p.j), static_cast<double>(p.y)};
}

DiffractionSetup DiffractionSetup::make(double k, double theta, double b, double y0) {
  if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
  if (!(b > 0.0)) throw DomainError("observation distance b must be positive");
  if (!(y0 > 0.0)) throw DomainError("strip half-width must be positive");
  if (!(std::abs(theta) < 0.5 * std::numbers::pi))
    throw DomainError("incidence angle must satisfy |theta| < pi/2");
  return DiffractionSetup{k, theta, b, y0};
}

double DiffractionSetup::wavelength() const { return 2.0 * std::numbers::pi / k; }

StripResult strip_scattered_wave(const DiffractionSetup& setup, double tol,
                                 const StripOptions& opts) {
  long n = panels_for(setup, 2.0 * setup.y0);
  std::complex<double> coarse = prefactor(setup) * panel_sum(setup, -setup.y0, setup.y0, n);
  for (;;) {
    if (2 * n > opts.max_panels)
      throw NonConvergenceError("strip integral: panel budget exhausted", std::abs(coarse));
    const std::complex<double> fine = prefactor(setup) * panel_sum(setup, -setup.y0, setup.y0, 2 * n);
    const double err = std::abs(fine - coarse);
    if (err <= tol) return {fine, err, static_cast<int>(2 * n)};
    coarse = fine;
    n *= 2;
  }
}

std::complex<double> geometric_wave(const DiffractionSetup& setup) {
  if (std::abs(setup.b * std::tan(setup.theta)) >= setup.y0)
    throw NoSpecularPathError("stationary point b*tan(theta) lies outside the strip");
  return infinite_strip(setup);
}

StripResult diffraction_residual(const DiffractionSetup& setup, double tol,
                                 std::optional<double> reference_y0) {
  const StripResult strip = strip_scattered_wave(setup, 0.5 * tol);
  if (!reference_y0) return {infinite_strip(setup) - strip.value, strip.error, strip.panels};
  DiffractionSetup ref = setup;
  ref.y0 = *reference_y0;
  if (ref.y0 == setup.y0) return {0.0, 0.0, 0};
  const StripResult wide = strip_scattered_wave(ref, 0.5 * tol);
  return {wide.value - strip.value, wide.error + strip.error, wide.panels + strip.panels};
}

double fit_scaling_exponent(std::span<const double> widths, std::span<const double> values) {
  if (widths.size() != values.size() || widths.size() < 2)
    throw InsufficientRangeError("scaling fit needs matching samples, at least two");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(widths.size());
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (!(widths[i] > 0.0) || !(values[i] > 0.0))
      throw DomainError("scaling fit needs positive samples");
    const double lx = std::log(widths[i]), ly = std::log(values[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw InsufficientRangeError("scaling fit needs distinct widths");
  return (n * sxy - sx * sy) / den;
}

std::vector<double> fringe_averaged_residuals(const DiffractionSetup& setup,
                                              std::span<const double> y0_list, double tol) {
  constexpr int kSamples = 16;
  const double sn = std::abs(std::sin(setup.theta));
  const double period = sn > 1e-3 ? std::numbers::pi / (setup.k * sn) : setup.wavelength();
  std::vector<double> out;
  out.reserve(y0_list.size());
  for (double y0 : y0_list) {
    // cumulative strip values across the fringe
    double y = y0 - 0.5 * period;
    if (!(y > 0.0)) throw InsufficientRangeError("strip width below one fringe period");
    DiffractionSetup s = setup;
    s.y0 = y;
    std::complex<double> strip = strip_scattered_wave(s, tol).value;
    const double step = period / kSamples;
    double sum2 = 0.0;
    for (int j = 0; j < kSamples; ++j) {
      if (j > 0) {
        const long n = panels_for(setup, step);
        strip += prefactor(setup) *
                 (panel_sum(setup, y, y + step, n) + panel_sum(setup, -y - step, -y, n));
        y += step;
      }
      sum2 += std::norm(infinite_strip(setup) - strip);
    }
    out.push_back(std::sqrt(sum2 / kSamples));
  }
  return out;
}

double residual_scaling_exponent(const DiffractionSetup& setup, std::span<const double> y0_list,
                                 double tol) {
  if (y0_list.size() < 5) throw InsufficientRangeError("need at least five strip widths");
  const auto [lo, hi] = std::minmax_element(y0_list.begin(), y0_list.end());
  if (*hi < 10.0 * *lo) throw InsufficientRangeError("strip widths must span a decade");
  if (*lo < 4.0 * setup.wavelength())
    throw InsufficientRangeError("strip widths must be several wavelengths");
  const auto values = fringe_averaged_residuals(setup, y0_list, tol);
  return fit_scaling_exponent(y0_list, values);
}

}  // namespace focalfluc
