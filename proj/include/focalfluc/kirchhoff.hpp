#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace focalfluc {

double bessel_j0(double x);
double bessel_j1(double x);
/// Y₀ and Y₁ require x > 0 (DomainError otherwise).
double bessel_y0(double x);
double bessel_y1(double x);

/// H₀⁽¹⁾(x) = J₀(x) + iY₀(x) for x > 0.
///
/// Power series in extended precision below x = 16, Hankel's asymptotic
/// expansion (summed to its smallest term) above; both agree to ~1e−13
/// at the switch.
std::complex<double> hankel_h0(double x);

/// Plane wave with wavevector k(cosθ, −sinθ) scattered by the strip
/// x = 0, |y| < y₀, observed at (−b, 0).
struct DiffractionSetup {
  double k;
  double theta;
  double b;
  double y0;

  static DiffractionSetup make(double k, double theta, double b, double y0);
  double wavelength() const;
};

struct StripResult {
  std::complex<double> value;
  double error;
  int panels;
};

struct StripOptions {
  int max_panels = 1 << 22;
};

/// −½ k cosθ ∫_{−y₀}^{y₀} e^{−ik sinθ y} H₀⁽¹⁾(k√(y² + b²)) dy.
///
/// Gauss–Legendre (8 point) on panels no wider than λ/8; the error is the
/// difference from a pass with half-width panels, and the panel count keeps
/// doubling until it falls below `tol`.
StripResult strip_scattered_wave(const DiffractionSetup& setup, double tol,
                                 const StripOptions& opts = {});

/// The specularly reflected wave −e^{ikb cosθ}, which is also the exact
/// infinite-strip value of the integral above. Throws NoSpecularPathError
/// unless the stationary point y* = b·tanθ lies inside the strip.
std::complex<double> geometric_wave(const DiffractionSetup& setup);

/// Δφ_s = reference − strip(y₀). The default reference is the infinite strip
/// (the tails beyond ±y₀); with `reference_y0` it is a finite strip of that
/// half-width.
StripResult diffraction_residual(const DiffractionSetup& setup, double tol,
                                 std::optional<double> reference_y0 = std::nullopt);

/// Least-squares slope of log(values) against log(widths).
double fit_scaling_exponent(std::span<const double> widths, std::span<const double> values);

/// RMS of |Δφ_s| over one fringe period π/(k|sinθ|) centred on each width
/// (the two strip edges beat against each other), for each y₀.
std::vector<double> fringe_averaged_residuals(const DiffractionSetup& setup,
                                              std::span<const double> y0_list, double tol);

/// Exponent p of |Δφ_s| ∝ y₀^p from fringe-averaged residuals. Needs at
/// least five widths spanning a decade, each several wavelengths wide
/// (InsufficientRangeError otherwise).
double residual_scaling_exponent(const DiffractionSetup& setup, std::span<const double> y0_list,
                                 double tol = 1e-9);

}  // namespace focalfluc
