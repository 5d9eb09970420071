#pragma once

#include <functional>
#include <optional>
#include <span>

namespace focalfluc {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

struct AdaptiveOptions {
  double abs_floor = 1e-15;
  int max_intervals = 20000;
};

/// Globally adaptive Gauss–Kronrod (7/15) quadrature on [a, b].
///
/// Bisects the interval with the largest |K15 − G7| until the summed estimate
/// is below max(tol·|I|, abs_floor, roundoff floor). The integrand is never
/// evaluated at the interval ends, so integrable end singularities are fine.
/// Throws NonConvergenceError once `max_intervals` is exhausted.
QuadratureResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                    double tol, const AdaptiveOptions& opts = {});

/// Hadamard finite part of ∫_A^B x^{−n} dx.
///
/// (B^{1−n} − A^{1−n})/(1−n) for n ≠ 1 and ln|B/A| for n = 1, taken straight
/// across x = 0. Reduces to the ordinary integral when 0 ∉ [A, B]. Throws
/// DomainError for n ≥ 1 with an end at 0.
double finite_part_power(int n, double A, double B);

/// Fills out[k] = F^(k)(x) for k < out.size().
using RegularFactor = std::function<void(double x, std::span<double> out)>;

/// ∫_A^B F(x)/(x − x₀)^p dx with F smooth and p ∈ {2, 4}.
struct SingularIntegralSpec {
  double lower;
  double upper;
  std::optional<double> singular_point;
  int power = 2;
  /// F(x) = (x − x₀)^p × integrand; must supply up to F^(p) for the
  /// integration-by-parts route and F itself for the window route.
  RegularFactor regular_factor;
};

/// Finite part via 1/x² = −½ (ln x²)″ and 1/x⁴ = −(1/12)(ln x²)⁗: the
/// log-singular remainder is integrated adaptively and the surface terms at
/// both ends are added.
QuadratureResult integrate_by_parts_log(const SingularIntegralSpec& spec, double tol);

/// Finite part via term-by-term integration of the Laurent expansion on
/// [x₀ − ξ₀, x₀ + ξ₀] plus adaptive quadrature of the exact integrand outside.
///
/// `laurent_coeffs[k]` multiplies (x − x₀)^{k − p}. The error estimate
/// includes the size of the last retained window terms; WindowTooLargeError
/// is thrown when that alone exceeds the tolerance.
QuadratureResult integrate_series_window(const SingularIntegralSpec& spec, double xi0,
                                         std::span<const double> laurent_coeffs, double tol);

/// ∫₀^∞ ω e^{−λω} cos ωx dω; tends to −1/x² as λ → 0.
double cutoff_kernel_g2(double x, double lambda);
/// ∫₀^∞ ω³ e^{−λω} cos ωx dω; tends to 6/x⁴ as λ → 0.
double cutoff_kernel_g4(double x, double lambda);
/// ∫_{−x₀}^{x₀} g₂ dx = 2x₀/(λ² + x₀²).
double cutoff_kernel_g2_integral(double x0, double lambda);
/// ∫_{−x₀}^{x₀} g₄ dx = −4x₀(x₀² − 3λ²)/(λ² + x₀²)³.
double cutoff_kernel_g4_integral(double x0, double lambda);

}  // namespace focalfluc
