#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "focalfluc/mirror_geometry.hpp"

namespace focalfluc {

/// −1/(6π³): ⟨φ²⟩ = kPhiPrefactor/a² · FP∫ dα/h², each pair counted twice.
/// The π³ (not π²) form reproduces the closed-form perpendicular result.
inline constexpr double kPhiPrefactor = -1.0 / (6.0 * kPi * kPi * kPi);
/// 4/(5π³): ⟨E²⟩ = kEPrefactor/a⁴ · FP∫ dα/h⁴.
inline constexpr double kEPrefactor = 4.0 / (5.0 * kPi * kPi * kPi);

enum class Method { by_parts, series_window, exact, cusp };
enum class FieldStatus { ok, no_pairs, edge_singular };

std::string_view to_string(Method m);
std::string_view to_string(FieldStatus s);
/// Parses "by_parts", "series_window", "exact", "cusp"; throws DomainError.
Method parse_method(std::string_view name);

struct FieldResult {
  double value = 0.0;   ///< ⟨φ²⟩ or ⟨E²⟩; NaN when edge_singular
  double scaled = 0.0;  ///< value·a² or value·a⁴
  Method method = Method::by_parts;
  int families_used = 0;
  double error_estimate = 0.0;
  FieldStatus status = FieldStatus::ok;
};

struct FieldOptions {
  Method method = Method::by_parts;
  /// Half-width of the Laurent window around each critical angle. Shrunk
  /// automatically when it does not fit or the series cannot meet `tol`.
  double xi0 = 0.2;
  double tol = 1e-10;
  /// Number of Laurent coefficients kept about a critical angle.
  int series_order = 40;
  GeometryTolerances geometry{};
};

FieldResult phi_squared(const MirrorGeometry& geom, const FocalPoint& point,
                        const FieldOptions& opts = {});
FieldResult e_squared(const MirrorGeometry& geom, const FocalPoint& point,
                      const FieldOptions& opts = {});

/// cotθ₀/(12π³a²).
FieldResult phi_squared_perp_exact(const MirrorGeometry& geom, double a);
/// −cosθ₀(3 − 2cos²θ₀)/(30π³a⁴sin³θ₀).
FieldResult e_squared_perp_exact(const MirrorGeometry& geom, double a);

/// First order in |γ − π/2| about the perpendicular direction. The linear
/// term enters with a + sign: moving off π/2 removes a strip of positive
/// integrand under the negative prefactor.
FieldResult cusp_phi(const MirrorGeometry& geom, double gamma, double a);
/// [−cosθ₀(3−2cos²θ₀)/(24sin³θ₀) − |γ−π/2|/(8sin²θ₀(1−cosθ₀)(2cosθ₀+1))]·4/(5π³a⁴).
FieldResult cusp_e(const MirrorGeometry& geom, double gamma, double a);
/// Coefficient of |γ − π/2| in a²⟨φ²⟩ and in a⁴⟨E²⟩.
double cusp_slope_phi(const MirrorGeometry& geom);
double cusp_slope_e(const MirrorGeometry& geom);

/// Directions γ ∈ [0, π] at which an extremum of f sits on a mirror edge,
/// ascending.
std::vector<double> singular_directions(const MirrorGeometry& geom);

struct ValidityReport {
  double diffraction_phi2;
  double diffraction_e2;
  double amplitude_ratio;
  double soft_edge_bound_phi2;
  double soft_edge_bound_e2;
  double reflectivity_bound_phi2;
  double reflectivity_bound_e2;
  /// amplitude_ratio ≥ 0.1: the diffracted wave is not small.
  bool geometric_optics_questionable;
};

/// Order-of-magnitude estimates with unit coefficients; the dominant
/// wavelength is taken to be a.
ValidityReport validity_report(const FocalPoint& point, const MirrorGeometry& geom,
                               double delta_theta, double lambda_m);

}  // namespace focalfluc
