#pragma once

#include <optional>
#include <vector>

#include "focalfluc/taylor_series.hpp"

namespace focalfluc {

inline constexpr double kPi = 3.14159265358979323846;
/// Largest admissible mirror half-angle; beyond it up to four rays meet.
inline constexpr double kMaxHalfAngle = 2.0 * kPi / 3.0;

/// Parabolic cylinder x = (b² − y²)/b seen from its focal line.
struct MirrorGeometry {
  double theta0;    ///< half-angle of the mirror, 0 < θ₀ < 2π/3
  double b = 1.0;   ///< focus-to-mirror scale

  /// Validating constructor; throws DomainError.
  static MirrorGeometry make(double theta0, double b = 1.0);
};

/// Observation point: distance a from the focal line in direction γ ∈ [0, π].
struct FocalPoint {
  double a;
  double gamma;

  static FocalPoint make(double a, double gamma);
  /// Geometric optics needs a ≪ b; true when a/b < 0.1.
  bool well_inside(const MirrorGeometry& geom) const { return a / geom.b < 0.1; }
};

enum class ExtremumKind { minimum, maximum };

/// One pair structure: the α-range around a critical angle on which a partner
/// reflection angle exists.
struct PairFamily {
  double critical_angle;
  double alpha_lo;
  double alpha_hi;
  ExtremumKind extremum_kind;
  /// θ_c within the edge tolerance of ±θ₀; the field integrals diverge.
  bool edge_singular = false;
};

/// Two reflection angles carrying the same incident ray.
struct RayPair {
  double alpha;
  double beta;
  double h;
  double dbeta_dalpha;
};

struct GeometryTolerances {
  double angle = 1e-12;
  double residual = 1e-12;
  /// |θ_c ∓ θ₀| below this marks a family edge-singular.
  double edge = 1e-4;
};

/// f(θ′; γ) with θ = (a/b)·f(θ′) the incident angle for reflection angle θ′.
/// Evaluated as (1 + cos θ′)·sin(θ′ − γ), which equals
/// sin²θ′·sin(θ′ − γ)/(1 − cos θ′) identically and is regular at θ′ = 0.
double incident_map(double theta_prime, double gamma);

/// d^n f/dθ′^n, exact for every n ≥ 1 (f is a finite trigonometric sum).
double incident_map_derivative(double theta_prime, double gamma, int order);

/// Taylor coefficients f^(k)(θ′)/k! for k = 0..n−1.
TaylorSeries incident_map_taylor(double theta_prime, double gamma, std::size_t n);

/// h with Δℓ = a·h, the path difference of the rays reflected at α and β.
double path_difference_factor(double alpha, double beta, double gamma);

/// Interior extrema of f on (−θ₀, θ₀), ascending.
std::vector<double> critical_angles(const MirrorGeometry& geom, double gamma,
                                    const GeometryTolerances& tol = {});

/// Every γ-independent closed-form extremum candidate (2γ + (2m+1)π)/3,
/// m ∈ {−2, −1, 0}, inside the mirror or not.
std::vector<double> critical_angle_candidates(double gamma);

/// True when some extremum of f sits on ±θ₀ or less than `tol.edge` inside
/// the mirror from it.
bool extremum_near_edge(const MirrorGeometry& geom, double gamma,
                        const GeometryTolerances& tol = {});

/// The second reflection angle β ≠ α in [−θ₀, θ₀] with f(β) = f(α), if any.
/// Throws MultiplicityError when two distinct partners exist.
std::optional<double> partner_angle(double alpha, const MirrorGeometry& geom, double gamma,
                                    const GeometryTolerances& tol = {});

/// Builds the full RayPair for α, or nothing when α has no partner.
std::optional<RayPair> ray_pair(double alpha, const MirrorGeometry& geom, double gamma,
                                const GeometryTolerances& tol = {});

/// dβ/dα = f′(α)/f′(β).
double partner_derivative(const RayPair& pair, double gamma, double tol = 1e-12);

/// One family per interior extremum, with the maximal α-interval on which a
/// partner exists.
std::vector<PairFamily> pair_domain(const MirrorGeometry& geom, double gamma,
                                    const GeometryTolerances& tol = {});

/// Coefficients a₂..a_order of β = 2θ_c − α + Σ a_k (α − θ_c)^k, from
/// order-by-order substitution into f(β) = f(α).
std::vector<double> partner_series(double theta_c, double gamma, int order);

/// Shift of the integration end when γ leaves π/2 (signed).
double edge_shift(const MirrorGeometry& geom, double gamma);

namespace detail {

/// Partner on the monotone branch [lo, hi], or nothing when f(α) is outside
/// the branch range. Values within tolerance of an end snap to that end.
std::optional<double> partner_on_branch(double alpha, double lo, double hi, double gamma,
                                        const GeometryTolerances& tol);

/// β(α₀ + x) − α₀ as a series in x, for α₀ a critical angle.
TaylorSeries partner_series_about_extremum(double theta_c, double gamma, std::size_t n);

/// β(α + t) as a series in t around a regular pair (α, β).
TaylorSeries partner_series_about_pair(double alpha, double beta, double gamma, std::size_t n);

}  // namespace detail

}  // namespace focalfluc
