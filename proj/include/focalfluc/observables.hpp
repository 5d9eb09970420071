#pragma once

namespace focalfluc {

/// Sodium reference constants (Gaussian units).
inline constexpr double kSodiumMassGrams = 3.8e-23;
inline constexpr double kSodiumPolarizabilityCm3 = 3.0e-22;

/// Atom relative to sodium. Both ratios must be positive.
struct AtomParams {
  double polarizability_ratio = 1.0;
  double mass_ratio = 1.0;

  static AtomParams make(double polarizability_ratio, double mass_ratio);
};

/// Λ = a⁴⟨E²⟩, distance in μm, time in ms.
struct ObservableInputs {
  double lambda_coeff = 0.0;
  double a_microns = 1.0;
  double t_millis = 1.0;

  static ObservableInputs make(double lambda_coeff, double a_microns, double t_millis);
};

/// Λ is just the scaled ⟨E²⟩.
double lambda_coefficient(double e_squared_scaled);

/// V = −½ α ⟨E²⟩ in Lorentz–Heaviside units, where α is 4π times the
/// Gaussian polarizability passed in.
double casimir_polder_potential(double polarizability_gaussian, double e_squared);

/// Δa/a = 0.25 (Λ/10⁻³)(α/α_Na)(m_Na/m)(1μm/a)⁶(t/1ms)².
double beam_deflection(const ObservableInputs& in, const AtomParams& atom);

/// Δφ = 0.04 (Λ/10⁻³)(α/α_Na)(1μm/a)⁴(t/1ms), radians.
double interferometer_phase(const ObservableInputs& in, const AtomParams& atom);

/// T = 2·10⁻⁹ K (Λ/10⁻³)(α/α_Na)(1μm/a)⁴. Throws NoTrapError for Λ ≤ 0.
double trap_temperature(const ObservableInputs& in, const AtomParams& atom);

}  // namespace focalfluc
