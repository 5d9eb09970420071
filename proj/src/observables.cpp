#include "focalfluc/observables.hpp"

#include <cmath>
#include <numbers>

#include "focalfluc/errors.hpp"

namespace focalfluc {

AtomParams AtomParams::make(double polarizability_ratio, double mass_ratio) {
  if (!(polarizability_ratio > 0.0) || !(mass_ratio > 0.0))
    throw DomainError("atom polarizability and mass ratios must be positive");
  return {polarizability_ratio, mass_ratio};
}

ObservableInputs ObservableInputs::make(double lambda_coeff, double a_microns, double t_millis) {
  if (!std::isfinite(lambda_coeff)) throw DomainError("lambda coefficient must be finite");
  if (!(a_microns > 0.0)) throw DomainError("distance a must be positive");
  if (!(t_millis > 0.0)) throw DomainError("time t must be positive");
  return {lambda_coeff, a_microns, t_millis};
}

double lambda_coefficient(double e_squared_scaled) { return e_squared_scaled; }

double casimir_polder_potential(double polarizability_gaussian, double e_squared) {
  return -0.5 * (4.0 * std::numbers::pi * polarizability_gaussian) * e_squared;
}

namespace {

double common(const ObservableInputs& in, const AtomParams& atom) {
  return (in.lambda_coeff / 1e-3) * atom.polarizability_ratio / std::pow(in.a_microns, 4);
}

}  // namespace

double beam_deflection(const ObservableInputs& in, const AtomParams& atom) {
  return 0.25 * common(in, atom) / atom.mass_ratio / (in.a_microns * in.a_microns) *
         (in.t_millis * in.t_millis);
}

double interferometer_phase(const ObservableInputs& in, const AtomParams& atom) {
  return 0.04 * common(in, atom) * in.t_millis;
}

double trap_temperature(const ObservableInputs& in, const AtomParams& atom) {
  if (!(in.lambda_coeff > 0.0))
    throw NoTrapError("no trap: <E^2> must be positive (needs a mirror with theta0 > pi/2)");
  return 2e-9 * common(in, atom);
}

}  // namespace focalfluc
