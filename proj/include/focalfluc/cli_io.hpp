#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "focalfluc/focal_fields.hpp"
#include "focalfluc/kirchhoff.hpp"
#include "focalfluc/observables.hpp"

namespace focalfluc {

enum class SweepMethod { by_parts, series_window, both };
std::string_view to_string(SweepMethod m);
SweepMethod parse_sweep_method(std::string_view name);

struct SweepSpec {
  double theta0 = 1.0;
  double b = 1.0;
  double gamma_min = 0.0;
  double gamma_max = kPi;
  int steps = 101;
  double a = 1.0;
  SweepMethod method = SweepMethod::by_parts;
  double xi0 = 0.2;
  double tol = 1e-10;

  /// Throws DomainError on a bad range, step count, ξ₀ or geometry.
  void validate() const;
  double gamma_at(int i) const;
};

/// One sweep row. Missing optionals are written as empty CSV fields / JSON null.
struct RunRecord {
  double theta0 = 0.0;
  double gamma = 0.0;
  double a = 0.0;
  std::optional<double> phi2, e2, phi2_scaled, e2_scaled;
  std::string method;
  int families = 0;
  FieldStatus status = FieldStatus::ok;
  std::optional<double> err_phi2, err_e2;
};

/// FOCALFLUC_THREADS, 0 or unset meaning hardware concurrency.
unsigned threads_from_env();

/// Runs fn(0..n−1) on up to `threads` workers. The first exception thrown by
/// any call is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Field values at one direction. With SweepMethod::both the by_parts value
/// is reported and the error covers the disagreement with series_window.
RunRecord evaluate_point(const SweepSpec& spec, double gamma);

/// One record per γ grid point, ascending in γ for any thread count.
std::vector<RunRecord> run_sweep(const SweepSpec& spec, unsigned threads = 0);

// Tabular output shared by every command.
using Cell = std::variant<std::monostate, double, long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline const std::vector<std::string> kRunColumns = {
    "theta0", "gamma",   "a",      "phi2",     "e2",    "phi2_scaled",
    "e2_scaled", "method", "families", "status", "err_phi2", "err_e2"};

Table to_table(const std::vector<RunRecord>& records);
/// %.17g numbers, empty fields for missing values.
void write_csv(std::ostream& out, const Table& table);
/// Array of objects keyed by column, null for missing values.
void write_json(std::ostream& out, const Table& table);
std::string format_number(double v);

/// Closed-form perpendicular values over a θ₀ grid. `divergent` marks θ₀
/// whose nearest singular direction is within 0.075 rad of π/2.
Table exact_table(const std::vector<double>& theta0s, double a);

/// f(θ′; γ) on `points` samples of [−2π/3, 2π/3], one column per γ.
Table profile_table(const std::vector<double>& gammas, int points);

/// Strip, geometric wave and residuals for each y₀, plus the fitted exponent
/// (empty when the widths do not qualify for a fit).
Table diffraction_table(double k, double theta, double b, const std::vector<double>& y0s,
                        double tol);

/// Observables for each Λ. Trap temperature is empty for Λ < 0 and 0 for Λ = 0.
Table observables_table(const std::vector<double>& lambdas, double a_microns, double t_millis,
                        const AtomParams& atom);

struct ValidationOptions {
  /// Multiplies the numerically computed values in the exact-match suite;
  /// anything but 1 should make that suite fail.
  double prefactor_scale = 1.0;
  unsigned threads = 0;
};

struct ValidationCheck {
  std::string suite;
  bool passed;
  double measured;
  double tolerance;
  std::string detail;
};

std::vector<ValidationCheck> run_validation(const ValidationOptions& opts = {});
Table to_table(const std::vector<ValidationCheck>& checks);

}  // namespace focalfluc
