#include "focalfluc/focal_fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "focalfluc/errors.hpp"
#include "focalfluc/quadrature.hpp"
#include "focalfluc/roots.hpp"
#include "focalfluc/taylor_series.hpp"

namespace focalfluc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double deflated(double alpha, double beta, double gamma) {
  const double s = alpha + beta;
  return std::cos(0.5 * s - gamma) + std::cos(0.5 * (beta - alpha)) * std::cos(s - gamma);
}

double deflated_dbeta(double alpha, double beta, double gamma) {
  const double s = alpha + beta;
  const double d = beta - alpha;
  return -0.5 * std::sin(0.5 * s - gamma) - 0.5 * std::sin(0.5 * d) * std::cos(s - gamma) -
         std::cos(0.5 * d) * std::sin(s - gamma);
}

// Everything needed to integrate 1/h^p across one pair family, with the
// variable x = α − θ_c.
class FamilyKernel {
 public:
  FamilyKernel(const PairFamily& fam, double gamma, int power, int order)
      : gamma_(gamma), tc_(fam.critical_angle), lo_(fam.alpha_lo), hi_(fam.alpha_hi), p_(power) {
    const auto n = static_cast<std::size_t>(order);
    // y = β − θ_c as a series in x; h = 2 sin(S) sin((x − y)/2) with
    // S = θ_c − γ + (x + y)/2, and x/h is regular at x = 0.
    const TaylorSeries y = detail::partner_series_about_extremum(tc_, gamma_, n + 1);
    const TaylorSeries x = TaylorSeries::variable(n + 1);
    TaylorSeries S = (x + y) * 0.5;
    S += tc_ - gamma_;
    const TaylorSeries sin_s = sin_cos(S).first.resized(n);
    const TaylorSeries sin_d = sin_cos((x - y) * 0.5).first.shift_down();
    const TaylorSeries g = sin_s * sin_d * 2.0;
    laurent_ = g.pow(-p_);

    // crude convergence radius from the tail of the coefficients
    double big = 0.0;
    std::size_t at = 1;
    for (std::size_t k = n / 2; k < n; ++k) {
      const double v = std::abs(laurent_[k]) / std::max(std::abs(laurent_[0]), 1e-300);
      if (v > big) {
        big = v;
        at = k;
      }
    }
    radius_ = big > 0.0 ? std::pow(big, -1.0 / static_cast<double>(at)) : 1.0;
    // Within a third of the radius the series is exact to rounding; beyond it
    // the local pair expansion takes over, and below ~R/3 that one would lose
    // (R/x)^p digits to cancellation.
    switch_radius_ = std::min(radius_ / 3.0, 1.0);
  }

  double distance_to_end() const { return std::min(tc_ - lo_, hi_ - tc_); }
  double radius() const { return radius_; }
  std::span<const double> laurent() const { return laurent_.coeffs(); }

  double partner(double alpha) const {
    const bool left = alpha < tc_;
    const double blo = left ? tc_ : lo_;
    const double bhi = left ? hi_ : tc_;
    const auto g = [&](double b) { return deflated(alpha, b, gamma_); };
    const auto dg = [&](double b) { return deflated_dbeta(alpha, b, gamma_); };
    const double glo = g(blo), ghi = g(bhi);
    if ((glo > 0.0) == (ghi > 0.0) && glo != 0.0 && ghi != 0.0) {
      // partner sits on the interval end up to rounding (family boundary)
      return std::abs(glo) < std::abs(ghi) ? blo : bhi;
    }
    RootOptions ro;
    ro.residual_tol = 1e-15;
    return solve_bracketed(g, dg, blo, bhi, ro);
  }

  // F(x) = x^p / h^p
  double regular(double x) const {
    if (std::abs(x) < switch_radius_) return laurent_.evaluate(x);
    const double alpha = tc_ + x;
    const double beta = partner(alpha);
    const double h = 2.0 * std::sin(0.5 * (alpha + beta) - gamma_) * std::sin(0.5 * (alpha - beta));
    return std::pow(x / h, p_);
  }

  void jet(double x, std::span<double> out) const {
    if (std::abs(x) < switch_radius_) {
      for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = laurent_.derivative(x, static_cast<int>(k));
      return;
    }
    const std::size_t n = out.size();
    const double alpha = tc_ + x;
    const double beta = partner(alpha);
    const TaylorSeries b = detail::partner_series_about_pair(alpha, beta, gamma_, n);
    const TaylorSeries t = TaylorSeries::variable(n, alpha);
    TaylorSeries S = (t + b) * 0.5;
    S += -gamma_;
    const TaylorSeries h = sin_cos(S).first * sin_cos((t - b) * 0.5).first * 2.0;
    TaylorSeries X = TaylorSeries::variable(n, x);
    const TaylorSeries F = (X / h).pow(p_);
    double fact = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0) fact *= static_cast<double>(k);
      out[k] = F[k] * fact;
    }
  }

  double lower() const { return lo_ - tc_; }
  double upper() const { return hi_ - tc_; }

 private:
  double gamma_, tc_, lo_, hi_;
  int p_;
  TaylorSeries laurent_;
  double radius_ = 1.0;
  double switch_radius_ = 0.1;
};

QuadratureResult family_integral(const PairFamily& fam, double gamma, int power,
                                 const FieldOptions& opts) {
  const FamilyKernel k(fam, gamma, power, opts.series_order);
  SingularIntegralSpec spec{k.lower(), k.upper(), 0.0, power,
                            [&k](double x, std::span<double> out) {
                              if (out.size() == 1)
                                out[0] = k.regular(x);
                              else
                                k.jet(x, out);
                            }};

  if (opts.method == Method::by_parts) return integrate_by_parts_log(spec, opts.tol);

  double xi = std::min({opts.xi0, 0.9 * k.distance_to_end(), 0.5 * k.radius()});
  for (int attempt = 0; attempt < 12; ++attempt) {
    try {
      return integrate_series_window(spec, xi, k.laurent(), opts.tol);
    } catch (const WindowTooLargeError&) {
      xi *= 0.5;
    }
  }
  throw WindowTooLargeError("Laurent window could not reach the requested tolerance");
}

FieldResult assemble(const MirrorGeometry& geom, const FocalPoint& point, int power,
                     double prefactor, const FieldOptions& opts) {
  FieldResult r;
  r.method = opts.method;
  if (extremum_near_edge(geom, point.gamma, opts.geometry)) {
    r.status = FieldStatus::edge_singular;
    r.value = r.scaled = r.error_estimate = kNaN;
    r.families_used = static_cast<int>(critical_angles(geom, point.gamma, opts.geometry).size());
    return r;
  }
  const auto fams = pair_domain(geom, point.gamma, opts.geometry);
  if (fams.empty()) {
    r.status = FieldStatus::no_pairs;
    return r;
  }
  r.families_used = static_cast<int>(fams.size());
  double sum = 0.0, err = 0.0;
  for (const auto& fam : fams) {
    const auto q = family_integral(fam, point.gamma, power, opts);
    sum += q.value;
    err += q.error;
  }
  r.scaled = prefactor * sum;
  r.value = r.scaled / std::pow(point.a, power);
  r.error_estimate = std::abs(prefactor) * err / std::pow(point.a, power);
  return r;
}

FieldResult closed_form(double scaled, double a, int power, Method m) {
  FieldResult r;
  r.method = m;
  r.families_used = 1;
  r.scaled = scaled;
  r.value = scaled / std::pow(a, power);
  return r;
}

FieldResult dispatch(const MirrorGeometry& geom, const FocalPoint& point, bool electric,
                     const FieldOptions& opts) {
  switch (opts.method) {
    case Method::exact:
      if (point.gamma != kPi / 2)
        throw DomainError("exact closed forms hold only at gamma = pi/2");
      return electric ? e_squared_perp_exact(geom, point.a) : phi_squared_perp_exact(geom, point.a);
    case Method::cusp:
      return electric ? cusp_e(geom, point.gamma, point.a) : cusp_phi(geom, point.gamma, point.a);
    default:
      return electric ? assemble(geom, point, 4, kEPrefactor, opts)
                      : assemble(geom, point, 2, kPhiPrefactor, opts);
  }
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::by_parts: return "by_parts";
    case Method::series_window: return "series_window";
    case Method::exact: return "exact";
    case Method::cusp: return "cusp";
  }
  return "?";
}

std::string_view to_string(FieldStatus s) {
  switch (s) {
    case FieldStatus::ok: return "ok";
    case FieldStatus::no_pairs: return "no_pairs";
    case FieldStatus::edge_singular: return "edge_singular";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::by_parts, Method::series_window, Method::exact, Method::cusp})
    if (name == to_string(m)) return m;
  throw DomainError("unknown method '" + std::string(name) + "'");
}

FieldResult phi_squared(const MirrorGeometry& geom, const FocalPoint& point,
                        const FieldOptions& opts) {
  return dispatch(geom, point, false, opts);
}

FieldResult e_squared(const MirrorGeometry& geom, const FocalPoint& point,
                      const FieldOptions& opts) {
  return dispatch(geom, point, true, opts);
}

FieldResult phi_squared_perp_exact(const MirrorGeometry& geom, double a) {
  const double pi3 = kPi * kPi * kPi;
  return closed_form(std::cos(geom.theta0) / std::sin(geom.theta0) / (12.0 * pi3), a, 2,
                     Method::exact);
}

FieldResult e_squared_perp_exact(const MirrorGeometry& geom, double a) {
  const double pi3 = kPi * kPi * kPi;
  const double c = std::cos(geom.theta0);
  const double s = std::sin(geom.theta0);
  return closed_form(-c * (3.0 - 2.0 * c * c) / (30.0 * pi3 * s * s * s), a, 4, Method::exact);
}

double cusp_slope_phi(const MirrorGeometry& geom) {
  const double c = std::cos(geom.theta0);
  return 1.0 / (12.0 * kPi * kPi * kPi * (1.0 - c) * (2.0 * c + 1.0));
}

double cusp_slope_e(const MirrorGeometry& geom) {
  const double c = std::cos(geom.theta0);
  const double s = std::sin(geom.theta0);
  return -kEPrefactor / (8.0 * s * s * (1.0 - c) * (2.0 * c + 1.0));
}

FieldResult cusp_phi(const MirrorGeometry& geom, double gamma, double a) {
  const double d = std::abs(gamma - 0.5 * kPi);
  FieldResult r = phi_squared_perp_exact(geom, 1.0);
  return closed_form(r.scaled + cusp_slope_phi(geom) * d, a, 2, Method::cusp);
}

FieldResult cusp_e(const MirrorGeometry& geom, double gamma, double a) {
  const double d = std::abs(gamma - 0.5 * kPi);
  FieldResult r = e_squared_perp_exact(geom, 1.0);
  return closed_form(r.scaled + cusp_slope_e(geom) * d, a, 4, Method::cusp);
}

std::vector<double> singular_directions(const MirrorGeometry& geom) {
  std::vector<double> out;
  for (int m = -2; m <= 0; ++m) {
    for (double edge : {geom.theta0, -geom.theta0}) {
      const double g = (3.0 * edge - (2 * m + 1) * kPi) / 2.0;
      if (g < 0.0 || g > kPi) continue;
      // an extremum must enter or leave the mirror as γ crosses g
      const double step = 1e-7;
      const auto count = [&](double gg) {
        int n = 0;
        for (double c : critical_angle_candidates(gg)) n += (c > -geom.theta0 && c < geom.theta0);
        return n;
      };
      const double below = std::max(0.0, g - step), above = std::min(kPi, g + step);
      if (count(below) != count(above) || below == g || above == g) out.push_back(g);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ValidityReport validity_report(const FocalPoint& point, const MirrorGeometry& geom,
                               double delta_theta, double lambda_m) {
  if (!(delta_theta > 0.0) || !(lambda_m > 0.0))
    throw DomainError("validity_report: delta_theta and lambda_m must be positive");
  const double a = point.a, b = geom.b;
  ValidityReport v{};
  v.diffraction_phi2 = 1.0 / (std::pow(a, 1.5) * std::sqrt(b));
  v.diffraction_e2 = 1.0 / (std::pow(a, 3.5) * std::sqrt(b));
  v.amplitude_ratio = std::sqrt(a / b);
  v.soft_edge_bound_phi2 = 1.0 / (a * a * delta_theta);
  v.soft_edge_bound_e2 = 1.0 / (std::pow(a, 4) * std::pow(delta_theta, 3));
  v.reflectivity_bound_phi2 = 1.0 / (lambda_m * lambda_m);
  v.reflectivity_bound_e2 = 1.0 / std::pow(lambda_m, 4);
  v.geometric_optics_questionable = v.amplitude_ratio >= 0.1;
  return v;
}

}  // namespace focalfluc
