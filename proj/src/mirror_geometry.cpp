#include "focalfluc/mirror_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "focalfluc/errors.hpp"
#include "focalfluc/roots.hpp"

namespace focalfluc {

namespace {

// sin(u + nπ/2) without rounding nπ/2.
double sin_quarter_shift(double u, int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return std::sin(u);
    case 1: return std::cos(u);
    case 2: return -std::sin(u);
    default: return -std::cos(u);
  }
}

// [f(β) − f(α)] / (2 sin((β − α)/2)). Vanishes exactly at the partner and stays
// well conditioned as α, β merge at a critical angle (where it tends to f′).
double deflated_difference(double alpha, double beta, double gamma) {
  const double s = alpha + beta;
  const double d = beta - alpha;
  return std::cos(0.5 * s - gamma) + std::cos(0.5 * d) * std::cos(s - gamma);
}

double deflated_difference_dbeta(double alpha, double beta, double gamma) {
  const double s = alpha + beta;
  const double d = beta - alpha;
  return -0.5 * std::sin(0.5 * s - gamma) - 0.5 * std::sin(0.5 * d) * std::cos(s - gamma) -
         std::cos(0.5 * d) * std::sin(s - gamma);
}

std::vector<double> branch_points(const MirrorGeometry& geom, const std::vector<double>& crit) {
  std::vector<double> pts;
  pts.reserve(crit.size() + 2);
  pts.push_back(-geom.theta0);
  pts.insert(pts.end(), crit.begin(), crit.end());
  pts.push_back(geom.theta0);
  return pts;
}

}  // namespace

MirrorGeometry MirrorGeometry::make(double theta0, double b) {
  if (!(theta0 > 0.0 && theta0 < kMaxHalfAngle))
    throw DomainError("mirror half-angle must satisfy 0 < theta0 < 2*pi/3, got " +
                      std::to_string(theta0));
  if (!(b > 0.0)) throw DomainError("mirror scale b must be positive");
  return MirrorGeometry{theta0, b};
}

FocalPoint FocalPoint::make(double a, double gamma) {
  if (!(a > 0.0)) throw DomainError("distance a must be positive");
  if (!(gamma >= 0.0 && gamma <= kPi))
    throw DomainError("direction gamma must lie in [0, pi], got " + std::to_string(gamma));
  return FocalPoint{a, gamma};
}

double incident_map(double theta_prime, double gamma) {
  return (1.0 + std::cos(theta_prime)) * std::sin(theta_prime - gamma);
}

double incident_map_derivative(double theta_prime, double gamma, int order) {
  if (order < 1) throw DomainError("incident_map_derivative: order must be >= 1");
  // f = sin(θ′−γ) + ½ sin(2θ′−γ) − ½ sin γ
  return sin_quarter_shift(theta_prime - gamma, order) +
         std::ldexp(sin_quarter_shift(2.0 * theta_prime - gamma, order), order - 1);
}

TaylorSeries incident_map_taylor(double theta_prime, double gamma, std::size_t n) {
  TaylorSeries s(n);
  if (n == 0) return s;
  s[0] = incident_map(theta_prime, gamma);
  double factorial = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    factorial *= static_cast<double>(k);
    s[k] = incident_map_derivative(theta_prime, gamma, static_cast<int>(k)) / factorial;
  }
  return s;
}

double path_difference_factor(double alpha, double beta, double gamma) {
  // |cos(α−γ) − cos(β−γ)| in product form
  return 2.0 * std::abs(std::sin(0.5 * (alpha + beta) - gamma) * std::sin(0.5 * (alpha - beta)));
}

std::vector<double> critical_angle_candidates(double gamma) {
  std::vector<double> out;
  for (int m = -2; m <= 0; ++m) out.push_back((2.0 * gamma + (2 * m + 1) * kPi) / 3.0);
  return out;
}

std::vector<double> critical_angles(const MirrorGeometry& geom, double gamma,
                                    const GeometryTolerances& tol) {
  std::vector<double> out;
  const auto df = [gamma](double t) { return incident_map_derivative(t, gamma, 1); };
  const auto d2f = [gamma](double t) { return incident_map_derivative(t, gamma, 2); };
  for (double seed : critical_angle_candidates(gamma)) {
    if (!(seed > -geom.theta0 && seed < geom.theta0)) continue;
    RootOptions ro;
    ro.residual_tol = tol.residual;
    double c = seed;
    const double w = 1e-3;
    if ((df(seed - w) > 0.0) != (df(seed + w) > 0.0)) {
      c = solve_bracketed(df, d2f, seed - w, seed + w, ro);
    }
    if (std::abs(d2f(c)) < 1e-8)
      throw DegenerateExtremumError("critical angle with vanishing second derivative");
    if (c > -geom.theta0 && c < geom.theta0) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool extremum_near_edge(const MirrorGeometry& geom, double gamma, const GeometryTolerances& tol) {
  for (double c : critical_angle_candidates(gamma)) {
    // on the edge (up to rounding) or just inside it; an extremum just
    // outside leaves every remaining integral finite
    const double inside = geom.theta0 - std::abs(c);
    if (inside > -tol.angle && inside < tol.edge) return true;
  }
  return false;
}

namespace detail {

std::optional<double> partner_on_branch(double alpha, double lo, double hi, double gamma,
                                        const GeometryTolerances& tol) {
  const double target = incident_map(alpha, gamma);
  const double scale = tol.residual * std::max(1.0, std::abs(target));
  const auto g = [&](double b) { return deflated_difference(alpha, b, gamma); };
  const auto dg = [&](double b) { return deflated_difference_dbeta(alpha, b, gamma); };

  const double glo = g(lo);
  const double ghi = g(hi);
  std::optional<double> beta;
  if ((glo > 0.0) != (ghi > 0.0) || glo == 0.0 || ghi == 0.0) {
    RootOptions ro;
    ro.residual_tol = 0.1 * tol.residual;
    beta = solve_bracketed(g, dg, lo, hi, ro);
  } else {
    // f(α) may sit on a branch end up to rounding (family boundaries)
    for (double end : {lo, hi}) {
      if (std::abs(incident_map(end, gamma) - target) <= scale) beta = end;
    }
  }
  if (!beta || std::abs(*beta - alpha) <= tol.angle) return std::nullopt;
  return beta;
}

TaylorSeries partner_series_about_extremum(double theta_c, double gamma, std::size_t n) {
  // y(x) = β − θ_c = −x + Σ a_k x^k. Substituting into F(y) = F(x) with
  // F(t) = f(θ_c + t) − f(θ_c), the x^m coefficient fixes a_{m−1} through the
  // F₂·y² term alone: a_{m−1} = c_m / (2F₂) with c_m evaluated at a_{m−1} = 0.
  TaylorSeries fc = incident_map_taylor(theta_c, gamma, n + 1);
  fc[0] = 0.0;
  const double f2 = fc[2];
  if (std::abs(f2) < 1e-12) throw DegenerateExtremumError("partner series: f'' vanishes");

  TaylorSeries y(n);
  if (n > 1) y[1] = -1.0;
  for (std::size_t m = 3; m <= n; ++m) {
    TaylorSeries trunc = y.resized(m + 1);
    const std::vector<double> outer(fc.coeffs().begin(), fc.coeffs().begin() + m + 1);
    TaylorSeries lhs = compose(outer, trunc);
    const double cm = lhs[m] - fc[m];
    y[m - 1] = cm / (2.0 * f2);
  }
  return y;
}

TaylorSeries partner_series_about_pair(double alpha, double beta, double gamma, std::size_t n) {
  // β(α + t) = β + u(t); Σ_j Fβ_j u^j = Σ_k Fα_k t^k, solved order by order.
  TaylorSeries fa = incident_map_taylor(alpha, gamma, n);
  TaylorSeries fb = incident_map_taylor(beta, gamma, n);
  fb[0] = 0.0;
  const double fb1 = fb.size() > 1 ? fb[1] : 0.0;
  if (std::abs(fb1) < 1e-14) throw SingularDerivativeError("partner series at a critical pair");
  TaylorSeries u(n);
  for (std::size_t k = 1; k < n; ++k) {
    TaylorSeries trunc = u.resized(k + 1);
    const std::vector<double> outer(fb.coeffs().begin(), fb.coeffs().begin() + k + 1);
    const double comp = compose(outer, trunc)[k];
    u[k] = (fa[k] - comp) / fb1;
  }
  u[0] = beta;
  return u;
}

}  // namespace detail

std::optional<double> partner_angle(double alpha, const MirrorGeometry& geom, double gamma,
                                    const GeometryTolerances& tol) {
  if (alpha < -geom.theta0 - tol.angle || alpha > geom.theta0 + tol.angle)
    throw DomainError("partner_angle: alpha outside the mirror");
  const auto crit = critical_angles(geom, gamma, tol);
  for (double c : crit) {
    if (std::abs(alpha - c) <= tol.angle) return std::nullopt;
  }
  const auto pts = branch_points(geom, crit);
  std::size_t own = 0;
  while (own + 2 < pts.size() && alpha > pts[own + 1]) ++own;

  std::optional<double> found;
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    if (j == own) continue;
    auto beta = detail::partner_on_branch(alpha, pts[j], pts[j + 1], gamma, tol);
    if (!beta) continue;
    if (found && std::abs(*found - *beta) > 1e3 * tol.angle)
      throw MultiplicityError("more than one partner angle; mirror too large for two-ray optics");
    found = beta;
  }
  return found;
}

std::optional<RayPair> ray_pair(double alpha, const MirrorGeometry& geom, double gamma,
                                const GeometryTolerances& tol) {
  auto beta = partner_angle(alpha, geom, gamma, tol);
  if (!beta) return std::nullopt;
  RayPair p{alpha, *beta, path_difference_factor(alpha, *beta, gamma), 0.0};
  p.dbeta_dalpha = partner_derivative(p, gamma);
  return p;
}

double partner_derivative(const RayPair& pair, double gamma, double tol) {
  const double fb = incident_map_derivative(pair.beta, gamma, 1);
  if (std::abs(fb) < tol) throw SingularDerivativeError("dbeta/dalpha: f'(beta) vanishes");
  return incident_map_derivative(pair.alpha, gamma, 1) / fb;
}

std::vector<PairFamily> pair_domain(const MirrorGeometry& geom, double gamma,
                                    const GeometryTolerances& tol) {
  const auto crit = critical_angles(geom, gamma, tol);
  const auto pts = branch_points(geom, crit);
  const auto is_edge = [&](double t) { return std::abs(std::abs(t) - geom.theta0) == 0.0; };

  std::vector<PairFamily> out;
  for (std::size_t i = 0; i < crit.size(); ++i) {
    const double c = crit[i];
    const double left = pts[i];
    const double right = pts[i + 2];
    const double fc = incident_map(c, gamma);
    const double dl = std::abs(incident_map(left, gamma) - fc);
    const double dr = std::abs(incident_map(right, gamma) - fc);
    const double scale = tol.residual * std::max(1.0, std::abs(fc));

    PairFamily fam{c, left, right,
                   incident_map_derivative(c, gamma, 2) > 0.0 ? ExtremumKind::minimum
                                                              : ExtremumKind::maximum};
    if (std::abs(dl - dr) <= scale) {
      // both ends reach the same level: the whole span pairs up
    } else if (dl < dr) {
      if (!is_edge(left))
        throw MultiplicityError("pair family bounded by another extremum (three-ray regime)");
      auto hi = detail::partner_on_branch(left, c, right, gamma, tol);
      fam.alpha_hi = hi ? *hi : right;
    } else {
      if (!is_edge(right))
        throw MultiplicityError("pair family bounded by another extremum (three-ray regime)");
      auto lo = detail::partner_on_branch(right, left, c, gamma, tol);
      fam.alpha_lo = lo ? *lo : left;
    }
    fam.edge_singular = std::abs(c - geom.theta0) < tol.edge || std::abs(c + geom.theta0) < tol.edge;
    out.push_back(fam);
  }
  return out;
}

std::vector<double> partner_series(double theta_c, double gamma, int order) {
  if (order < 2) throw DomainError("partner_series: order must be >= 2");
  if (std::abs(incident_map_derivative(theta_c, gamma, 2)) < 1e-12)
    throw DegenerateExtremumError("partner_series: f'' vanishes at theta_c");
  const auto y = detail::partner_series_about_extremum(theta_c, gamma,
                                                       static_cast<std::size_t>(order) + 1);
  return std::vector<double>(y.coeffs().begin() + 2, y.coeffs().end());
}

double edge_shift(const MirrorGeometry& geom, double gamma) {
  const double s = std::sin(geom.theta0);
  const double c = std::cos(geom.theta0);
  return 2.0 * s * s * (0.5 * kPi - gamma) / ((1.0 - c) * (2.0 * c + 1.0));
}

}  // namespace focalfluc
