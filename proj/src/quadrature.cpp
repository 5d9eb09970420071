#include "focalfluc/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "focalfluc/errors.hpp"

namespace focalfluc {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error, abs_value;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double value = resk * half;
  return Panel{a, b, value, std::abs((resk - resg) * half), resabs * std::abs(half)};
}

double log_abs_sq(double x) { return 2.0 * std::log(std::abs(x)); }

// Adds the outer integrals (ordinary quadrature) when there is no interior
// singular point.
QuadratureResult integrate_plain(const SingularIntegralSpec& spec, double tol) {
  const double x0 = spec.singular_point.value_or(0.0);
  const bool has_pole = spec.singular_point.has_value();
  const auto integrand = [&](double x) {
    double v = 0.0;
    spec.regular_factor(x, std::span<double>(&v, 1));
    return has_pole ? v / std::pow(x - x0, spec.power) : v;
  };
  return adaptive_integrate(integrand, spec.lower, spec.upper, tol);
}

enum class PoleLocation { none, interior, endpoint };

PoleLocation locate(const SingularIntegralSpec& spec) {
  if (!spec.singular_point) return PoleLocation::none;
  const double x0 = *spec.singular_point;
  if (x0 == spec.lower || x0 == spec.upper) return PoleLocation::endpoint;
  if (x0 > spec.lower && x0 < spec.upper) return PoleLocation::interior;
  return PoleLocation::none;
}

}  // namespace

QuadratureResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                    double tol, const AdaptiveOptions& opts) {
  if (a == b) return {};
  if (a > b) {
    auto r = adaptive_integrate(f, b, a, tol, opts);
    r.value = -r.value;
    return r;
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::priority_queue<Panel> heap;
  Panel first = kronrod15(f, a, b);
  double total = first.value, err = first.error, absval = first.abs_value;
  heap.push(first);
  int evaluations = 15;
  int intervals = 1;

  const auto target = [&] {
    return std::max({tol * std::abs(total), opts.abs_floor, 4.0 * eps * absval});
  };
  while (err > target()) {
    if (intervals >= opts.max_intervals)
      throw NonConvergenceError("adaptive_integrate: interval budget exhausted", err);
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // cannot split further; accept what floating point allows
      break;
    }
    heap.pop();
    Panel left = kronrod15(f, worst.a, mid);
    Panel right = kronrod15(f, mid, worst.b);
    evaluations += 30;
    ++intervals;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    absval += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    if (intervals % 64 == 0) {
      // resum to keep the running totals free of drift
      auto copy = heap;
      total = err = absval = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        absval += copy.top().abs_value;
        copy.pop();
      }
    }
  }
  return {total, err, evaluations};
}

double finite_part_power(int n, double A, double B) {
  if (n >= 1 && (A == 0.0 || B == 0.0))
    throw DomainError("finite_part_power: singular point at an interval end diverges");
  if (n == 1) return std::log(std::abs(B / A));
  const double e = 1.0 - n;
  return (std::pow(B, e) - std::pow(A, e)) / e;
}

QuadratureResult integrate_by_parts_log(const SingularIntegralSpec& spec, double tol) {
  if (spec.power != 2 && spec.power != 4)
    throw DomainError("integrate_by_parts_log: power must be 2 or 4");
  switch (locate(spec)) {
    case PoleLocation::none: return integrate_plain(spec, tol);
    case PoleLocation::endpoint:
      throw EdgeSingularError("integrate_by_parts_log: singular point at an interval end");
    case PoleLocation::interior: break;
  }
  const double x0 = *spec.singular_point;
  const int p = spec.power;

  std::array<double, 5> jet{};
  const auto eval = [&](double x) {
    spec.regular_factor(x, std::span<double>(jet.data(), static_cast<std::size_t>(p + 1)));
    return jet;
  };

  const auto surface = [&](double end) {
    const auto d = eval(end);
    const double x = end - x0;
    const double lg = log_abs_sq(x);
    if (p == 2) return -d[0] / x + 0.5 * d[1] * lg;
    return -(d[0] / (3.0 * x * x * x) + d[1] / (6.0 * x * x) + d[2] / (6.0 * x) -
             d[3] * lg / 12.0);
  };

  const auto log_integrand = [&](double x) {
    const auto d = eval(x);
    return d[static_cast<std::size_t>(p)] * log_abs_sq(x - x0);
  };
  const QuadratureResult left = adaptive_integrate(log_integrand, spec.lower, x0, tol);
  const QuadratureResult right = adaptive_integrate(log_integrand, x0, spec.upper, tol);
  const double weight = (p == 2) ? -0.5 : -1.0 / 12.0;

  QuadratureResult r;
  r.value = weight * (left.value + right.value) + surface(spec.upper) - surface(spec.lower);
  r.error = std::abs(weight) * (left.error + right.error);
  r.evaluations = left.evaluations + right.evaluations + 2;
  return r;
}

QuadratureResult integrate_series_window(const SingularIntegralSpec& spec, double xi0,
                                         std::span<const double> laurent_coeffs, double tol) {
  switch (locate(spec)) {
    case PoleLocation::none: return integrate_plain(spec, tol);
    case PoleLocation::endpoint:
      throw EdgeSingularError("integrate_series_window: singular point at an interval end");
    case PoleLocation::interior: break;
  }
  const double x0 = *spec.singular_point;
  if (!(xi0 > 0.0 && xi0 < x0 - spec.lower && xi0 < spec.upper - x0))
    throw DomainError("integrate_series_window: window must fit inside the interval");
  const int p = spec.power;

  double window = 0.0;
  double tail = 0.0;
  int seen = 0;
  for (std::size_t k = laurent_coeffs.size(); k-- > 0;) {
    const int e = static_cast<int>(k) - p;
    double term;
    if (e >= 0) {
      term = (e % 2 == 0) ? 2.0 * std::pow(xi0, e + 1) / (e + 1) : 0.0;
    } else {
      term = finite_part_power(-e, -xi0, xi0);
    }
    const double contrib = laurent_coeffs[k] * term;
    window += contrib;
    // the two highest regular terms stand in for the truncated remainder;
    // the singular terms are integrated exactly
    if (term != 0.0 && e >= 0 && seen < 2) {
      tail += std::abs(contrib);
      ++seen;
    }
  }

  const auto integrand = [&](double x) {
    double v = 0.0;
    spec.regular_factor(x, std::span<double>(&v, 1));
    return v / std::pow(x - x0, p);
  };
  const QuadratureResult left = adaptive_integrate(integrand, spec.lower, x0 - xi0, tol);
  const QuadratureResult right = adaptive_integrate(integrand, x0 + xi0, spec.upper, tol);

  QuadratureResult r;
  r.value = window + left.value + right.value;
  r.error = tail + left.error + right.error;
  r.evaluations = left.evaluations + right.evaluations;
  const double scale = std::max({std::abs(r.value), std::abs(window), 1e-300});
  if (tail > tol * scale && tail > 1e-15)
    throw WindowTooLargeError("integrate_series_window: Laurent remainder exceeds tolerance");
  return r;
}

double cutoff_kernel_g2(double x, double lambda) {
  const double l2 = lambda * lambda;
  const double d = l2 + x * x;
  return (l2 - x * x) / (d * d);
}

double cutoff_kernel_g4(double x, double lambda) {
  const double l2 = lambda * lambda;
  const double d = l2 + x * x;
  const double d2 = d * d;
  return 6.0 * (x * x - 2.0 * lambda * x - l2) * (x * x + 2.0 * lambda * x - l2) / (d2 * d2);
}

double cutoff_kernel_g2_integral(double x0, double lambda) {
  return 2.0 * x0 / (lambda * lambda + x0 * x0);
}

double cutoff_kernel_g4_integral(double x0, double lambda) {
  const double d = lambda * lambda + x0 * x0;
  return -4.0 * x0 * (x0 * x0 - 3.0 * lambda * lambda) / (d * d * d);
}

}  // namespace focalfluc
