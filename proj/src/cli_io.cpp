#include "focalfluc/cli_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "focalfluc/errors.hpp"
#include "json.hpp"

namespace focalfluc {

std::string_view to_string(SweepMethod m) {
  switch (m) {
    case SweepMethod::by_parts: return "by_parts";
    case SweepMethod::series_window: return "series_window";
    case SweepMethod::both: return "both";
  }
  return "?";
}

SweepMethod parse_sweep_method(std::string_view name) {
  if (name == "by_parts") return SweepMethod::by_parts;
  if (name == "series_window") return SweepMethod::series_window;
  if (name == "both") return SweepMethod::both;
  throw DomainError("unknown method '" + std::string(name) + "' (by_parts|series_window|both)");
}

void SweepSpec::validate() const {
  MirrorGeometry::make(theta0, b);
  if (!(a > 0.0)) throw DomainError("a must be positive");
  if (!(gamma_min >= 0.0 && gamma_max <= kPi && gamma_min < gamma_max))
    throw DomainError("need 0 <= gamma_min < gamma_max <= pi");
  if (steps < 2) throw DomainError("steps must be at least 2");
  if (!(xi0 > 0.0 && xi0 < 0.5)) throw DomainError("xi0 must lie in (0, 0.5)");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
}

double SweepSpec::gamma_at(int i) const {
  if (i == steps - 1) return gamma_max;
  return gamma_min + (gamma_max - gamma_min) * i / (steps - 1);
}

unsigned threads_from_env() {
  unsigned n = 0;
  if (const char* env = std::getenv("FOCALFLUC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) n = static_cast<unsigned>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = threads_from_env();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex m;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (!first) first = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

RunRecord evaluate_point(const SweepSpec& spec, double gamma) {
  const MirrorGeometry geom = MirrorGeometry::make(spec.theta0, spec.b);
  const FocalPoint point = FocalPoint::make(spec.a, gamma);
  FieldOptions opts;
  opts.xi0 = spec.xi0;
  opts.tol = spec.tol;
  opts.method = spec.method == SweepMethod::series_window ? Method::series_window : Method::by_parts;

  FieldResult phi = phi_squared(geom, point, opts);
  FieldResult e = e_squared(geom, point, opts);
  if (spec.method == SweepMethod::both && phi.status == FieldStatus::ok) {
    opts.method = Method::series_window;
    const FieldResult phi_w = phi_squared(geom, point, opts);
    const FieldResult e_w = e_squared(geom, point, opts);
    phi.error_estimate = std::max(phi.error_estimate, std::abs(phi.value - phi_w.value));
    e.error_estimate = std::max(e.error_estimate, std::abs(e.value - e_w.value));
  }

  RunRecord r;
  r.theta0 = spec.theta0;
  r.gamma = gamma;
  r.a = spec.a;
  r.method = std::string(to_string(spec.method));
  r.families = phi.families_used;
  r.status = (phi.status == FieldStatus::edge_singular || e.status == FieldStatus::edge_singular)
                 ? FieldStatus::edge_singular
                 : phi.status;
  if (r.status != FieldStatus::edge_singular) {
    r.phi2 = phi.value;
    r.e2 = e.value;
    r.phi2_scaled = phi.scaled;
    r.e2_scaled = e.scaled;
    r.err_phi2 = phi.error_estimate;
    r.err_e2 = e.error_estimate;
  }
  return r;
}

std::vector<RunRecord> run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  std::vector<RunRecord> out(static_cast<std::size_t>(spec.steps));
  parallel_for(out.size(), threads,
               [&](std::size_t i) { out[i] = evaluate_point(spec, spec.gamma_at(static_cast<int>(i))); });
  return out;
}

namespace {

Cell opt(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

}  // namespace

Table to_table(const std::vector<RunRecord>& records) {
  Table t{kRunColumns, {}};
  for (const auto& r : records) {
    t.rows.push_back({r.theta0, r.gamma, r.a, opt(r.phi2), opt(r.e2), opt(r.phi2_scaled),
                      opt(r.e2_scaled), r.method, static_cast<long>(r.families),
                      std::string(to_string(r.status)), opt(r.err_phi2), opt(r.err_e2)});
  }
  return t;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) out << format_number(v);
            else if constexpr (std::is_same_v<T, long>) out << v;
            else if constexpr (std::is_same_v<T, std::string>) out << v;
            else if constexpr (std::is_same_v<T, bool>) out << (v ? "true" : "false");
          },
          row[i]);
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) obj[table.columns[i]] = nullptr;
            else obj[table.columns[i]] = v;
          },
          row[i]);
    }
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

Table exact_table(const std::vector<double>& theta0s, double a) {
  Table t{{"theta0", "a", "phi2", "e2", "phi2_scaled", "e2_scaled", "divergent"}, {}};
  for (double th : theta0s) {
    const MirrorGeometry geom = MirrorGeometry::make(th);
    const FieldResult phi = phi_squared_perp_exact(geom, a);
    const FieldResult e = e_squared_perp_exact(geom, a);
    bool divergent = false;
    for (double g : singular_directions(geom))
      if (std::abs(g - 0.5 * kPi) < 0.075) divergent = true;
    t.rows.push_back({th, a, phi.value, e.value, phi.scaled, e.scaled, divergent});
  }
  return t;
}

Table profile_table(const std::vector<double>& gammas, int points) {
  if (points < 2) throw DomainError("profile needs at least 2 points");
  Table t{{"theta_prime"}, {}};
  char buf[48];
  for (double g : gammas) {
    std::snprintf(buf, sizeof buf, "f_gamma_%.6g", g);
    t.columns.emplace_back(buf);
  }
  for (int i = 0; i < points; ++i) {
    const double th = -kMaxHalfAngle + 2.0 * kMaxHalfAngle * i / (points - 1);
    std::vector<Cell> row{th};
    for (double g : gammas) row.emplace_back(incident_map(th, g));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table diffraction_table(double k, double theta, double b, const std::vector<double>& y0s,
                        double tol) {
  Table t{{"k", "theta", "b", "y0", "strip_re", "strip_im", "strip_abs", "strip_error",
           "geometric_re", "geometric_im", "residual_abs", "self_difference", "fringe_residual",
           "exponent"},
          {}};
  Cell exponent = std::monostate{};
  try {
    exponent = residual_scaling_exponent(DiffractionSetup::make(k, theta, b, y0s.at(0)), y0s, tol);
  } catch (const InsufficientRangeError&) {
  }
  for (double y0 : y0s) {
    const DiffractionSetup s = DiffractionSetup::make(k, theta, b, y0);
    const StripResult strip = strip_scattered_wave(s, tol);
    Cell gre = std::monostate{}, gim = std::monostate{}, res = std::monostate{}, fringe = std::monostate{};
    try {
      const auto g = geometric_wave(s);
      gre = g.real();
      gim = g.imag();
      res = std::abs(g - strip.value);
      const double one[] = {y0};
      fringe = fringe_averaged_residuals(s, one, tol).at(0);
    } catch (const NoSpecularPathError&) {
    } catch (const InsufficientRangeError&) {
    }
    const double self = std::abs(diffraction_residual(s, tol, y0).value);
    t.rows.push_back({k, theta, b, y0, strip.value.real(), strip.value.imag(),
                      std::abs(strip.value), strip.error, gre, gim, res, self, fringe, exponent});
  }
  return t;
}

Table observables_table(const std::vector<double>& lambdas, double a_microns, double t_millis,
                        const AtomParams& atom) {
  Table t{{"lambda", "a_um", "t_ms", "alpha_ratio", "mass_ratio", "deflection", "phase_rad",
           "trap_temperature_K"},
          {}};
  for (double lam : lambdas) {
    const ObservableInputs in = ObservableInputs::make(lam, a_microns, t_millis);
    Cell trap = std::monostate{};
    if (lam > 0.0) trap = trap_temperature(in, atom);
    else if (lam == 0.0) trap = 0.0;
    t.rows.push_back({lam, a_microns, t_millis, atom.polarizability_ratio, atom.mass_ratio,
                      beam_deflection(in, atom), interferometer_phase(in, atom), trap});
  }
  return t;
}

// ---------------------------------------------------------------- validation

namespace {

const std::vector<double> kGridTheta0 = {0.3, 0.5, 1.0, 1.4, 1.8};
constexpr int kGridGammas = 21;

double rel_dev(double x, double y) {
  const double scale = std::max({std::abs(x), std::abs(y), 1e-10});
  return std::abs(x - y) / scale;
}

struct GridPoint {
  bool ok = false;
  double phi_bp = 0, e_bp = 0, phi_sw = 0, e_sw = 0;
  double xi_spread_phi = 0, xi_spread_e = 0;
};

}  // namespace

std::vector<ValidationCheck> run_validation(const ValidationOptions& vo) {
  std::vector<ValidationCheck> out;

  // by_parts vs series_window and ξ₀ stability on the 5×21 grid
  const std::size_t n = kGridTheta0.size() * kGridGammas;
  std::vector<GridPoint> grid(n);
  parallel_for(n, vo.threads, [&](std::size_t idx) {
    const MirrorGeometry geom = MirrorGeometry::make(kGridTheta0[idx / kGridGammas]);
    const double gamma = kPi * static_cast<double>(idx % kGridGammas) / (kGridGammas - 1);
    const FocalPoint pt = FocalPoint::make(1.0, gamma);
    FieldOptions bp;
    const FieldResult p = phi_squared(geom, pt, bp);
    const FieldResult e = e_squared(geom, pt, bp);
    GridPoint& g = grid[idx];
    if (p.status != FieldStatus::ok || e.status != FieldStatus::ok) return;
    g.ok = true;
    g.phi_bp = p.scaled;
    g.e_bp = e.scaled;
    FieldOptions sw;
    sw.method = Method::series_window;
    double pmin = 1e300, pmax = -1e300, emin = 1e300, emax = -1e300;
    for (double xi : {0.1, 0.2, 0.3}) {
      sw.xi0 = xi;
      const double ps = phi_squared(geom, pt, sw).scaled;
      const double es = e_squared(geom, pt, sw).scaled;
      if (xi == 0.2) {
        g.phi_sw = ps;
        g.e_sw = es;
      }
      pmin = std::min(pmin, ps), pmax = std::max(pmax, ps);
      emin = std::min(emin, es), emax = std::max(emax, es);
    }
    g.xi_spread_phi = rel_dev(pmin, pmax);
    g.xi_spread_e = rel_dev(emin, emax);
  });

  double agree = 0, xi = 0, sym = 0;
  int used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const GridPoint& g = grid[i];
    if (!g.ok) continue;
    ++used;
    agree = std::max({agree, rel_dev(g.phi_bp, g.phi_sw), rel_dev(g.e_bp, g.e_sw)});
    xi = std::max({xi, g.xi_spread_phi, g.xi_spread_e});
    const std::size_t j = (i / kGridGammas) * kGridGammas + (kGridGammas - 1 - i % kGridGammas);
    if (grid[j].ok)
      sym = std::max({sym, rel_dev(g.phi_bp, grid[j].phi_bp), rel_dev(g.e_bp, grid[j].e_bp)});
  }
  const std::string grid_note = std::to_string(used) + " of " + std::to_string(n) + " grid points ok";
  out.push_back({"method_agreement", agree < 1e-6, agree, 1e-6, grid_note});
  out.push_back({"xi0_stability", xi < 1e-6, xi, 1e-6, "xi0 in {0.1, 0.2, 0.3}; " + grid_note});
  out.push_back({"symmetry", sym < 1e-6, sym, 1e-6, "gamma -> pi - gamma; " + grid_note});

  // exact perpendicular values
  double exact = 0;
  for (double th : kGridTheta0) {
    const MirrorGeometry geom = MirrorGeometry::make(th);
    const FocalPoint pt = FocalPoint::make(1.0, 0.5 * kPi);
    exact = std::max(exact, rel_dev(vo.prefactor_scale * phi_squared(geom, pt).scaled,
                                    phi_squared_perp_exact(geom, 1.0).scaled));
    exact = std::max(exact, rel_dev(vo.prefactor_scale * e_squared(geom, pt).scaled,
                                    e_squared_perp_exact(geom, 1.0).scaled));
  }
  out.push_back({"exact_match", exact < 1e-6, exact, 1e-6,
                 "gamma = pi/2, theta0 in {0.3, 0.5, 1.0, 1.4, 1.8}"});
  {
    const MirrorGeometry geom = MirrorGeometry::make(0.5 * kPi);
    const FocalPoint pt = FocalPoint::make(1.0, 0.5 * kPi);
    const double dev = std::max(std::abs(vo.prefactor_scale * phi_squared(geom, pt).scaled),
                                std::abs(vo.prefactor_scale * e_squared(geom, pt).scaled));
    out.push_back({"exact_match_right_angle", dev < 1e-9, dev, 1e-9, "theta0 = pi/2, both vanish"});
  }

  // sign structure
  struct SignSweep {
    double theta0, lo, hi;
  };
  const std::vector<SignSweep> sweeps = {{0.5, 0.9, 2.2}, {1.0, 0.2, kPi - 0.2}, {1.8, 1.15, 1.99}};
  std::vector<std::vector<RunRecord>> rows;
  for (const auto& s : sweeps) {
    SweepSpec spec;
    spec.theta0 = s.theta0;
    spec.gamma_min = s.lo;
    spec.gamma_max = s.hi;
    spec.steps = 101;
    rows.push_back(run_sweep(spec, vo.threads));
  }
  int small_violations = 0, opposite_violations = 0, window_rows = 0;
  for (std::size_t k = 0; k < sweeps.size(); ++k) {
    for (const auto& r : rows[k]) {
      if (r.status != FieldStatus::ok) continue;
      const double p = *r.phi2_scaled, e = *r.e2_scaled;
      if (k < 2 && !(p > 0 && e < 0)) ++small_violations;
      if (std::abs(p) > 1e-8 && std::abs(e) > 1e-8 && (p > 0) == (e > 0)) ++opposite_violations;
      if (k == 2 && e > 0 && p < 0 && std::abs(r.gamma - 0.5 * kPi) < 0.3) ++window_rows;
    }
  }
  out.push_back({"sign_small_mirrors", small_violations == 0, double(small_violations), 0,
                 "rows violating phi2 > 0, E2 < 0 at theta0 = 0.5, 1.0"});
  out.push_back({"sign_large_mirror_window", window_rows > 0, double(window_rows), 1,
                 "rows near pi/2 with E2 > 0 and phi2 < 0 at theta0 = 1.8"});
  out.push_back({"sign_opposite", opposite_violations == 0, double(opposite_violations), 0,
                 "rows with equal signs where both |scaled| > 1e-8"});
  return out;
}

Table to_table(const std::vector<ValidationCheck>& checks) {
  Table t{{"suite", "passed", "measured", "tolerance", "detail"}, {}};
  for (const auto& c : checks) t.rows.push_back({c.suite, c.passed, c.measured, c.tolerance, c.detail});
  return t;
}

}  // namespace focalfluc
