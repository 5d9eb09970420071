// focalfluc: sweeps, closed forms, profiles, diffraction and observables as CSV/JSON.
//
// Exit codes: 0 success, 1 usage or invalid input, 2 numerical nonconvergence, 3 I/O.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "focalfluc/cli_io.hpp"
#include "focalfluc/errors.hpp"

using namespace focalfluc;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Args {
  std::vector<double> theta0;
  double b = 1.0;
  std::vector<double> gamma;
  double gamma_min = 0.0;
  double gamma_max = kPi;
  std::optional<int> steps;
  double a = 1.0;
  std::string method = "by_parts";
  double xi0 = 0.2;
  std::optional<double> tol;
  std::string format = "csv";
  std::string output = "-";

  double k = 200.0;
  double theta_inc = 0.3;
  std::vector<double> y0;

  std::vector<double> lambda;
  std::optional<double> lambda_theta0;
  double a_um = 1.0;
  double t_ms = 1.0;
  double alpha_ratio = 1.0;
  double mass_ratio = 1.0;

  double perturb_prefactor = 1.0;
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
  return v;
}

void emit(const Args& args, const Table& table) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (args.output != "-") {
    file.open(args.output);
    if (!file) throw IoError("cannot open output file " + args.output);
    out = &file;
  }
  if (args.format == "json") write_json(*out, table);
  else write_csv(*out, table);
  out->flush();
  if (!*out) throw IoError("write failed: " + args.output);
}

double single(const std::vector<double>& v, const char* name) {
  if (v.size() != 1) throw DomainError(std::string("--") + name + " takes exactly one value here");
  return v[0];
}

void cmd_scan(const Args& args) {
  SweepSpec spec;
  spec.theta0 = single(args.theta0, "theta0");
  spec.b = args.b;
  spec.a = args.a;
  spec.method = parse_sweep_method(args.method);
  spec.xi0 = args.xi0;
  spec.tol = args.tol.value_or(1e-10);
  std::vector<RunRecord> rows;
  if (!args.gamma.empty()) {
    spec.validate();
    rows.resize(args.gamma.size());
    parallel_for(rows.size(), threads_from_env(),
                 [&](std::size_t i) { rows[i] = evaluate_point(spec, args.gamma[i]); });
  } else {
    spec.gamma_min = args.gamma_min;
    spec.gamma_max = args.gamma_max;
    spec.steps = args.steps.value_or(101);
    rows = run_sweep(spec, threads_from_env());
  }
  emit(args, to_table(rows));
}

void cmd_exact(const Args& args) {
  std::vector<double> grid = args.theta0;
  if (grid.empty()) grid = linspace(0.02, kMaxHalfAngle - 0.02, args.steps.value_or(104));
  emit(args, exact_table(grid, args.a));
}

void cmd_profile(const Args& args) {
  std::vector<double> gammas = args.gamma;
  if (gammas.empty()) gammas = {0.0, kPi / 4, kPi / 2};
  emit(args, profile_table(gammas, args.steps.value_or(241)));
}

void cmd_diffraction(const Args& args) {
  std::vector<double> ys = args.y0;
  if (ys.empty()) {
    for (int i = 0; i <= 10; ++i) ys.push_back(2.0 * args.b * std::pow(32.0, i / 10.0));
  }
  emit(args, diffraction_table(args.k, args.theta_inc, args.b, ys, args.tol.value_or(1e-9)));
}

void cmd_observables(const Args& args) {
  std::vector<double> lambdas = args.lambda;
  if (args.lambda_theta0) {
    const double gamma = args.gamma.empty() ? kPi / 2 : single(args.gamma, "gamma");
    const auto e = e_squared(MirrorGeometry::make(*args.lambda_theta0, args.b),
                             FocalPoint::make(1.0, gamma));
    if (e.status == FieldStatus::edge_singular)
      throw DomainError("<E^2> diverges at this direction");
    lambdas.push_back(lambda_coefficient(e.scaled));
  }
  if (lambdas.empty()) lambdas = {1e-3, 0.0};
  emit(args, observables_table(lambdas, args.a_um, args.t_ms,
                               AtomParams::make(args.alpha_ratio, args.mass_ratio)));
}

void cmd_validate(const Args& args) {
  ValidationOptions opts;
  opts.prefactor_scale = args.perturb_prefactor;
  opts.threads = threads_from_env();
  const auto checks = run_validation(opts);
  int failed = 0;
  for (const auto& c : checks) failed += !c.passed;
  emit(args, to_table(checks));
  std::cerr << (failed ? std::to_string(failed) + " suite(s) failed\n" : "all suites passed\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vacuum field fluctuations near the focus of a parabolic cylindrical mirror"};
  app.set_config("--config", "", "key=value file; flags on the command line override it");
  app.require_subcommand(1);
  Args args;

  app.add_option("--theta0", args.theta0, "mirror half-angle(s) in radians");
  app.add_option("--b", args.b, "focus-to-mirror scale (also the strip distance for diffraction)");
  app.add_option("--gamma", args.gamma, "direction(s) gamma in radians");
  app.add_option("--gamma-min", args.gamma_min, "sweep start");
  app.add_option("--gamma-max", args.gamma_max, "sweep end");
  app.add_option("--steps", args.steps, "grid points");
  app.add_option("--a", args.a, "distance from the focal line");
  app.add_option("--method", args.method, "by_parts | series_window | both")
      ->check(CLI::IsMember({"by_parts", "series_window", "both"}));
  app.add_option("--xi0", args.xi0, "series window half-width");
  app.add_option("--tol", args.tol, "relative (fields) or absolute (strip) tolerance");
  app.add_option("--format", args.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", args.output, "output file, - for stdout");

  app.add_option("--k", args.k, "wavenumber for diffraction");
  app.add_option("--theta-inc", args.theta_inc, "incidence angle for diffraction");
  app.add_option("--y0", args.y0, "strip half-widths");

  app.add_option("--lambda", args.lambda, "Lambda = a^4 <E^2> values");
  app.add_option("--lambda-theta0", args.lambda_theta0, "compute Lambda from a mirror of this half-angle");
  app.add_option("--a-um", args.a_um, "atom distance in micrometres");
  app.add_option("--t-ms", args.t_ms, "interaction time in milliseconds");
  app.add_option("--alpha-ratio", args.alpha_ratio, "polarizability relative to sodium");
  app.add_option("--mass-ratio", args.mass_ratio, "mass relative to sodium");

  app.add_option("--perturb-prefactor", args.perturb_prefactor,
                 "scale computed values in the exact-match suite (negative control)");

  struct Sub {
    const char* name;
    const char* help;
    void (*run)(const Args&);
  };
  const Sub subs[] = {
      {"scan", "<phi^2>, <E^2> over a gamma grid (needs --theta0)", cmd_scan},
      {"exact", "closed-form perpendicular values over a theta0 grid", cmd_exact},
      {"profile", "incident-angle map f(theta'; gamma)", cmd_profile},
      {"diffraction", "finite-strip scattered wave and residual scaling", cmd_diffraction},
      {"observables", "deflection, phase shift and trap depth", cmd_observables},
      {"validate", "method agreement, xi0 stability, exact match, symmetry, signs", cmd_validate},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    std::cerr << e.what() << '\n';
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    for (const auto& s : subs)
      if (app.got_subcommand(s.name)) s.run(args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NonConvergenceError& e) {
    std::cerr << "nonconvergence: " << e.what() << " (achieved " << e.achieved_error() << ")\n";
    return kExitNumeric;
  } catch (const WindowTooLargeError& e) {
    std::cerr << "nonconvergence: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InsufficientRangeError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NoTrapError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
