// Command line front end: run the scenario catalog, verify scenario files,
// integrate warping trajectories, and parse component expressions.
//
// Exit codes: 0 success, 1 a check failed, 2 scenario or numeric error,
// 3 usage error.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "grs/catalog.hpp"

namespace {

void print_scenario(const grs::ScenarioReport& rep, bool verbose) {
  std::printf("%-26s %-10s %s   %6.1f ms\n", rep.name.c_str(),
              rep.kind.c_str(), rep.ok ? "ok  " : "FAIL", rep.wall_ms);
  for (const grs::CheckResult& c : rep.checks) {
    bool as_expected = c.pass == c.expected;
    if (!verbose && as_expected && c.expected) continue;
    const char* note = "";
    if (!c.expected) note = as_expected ? "  (documented failure)" : "  (expected to fail)";
    std::printf("    %-24s %s   value %.3e   tol %.1e%s\n", c.name.c_str(),
                c.pass ? "pass" : "FAIL", c.value, c.tol, note);
  }
}

// Prints the report to stdout, or writes it to a file when a path was given
// with --json. Returns false if the file cannot be written.
bool emit_json(const nlohmann::ordered_json& j, const std::string& path) {
  if (path.empty()) {
    std::printf("%s\n", j.dump(2).c_str());
    return true;
  }
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return false;
  }
  return true;
}

int run_catalog(const std::string& name, const grs::RunConfig& cfg,
                bool as_json, const std::string& json_path, bool verbose) {
  std::vector<grs::ScenarioReport> reps;
  if (name == "all") {
    for (const grs::CatalogEntry& e : grs::catalog()) reps.push_back(e.run(cfg));
  } else {
    reps.push_back(grs::run_scenario(name, cfg));
  }
  bool ok = true;
  for (const grs::ScenarioReport& r : reps) ok = ok && r.ok;

  if (as_json) {
    nlohmann::ordered_json j = name == "all"
                                   ? grs::catalog_report_json(reps, cfg)
                                   : grs::report_json(reps.front());
    if (!emit_json(j, json_path)) return 2;
  } else {
    for (const grs::ScenarioReport& r : reps) print_scenario(r, verbose);
    std::printf("%zu scenario%s, %s\n", reps.size(),
                reps.size() == 1 ? "" : "s", ok ? "all ok" : "FAILURES");
  }
  return ok ? 0 : 1;
}

int run_verify(const std::string& path, bool as_json,
               const std::string& json_path) {
  grs::ScenarioReport rep = grs::verify_scenario_file(path);
  if (as_json) {
    if (!emit_json(grs::report_json(rep), json_path)) return 2;
  } else {
    print_scenario(rep, true);
  }
  return rep.ok ? 0 : 1;
}

struct WarpArgs {
  double eps = 1.0, lambda = 1.0, c = 1.0;
  double phi0 = 1.0, dphi0 = 1.0, ddphi0 = 0.0;
  double t0 = 1.0, t1 = 2.0, step = 1e-3;
  double knots = 0.02;
  std::string csv;
  bool check = false;
};

int run_warp(const WarpArgs& a) {
  grs::WarpTrajectory traj =
      grs::integrate_phi(a.eps, a.lambda, a.c, a.phi0, a.dphi0, a.ddphi0,
                         a.t0, a.t1, a.step);
  double r9 = 0.0, r10 = 0.0;
  for (const grs::WarpSample& row : traj.rows) {
    r9 = std::max(r9, row.res9);
    r10 = std::max(r10, row.res10);
  }
  const grs::WarpSample& last = traj.rows.back();
  std::printf("rows %zu   t in [%g, %g]   step %g\n", traj.rows.size(), a.t0,
              a.t1, a.step);
  std::printf("phi(t1) %.12g   dphi(t1) %.12g   f(t1) %.12g\n", last.phi,
              last.dphi, last.f);
  std::printf("max slope residual %.3e   max second order residual %.3e\n",
              r9, r10);

  if (!a.csv.empty()) {
    std::FILE* out = std::fopen(a.csv.c_str(), "w");
    if (!out) {
      std::fprintf(stderr, "cannot write %s\n", a.csv.c_str());
      return 2;
    }
    std::fprintf(out, "t,phi,dphi,ddphi,f,res9,res10\n");
    for (const grs::WarpSample& row : traj.rows)
      std::fprintf(out, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.t,
                   row.phi, row.dphi, row.ddphi, row.f, row.res9, row.res10);
    std::fclose(out);
    std::printf("wrote %s\n", a.csv.c_str());
  }

  if (!a.check) return 0;

  grs::WarpTrajectory thin = grs::thin_trajectory(traj, a.knots);
  grs::MetricField g =
      grs::assemble_warped_metric(thin, grs::fiber_model(1, 1, 1, a.c));
  grs::ExprPtr f = grs::warped_potential(thin);

  double span = a.t1 - a.t0;
  std::vector<std::array<double, 4>> pts;
  for (int s = 0; s < 5; ++s) {
    double t = a.t0 + (0.1 + 0.2 * s) * span;
    pts.push_back({t, 0.15 - 0.07 * s, -0.1 + 0.06 * s, 0.2 - 0.09 * s});
  }
  double worst = 0.0;
  for (const auto& p : pts) {
    grs::SolitonResidual sr =
        grs::soliton_residual(grs::analyze(g, p.data()), f, traj.lambda);
    worst = std::max(worst, sr.residual / sr.scale);
  }
  grs::SolitonIdentityResiduals ids =
      grs::soliton_identities(g, f, traj.lambda, pts);
  double idv = std::max({ids.grad_tau, ids.first_integral,
                         ids.curvature_contraction}) /
               ids.scale;
  bool ok = worst <= 1e-6 && idv <= 1e-6;
  std::printf("assembled soliton residual %.3e   identities %.3e   %s\n",
              worst, idv, ok ? "ok" : "FAIL");
  return ok ? 0 : 1;
}

int run_parse(const std::string& src, const std::string& coord_list) {
  std::vector<std::string> coords;
  std::string cur;
  for (char ch : coord_list) {
    if (ch == ',') {
      if (!cur.empty()) coords.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) coords.push_back(cur);
  grs::ExprPtr e = grs::parse_expr(src, coords);
  std::printf("%s\n", grs::print_expr(e, coords).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature and soliton checks for extension, warped, and "
               "plane wave metrics"};
  app.require_subcommand(1);

  // catalog list / catalog run
  CLI::App* cat = app.add_subcommand("catalog", "example scenario catalog");
  cat->require_subcommand(1);
  CLI::App* list = cat->add_subcommand("list", "print the scenario names");

  CLI::App* run = cat->add_subcommand("run", "run one scenario, or all");
  std::string run_name, run_json_path;
  grs::RunConfig cfg;
  bool run_verbose = false;
  run->add_option("name", run_name, "scenario name from the list, or all")
      ->required();
  run->add_option("--points", cfg.points, "base sample budget per check")
      ->capture_default_str()
      ->check(CLI::Range(1, 1000000));
  run->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  run->add_option("--tol", cfg.tol, "tolerance multiplier")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  CLI::Option* run_json = run->add_option(
      "--json", run_json_path, "print the json report, or write it to a path");
  run_json->expected(0, 1);
  run->add_flag("-v,--verbose", run_verbose, "print every check line");

  // verify
  CLI::App* verify = app.add_subcommand("verify", "check a scenario file");
  std::string verify_path, verify_json_path;
  verify->add_option("file", verify_path, "scenario json file")->required();
  CLI::Option* verify_json = verify->add_option(
      "--json", verify_json_path,
      "print the json report, or write it to a path");
  verify_json->expected(0, 1);

  // warp
  CLI::App* warp =
      app.add_subcommand("warp", "integrate a warping trajectory");
  WarpArgs wa;
  warp->add_option("--eps", wa.eps, "sign of g(dt, dt), +1 or -1")
      ->capture_default_str();
  warp->add_option("--lambda", wa.lambda, "soliton constant")
      ->capture_default_str();
  warp->add_option("--c", wa.c, "fiber curvature")->capture_default_str();
  warp->add_option("--phi0", wa.phi0, "phi at t0")->capture_default_str();
  warp->add_option("--dphi0", wa.dphi0, "phi' at t0")->capture_default_str();
  warp->add_option("--ddphi0", wa.ddphi0, "phi'' at t0")
      ->capture_default_str();
  warp->add_option("--t0", wa.t0, "interval start")->capture_default_str();
  warp->add_option("--t1", wa.t1, "interval end")->capture_default_str();
  warp->add_option("--step", wa.step, "integration step")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  warp->add_option("--knots", wa.knots, "spline knot spacing for --verify")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  warp->add_option("--csv", wa.csv, "write the trajectory as csv");
  warp->add_flag("--verify", wa.check,
                 "assemble the metric and check the soliton equation");

  // parse
  CLI::App* parse = app.add_subcommand("parse", "echo an expression in "
                                                "canonical form");
  std::string parse_src, parse_coords = "x1,x2";
  parse->add_option("--check", parse_src, "expression to parse")->required();
  parse->add_option("--coords", parse_coords, "comma separated names")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (list->parsed()) {
      for (const grs::CatalogEntry& e : grs::catalog())
        std::printf("%-26s %-10s %s\n", e.name.c_str(), e.kind.c_str(),
                    e.description.c_str());
      return 0;
    }
    if (run->parsed())
      return run_catalog(run_name, cfg, run_json->count() > 0, run_json_path,
                         run_verbose);
    if (verify->parsed())
      return run_verify(verify_path, verify_json->count() > 0,
                        verify_json_path);
    if (warp->parsed()) return run_warp(wa);
    if (parse->parsed()) return run_parse(parse_src, parse_coords);
  } catch (const grs::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 3;
}
