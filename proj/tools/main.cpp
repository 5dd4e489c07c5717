// lanelab: radial ground states, ball Green functions, the Gtilde/Htilde
// field, the half-space sign criterion, blow-up ladders on balls, and local
// Pohozaev checks, from one entry point.
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lanelab/acceptance.hpp"
#include "lanelab/bounded.hpp"
#include "lanelab/greens.hpp"
#include "lanelab/groundstate.hpp"
#include "lanelab/gtilde.hpp"
#include "lanelab/halfspace.hpp"
#include "lanelab/io.hpp"
#include "lanelab/pohozaev.hpp"

using namespace lanelab;
namespace fs = std::filesystem;

namespace {

struct Global {
  std::string out_dir = ".";
  std::string config_file;
  int workers = 1;
  bool deterministic = false;

  fs::path out(const std::string& name) const {
    fs::create_directories(out_dir);
    return fs::path(out_dir) / name;
  }
  void manifest(const std::string& command,
                std::map<std::string, std::string> params) const {
    io::Manifest m;
    m.command = command;
    m.params = std::move(params);
    m.deterministic = deterministic;
    io::Manifest mm = m;
    mm.write((fs::path(out_dir) / (command + "_manifest.json")).string());
  }
};

Point parse_point(const std::string& s, int n) {
  Point p;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) p.push_back(std::stod(tok));
  if (static_cast<int>(p.size()) != n)
    throw CLI::ValidationError("point", "expected " + std::to_string(n) + " coordinates");
  return p;
}

int run_groundstate(const Global& g, int n, double p, double eps, std::string out_file) {
  using namespace groundstate;
  const double q = (eps > 0.0) ? q_epsilon(n, p, eps) : critical_q(n, p);
  ExponentPair e{n, p, q};
  if (e.p * e.q <= 1.0 || e.p > e.q) {
    std::cerr << "groundstate: invalid exponent pair (" << p << "," << q << ")\n";
    return 2;
  }
  ProfilePair prof = shoot_groundstate(e);
  MassConstants mc = compute_mass(prof, e);

  nlohmann::json j;
  j["n"] = n;
  j["p"] = p;
  j["q"] = q;
  j["grid"] = prof.grid;
  j["u"] = prof.u;
  j["v"] = prof.v;
  j["shoot_param"] = prof.shoot_param;
  j["decay"] = {{"regime", prof.tail.regime == Regime::p_gt   ? "p_gt"
                           : prof.tail.regime == Regime::p_eq ? "p_eq"
                                                              : "p_lt"},
                {"a", prof.tail.a},
                {"b", prof.tail.b},
                {"residual", prof.tail.residual},
                {"log_base", "e"}};
  j["mass"] = {{"A_U", mc.A_U},
               {"A_V", mc.A_V_finite ? nlohmann::json(mc.A_V) : nlohmann::json("inf")},
               {"S", mc.S},
               {"E_U", mc.E_U},
               {"E_V", mc.E_V}};
  std::ofstream f(g.out(out_file));
  f << j.dump(2) << "\n";
  g.manifest("groundstate", {{"n", std::to_string(n)},
                             {"p", io::format_g(p)},
                             {"eps", io::format_g(eps)},
                             {"out", out_file}});
  std::cout << "groundstate: v0=" << io::format_g(prof.shoot_param)
            << " a=" << io::format_g(prof.tail.a) << " b=" << io::format_g(prof.tail.b)
            << " A_U=" << io::format_g(mc.A_U) << " S=" << io::format_g(mc.S) << " -> "
            << out_file << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for Lane-Emden blow-up objects"};
  app.require_subcommand(1);
  Global g;
  if (const char* env = std::getenv("LANELAB_OUT_DIR")) g.out_dir = env;
  app.add_option("--out-dir", g.out_dir, "output directory");
  app.add_option("--config", g.config_file, "key=value config file");
  app.add_option("--workers", g.workers, "worker count for sweeps");
  app.add_flag("--deterministic", g.deterministic,
               "omit timestamps; byte-stable outputs");

  // groundstate
  auto* cg = app.add_subcommand("groundstate", "entire-space radial ground state");
  int gs_n = 3;
  double gs_p = 5.0, gs_eps = 0.0;
  std::string gs_out = "profile.json";
  cg->add_option("--n", gs_n)->required();
  cg->add_option("--p", gs_p)->required();
  cg->add_option("--eps", gs_eps);
  cg->add_option("--out", gs_out);

  // greens
  auto* cgr = app.add_subcommand("greens", "ball Green function probes");
  int gr_n = 3;
  double gr_radius = 1.0;
  std::string gr_probe;
  cgr->add_option("--n", gr_n);
  cgr->add_option("--radius", gr_radius);
  cgr->add_option("--probe", gr_probe, "x1,..,xn,y1,..,yn");
  auto* cgv = cgr->add_subcommand("verify", "boundary asymptotics report");
  std::string gv_dgrid = "0.1,0.05,0.02,0.01";
  std::string gv_out = "report.csv";
  cgv->add_option("--d-grid", gv_dgrid);
  cgv->add_option("--out", gv_out);

  // gtilde
  auto* ct = app.add_subcommand("gtilde", "Gtilde/Htilde field on a ball");
  int gt_n = 5;
  double gt_p = 1.0, gt_radius = 1.0, gt_tol = 1e-6;
  std::string gt_x, gt_y;
  ct->add_option("--n", gt_n);
  ct->add_option("--p", gt_p);
  ct->add_option("--radius", gt_radius);
  ct->add_option("--x", gt_x);
  ct->add_option("--y", gt_y);
  ct->add_option("--tol", gt_tol);
  auto* cts = ct->add_subcommand("scan", "boundary growth scan of dHtilde(x,x)");
  std::string ts_dgrid = "0.16,0.12,0.09,0.0675,0.050625,0.0379688,0.0284766";
  std::string ts_out = "growth.csv";
  cts->add_option("--d-grid", ts_dgrid);
  cts->add_option("--out", ts_out);

  // criterion
  auto* cc = app.add_subcommand("criterion", "half-space sign criterion");
  int cr_n = 5;
  double cr_p = 1.0;
  cc->add_option("--n", cr_n);
  cc->add_option("--p", cr_p);
  auto* ccs = cc->add_subcommand("sweep", "p sweep with CSV output");
  double sw_from = 1.0, sw_to = 1.3, sw_step = 0.05;
  std::string sw_out = "sweep.csv";
  ccs->add_option("--p-from", sw_from);
  ccs->add_option("--p-to", sw_to);
  ccs->add_option("--step", sw_step);
  ccs->add_option("--out", sw_out);

  // blowup
  auto* cb = app.add_subcommand("blowup", "subcritical ladder on a ball");
  int b_n = 3, b_steps = 6;
  double b_p = 4.0, b_eps0 = 0.025, b_radius = 1.0;
  std::string b_out = "blowup.csv";
  cb->add_option("--n", b_n);
  cb->add_option("--p", b_p);
  cb->add_option("--eps0", b_eps0);
  cb->add_option("--steps", b_steps);
  cb->add_option("--radius", b_radius);
  cb->add_option("--out", b_out);

  // pohozaev
  auto* cp = app.add_subcommand("pohozaev", "local identity on a sphere");
  std::string p_solution, p_center = "0,0,0";
  double p_radius = 0.5;
  int p_axis = 0;
  cp->add_option("--solution", p_solution, "blowup solution JSON (radial profile)");
  cp->add_option("--center", p_center);
  cp->add_option("--radius", p_radius);
  cp->add_option("--axis", p_axis);

  // verify-all
  auto* cv = app.add_subcommand("verify-all", "run the acceptance suite");
  bool v_quick = false;
  cv->add_flag("--quick", v_quick);

  CLI11_PARSE(app, argc, argv);

  if (!g.config_file.empty()) {
    // config provides defaults for keys not set on the command line
    auto cfg = io::read_config(g.config_file);
    if (cfg.count("out_dir") && g.out_dir == ".") g.out_dir = cfg["out_dir"];
    if (cfg.count("workers") && g.workers == 1) g.workers = std::stoi(cfg["workers"]);
  }

  try {
    if (cg->parsed()) return run_groundstate(g, gs_n, gs_p, gs_eps, gs_out);

    if (cgr->parsed()) {
      BallDomain dom(gr_n, gr_radius);
      if (cgv->parsed()) {
        std::vector<double> dg;
        std::stringstream ss(gv_dgrid);
        std::string tok;
        while (std::getline(ss, tok, ',')) dg.push_back(std::stod(tok));
        auto rep = greens_ball::verify_boundary_asymptotics(dom, dg);
        io::Csv csv;
        csv.header = {"d", "ratio_H", "ratio_dH", "hn_margin_2d", "hn_margin_literal"};
        for (const auto& r : rep.rows)
          csv.rows.push_back({r.d, r.ratio_H, r.ratio_dH, r.hn_margin_2d,
                              r.hn_margin_lit});
        csv.write(g.out(gv_out).string());
        g.manifest("greens_verify", {{"n", std::to_string(gr_n)},
                                     {"radius", io::format_g(gr_radius)},
                                     {"d_grid", gv_dgrid}});
        std::cout << "greens verify: max |ratio_H-1|=" << io::format_g(rep.max_dev_H)
                  << " max |ratio_dH-1|=" << io::format_g(rep.max_dev_dH) << " -> "
                  << gv_out << "\n";
        return 0;
      }
      if (gr_probe.empty()) {
        std::cerr << "greens: --probe required (or use 'greens verify')\n";
        return 2;
      }
      Point xy = parse_point(gr_probe, 2 * gr_n);
      Point x(xy.begin(), xy.begin() + gr_n), y(xy.begin() + gr_n, xy.end());
      auto ev = greens_ball::greens(x, y, dom);
      std::cout << "G=" << io::format_g(ev.G) << " H=" << io::format_g(ev.H)
                << " c_n=" << io::format_g(ev.c_n) << "\n";
      return 0;
    }

    if (ct->parsed()) {
      BallDomain dom(gt_n, gt_radius);
      gtilde_field::SingularQuadConfig qc;
      qc.tol = gt_tol;
      if (cts->parsed()) {
        std::vector<double> dg;
        std::stringstream ss(ts_dgrid);
        std::string tok;
        while (std::getline(ss, tok, ',')) dg.push_back(std::stod(tok));
        auto scan = gtilde_field::boundary_growth_scan(dom, gt_p, dg, qc);
        io::Csv csv;
        csv.header = {"d", "value", "derivative", "derivative_direct", "slope"};
        for (const auto& r : scan.rows)
          csv.rows.push_back({r.d, r.phi, r.dphi_half, r.dphi_direct, scan.slope});
        csv.write(g.out(ts_out).string());
        g.manifest("gtilde_scan", {{"n", std::to_string(gt_n)},
                                   {"p", io::format_g(gt_p)},
                                   {"d_grid", ts_dgrid}});
        std::cout << "gtilde scan: slope=" << io::format_g(scan.slope)
                  << " (direct " << io::format_g(scan.slope_direct) << ") positive="
                  << scan.positive_sign << " -> " << ts_out << "\n";
        return scan.positive_sign ? 0 : 1;
      }
      if (gt_x.empty() || gt_y.empty()) {
        std::cerr << "gtilde: --x and --y required (or use 'gtilde scan')\n";
        return 2;
      }
      Point x = parse_point(gt_x, gt_n), y = parse_point(gt_y, gt_n);
      auto ev = gtilde_field::gtilde(x, y, dom, gt_p, qc);
      std::cout << "Gtilde=" << io::format_g(ev.value)
                << " err=" << io::format_g(ev.quad_error)
                << " converged=" << ev.converged << "\n";
      return ev.converged ? 0 : 1;
    }

    if (cc->parsed()) {
      if (cr_n < 5) {
        std::cerr << "criterion: n >= 5 required\n";
        return 2;
      }
      halfspace::CriterionConfig hc;
      if (ccs->parsed()) {
        std::vector<double> ps;
        for (double p = sw_from; p <= sw_to + 1e-12; p += sw_step) ps.push_back(p);
        // rows are independent; compute in a deterministic order, optionally
        // in parallel by index
        std::vector<halfspace::CriterionReport> reps(ps.size());
        if (g.workers > 1) {
          std::vector<std::future<halfspace::CriterionReport>> futs;
          for (double p : ps)
            futs.push_back(std::async(std::launch::async,
                                      [&, p] { return halfspace::criterion(cr_n, p, hc); }));
          for (std::size_t i = 0; i < futs.size(); ++i) reps[i] = futs[i].get();
        } else {
          for (std::size_t i = 0; i < ps.size(); ++i)
            reps[i] = halfspace::criterion(cr_n, ps[i], hc);
        }
        io::Csv csv;
        csv.header = {"n", "p", "F", "G", "diff", "err", "verdict"};
        for (const auto& r : reps)
          csv.rows.push_back({static_cast<double>(r.n), r.p, r.F, r.Gv, r.diff, r.err,
                              r.verdict == halfspace::Verdict::holds ? 1.0 : 0.0});
        csv.write(g.out(sw_out).string());
        g.manifest("criterion_sweep", {{"n", std::to_string(cr_n)},
                                       {"p_from", io::format_g(sw_from)},
                                       {"p_to", io::format_g(sw_to)},
                                       {"step", io::format_g(sw_step)}});
        std::cout << "criterion sweep -> " << sw_out << "\n";
        return 0;
      }
      auto rep = halfspace::criterion(cr_n, cr_p, hc);
      std::cout << "criterion n=" << cr_n << " p=" << io::format_g(cr_p)
                << ": F=" << io::format_g(rep.F) << " G=" << io::format_g(rep.Gv)
                << " diff=" << io::format_g(rep.diff) << " err=" << io::format_g(rep.err)
                << " verdict="
                << (rep.verdict == halfspace::Verdict::holds ? "holds" : "inconclusive")
                << "\n";
      return rep.verdict == halfspace::Verdict::holds ? 0 : 1;
    }

    if (cb->parsed()) {
      BallDomain dom(b_n, b_radius);
      auto e = groundstate::critical_pair(b_n, b_p);
      auto prof = groundstate::shoot_groundstate(e);
      auto mc = groundstate::compute_mass(prof, e);
      std::vector<bounded::SystemSolution> sols;
      io::Csv csv;
      csv.header = {"eps", "q_eps", "lambda", "S_eps", "limit_quantity",
                    "farfield_ratio"};
      for (int k = 0; k < b_steps; ++k) {
        bounded::SolverConfig sc;
        auto sol = bounded::solve_ball(b_n, b_p, b_eps0 * std::pow(2.0, -k), dom, sc);
        double ffv = std::numeric_limits<double>::quiet_NaN();
        if (10.0 / sol.lambda < 0.5 * b_radius)
          ffv = bounded::far_field_check(sol, dom, mc, {0.5 * b_radius})[0].ratio_v;
        csv.rows.push_back({sol.eps, sol.q_eps, sol.lambda, sol.S_eps,
                            bounded::limit_quantity(sol, b_n), ffv});
        sols.push_back(std::move(sol));
      }
      auto diag = bounded::diagnostics(sols);
      csv.write(g.out(b_out).string());
      g.manifest("blowup", {{"n", std::to_string(b_n)},
                            {"p", io::format_g(b_p)},
                            {"eps0", io::format_g(b_eps0)},
                            {"steps", std::to_string(b_steps)},
                            {"radius", io::format_g(b_radius)}});
      std::cout << "blowup: lambda increasing=" << diag.lambda_increasing
                << " S decreasing=" << diag.S_decreasing
                << " limit=" << io::format_g(diag.limit_estimate)
                << " target=" << io::format_g(bounded::limit_target(b_n, b_p, mc, prof, dom))
                << " -> " << b_out << "\n";
      return 0;
    }

    if (cp->parsed()) {
      // radial solution from a groundstate/blowup JSON is not required for the
      // bubble default; with --solution, sample the stored radial profile
      pohozaev::Field u, v;
      double pexp = 5.0, qexp = 5.0;
      int dim = 3;
      if (p_solution.empty()) {
        u.value = [](const Point& x) {
          return std::pow(1.0 + dot(x, x) / 3.0, -0.5);
        };
        u.grad = [](const Point& x) {
          const double f = std::pow(1.0 + dot(x, x) / 3.0, -1.5) / 3.0;
          return scale(x, -f);
        };
        v = u;
      } else {
        std::ifstream f(p_solution);
        if (!f) {
          std::cerr << "pohozaev: cannot open " << p_solution << "\n";
          return 2;
        }
        nlohmann::json j;
        f >> j;
        dim = j["n"];
        pexp = j["p"];
        qexp = j["q"];
        auto grid = j["grid"].get<std::vector<double>>();
        auto uu = j["u"].get<std::vector<double>>();
        auto vv = j["v"].get<std::vector<double>>();
        auto interp = [grid](std::vector<double> vals) {
          return [grid, vals](double r) {
            auto it = std::upper_bound(grid.begin(), grid.end(), r);
            int i = std::clamp(static_cast<int>(it - grid.begin()) - 1, 0,
                               static_cast<int>(grid.size()) - 2);
            const double t = (r - grid[i]) / (grid[i + 1] - grid[i]);
            return vals[i] * (1 - t) + vals[i + 1] * t;
          };
        };
        auto ur = interp(uu), vr = interp(vv);
        u = pohozaev::with_fd_gradient(
            [ur](const Point& x) { return ur(norm(x)); }, 1e-5);
        v = pohozaev::with_fd_gradient(
            [vr](const Point& x) { return vr(norm(x)); }, 1e-5);
      }
      Point c = parse_point(p_center, dim);
      auto res = pohozaev::pohozaev_residual(u, v, c, p_radius, p_axis, pexp, qexp);
      std::cout << "pohozaev: L=" << io::format_g(res.L) << " R=" << io::format_g(res.R)
                << " residual=" << io::format_g(res.residual) << "\n";
      return 0;
    }

    if (cv->parsed()) {
      auto suite = lanelab::acceptance::run_suite(v_quick, std::cout);
      return suite.all_pass ? 0 : 1;
    }
  } catch (const std::invalid_argument& ex) {
    std::cerr << "validation error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
