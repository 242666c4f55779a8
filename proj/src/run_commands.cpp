#include "ek/run_commands.hpp"

#include <filesystem>
#include <fstream>

#include "ek/ekf1.hpp"
#include "ek/evolve1d.hpp"
#include "ek/minimize2d.hpp"
#include "ek/spectral1d.hpp"
#include "ek/wave1d.hpp"

namespace ek {

namespace {

namespace fs = std::filesystem;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Err::IoError, "cannot write " + path);
  os << text;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_manifest(const RunConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  write_json(cfg.output_dir + "/manifest.json", cfg.resolved);
}

WaveKind parse_kind(const std::string& s) {
  if (s == "auto") return WaveKind::Auto;
  if (s == "depression") return WaveKind::Depression;
  if (s == "elevation") return WaveKind::Elevation;
  throw Error(Err::ValidationError, "kind must be auto|depression|elevation");
}

FieldFile profile_to_ekf1(const WaveProfile1D& p) {
  FieldFile f;
  f.dims = {(long long)p.rho.size()};
  f.spacing = {p.h};
  f.field_names = {"rho", "u"};
  f.payload = {p.rho, p.u};
  f.c = p.c;
  return f;
}

int cmd_wave1d(const RunConfig& cfg) {
  auto m = rescale(cfg.model, cfg.model.rho_inf);
  const double c = cfg.params.at("c").get<double>();
  const double cs = sound_speed(m, 1.0);
  if (c >= cs)
    throw Error(Err::SupersonicSpeed,
                "requested speed " + format_g17(c) + " is not below c_s = " + format_g17(cs));
  ProfileOptions opts;
  opts.n_half = int(cfg.params.at("n_half").get<long long>());
  opts.tail_tol = cfg.params.at("tail_tol").get<double>();
  opts.kind = parse_kind(cfg.params.at("kind").get<std::string>());
  auto rep = find_turning_points(m, c);
  auto prof = build_profile(m, c, opts);
  write_field_ekf1(profile_to_ekf1(prof), cfg.output_dir + "/profile.ekf1");

  nlohmann::json out;
  out["c"] = c;
  out["sound_speed"] = cs;
  out["L"] = prof.L;
  out["h"] = prof.h;
  out["rho_turn"] = prof.rho_turn;
  out["kind"] = prof.kind == WaveKind::Depression ? "depression" : "elevation";
  if (rep.rho_m) out["rho_m"] = *rep.rho_m;
  if (rep.rho_M) out["rho_M"] = *rep.rho_M;
  out["P_rho_quadrature"] = momentum_of_speed(m, c);
  out["P_x_quadrature"] = momentum_on_profile(prof);
  out["E_rho_quadrature"] = energy_of_speed(m, c);
  out["E_x_quadrature"] = energy_on_profile(prof, m);
  out["ode_residual_max"] = ode_residual_max(prof, m);
  write_json(cfg.output_dir + "/report.json", out);
  return 0;
}

int cmd_curve1d(const RunConfig& cfg) {
  auto m = rescale(cfg.model, cfg.model.rho_inf);
  std::vector<double> cs_list;
  const double c0 = cfg.params.at("c_min").get<double>();
  const double c1 = cfg.params.at("c_max").get<double>();
  const long long count = cfg.params.at("count").get<long long>();
  if (count < 2) throw Error(Err::ValidationError, "count must be at least 2");
  for (long long i = 0; i < count; ++i)
    cs_list.push_back(c0 + (c1 - c0) * double(i) / double(count - 1));
  QuadratureOptions q;
  q.panels = int(cfg.params.at("panels").get<long long>());
  auto curve = speed_curve(m, cs_list, q);
  std::string csv = "c,P,E,m,dPdc,flags\n";
  for (const auto& row : curve.rows) {
    csv += format_g17(row.c) + "," + format_g17(row.P) + "," + format_g17(row.E) + "," +
           format_g17(row.m) + "," + format_g17(row.dPdc) + "," + row.flags + "\n";
  }
  write_text(cfg.output_dir + "/curve.csv", csv);
  return 0;
}

int cmd_spectrum1d(const RunConfig& cfg) {
  auto m = rescale(cfg.model, cfg.model.rho_inf);
  const double c = cfg.params.at("c").get<double>();
  ProfileOptions opts;
  opts.n_half = int(cfg.params.at("n_half").get<long long>());
  opts.tail_tol = cfg.params.at("tail_tol").get<double>();
  auto prof = build_profile(m, c, opts);
  auto op = assemble(prof, m);
  auto kc = kernel_check(op, prof);
  nlohmann::json out;
  out["neg_count"] = negative_eigencount(op);
  out["lambda0"] = kc.lambda0;
  out["cosine"] = kc.cosine;
  out["floor"] = essential_spectrum_floor(m, c);
  out["zero_band"] = zero_band(op);
  out["grid"] = {{"n", (long long)prof.rho.size()}, {"h", prof.h}, {"L", prof.L}};
  write_json(cfg.output_dir + "/spectrum.json", out);
  return 0;
}

int cmd_evolve1d(const RunConfig& cfg) {
  auto m = rescale(cfg.model, cfg.model.rho_inf);
  ExperimentOptions opts;
  opts.delta = cfg.params.at("delta").get<double>();
  opts.horizon = cfg.params.at("T").get<double>();
  opts.n_half = int(cfg.params.at("n_half").get<long long>());
  opts.tail_tol = cfg.params.at("tail_tol").get<double>();
  opts.seed = cfg.rng_seed;
  opts.escape_factor = cfg.params.at("escape_factor").get<double>();
  opts.close_factor = cfg.params.at("close_factor").get<double>();
  opts.samples = int(cfg.params.at("samples").get<long long>());
  const std::string shape = cfg.params.at("shape").get<std::string>();
  if (shape == "random")
    opts.shape = PerturbationShape::RandomLocalized;
  else if (shape == "sine")
    opts.shape = PerturbationShape::Sine;
  else if (shape == "gaussian")
    opts.shape = PerturbationShape::Gaussian;
  else
    throw Error(Err::ValidationError, "shape must be random|sine|gaussian");
  const double c = cfg.params.at("c").get<double>();
  auto rep = stability_experiment(m, c, opts);
  nlohmann::json out;
  out["c"] = c;
  out["delta"] = rep.delta;
  out["times"] = rep.times;
  out["orbital_dist"] = rep.orbital_dist;
  out["y_opt"] = rep.y_opt;
  out["dE_max"] = rep.dE_max;
  out["dP_max"] = rep.dP_max;
  out["dmass_max"] = rep.dmass_max;
  out["t_event"] = rep.t_event;
  switch (rep.outcome) {
    case RunOutcome::RemainedClose: out["outcome"] = "remained_close"; break;
    case RunOutcome::Escaped: out["outcome"] = "escaped"; break;
    case RunOutcome::SolverAbort: out["outcome"] = "solver_abort"; break;
    case RunOutcome::Indeterminate: out["outcome"] = "indeterminate"; break;
  }
  write_json(cfg.output_dir + "/stability.json", out);
  return 0;
}

int cmd_minimize2d(const RunConfig& cfg) {
  auto m = rescale(cfg.model, cfg.model.rho_inf);
  MinimizeOptions o;
  o.tol = cfg.params.at("tol").get<double>();
  o.eps_schedule = cfg.params.at("eps_schedule").get<std::vector<double>>();
  o.N1 = int(cfg.params.at("N1").get<long long>());
  o.N2 = int(cfg.params.at("N2").get<long long>());
  o.n_torus = cfg.params.at("n").get<double>();
  o.z_extent = cfg.params.at("z_extent").get<double>();
  o.max_iter = cfg.params.at("max_iter").get<long long>();
  const double p = cfg.params.at("p").get<double>();
  Minimizer2D mz(m, cfg.cutoff, p, o);

  MinimizationReport rep;
  const std::string warm = cfg.params.at("warm_start").get<std::string>();
  if (!warm.empty()) {
    auto f = read_field_ekf1(warm);
    if (f.field_names.size() != 2 || f.dims.size() != 2)
      throw Error(Err::HeaderMismatch, "warm start must carry 2D rho,phi fields");
    TorusField2D t;
    t.N1 = int(f.dims[0]);
    t.N2 = int(f.dims[1]);
    t.n = f.spacing[0] * f.dims[0] / (2.0 * 3.14159265358979323846);
    t.rho = f.payload[0];
    t.phi = f.payload[1];
    rep = mz.minimize(&t);
  } else {
    rep = mz.minimize();
  }
  auto poho = pohozaev_check_2d(mz, rep);
  auto ell = elliptic_smallness_check(rep);

  FieldFile f;
  f.dims = {rep.field.N1, rep.field.N2};
  f.spacing = {mz.spectral().h1(), mz.spectral().h2()};
  f.field_names = {"rho", "phi"};
  f.payload = {rep.field.rho, rep.field.phi};
  f.c = rep.c;
  write_field_ekf1(f, cfg.output_dir + "/minimizer.ekf1");

  nlohmann::json out;
  out["p_target"] = rep.p_target;
  out["p_achieved"] = rep.p_achieved;
  out["c"] = rep.c;
  out["E_tilde"] = rep.E_tilde;
  out["E_reg"] = rep.E_reg;
  out["E_plain"] = rep.E_plain;
  out["el_residual"] = rep.el_residual;
  out["converged"] = rep.converged;
  out["iterations"] = rep.iterations;
  out["eps_schedule"] = rep.eps_schedule;
  out["pohozaev"] = {{"poho1", poho.poho1},
                     {"poho2", poho.poho2},
                     {"energie1", poho.energie1},
                     {"poho3", poho.poho3}};
  out["sup_defect"] = ell.sup_defect;
  out["sup_over_sqrtE"] = ell.bound_ratio;
  out["outside_cutoff_window"] = ell.outside_window;
  out["grid"] = {{"N1", rep.field.N1}, {"N2", rep.field.N2}, {"n", rep.field.n}};
  if (!rep.flag.empty()) out["flag"] = rep.flag;
  write_json(cfg.output_dir + "/report.json", out);
  return rep.converged ? 0 : 3;
}

int cmd_sweep2d(const RunConfig& cfg) {
  auto m = rescale(cfg.model, cfg.model.rho_inf);
  SweepOptions so;
  so.minimize.tol = cfg.params.at("tol").get<double>();
  so.minimize.eps_schedule = cfg.params.at("eps_schedule").get<std::vector<double>>();
  so.minimize.z_extent = cfg.params.at("z_extent").get<double>();
  so.minimize.max_iter = cfg.params.at("max_iter").get<long long>();
  so.curve_tol = cfg.params.at("curve_tol").get<double>();
  const auto p_list = cfg.params.at("p_list").get<std::vector<double>>();
  std::vector<MinimizationReport> reps;
  auto curve = sweep_energy_curve(m, cfg.cutoff, p_list, so, &reps);

  std::string csv = "p,E_tilde_min,c,sup_defect,flags\n";
  for (const auto& r : curve.rows)
    csv += format_g17(r.p) + "," + format_g17(r.E_tilde_min) + "," + format_g17(r.c) + "," +
           format_g17(r.sup_defect) + "," + r.flags + "\n";
  write_text(cfg.output_dir + "/curve.csv", csv);

  nlohmann::json d;
  d["fit_a1"] = curve.fit_a1;
  d["fit_a3"] = curve.fit_a3;
  d["loglog_slope_one_minus_c"] = curve.loglog_slope_one_minus_c;
  d["second_differences"] = curve.second_differences;
  d["subadditivity_margins"] = curve.subadditivity_margins;
  d["lipschitz_ratios"] = curve.lipschitz_ratios;
  d["min_sup_ratio"] = curve.min_sup_ratio;
  d["max_sup_ratio"] = curve.max_sup_ratio;
  write_json(cfg.output_dir + "/diagnostics.json", d);
  return 0;
}

int cmd_kp_lump(const RunConfig& cfg) {
  LumpGrid grid;
  grid.n1 = int(cfg.params.at("n1").get<long long>());
  grid.n2 = int(cfg.params.at("n2").get<long long>());
  grid.half_extent = cfg.params.at("half_extent").get<double>();
  grid.boundary_tol = cfg.params.at("boundary_tol").get<double>();
  auto s = sample_lump(grid);
  FieldFile f;
  f.dims = {s.n1, s.n2};
  f.spacing = {s.h1, s.h2};
  f.field_names = {"w", "v"};
  f.payload = {s.w, s.v};
  write_field_ekf1(f, cfg.output_dir + "/lump.ekf1");
  const double E = lump_energy(s);
  const double n2 = lump_l2sq(s);
  nlohmann::json out;
  out["residual_l2"] = lump_residual_l2(s);
  out["E_KP"] = E;
  out["l2sq"] = n2;
  out["energy_identity_defect"] = (E + n2 / 6.0) / std::abs(E);
  write_json(cfg.output_dir + "/report.json", out);
  return 0;
}

}  // namespace

ScanHit scan_unstable_cubic(const std::vector<double>& a_grid,
                            const std::vector<double>& b_grid,
                            const std::vector<double>& c_grid, double rho_m_floor) {
  ScanHit best;
  for (double a : a_grid) {
    for (double b : b_grid) {
      FluidModel m;
      try {
        m = rescale(cubic_vdw_model(a, b), 1.0);
      } catch (const Error&) {
        continue;
      }
      for (double c : c_grid) {
        try {
          const auto rep = find_turning_points(m, c);
          if (rep.classification != OrbitKind::HomoclinicDepression) continue;
          if (*rep.rho_m < rho_m_floor) continue;
          const double h = 1e-4;
          const double dP = (momentum_of_speed(m, c + h) - momentum_of_speed(m, c - h)) /
                            (2.0 * h);
          if (dP > 1e-3 && dP > best.dPdc) {
            best = {a, b, c, dP, *rep.rho_m, true};
          }
        } catch (const Error&) {
          continue;
        }
      }
    }
  }
  return best;
}

int run_command(const RunConfig& cfg) {
  write_manifest(cfg);
  if (cfg.command == "wave1d") return cmd_wave1d(cfg);
  if (cfg.command == "curve1d") return cmd_curve1d(cfg);
  if (cfg.command == "spectrum1d") return cmd_spectrum1d(cfg);
  if (cfg.command == "evolve1d") return cmd_evolve1d(cfg);
  if (cfg.command == "minimize2d") return cmd_minimize2d(cfg);
  if (cfg.command == "sweep2d") return cmd_sweep2d(cfg);
  if (cfg.command == "kp-lump") return cmd_kp_lump(cfg);
  throw Error(Err::ValidationError, "unknown command '" + cfg.command + "'");
}

}  // namespace ek
