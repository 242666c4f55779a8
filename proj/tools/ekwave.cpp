// Command line front end: every run is configured by a JSON file; scalar
// flags override config fields so the acceptance harness can pin manifests.
#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ek/run_commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Euler-Korteweg traveling wave toolkit"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string output_dir;
  std::string warm_start;
  double p = -1.0, c = -1.0, delta = -1.0, T = -1.0, tol = -1.0, n_torus = -1.0;
  long long N = -1, N1 = -1, N2 = -1, seed = -1;
  std::string eps_schedule;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--output-dir", output_dir, "output directory override");
    sub->add_option("--p", p, "momentum override");
    sub->add_option("--c", c, "wave speed override");
    sub->add_option("--delta", delta, "perturbation size override");
    sub->add_option("--T", T, "horizon override");
    sub->add_option("--tol", tol, "solver tolerance override");
    sub->add_option("--n", n_torus, "torus half-size override");
    sub->add_option("--N", N, "1D node count override (n_half)");
    sub->add_option("--N1", N1, "first-axis resolution override");
    sub->add_option("--N2", N2, "second-axis resolution override");
    sub->add_option("--seed", seed, "RNG seed override");
    sub->add_option("--eps-schedule", eps_schedule,
                    "comma separated mollifier schedule override");
    sub->add_option("--warm-start", warm_start, "EKF1 field file to start from");
  };
  const char* names[] = {"wave1d", "curve1d", "spectrum1d", "evolve1d",
                         "minimize2d", "sweep2d", "kp-lump"};
  for (const char* n : names) add_common(app.add_subcommand(n));

  CLI11_PARSE(app, argc, argv);
  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::fprintf(stderr, "usage: ekwave <command> --config file.json [overrides]\n");
    return 2;
  }
  const std::string command = subs[0]->get_name();

  try {
    nlohmann::json doc;
    if (!config_path.empty()) {
      auto pre = ek::parse_config(config_path);
      doc = pre.resolved;
      if (doc["command"].get<std::string>() != command)
        throw ek::Error(ek::Err::ValidationError,
                        "config command does not match the CLI subcommand");
    } else {
      doc = {{"command", command}};
    }
    auto set_param = [&](const char* key, const nlohmann::json& v) {
      if (!doc.contains("params")) doc["params"] = nlohmann::json::object();
      doc["params"][key] = v;
    };
    if (p >= 0.0) set_param("p", p);
    if (c >= 0.0) set_param("c", c);
    if (delta >= 0.0) set_param("delta", delta);
    if (T >= 0.0) set_param("T", T);
    if (tol >= 0.0) set_param("tol", tol);
    if (n_torus >= 0.0) set_param("n", n_torus);
    if (N >= 0) set_param("n_half", N);
    if (N1 >= 0) set_param("N1", N1);
    if (N2 >= 0) set_param("N2", N2);
    if (!warm_start.empty()) set_param("warm_start", warm_start);
    if (!eps_schedule.empty()) {
      std::vector<double> sched;
      std::string tokens = eps_schedule;
      std::size_t pos = 0;
      while (pos != std::string::npos) {
        const auto next = tokens.find(',', pos);
        sched.push_back(std::stod(tokens.substr(pos, next - pos)));
        pos = (next == std::string::npos) ? next : next + 1;
      }
      set_param("eps_schedule", sched);
    }
    if (seed >= 0) doc["rng_seed"] = seed;
    if (!output_dir.empty()) doc["output_dir"] = output_dir;

    auto cfg = ek::parse_config_json(doc);
    return ek::run_command(cfg);
  } catch (const ek::Error& e) {
    nlohmann::json err = {{"error", ek::err_name(e.code())}, {"message", e.what()}};
    std::printf("%s\n", err.dump().c_str());
    return ek::exit_code_for(e.code());
  } catch (const std::exception& e) {
    nlohmann::json err = {{"error", "Internal"}, {"message", e.what()}};
    std::printf("%s\n", err.dump().c_str());
    return 3;
  }
}
