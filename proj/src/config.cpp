#include "ek/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace ek {

namespace {

void require_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object())
    throw Error(Err::ParseError, where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw Error(Err::ValidationError, "unknown key '" + it.key() + "' in " + where);
  }
}

double num_or(const nlohmann::json& obj, const std::string& key, double dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number())
    throw Error(Err::ValidationError, "field '" + key + "' must be a number");
  return obj[key].get<double>();
}

long long int_or(const nlohmann::json& obj, const std::string& key, long long dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number_integer())
    throw Error(Err::ValidationError, "field '" + key + "' must be an integer");
  return obj[key].get<long long>();
}

std::string str_or(const nlohmann::json& obj, const std::string& key,
                   const std::string& dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_string())
    throw Error(Err::ValidationError, "field '" + key + "' must be a string");
  return obj[key].get<std::string>();
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json model_to_json(const FluidModel& m, const CutoffSpec& spec) {
  nlohmann::json j;
  switch (m.pressure) {
    case PressureLaw::GrossPitaevskii:
      j["pressure"] = {{"law", "gross_pitaevskii"}, {"params", nlohmann::json::object()}};
      break;
    case PressureLaw::Power:
      j["pressure"] = {{"law", "power"}, {"params", {{"gamma_p", m.gamma_p}}}};
      break;
    case PressureLaw::CubicVdw:
      j["pressure"] = {{"law", "cubic_vdw"}, {"params", {{"a", m.vdw_a}, {"b", m.vdw_b}}}};
      break;
  }
  switch (m.capillarity) {
    case CapillarityLaw::Constant:
      j["capillarity"] = {{"law", "constant"}, {"params", {{"kappa", m.kappa}}}};
      break;
    case CapillarityLaw::Inverse:
      j["capillarity"] = {{"law", "inverse"}, {"params", {{"kappa", m.kappa}}}};
      break;
    case CapillarityLaw::Power:
      j["capillarity"] = {{"law", "power"}, {"params", {{"kappa", m.kappa}, {"m", m.cap_m}}}};
      break;
  }
  j["rho_inf"] = m.rho_inf;
  j["cutoff"] = {{"delta", spec.delta}, {"blend_order", spec.blend_order}};
  return j;
}

void model_from_json(const nlohmann::json& j, FluidModel& m, CutoffSpec& spec) {
  require_keys(j, {"pressure", "capillarity", "rho_inf", "cutoff"}, "model");
  m = FluidModel{};
  spec = CutoffSpec{};
  if (j.contains("pressure")) {
    const auto& p = j["pressure"];
    require_keys(p, {"law", "params"}, "model.pressure");
    const std::string law = str_or(p, "law", "gross_pitaevskii");
    const auto params = p.contains("params") ? p["params"] : nlohmann::json::object();
    if (law == "gross_pitaevskii") {
      require_keys(params, {}, "model.pressure.params");
      m.pressure = PressureLaw::GrossPitaevskii;
    } else if (law == "power") {
      require_keys(params, {"gamma_p"}, "model.pressure.params");
      m.pressure = PressureLaw::Power;
      m.gamma_p = num_or(params, "gamma_p", 2.0);
    } else if (law == "cubic_vdw") {
      require_keys(params, {"a", "b"}, "model.pressure.params");
      m.pressure = PressureLaw::CubicVdw;
      m.vdw_a = num_or(params, "a", 0.0);
      m.vdw_b = num_or(params, "b", 0.0);
    } else {
      throw Error(Err::ValidationError, "unknown pressure.law '" + law + "'");
    }
  }
  if (j.contains("capillarity")) {
    const auto& c = j["capillarity"];
    require_keys(c, {"law", "params"}, "model.capillarity");
    const std::string law = str_or(c, "law", "constant");
    const auto params = c.contains("params") ? c["params"] : nlohmann::json::object();
    if (law == "constant") {
      require_keys(params, {"kappa"}, "model.capillarity.params");
      m.capillarity = CapillarityLaw::Constant;
    } else if (law == "inverse") {
      require_keys(params, {"kappa"}, "model.capillarity.params");
      m.capillarity = CapillarityLaw::Inverse;
    } else if (law == "power") {
      require_keys(params, {"kappa", "m"}, "model.capillarity.params");
      m.capillarity = CapillarityLaw::Power;
      m.cap_m = num_or(params, "m", 1.0);
    } else {
      throw Error(Err::ValidationError, "unknown capillarity.law '" + law + "'");
    }
    m.kappa = num_or(params, "kappa", 1.0);
  }
  m.rho_inf = num_or(j, "rho_inf", 1.0);
  if (j.contains("cutoff")) {
    require_keys(j["cutoff"], {"delta", "blend_order"}, "model.cutoff");
    spec.delta = num_or(j["cutoff"], "delta", 0.25);
    spec.blend_order = int(int_or(j["cutoff"], "blend_order", 3));
  }
  m.validate();
  spec.validate();
}

namespace {

nlohmann::json default_params(const std::string& command) {
  nlohmann::json p = nlohmann::json::object();
  if (command == "wave1d") {
    p = {{"c", 0.5}, {"n_half", 4096}, {"tail_tol", 1e-10}, {"kind", "auto"}};
  } else if (command == "curve1d") {
    p = {{"c_min", 0.2}, {"c_max", 0.9}, {"count", 21}, {"panels", 48}};
  } else if (command == "spectrum1d") {
    p = {{"c", 0.5}, {"n_half", 4096}, {"tail_tol", 1e-10}};
  } else if (command == "evolve1d") {
    p = {{"c", 0.5},       {"delta", 1e-3},  {"T", 50.0},
         {"n_half", 256},  {"tail_tol", 1e-6}, {"shape", "random"},
         {"snapshot_stride", 0}, {"escape_factor", 100.0}, {"close_factor", 5.0},
         {"samples", 200}};
  } else if (command == "minimize2d") {
    p = {{"p", 0.3},
         {"tol", 1e-5},
         {"eps_schedule", {1e-2, 1.78e-3, 3.16e-4, 5.62e-5, 0.0}},
         {"N1", 0},
         {"N2", 0},
         {"n", 0.0},
         {"z_extent", 16.0},
         {"max_iter", 20000},
         {"warm_start", ""}};
  } else if (command == "sweep2d") {
    p = {{"p_list", {0.2, 0.3, 0.4}},
         {"tol", 1e-5},
         {"eps_schedule", {1e-2, 1.78e-3, 3.16e-4, 5.62e-5, 0.0}},
         {"z_extent", 16.0},
         {"max_iter", 20000},
         {"curve_tol", 1e-4}};
  } else if (command == "kp-lump") {
    p = {{"n1", 512}, {"n2", 512}, {"half_extent", 40.0}, {"boundary_tol", 2e-2}};
  } else {
    throw Error(Err::ValidationError, "unknown command '" + command + "'");
  }
  return p;
}

}  // namespace

RunConfig parse_config_json(const nlohmann::json& doc) {
  require_keys(doc, {"command", "model", "params", "output_dir", "rng_seed"}, "config");
  RunConfig cfg;
  if (!doc.contains("command") || !doc["command"].is_string())
    throw Error(Err::ValidationError, "config requires a string 'command'");
  cfg.command = doc["command"].get<std::string>();
  nlohmann::json params = default_params(cfg.command);
  if (doc.contains("params")) {
    const auto& user = doc["params"];
    std::set<std::string> allowed;
    for (auto it = params.begin(); it != params.end(); ++it) allowed.insert(it.key());
    require_keys(user, allowed, "params");
    for (auto it = user.begin(); it != user.end(); ++it) params[it.key()] = it.value();
  }
  cfg.params = params;
  if (doc.contains("model"))
    model_from_json(doc["model"], cfg.model, cfg.cutoff);
  else
    cfg.model.validate();
  cfg.output_dir = str_or(doc, "output_dir", "out");
  cfg.rng_seed = (unsigned long long)int_or(doc, "rng_seed", 1);

  cfg.resolved = nlohmann::json{{"command", cfg.command},
                                {"model", model_to_json(cfg.model, cfg.cutoff)},
                                {"params", cfg.params},
                                {"output_dir", cfg.output_dir},
                                {"rng_seed", cfg.rng_seed}};
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Err::IoError, "cannot open config: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Err::ParseError, std::string("config parse error: ") + e.what());
  }
  return parse_config_json(doc);
}

}  // namespace ek
