#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "ek/ekf1.hpp"
#include "ek/run_commands.hpp"

using namespace ek;
namespace fs = std::filesystem;

namespace {
std::string tmpdir() {
  auto d = fs::temp_directory_path() / "ek_cli_io_test";
  fs::create_directories(d);
  return d.string();
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  return std::string(std::istreambuf_iterator<char>(is), {});
}
}  // namespace

TEST_CASE("EKF1 round trip is bit identical") {
  std::mt19937_64 rng(99);
  FieldFile f;
  f.dims = {64, 64};
  f.spacing = {0.125, 0.25};
  f.field_names = {"rho", "phi"};
  f.payload.resize(2);
  for (auto& arr : f.payload) {
    arr.resize(64 * 64);
    for (auto& v : arr) v = double(rng() >> 11) / double(1ull << 53) - 0.5;
  }
  f.t = 1.5;
  f.c = 0.75;
  const auto path = tmpdir() + "/roundtrip.ekf1";
  write_field_ekf1(f, path);
  auto g = read_field_ekf1(path);
  CHECK(g.dims == f.dims);
  CHECK(g.spacing == f.spacing);
  CHECK(g.field_names == f.field_names);
  REQUIRE(g.payload.size() == 2);
  for (int a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < f.payload[a].size(); ++i)
      CHECK(g.payload[a][i] == f.payload[a][i]);
  CHECK(*g.t == 1.5);
  CHECK(*g.c == 0.75);

  // writing the read-back file reproduces the bytes exactly
  const auto path2 = tmpdir() + "/roundtrip2.ekf1";
  write_field_ekf1(g, path2);
  CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("EKF1 rejects bad magic and truncated payloads") {
  const auto dir = tmpdir();
  {
    std::ofstream os(dir + "/bad.ekf1", std::ios::binary);
    os << "NOTEKF1\0 garbage";
  }
  CHECK_THROWS_AS(read_field_ekf1(dir + "/bad.ekf1"), Error);

  FieldFile f;
  f.dims = {8, 8};
  f.spacing = {1.0, 1.0};
  f.field_names = {"rho"};
  f.payload = {std::vector<double>(64, 1.0)};
  const auto path = dir + "/trunc.ekf1";
  write_field_ekf1(f, path);
  auto bytes = slurp(path);
  {
    std::ofstream os(path, std::ios::binary);
    os.write(bytes.data(), std::streamsize(bytes.size() - 16));
  }
  try {
    read_field_ekf1(path);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::TruncatedPayload);
  }
}

TEST_CASE("config defaults, unknown keys, manifest idempotence") {
  nlohmann::json doc = {{"command", "wave1d"},
                        {"model",
                         {{"pressure",
                           {{"law", "gross_pitaevskii"}, {"params", nlohmann::json::object()}}},
                          {"capillarity", {{"law", "constant"}, {"params", {{"kappa", 1.0}}}}},
                          {"rho_inf", 1.0},
                          {"cutoff", {{"delta", 0.25}, {"blend_order", 3}}}}},
                        {"params", {{"c", 0.5}}}};
  auto cfg = parse_config_json(doc);
  CHECK(cfg.params.at("n_half").get<long long>() == 4096);
  CHECK(cfg.params.at("tail_tol").get<double>() == 1e-10);

  // the resolved manifest reparses to an identical document
  auto cfg2 = parse_config_json(cfg.resolved);
  CHECK(cfg2.resolved.dump(2) == cfg.resolved.dump(2));

  nlohmann::json bad = doc;
  bad["params"]["c_typo"] = 1.0;
  CHECK_THROWS_AS(parse_config_json(bad), Error);

  nlohmann::json badlaw = doc;
  badlaw["model"]["pressure"]["law"] = "unknown";
  try {
    parse_config_json(badlaw);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::ValidationError);
    CHECK(std::string(e.what()).find("pressure.law") != std::string::npos);
  }
}

TEST_CASE("supersonic speed surfaces with the sound speed attached") {
  nlohmann::json doc = {{"command", "wave1d"}, {"params", {{"c", 1.4}}}};
  auto cfg = parse_config_json(doc);
  cfg.output_dir = tmpdir() + "/super";
  try {
    run_command(cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::SupersonicSpeed);
    CHECK(std::string(e.what()).find("c_s") != std::string::npos);
  }
}

TEST_CASE("wave1d command writes profile and report; evolve can embed it") {
  nlohmann::json doc = {{"command", "wave1d"},
                        {"params", {{"c", 0.5}, {"n_half", 512}, {"tail_tol", 1e-10}}}};
  auto cfg = parse_config_json(doc);
  cfg.output_dir = tmpdir() + "/wave";
  REQUIRE(run_command(cfg) == 0);
  auto f = read_field_ekf1(cfg.output_dir + "/profile.ekf1");
  REQUIRE(f.field_names.size() == 2);
  CHECK(f.dims[0] == 2 * 512 + 1);
  REQUIRE(f.c.has_value());
  CHECK(*f.c == 0.5);

  // cross-module: rebuild the evolver state from the stored profile
  auto m = rescale(gross_pitaevskii_model(1.0), 1.0);
  WaveProfile1D prof;
  prof.c = *f.c;
  prof.rho_inf = 1.0;
  prof.n_half = int((f.dims[0] - 1) / 2);
  prof.h = f.spacing[0];
  prof.L = prof.h * prof.n_half;
  prof.rho = f.payload[0];
  prof.u = f.payload[1];
  Evolver1D ev(m, 4 * prof.n_half, 4.0 * prof.L);
  auto st = embed_profile(ev, prof);
  CHECK(ev.conserved_quantities(st).P ==
        doctest::Approx(momentum_of_speed(m, 0.5)).epsilon(1e-6));

  // determinism: rerunning the command reproduces every byte
  auto before_csvless = slurp(cfg.output_dir + "/report.json");
  auto before_prof = slurp(cfg.output_dir + "/profile.ekf1");
  REQUIRE(run_command(cfg) == 0);
  CHECK(slurp(cfg.output_dir + "/report.json") == before_csvless);
  CHECK(slurp(cfg.output_dir + "/profile.ekf1") == before_prof);
}

TEST_CASE("curve1d emits the speed curve CSV deterministically") {
  nlohmann::json doc = {{"command", "curve1d"},
                        {"params", {{"c_min", 0.4}, {"c_max", 0.6}, {"count", 3}}}};
  auto cfg = parse_config_json(doc);
  cfg.output_dir = tmpdir() + "/curve";
  REQUIRE(run_command(cfg) == 0);
  auto csv = slurp(cfg.output_dir + "/curve.csv");
  CHECK(csv.rfind("c,P,E,m,dPdc,flags\n", 0) == 0);
  CHECK(csv.find("\r") == std::string::npos);
  REQUIRE(run_command(cfg) == 0);
  CHECK(slurp(cfg.output_dir + "/curve.csv") == csv);
}

TEST_CASE("unstable-parameter scan finds a positive dPdc point") {
  auto hit = scan_unstable_cubic({0.0, 3.6}, {0.0, 1.6}, {0.1, 0.15, 0.2}, 0.25);
  REQUIRE(hit.found);
  CHECK(hit.dPdc > 0.0);
  CHECK(hit.rho_m >= 0.25);
}
