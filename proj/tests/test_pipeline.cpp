// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <fstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "landconn/pipeline.hpp"

namespace landconn {
namespace {

namespace fs = std::filesystem;

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    out[e.path().filename().string()] = read_text_file(e.path());
  }
  return out;
}

PipelineResult run_config(const fs::path& cfg) {
  return run_pipeline(parse_config(read_text_file(cfg)), cfg.parent_path());
}

TEST(Pipeline, FiveSiteScene) {
  auto dir = fixtures::temp_dir("five");
  auto cfg = fixtures::write_scene(dir);
  auto res = run_config(cfg);
  ASSERT_EQ(res.report.units.size(), 1u);
  const auto& u = res.report.units[0];
  EXPECT_EQ(u.unit, "synthetic");
  EXPECT_EQ(u.pattern.n_sites, 5u);
  EXPECT_EQ(u.pattern.n_subnets, 3u);
  ASSERT_TRUE(u.functional);
  ASSERT_TRUE(u.structure);
  EXPECT_EQ(*u.gap(), u.pattern.cover_fraction - u.functional->rpc);
  for (const char* f : {"sites.asc", "overlaps.csv", "subnets.asc", "subnets.csv",
                        "subnets.ppm", "subnets.ppm.legend.txt", "structure.csv",
                        "friction.asc", "friction_table.csv", "costmatrix.csv",
                        "report.csv", "report.json"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  fs::remove_all(dir);
}

TEST(Pipeline, DeterministicOutputs) {
  auto a = fixtures::temp_dir("det_a"), b = fixtures::temp_dir("det_b");
  run_config(fixtures::write_scene(a));
  run_config(fixtures::write_scene(b));
  auto sa = snapshot(a / "out"), sb = snapshot(b / "out");
  EXPECT_EQ(sa, sb);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Pipeline, EmptySiteSet) {
  auto dir = fixtures::temp_dir("empty");
  auto cfg_path = fixtures::write_scene(dir);
  write_text_file(dir / "sites.json", format_sites_json({}));
  auto res = run_config(cfg_path);
  const auto& u = res.report.units[0];
  EXPECT_EQ(u.pattern.n_subnets, 0u);
  EXPECT_FALSE(u.functional);
  EXPECT_FALSE(u.structure);
  auto csv = read_text_file(dir / "out" / "report.csv");
  EXPECT_NE(csv.find("synthetic,0,0,NA,NA,NA,NA,NA,NA,0,NA"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Pipeline, TwoSubnetsFiveHundredMetersApart) {
  auto dir = fixtures::temp_dir("pair");
  fs::create_directories(dir);
  write_grid(CategoricalGrid(fixtures::header(6, 1), 311), dir / "lc.asc");
  SitePolygonSet sites{fixtures::rect_site(1, 0, 0, 100, 100),
                       fixtures::rect_site(2, 500, 0, 600, 100)};
  write_text_file(dir / "sites.json", format_sites_json(sites));
  PipelineConfig cfg;
  cfg.unit = "pair";
  cfg.sites = "sites.json";
  cfg.landcover = "lc.asc";
  auto res = run_pipeline(cfg, dir);
  EXPECT_EQ(res.costs.at(0, 1), 500.0);
  const auto& f = *res.report.units[0].functional;
  EXPECT_NEAR(f.rapc, std::sqrt(3.0) / 2, 1e-12);
  // a = 1e4 each, A_L = 6e4.
  EXPECT_NEAR(f.rpc, std::sqrt(3e8) / 6e4, 1e-12);
  fs::remove_all(dir);
}

TEST(Pipeline, MaskRestrictsUnit) {
  auto dir = fixtures::temp_dir("mask");
  fs::create_directories(dir);
  auto h = fixtures::header(6, 1);
  write_grid(CategoricalGrid(h, 311), dir / "lc.asc");
  CategoricalGrid mask(h, 1);
  mask.set_nodata(0, 5);
  write_grid(mask, dir / "mask.asc");
  SitePolygonSet sites{fixtures::rect_site(1, 0, 0, 100, 100),
                       fixtures::rect_site(2, 500, 0, 600, 100)};
  write_text_file(dir / "sites.json", format_sites_json(sites));
  PipelineConfig cfg;
  cfg.sites = "sites.json";
  cfg.landcover = "lc.asc";
  cfg.landscape_mask = "mask.asc";
  auto res = run_pipeline(cfg, dir);
  const auto& u = res.report.units[0];
  EXPECT_EQ(u.pattern.n_subnets, 1u);
  EXPECT_EQ(u.pattern.landscape_area, 5e4);
  EXPECT_DOUBLE_EQ(u.pattern.cover_fraction, 0.2);
  fs::remove_all(dir);
}

TEST(Pipeline, StageAttribution) {
  auto dir = fixtures::temp_dir("stage");
  auto cfg_path = fixtures::write_scene(dir);
  auto cfg = parse_config(read_text_file(cfg_path));
  cfg.friction_table = "table.csv";
  write_text_file(dir / "table.csv", "code,friction\n311,1\nROAD,10\nCROSSING,2\nSITE,1\n");
  try {
    run_pipeline(cfg, dir);
    FAIL() << "expected a friction error";
  } catch (const DataError& e) {
    std::string what = e.what();
    EXPECT_EQ(what.rfind("[friction] ", 0), 0u) << what;
    EXPECT_NE(what.find("112"), std::string::npos);
    EXPECT_NE(what.find("211"), std::string::npos);
  }
  cfg = parse_config(read_text_file(cfg_path));
  cfg.sites = "missing.json";
  try {
    run_pipeline(cfg, dir);
    FAIL() << "expected a load error";
  } catch (const DataError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("[load sites] ", 0), 0u) << e.what();
  }
  cfg = parse_config(read_text_file(cfg_path));
  cfg.cellsize = 50.0;
  EXPECT_THROW(run_pipeline(cfg, dir), ConfigError);
  fs::remove_all(dir);
}

TEST(Config, RoundTripAndValidation) {
  PipelineConfig c;
  c.unit = "BE";
  c.sites = "s.json";
  c.landcover = "lc.asc";
  c.cellsize = 100.0;
  c.dist50 = 750;
  c.connectivity = 4;
  c.opaque_subnets = true;
  auto text = format_config(c);
  EXPECT_EQ(format_config(parse_config(text)), text);
  EXPECT_THROW(parse_config(R"({"sites":"a","landcover":"b","bogus":1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sites":"a","landcover":"b","connectivity":6})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"sites":"a","landcover":"b","p_iso":1.5})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"landcover":"b"})"), ConfigError);
  EXPECT_THROW(parse_config("not json"), ConfigError);
}

#ifdef LANDCONN_CLI_PATH
int cli(const std::string& args) {
  std::string cmd = std::string(LANDCONN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST(Cli, ExitCodes) {
  auto dir = fixtures::temp_dir("cli");
  auto cfg = fixtures::write_scene(dir);
  EXPECT_EQ(cli("--help"), 0);
  EXPECT_EQ(cli("run --config " + cfg.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "report.csv"));
  EXPECT_EQ(cli("run --config " + cfg.string() + " --connectivity 6"), 2);
  EXPECT_EQ(cli("run --config " + (dir / "nope.json").string()), 3);
  EXPECT_EQ(cli("run --config " + cfg.string() + " --sites missing.json"), 3);
  EXPECT_EQ(cli("render --grid " + (dir / "out" / "friction.asc").string() +
                " --palette rainbow --out " + (dir / "x.ppm").string()),
            2);
  EXPECT_EQ(cli("costmatrix --sites " + (dir / "out" / "subnets.asc").string() +
                " --friction " + (dir / "out" / "friction.asc").string() +
                " --out " + (dir / "cm.csv").string()),
            0);
  EXPECT_EQ(read_text_file(dir / "cm.csv"),
            read_text_file(dir / "out" / "costmatrix.csv"));
  EXPECT_EQ(cli("run --config " + cfg.string() + " --dump-config " +
                (dir / "eff.json").string()),
            0);
  auto eff = parse_config(read_text_file(dir / "eff.json"));
  EXPECT_EQ(eff.unit, "synthetic");
  fs::remove_all(dir);
}
#endif

}  // namespace
}  // namespace landconn
