#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "surfdiff/config.hpp"
#include "surfdiff/field.hpp"
#include "surfdiff/io.hpp"
#include "surfdiff/rng.hpp"

using namespace surfdiff;

TEST_CASE("minimal protrusion config parses") {
  const RunConfig config = parse_config(
      "field = poisson\n"
      "lambda = 0.5\n"
      "alpha = 1\n"
      "R = 20\n"
      "seed = 1\n");
  CHECK(config.field.family == FieldFamily::poisson);
  CHECK(config.field.lambda == 0.5);
  CHECK(config.field.R == 20.0);
  CHECK(config.seed == 1);
  CHECK(config.plan.seed == 1);
  CHECK(config.mode == RunMode::cell);
}

TEST_CASE("comments, spacing and mode overrides") {
  const RunConfig config = parse_config(
      "# run description\n"
      "mode=mcmc\n"
      "field = ridge   # ridge of unit amplitude\n"
      "R = 2\n"
      "\n"
      "alpha = 1\n"
      "dt = 1e-3\n"
      "T = 10\n"
      "delta = 0.5\n",
      RunMode::bounds);
  CHECK(config.mode == RunMode::bounds);
  CHECK(config.field.family == FieldFamily::ridge);
  CHECK(config.plan.dt == 1e-3);
}

TEST_CASE("strict parsing rejects malformed input with line numbers") {
  SUBCASE("undersized protrusion cell") {
    try {
      parse_config("field = poisson\nR = 1\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("R must exceed bump diameter 2") != std::string::npos);
    }
  }
  SUBCASE("unknown key") {
    try {
      parse_config("field = flat\nalpha2 = 3\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line == 2);
      CHECK(std::string(e.what()).find("unknown key 'alpha2'") != std::string::npos);
    }
  }
  SUBCASE("duplicate key") {
    try {
      parse_config("R = 1\nR = 2\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line == 2);
    }
  }
  SUBCASE("missing separator") {
    CHECK_THROWS_AS(parse_config("field flat\n"), ConfigError);
  }
  SUBCASE("bad number names the key") {
    try {
      parse_config("field = flat\nseed = twelve\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("seed") != std::string::npos);
    }
  }
  SUBCASE("unknown mode and family") {
    CHECK_THROWS_AS(parse_config("mode = teleport\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("field = perlin\n"), ConfigError);
  }
  SUBCASE("cross-key validation") {
    CHECK_THROWS_AS(parse_config("field = flat\nthreads = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("field = gaussian\nR = 10\nmodes = 9\n"), ConfigError);
    CHECK_THROWS_AS(
        parse_config("mode = mcmc\nfield = flat\ndt = 0.3\ndelta = 0.5\n"), ConfigError);
  }
}

TEST_CASE("R grids parse with commas or spaces") {
  const RunConfig config = parse_config(
      "mode = ensemble\nfield = poisson\nR = 20\nR_list = 10, 15 20\nseeds_per_R = 2\n");
  REQUIRE(config.R_list.size() == 3);
  CHECK(config.R_list[0] == 10.0);
  CHECK(config.R_list[2] == 20.0);

  const RunConfig tight = parse_config(
      "mode = ensemble\nfield = poisson\nR = 20\nR_list = 10,15,20\nseeds_per_R = 2\n");
  REQUIRE(tight.R_list.size() == 3);
  CHECK(tight.R_list[1] == 15.0);

  // Every R in the grid is validated against the family.
  CHECK_THROWS_AS(
      parse_config("mode = ensemble\nfield = poisson\nR = 20\nR_list = 10, 1\n"), ConfigError);
  // The base R is never instantiated when a grid is given, so it may stay default.
  CHECK_NOTHROW(
      parse_config("mode = ensemble\nfield = gaussian\nalpha = 0.1\nR_list = 5, 6\n"));
  CHECK_THROWS_AS(parse_config("mode = ensemble\nfield = gaussian\nalpha = 0.1\n"), ConfigError);
}

TEST_CASE("seventeen digit formatting round-trips doubles exactly") {
  for (const double v : {0.1, 1.0 / 3.0, 4.188275203698434, 1e300, -2.5e-308, 0.0, -1.75}) {
    const std::string s = format_g17(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("tensor csv round-trips bit for bit") {
  std::vector<TensorRow> rows(2);
  rows[0].seed = 123456789012345ull;
  rows[0].R = 10.0;
  rows[0].subdivisions = 320;
  rows[0].Z = 1.1748899859651276;
  rows[0].D = {0.85240853292528318, -0.0010077377976752714, -0.0010077377976752714,
               0.85051023794245662};
  rows[0].lower11 = 0.83121374639060153;
  rows[0].lower22 = 0.82971338812721018;
  rows[0].upper11 = 0.87312798314860662;
  rows[0].upper22 = 0.87155196880788666;
  rows[0].det_residual = 0.00073970316677174353;
  rows[0].converged = true;
  rows[1] = rows[0];
  rows[1].seed = 2;
  rows[1].converged = false;
  rows[1].D.m01 = 1.0 / 3.0;
  rows[1].D.m10 = rows[1].D.m01;

  std::ostringstream out;
  write_tensor_csv(out, rows);
  std::istringstream in(out.str());
  const std::vector<TensorRow> loaded = read_tensor_csv(in);
  REQUIRE(loaded.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(loaded[i].seed == rows[i].seed);
    CHECK(loaded[i].R == rows[i].R);
    CHECK(loaded[i].subdivisions == rows[i].subdivisions);
    CHECK(loaded[i].Z == rows[i].Z);
    CHECK(loaded[i].D.m00 == rows[i].D.m00);
    CHECK(loaded[i].D.m01 == rows[i].D.m01);
    CHECK(loaded[i].D.m10 == rows[i].D.m10);
    CHECK(loaded[i].D.m11 == rows[i].D.m11);
    CHECK(loaded[i].lower11 == rows[i].lower11);
    CHECK(loaded[i].lower22 == rows[i].lower22);
    CHECK(loaded[i].upper11 == rows[i].upper11);
    CHECK(loaded[i].upper22 == rows[i].upper22);
    CHECK(loaded[i].det_residual == rows[i].det_residual);
    CHECK(loaded[i].converged == rows[i].converged);
  }

  SUBCASE("loader rejects malformed input") {
    std::istringstream bad_header("nope\n1,2\n");
    CHECK_THROWS(read_tensor_csv(bad_header));
    std::istringstream short_row(out.str().substr(0, out.str().find('\n') + 1) + "1,2,3\n");
    CHECK_THROWS(read_tensor_csv(short_row));
  }
}

TEST_CASE("grid dump raster covers the cell in row-major order") {
  const RidgeField field(1.0, 2);
  std::ostringstream out;
  write_grid_dump(out, field, 4);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "# field=ridge R=2 n=4 seed=0");
  int count = 0;
  double x, y, h, dhx, dhy;
  double first_h = 0.0;
  while (in >> x >> y >> h >> dhx >> dhy) {
    if (count == 0) first_h = h;
    if (count == 1) {
      CHECK(x == 0.5);
      CHECK(y == 0.0);
    }
    if (count == 4) {  // second row starts after 4 samples
      CHECK(x == 0.0);
      CHECK(y == 0.5);
    }
    const FieldJet jet = field.jet({x, y});
    CHECK(h == jet.h);
    CHECK(dhx == jet.grad.x);
    CHECK(dhy == jet.grad.y);
    ++count;
  }
  CHECK(count == 16);
  CHECK(first_h == 0.0);
}

TEST_CASE("summary and trajectory writers emit the documented schemas") {
  EnsembleSummary summary;
  EnsembleGroup group;
  group.R = 10.0;
  group.count = 3;
  group.mean_D11 = 0.8;
  group.area_scaling_ref = 0.85;
  summary.groups.push_back(group);
  std::ostringstream s;
  write_summary_csv(s, summary);
  CHECK(s.str().rfind("R,count,meanD11,stdD11,meanD22,stdD22,meanD12,meanZ,area_scaling_ref\n",
                      0) == 0);
  CHECK(s.str().find("10,3,0.8") != std::string::npos);

  SimulationPlan plan;
  plan.seed = 7;
  TrajectoryStats stats;
  stats.D = {0.9, 0.01, 0.01, 0.88};
  stats.standard_error = {0.02, 0.002, 0.002, 0.02};
  stats.msd = {{0.5, 1.875}, {1.0, 3.75}};
  std::ostringstream t;
  write_mcmc_csv(t, plan, stats);
  CHECK(t.str().rfind("seed,dt,T,delta,D11,D12,D22,se11,se12,se22\n", 0) == 0);
  std::ostringstream m;
  write_msd(m, stats);
  CHECK(m.str() == "lag,msd\n0.5,1.875\n1,3.75\n");

  CellBounds bounds;
  bounds.Z = 1.2;
  std::ostringstream b;
  write_bounds_csv(b, 3, 10.0, 80, bounds);
  CHECK(b.str().rfind("seed,R,n,Z,lower11,lower12,lower22,upper11,upper12,upper22\n", 0) == 0);
}

TEST_CASE("file io raises on missing paths") {
  CHECK_THROWS(read_file("/nonexistent/surfdiff.cfg"));
  const std::string path = "config_io_roundtrip.txt";
  write_file(path, "payload");
  CHECK(read_file(path) == "payload");
  std::remove(path.c_str());
}
