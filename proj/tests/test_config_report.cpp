#include "fbp/config.hpp"
#include "fbp/errors.hpp"
#include "fbp/report.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace fbp;

TEST_SUITE("config") {
  TEST_CASE("defaults survive a write/parse round trip") {
    const RunConfig c;
    std::stringstream ss;
    write_config(ss, c);
    CHECK(parse_config(ss) == c);
  }

  TEST_CASE("every kind of value survives a round trip") {
    RunConfig c;
    set_config_value(c, "problem.preset", "example2");
    set_config_value(c, "problem.eps", "0.123456789012345678");
    set_config_value(c, "energy.chi_weight", "0.3");
    set_config_value(c, "energy.phase", "one_phase");
    set_config_value(c, "solve.continuation", "0.1,0.01,0.001");
    set_config_value(c, "solve.seed", "42");
    set_config_value(c, "field.rotation_deg", "33.3");
    set_config_value(c, "diagnostics.richardson", "false");
    set_config_value(c, "diagnostics.c_bound", "5");
    set_config_value(c, "diagnostics.deltas", "0.3");
    set_config_value(c, "output.dir", "out dir");
    CHECK(c.problem.eps == 0.123456789012345678);
    CHECK(c.energy.phase == Phase::one_phase);
    CHECK(c.solve.continuation.size() == 3);
    std::stringstream ss;
    write_config(ss, c);
    CHECK(parse_config(ss) == c);
  }

  TEST_CASE("unknown sections, keys and bad values are rejected") {
    std::stringstream a("[problem]\nA = 3\nfoo = 1\n");
    CHECK_THROWS_AS(parse_config(a), ConfigError);
    std::stringstream b("[nonsense]\nA = 3\n");
    CHECK_THROWS_AS(parse_config(b), ConfigError);
    std::stringstream c("[problem]\nA = three\n");
    CHECK_THROWS_AS(parse_config(c), ConfigError);
    RunConfig r;
    CHECK_THROWS_AS(set_config_value(r, "problem", "1"), ConfigError);
    CHECK_THROWS_AS(set_config_value(r, "solve.memory", "1.5"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/fbp.ini"), IoError);
  }

  TEST_CASE("partial files keep defaults elsewhere") {
    std::stringstream ss("[problem]\nA = 3.5\n[diagnostics]\ncx = 0.25\n");
    const RunConfig c = parse_config(ss);
    CHECK(c.problem.A == 3.5);
    CHECK(c.diagnostics.cx == 0.25);
    CHECK(c.problem.nodes == RunConfig{}.problem.nodes);
  }

  TEST_CASE("radii and validation") {
    RunConfig c;
    const auto r = c.radii();
    REQUIRE(r.size() == 4);
    CHECK(r.front() == doctest::Approx(0.1));
    CHECK(r.back() == doctest::Approx(0.4));
    c.diagnostics.rmax = 0.05;
    CHECK_THROWS_AS(validate(c), ConfigError);
  }

  TEST_CASE("problems and fields from config") {
    RunConfig c;
    c.problem.A = 3.0;
    c.problem.nodes = 65;
    const auto p = make_problem(c);
    CHECK(p.spec.phase == Phase::one_phase);
    CHECK(p.boundary.grid().x_max() == doctest::Approx(3.0));
    c.field.source = "rank1";
    c.field.n = 33;
    const auto u = make_field(c);
    CHECK(u.grid().nx == 33);
    CHECK(u(32, 0) == doctest::Approx(1.0));
    c.field.source = "nope";
    CHECK_THROWS(make_field(c));
  }
}

TEST_SUITE("report") {
  TEST_CASE("reports carry the schema version and kind") {
    const Json j = make_report("demo", {{"x", 1.5}});
    CHECK(j["schema_version"] == 1);
    CHECK(j["report"] == "demo");
    CHECK(j["x"] == 1.5);
    CHECK(j.begin().key() == "schema_version");
  }

  TEST_CASE("NaN becomes null") {
    EnergyBreakdown<double> e{NAN, 1.0, NAN};
    const Json j = to_json(e);
    CHECK(j["biharm"].is_null());
    CHECK(j["volume"] == 1.0);
  }

  TEST_CASE("doubles round trip through JSON text") {
    const double v = 0.1 + 0.2;
    std::stringstream ss;
    write_json(ss, make_report("t", {{"v", v}}));
    CHECK(Json::parse(ss.str())["v"].get<double>() == v);
    CHECK(fmt17(v) == "0.30000000000000004");
  }

  TEST_CASE("sweep CSV format") {
    std::stringstream ss;
    write_sweep_csv(ss, {{2.0, NAN, 2.0, true}, {4.0, 2.25, 2.3, false}});
    std::string header, row1, row2;
    std::getline(ss, header);
    std::getline(ss, row1);
    std::getline(ss, row2);
    CHECK(header == "A,a_h,J_h,converged");
    CHECK(row1 == "2,nan,2,1");
    CHECK(row2 == "4,2.25,2.2999999999999998,0");
  }
}
