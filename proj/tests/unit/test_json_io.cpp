#include <doctest.h>

#include <numbers>
#include <sstream>

#include "zzspec/errors.hpp"
#include "zzspec/json_io.hpp"

using namespace zzspec;
using doctest::Approx;

namespace {

Json roundtrip(const DomainSpec& spec) { return to_json(domain_from_json(to_json(spec))); }

Json minimal_config() {
  return Json::parse(R"({
    "schema": "zzspec.config/1",
    "command": "solve",
    "domain": {"kind": "l_shape", "width": 3.141592653589793},
    "solver": {"h": 0.1, "truncation": 30, "refine": 2, "gap_guess": 0.1},
    "units": {"m": 1, "c": 1, "hbar": 1},
    "output": {"dir": "out", "stem": "l_shape", "format": "json"}
  })");
}

}  // namespace

TEST_SUITE("json_io") {
  TEST_CASE("domains roundtrip") {
    CrossSection2D ellipse;
    ellipse.shape = SectionShape::ellipse;
    ellipse.p0 = 1.0;
    ellipse.p1 = 0.5;
    CrossSection2D poly;
    poly.shape = SectionShape::polygon;
    poly.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    const std::vector<DomainSpec> specs = {
        {BentStrip{CurvatureProfile::gaussian(0.5, 1.0, 0.25), 1.0}},
        {BentStrip{CurvatureProfile::tabulated({0.0, 1.0, 2.0}, {0.0, 0.3, 0.0}).scaled(2.0), 0.5}},
        {DeformedStrip{1.0, DeformationProfile::wavelet(1.0, 3.0), 0.01}},
        {CoupledStrips{1.0, 2.0, 0.5}},
        {LShape{std::numbers::pi}},
        {Cross{2.0}},
        {LoopStrip{CurvatureProfile::harmonic(1.0 / 3.0, 0.3, 2, 6.0 * std::numbers::pi),
                   6.0 * std::numbers::pi, 1.0}},
        {ellipse},
        {poly},
        {TwistedFiber{ellipse, 1.0}},
    };
    for (const DomainSpec& s : specs) CHECK(roundtrip(s) == to_json(s));
  }

  TEST_CASE("settings roundtrip") {
    SolverSettings s;
    s.grid.h = 1.0 / 16;
    s.grid.grading = 1.1;
    s.grid.sector = Sector::oo;
    s.refine = 2;
    s.k = 3;
    s.seed = 42;
    s.dim = 3;
    CHECK(to_json(solver_from_json(to_json(s))) == to_json(s));
    const UnitSystem u{2.0, 3.0, 0.5};
    CHECK(to_json(units_from_json(to_json(u))) == to_json(u));
    SweepSettings sw;
    sw.parameter = "beta";
    sw.values = {0.1, 0.2, 0.3, 0.4};
    sw.expected_exponent = 4.0;
    CHECK(to_json(sweep_from_json(to_json(sw))) == to_json(sw));
  }

  TEST_CASE("config parsing") {
    const RunConfig c = config_from_json(minimal_config());
    CHECK(c.command == "solve");
    REQUIRE(c.domain);
    CHECK(geometry_kind(*c.domain) == "l_shape");
    CHECK(c.solver.refine == 2);
    CHECK(c.units.m == 1.0);
    CHECK(c.stem == "l_shape");
    CHECK(c.format == OutputFormat::json);
    CHECK_NOTHROW(c.validate());
  }

  TEST_CASE("unknown and mistyped keys are config errors") {
    Json j = minimal_config();
    j["solver"]["hh"] = 0.1;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = minimal_config();
    j["extra"] = true;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = minimal_config();
    j["solver"]["h"] = "fine";
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = minimal_config();
    j["schema"] = "zzspec.config/0";
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = minimal_config();
    j["domain"] = Json::parse(R"({"kind": "moebius"})");
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  }

  TEST_CASE("out-of-scope geometries are rejected at parse time") {
    Json j = minimal_config();
    j["domain"] = Json::parse(R"({"kind": "curved_layer", "halfwidth": 1})");
    CHECK_THROWS_AS(config_from_json(j), OutOfScopeError);
  }

  TEST_CASE("serialization is deterministic") {
    SolveReport r;
    r.kind = "l_shape";
    r.best.eigenvalues = {0.9291, 1.2};
    r.best.residuals = {1e-10, 2e-10};
    r.threshold = 1.0;
    r.dirac = map_spectrum(r.best, 1.0, {}, 2);
    r.seconds = 1.0;
    const std::string a = to_json(r).dump(2);
    r.seconds = 2.0;
    CHECK(to_json(r).dump(2) == a);
    CHECK(to_json(r).contains("provenance"));
  }

  TEST_CASE("eigen table columns") {
    EigResult e;
    e.eigenvalues = {0.5, 0.99999999, 2.0};
    e.residuals = {1e-10, 1e-10, 1e-10};
    const std::string csv = eigen_table_csv(map_spectrum(e, 1.0, {}, 2));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "lambda_laplace,lambda_dirac_plus,lambda_dirac_minus,multiplicity,residual,class");
    int rows = 0;
    while (std::getline(in, line))
      if (!line.empty()) ++rows;
    CHECK(rows == 3);
    CHECK(csv.find("near_threshold") != std::string::npos);
  }

  TEST_CASE("infinite band ends are null") {
    const Json j = to_json(map_spectrum(EigResult{}, 1.0, {}, 2));
    const Json& bands = j["essential"]["bands"];
    REQUIRE(bands.size() == 2);
    CHECK(bands[0]["lo"].is_null());
    CHECK(bands[1]["hi"].is_null());
  }
}
