#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dissiplab/config.hpp"
#include "dissiplab/csv.hpp"
#include "dissiplab/errors.hpp"
#include "dissiplab/pipeline.hpp"

using namespace dissiplab;
using nlohmann::ordered_json;

namespace {

ordered_json base_config() {
  return ordered_json::parse(R"({
    "schema": "dissiplab.config/1",
    "model": {"eos": "ideal_gas", "R": 1.0, "gamma": 1.4, "kappa": 1.0, "nu": 0.0, "tau": 1.0},
    "state": {"rho": 1.0, "u": 0.0, "theta": 1.0},
    "case": "inviscid",
    "decay": {"enabled": false},
    "output_dir": "unused"
  })");
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const RunConfig c = parse_config(base_config());
  CHECK(c.case_select == CaseSelect::Inviscid);
  CHECK(c.state.q == 0.0);
  CHECK(c.dispersion.n == 200);
  CHECK(c.decay.quadrature.n_xi == 20000);
  CHECK(c.hypothesis_samples == 1000);
}

TEST_CASE("schema violations") {
  ordered_json j = base_config();
  j["extra"] = 1;
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = base_config();
  j["model"]["Gamma"] = 1.4;
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = base_config();
  j["schema"] = "dissiplab.config/0";
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = base_config();
  j["model"]["gamma"] = "1.4";
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = base_config();
  j["model"]["gamma"] = 0.5;
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = base_config();
  j["decay"]["n_xi"] = 1001;
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = base_config();
  j["case"] = "both";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("case and viscosity must agree") {
  ordered_json j = base_config();
  j["case"] = "viscous";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j["model"]["nu"] = 0.1;
  CHECK_NOTHROW(parse_config(j));
  j["case"] = "inviscid";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j["case"] = "both";
  CHECK_NOTHROW(parse_config(j));
}

TEST_CASE("power-law coefficients in the config") {
  ordered_json j = base_config();
  j["model"]["kappa"] = {{"coefficient", 2.0}, {"rho_exponent", 0.5}};
  const RunConfig c = parse_config(j);
  CHECK(c.model.kappa().value(4.0, 1.0) == doctest::Approx(4.0));
  CHECK(to_json(c)["model"]["kappa"]["rho_exponent"] == 0.5);
}

TEST_CASE("config hash ignores the output directory") {
  ordered_json j = base_config();
  const RunConfig a = parse_config(j);
  j["output_dir"] = "elsewhere";
  const RunConfig b = parse_config(j);
  CHECK(config_hash(a) == config_hash(b));
  j["seed"] = 9;
  CHECK(config_hash(parse_config(j)) != config_hash(a));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("effective config round-trips") {
  const RunConfig a = parse_config(base_config());
  const RunConfig b = parse_config(to_json(a));
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("failing hypotheses block later stages") {
  ordered_json j = base_config();
  j["model"] = ordered_json::parse(
      R"({"eos": "power_law", "A": 1.0, "alpha": -1.0, "beta": 1.0, "cv": 2.5, "kappa": 1.0, "nu": 0.0, "tau": 1.0})");
  const RunConfig c = parse_config(j);
  const PipelineResult r = run_pipeline(c);
  CHECK_FALSE(r.passed);
  const auto& stages = r.cases.at(0).stages;
  CHECK(stages["hypotheses"]["status"] == "fail");
  for (const char* s : {"symmetry", "hyperbolicity", "coupling", "compensating", "dissipativity", "decay"})
    CHECK(stages[s]["status"] == "blocked");
}

TEST_CASE("pipeline on the reference state without decay") {
  ordered_json j = base_config();
  j["model"]["nu"] = 0.1;
  j["case"] = "both";
  const PipelineResult r = run_pipeline(parse_config(j));
  CHECK(r.passed);
  REQUIRE(r.cases.size() == 2);
  CHECK(r.cases[0].name == "viscous");
  CHECK(r.cases[1].name == "inviscid");
  CHECK(r.cases[0].compensating->delta == doctest::Approx(0.03125));
  CHECK(r.cases[1].compensating->construction == Construction::Inviscid);
}

TEST_CASE("stop after a chosen stage") {
  const PipelineResult r = run_pipeline(parse_config(base_config()), Stage::Coupling);
  CHECK(r.passed);
  CHECK(r.cases[0].stages.contains("coupling"));
  CHECK_FALSE(r.cases[0].stages.contains("compensating"));
}

TEST_CASE("non-equilibrium state fails at the compensating stage") {
  ordered_json j = base_config();
  j["state"]["q"] = 0.3;
  const PipelineResult r = run_pipeline(parse_config(j));
  const auto& stages = r.cases[0].stages;
  CHECK(stages["coupling"]["status"] == "pass");
  CHECK(stages["compensating"]["status"] == "error");
  CHECK(stages["dissipativity"]["status"] == "blocked");
}

TEST_CASE("report without timestamp is reproducible") {
  const RunConfig c = parse_config(base_config());
  const std::string a = make_report(run_pipeline(c), c, false).dump();
  const std::string b = make_report(run_pipeline(c), c, false).dump();
  CHECK(a == b);
  CHECK(make_report(run_pipeline(c), c, true)["provenance"].contains("timestamp"));
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  for (double v : {1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0547828124727532})
    CHECK(std::stod(format_double(v)) == v);
  std::ostringstream s;
  CsvWriter w(s, {"a", "b"});
  w.row({1.5, -3.0});
  CHECK(s.str() == "a,b\n1.5,-3\n");
  CHECK_THROWS(w.row({1.0}));
}

TEST_CASE("unwritable output") {
  CHECK_THROWS_AS(write_text_file("/proc/nonexistent/x.txt", "x"), IoError);
}
