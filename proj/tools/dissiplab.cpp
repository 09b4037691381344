// dissiplab: command-line driver for the verification pipeline.
#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dissiplab/config.hpp"
#include "dissiplab/csv.hpp"
#include "dissiplab/errors.hpp"
#include "dissiplab/pipeline.hpp"

namespace {

using dissiplab::Stage;
using nlohmann::ordered_json;

struct CommonArgs {
  std::string config;
  std::string output;
  std::string csv;
  std::optional<double> tmax;
  std::optional<std::uint64_t> seed;
  std::string case_name;
};

void add_common(CLI::App* sub, CommonArgs& a) {
  sub->add_option("--config", a.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--output", a.output, "output directory (overrides output_dir)");
  sub->add_option("--csv", a.csv, "CSV output path");
  sub->add_option("--tmax", a.tmax, "decay horizon (overrides decay.t_max)");
  sub->add_option("--seed", a.seed, "seed (overrides seed)");
  sub->add_option("--case", a.case_name, "viscous, inviscid or both")
      ->check(CLI::IsMember({"viscous", "inviscid", "both"}));
}

dissiplab::RunConfig load(const CommonArgs& a) {
  dissiplab::RunConfig c = dissiplab::load_config(a.config);
  if (!a.output.empty()) c.output_dir = a.output;
  if (a.tmax) c.decay.t_max = *a.tmax;
  if (a.seed) c.seed = *a.seed;
  if (!a.case_name.empty()) c.case_select = dissiplab::parse_case(a.case_name);
  dissiplab::validate(c);
  return c;
}

// out.csv -> out_viscous.csv when more than one case writes to the same path
std::string csv_path(const CommonArgs& a, const dissiplab::RunConfig& c, const std::string& stem,
                     const std::string& case_name, bool several) {
  namespace fs = std::filesystem;
  if (a.csv.empty()) return (fs::path(c.output_dir) / (stem + "_" + case_name + ".csv")).string();
  if (!several) return a.csv;
  fs::path p(a.csv);
  return (p.parent_path() / (p.stem().string() + "_" + case_name + p.extension().string())).string();
}

int finish(const dissiplab::PipelineResult& r) { return r.passed ? 0 : 1; }

int run_command(const std::string& name, const CommonArgs& a) {
  const dissiplab::RunConfig c = load(a);

  if (name == "verify-all") {
    const auto r = dissiplab::run_pipeline(c, Stage::Decay);
    dissiplab::write_outputs(r, c);
    std::cout << "overall: " << (r.passed ? "pass" : "fail") << "  report: "
              << (std::filesystem::path(c.output_dir) / "report.json").string() << "\n";
    return finish(r);
  }
  if (name == "check-hyperbolic" || name == "check-coupling") {
    const auto r = dissiplab::run_pipeline(c, name == "check-hyperbolic" ? Stage::Hyperbolicity : Stage::Coupling);
    std::cout << dissiplab::make_report(r, c, false).dump(2) << "\n";
    return finish(r);
  }
  if (name == "compensate") {
    const auto r = dissiplab::run_pipeline(c, Stage::Compensating);
    ordered_json out = {{"overall", r.passed ? "pass" : "fail"}, {"cases", ordered_json::array()}};
    for (const auto& cr : r.cases) {
      ordered_json entry = {{"case", cr.name}};
      if (cr.compensating)
        entry["compensating"] = dissiplab::compensating_json(*cr.compensating);
      else
        entry["stages"] = cr.stages;
      out["cases"].push_back(entry);
    }
    std::cout << out.dump(2) << "\n";
    return finish(r);
  }
  if (name == "dispersion" || name == "decay") {
    const bool disp = name == "dispersion";
    const auto r = dissiplab::run_pipeline(c, disp ? Stage::Dissipativity : Stage::Decay);
    ordered_json summary = {{"overall", r.passed ? "pass" : "fail"}, {"cases", ordered_json::array()}};
    for (const auto& cr : r.cases) {
      ordered_json entry = {{"case", cr.name}, {"result", cr.stages[disp ? "dissipativity" : "decay"]}};
      std::ostringstream s;
      if (disp && cr.curve) dissiplab::write_csv(*cr.curve, s);
      if (!disp && cr.trace) dissiplab::write_csv(*cr.trace, s);
      if (!s.str().empty()) {
        const std::string path = csv_path(a, c, name, cr.name, r.cases.size() > 1);
        dissiplab::write_text_file(path, s.str());
        entry["csv"] = path;
      }
      summary["cases"].push_back(entry);
    }
    std::cout << summary.dump(2) << "\n";
    return finish(r);
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dissiplab: strict-dissipativity verification for 1-D Cattaneo-Christov systems"};
  app.require_subcommand(1);
  CommonArgs args;
  const char* commands[][2] = {
      {"check-hyperbolic", "hypotheses, symmetrization and characteristic speeds"},
      {"check-coupling", "up to the genuine-coupling condition"},
      {"compensate", "build and verify the compensating matrix; prints JSON"},
      {"dispersion", "sweep the dispersion relation; writes the lambda(xi) CSV"},
      {"decay", "Fourier-space decay trace; writes the norm CSV"},
      {"verify-all", "full pipeline; writes report.json and CSVs to the output directory"},
  };
  for (const auto& cmd : commands) add_common(app.add_subcommand(cmd[0], cmd[1]), args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run_command(app.get_subcommands().front()->get_name(), args);
  } catch (const dissiplab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dissiplab::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const dissiplab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
