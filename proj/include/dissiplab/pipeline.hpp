#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dissiplab/config.hpp"
#include "dissiplab/coupling.hpp"
#include "dissiplab/decay.hpp"
#include "dissiplab/dispersion.hpp"

namespace dissiplab {

enum class Stage { Hypotheses, Symmetry, Hyperbolicity, Coupling, Compensating, Dissipativity, Decay };

const char* to_string(Stage s);

struct CaseResult {
  std::string name;  // "viscous" or "inviscid"
  bool passed = false;
  nlohmann::ordered_json stages;
  std::optional<CompensatingMatrix> compensating;
  std::optional<DispersionCurve> curve;
  std::optional<DecayTrace> trace;
};

struct PipelineResult {
  bool passed = false;
  std::vector<CaseResult> cases;
};

/// Runs stages in order up to and including `last` for each selected case.
/// A failing or throwing stage marks every later stage "blocked".
PipelineResult run_pipeline(const RunConfig& config, Stage last = Stage::Decay);

/// Report document. The timestamp (provenance.timestamp) is the only field
/// that varies between runs of the same config.
nlohmann::ordered_json make_report(const PipelineResult& result, const RunConfig& config, bool with_timestamp = true);

/// report.json plus dispersion_<case>.csv and decay_<case>.csv in output_dir.
void write_outputs(const PipelineResult& result, const RunConfig& config);

nlohmann::ordered_json compensating_json(const CompensatingMatrix& k);

}  // namespace dissiplab
