#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dissiplab/decay.hpp"
#include "dissiplab/dispersion.hpp"
#include "dissiplab/eos.hpp"
#include "dissiplab/matrices.hpp"

namespace dissiplab {

inline constexpr const char* kConfigSchema = "dissiplab.config/1";
inline constexpr const char* kReportSchema = "dissiplab.report/1";
inline constexpr const char* kVersion = "0.1.0";

enum class CaseSelect { Viscous, Inviscid, Both };

const char* to_string(CaseSelect c);
CaseSelect parse_case(const std::string& s);

struct DispersionSpec {
  double xi_min = 1e-3;
  double xi_max = 1e3;
  std::size_t n = 200;
  Spacing spacing = Spacing::Log;
};

struct DecaySpec {
  bool enabled = true;
  double t_max = 1000.0;
  std::size_t n_t = 401;
  double width = 1.0;
  Vec4 amplitude = Vec4(1.0, 0.0, 0.0, 0.0);
  QuadratureSpec quadrature;
  std::vector<int> l_list = {0, 1};
};

struct CompensatingSpec {
  std::optional<double> delta;
  int alpha_power = 3;
  bool relaxation_coupling = true;
  bool adjust_constants = true;
};

struct Tolerances {
  double coupling = kDefaultCouplingTol;
  double equilibrium = kDefaultEquilibriumTol;
  double speed_match = 1e-9;
  double energy_residual = 1e-5;
};

struct RunConfig {
  FluidModel model = FluidModel::ideal_gas(1.0, 1.4, PowerLawCoefficient::constant(1.0),
                                           PowerLawCoefficient::constant(0.0), 1.0);
  StateVector state;
  CaseSelect case_select = CaseSelect::Inviscid;
  SampleBox box;
  std::size_t hypothesis_samples = 1000;
  DispersionSpec dispersion;
  DecaySpec decay;
  CompensatingSpec compensating;
  Tolerances tolerances;
  std::uint64_t seed = 0;
  std::string output_dir = "dissiplab_out";
};

/// Parses and validates; unknown keys anywhere are rejected. Throws ConfigError.
RunConfig parse_config(const nlohmann::ordered_json& j);
RunConfig load_config(const std::string& path);

/// Re-checks the cross-field invariants (after command-line overrides):
/// case = viscous or both needs nu > 0 at the state, case = inviscid needs nu = 0.
void validate(const RunConfig& config);

/// Effective configuration with every default filled in.
nlohmann::ordered_json to_json(const RunConfig& config);

/// FNV-1a 64 over the compact dump of to_json without output_dir, hex.
std::string config_hash(const RunConfig& config);

}  // namespace dissiplab
