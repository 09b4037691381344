#include "dissiplab/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <sstream>

#include "dissiplab/csv.hpp"
#include "dissiplab/errors.hpp"
#include "dissiplab/kernels/modal_energy.hpp"
#include "dissiplab/spectral.hpp"

namespace dissiplab {

using nlohmann::ordered_json;

namespace {

constexpr Stage kStages[] = {Stage::Hypotheses,   Stage::Symmetry,      Stage::Hyperbolicity, Stage::Coupling,
                             Stage::Compensating, Stage::Dissipativity, Stage::Decay};

ordered_json matrix_json(const Mat4& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < 4; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
  return rows;
}

ordered_json status(bool ok) { return ok ? "pass" : "fail"; }

// Rates consistent with the theoretical upper bound: slope <= -(2l+1)/4 + 0.1.
constexpr double kSlopeSlack = 0.1;

class CaseRunner {
 public:
  CaseRunner(const RunConfig& config, const FluidModel& model, std::string name)
      : config_(config), model_(model) {
    r_.name = std::move(name);
  }

  CaseResult run(Stage last) {
    bool blocked = false;
    for (Stage s : kStages) {
      if (static_cast<int>(s) > static_cast<int>(last)) break;
      ordered_json entry;
      if (blocked) {
        entry["status"] = "blocked";
      } else {
        try {
          entry = run_stage(s);
        } catch (const Error& e) {
          entry = ordered_json{{"status", "error"}, {"error", e.what()}};
        }
        blocked = entry["status"] != "pass";
      }
      r_.stages[to_string(s)] = entry;
    }
    r_.passed = !blocked;
    return std::move(r_);
  }

 private:
  ordered_json run_stage(Stage s) {
    switch (s) {
      case Stage::Hypotheses:
        return hypotheses();
      case Stage::Symmetry:
        return symmetry();
      case Stage::Hyperbolicity:
        return hyperbolicity();
      case Stage::Coupling:
        return coupling();
      case Stage::Compensating:
        return compensating();
      case Stage::Dissipativity:
        return dissipativity();
      case Stage::Decay:
        return decay();
    }
    return {};
  }

  ordered_json hypotheses() {
    const HypothesisReport rep = check_hypotheses(model_, config_.box, config_.hypothesis_samples, config_.seed);
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks)
      checks.push_back({{"name", c.name},
                        {"passed", c.passed},
                        {"worst_value", c.worst_value},
                        {"worst_rho", c.worst_rho},
                        {"worst_theta", c.worst_theta}});
    return {{"status", status(rep.all_passed())}, {"samples", rep.n_samples}, {"checks", checks}};
  }

  ordered_json symmetry() {
    sm_ = assemble(config_.state, model_);
    ss_ = symmetrize(sm_);
    const double a0_min = min_eigenvalue(ss_.A0h);
    const double b_min = min_eigenvalue(sym_part(ss_.Bh));
    const double l_min = min_eigenvalue(sym_part(ss_.L));
    const double residual = std::max({symmetry_residual(ss_.A0h), symmetry_residual(ss_.A1h),
                                      symmetry_residual(ss_.Bh), symmetry_residual(ss_.L)});
    const bool ok = residual <= kSymmetryTol && a0_min > 0.0 && b_min >= -1e-14 && l_min >= -1e-14;
    return {{"status", status(ok)},
            {"symmetry_residual", residual},
            {"A0_min_eig", a0_min},
            {"B_min_eig", b_min},
            {"L_min_eig", l_min},
            {"S_diagonal", {ss_.S(0, 0), ss_.S(1, 1), ss_.S(2, 2), ss_.S(3, 3)}}};
  }

  ordered_json hyperbolicity() {
    const CharSpeeds cs = char_speeds_closed_form(sm_.thermo, config_.state, sm_.tau);
    const auto oracle = char_speeds_eigen(sm_);
    double diff = 0.0;
    for (int i = 0; i < 4; ++i) diff = std::max(diff, std::abs(cs.zeta[i] - oracle[i]));
    const double gap = strict_hyperbolicity_gap(cs);
    const bool ok = cs.discriminant > 0.0 && gap > 0.0 && diff <= config_.tolerances.speed_match;
    return {{"status", status(ok)},
            {"b_tilde", cs.b_tilde},
            {"c_tilde", cs.c_tilde},
            {"discriminant", cs.discriminant},
            {"speeds", {cs.zeta[0], cs.zeta[1], cs.zeta[2], cs.zeta[3]}},
            {"c_slow", cs.c_slow},
            {"c_fast", cs.c_fast},
            {"gap", gap},
            {"oracle_max_abs_diff", diff}};
  }

  ordered_json coupling() {
    const CouplingVerdict v = check_genuine_coupling(ss_, config_.tolerances.coupling);
    ordered_json j = {{"status", status(v.genuinely_coupled)},
                      {"genuinely_coupled", v.genuinely_coupled},
                      {"min_kernel_overlap", v.min_kernel_overlap}};
    if (v.witness) j["witness"] = {(*v.witness)(0), (*v.witness)(1), (*v.witness)(2), (*v.witness)(3)};
    return j;
  }

  ordered_json compensating() {
    if (!is_equilibrium(config_.state, config_.tolerances.equilibrium))
      throw NotEquilibriumError("compensating matrices need q = 0 at the state");
    const CompensatingSpec& spec = config_.compensating;
    if (ss_.thermo.nu > 0.0) {
      ViscousOptions o;
      o.delta = spec.delta;
      o.relaxation_coupling = spec.relaxation_coupling;
      k_ = compensating_viscous(ss_, o);
    } else {
      InviscidOptions o;
      o.delta = spec.delta;
      o.alpha_power = spec.alpha_power;
      o.adjust_constants = spec.adjust_constants;
      k_ = compensating_inviscid(ss_, o);
    }
    r_.compensating = *k_;
    ordered_json j = {{"status", status(k_->diagnostics.valid)}};
    j.update(compensating_json(*k_));
    return j;
  }

  ordered_json dissipativity() {
    const DispersionSpec& d = config_.dispersion;
    DispersionCurve curve = scan(ss_, d.xi_min, d.xi_max, d.n, d.spacing);
    const ordered_json zero = xi_zero_limit();
    ordered_json j = {{"dissipative", curve.dissipative},
                      {"k_sharp", curve.k_sharp},
                      {"argmin_xi", curve.xi_grid[curve.argmin]},
                      {"grid_points", curve.xi_grid.size()}};
    bool ok = curve.dissipative && curve.k_sharp > 0.0;
    if (curve.offending_xi) j["offending_xi"] = *curve.offending_xi;
    if (ok) {
      const BoundCheck b = verify_bound(curve, curve.k_sharp);
      j["bound_holds"] = b.holds;
      j["bound_min_slack"] = b.min_slack;
      ok = b.holds;
    }
    j["xi_zero_eigenvalues"] = zero;
    r_.curve = std::move(curve);
    ordered_json out = {{"status", status(ok)}};
    out.update(j);
    return out;
  }

  ordered_json xi_zero_limit() const {
    const auto l0 = dispersion_eigenvalues(ss_, 0.0);
    ordered_json z = ordered_json::array();
    for (const auto& l : l0) z.push_back({l.real(), l.imag()});
    return z;
  }

  ordered_json decay() {
    if (!config_.decay.enabled) return {{"status", "pass"}, {"skipped", true}};
    const DecaySpec& d = config_.decay;
    DecayOptions o;
    o.n_t = d.n_t;
    o.l_list = d.l_list;
    o.k_sharp = r_.curve->k_sharp;
    o.seed = config_.seed;
    const InitialData data = InitialData::gaussian(d.amplitude, d.width);
    DecayTrace tr = decay_trace(ss_, *k_, data, d.t_max, d.quadrature, o);

    const BoundCheck theory = verify_bound(*r_.curve, tr.lyapunov.k_theory);
    bool rates_ok = true;
    ordered_json slopes = ordered_json::object();
    for (std::size_t i = 0; i < tr.l_list.size(); ++i) {
      const int l = tr.l_list[i];
      slopes["l" + std::to_string(l)] = tr.fitted_slopes[i];
      if (!(tr.fitted_slopes[i] <= -(2.0 * l + 1.0) / 4.0 + kSlopeSlack)) rates_ok = false;
    }
    const bool ok = rates_ok && tr.envelope_violations == 0 && tr.energy_residual <= config_.tolerances.energy_residual &&
                    tr.M_monotone && theory.holds;
    ordered_json j = {{"status", status(ok)},
                      {"fitted_slopes", slopes},
                      {"fit_window", {tr.fit_t_min, d.t_max}},
                      {"envelope_violations", tr.envelope_violations},
                      {"envelope_constant", tr.envelope_constant},
                      {"energy_residual", tr.energy_residual},
                      {"M_monotone", tr.M_monotone},
                      {"lyapunov_delta", tr.lyapunov.delta},
                      {"k_theory", tr.lyapunov.k_theory},
                      {"k_theory_bound_holds", theory.holds},
                      {"xi_cut", tr.xi_cut},
                      {"n_xi", tr.n_xi},
                      {"refinement_change", tr.refinement_change},
                      {"fallback_modes", tr.fallback_modes},
                      {"initial_norms", ordered_json::array()}};
    for (int l : tr.l_list) j["initial_norms"].push_back(data.norm(l));
    r_.trace = std::move(tr);
    return j;
  }

  const RunConfig& config_;
  FluidModel model_;
  CaseResult r_;
  SystemMatrices sm_;
  SymmetricSystem ss_;
  std::optional<CompensatingMatrix> k_;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const char* to_string(Stage s) {
  switch (s) {
    case Stage::Hypotheses:
      return "hypotheses";
    case Stage::Symmetry:
      return "symmetry";
    case Stage::Hyperbolicity:
      return "hyperbolicity";
    case Stage::Coupling:
      return "coupling";
    case Stage::Compensating:
      return "compensating";
    case Stage::Dissipativity:
      return "dissipativity";
    case Stage::Decay:
      return "decay";
  }
  return "?";
}

ordered_json compensating_json(const CompensatingMatrix& k) {
  ordered_json j = {{"construction", to_string(k.construction)},
                    {"delta", k.delta},
                    {"halvings", k.halvings},
                    {"K", matrix_json(k.K)},
                    {"skew_residual", k.diagnostics.skew_residual},
                    {"min_eig_sym", k.diagnostics.min_eig_sym},
                    {"scaled_margin", k.diagnostics.scaled_margin},
                    {"positive_definite", k.diagnostics.positive_definite}};
  if (k.construction == Construction::Inviscid) {
    j["alpha0"] = k.alpha0;
    j["beta0"] = k.beta0;
    j["gamma0"] = k.gamma0;
    j["alpha_power"] = k.alpha_power;
    j["constants_adjusted"] = k.constants_adjusted;
    const auto& q = k.coefficients;
    j["coefficients"] = {{"a1", q.a1}, {"a2", q.a2}, {"a3", q.a3}, {"a4", q.a4}, {"b13", q.b13}, {"b24", q.b24}};
  } else {
    j["relaxation_coupling"] = k.relaxation_coupling;
  }
  return j;
}

PipelineResult run_pipeline(const RunConfig& config, Stage last) {
  PipelineResult out;
  std::vector<std::pair<FluidModel, std::string>> runs;
  if (config.case_select == CaseSelect::Viscous || config.case_select == CaseSelect::Both)
    runs.emplace_back(config.model, "viscous");
  if (config.case_select == CaseSelect::Inviscid || config.case_select == CaseSelect::Both)
    runs.emplace_back(config.model.inviscid(), "inviscid");
  out.passed = true;
  for (const auto& [model, name] : runs) {
    out.cases.push_back(CaseRunner(config, model, name).run(last));
    out.passed = out.passed && out.cases.back().passed;
  }
  return out;
}

ordered_json make_report(const PipelineResult& result, const RunConfig& config, bool with_timestamp) {
  ordered_json report;
  report["schema"] = kReportSchema;
  report["overall"] = status(result.passed);
  ordered_json cases = ordered_json::array();
  for (const auto& c : result.cases) cases.push_back({{"case", c.name}, {"overall", status(c.passed)}, {"stages", c.stages}});
  report["cases"] = cases;
  ordered_json prov = {{"config_hash", config_hash(config)},
                       {"version", kVersion},
                       {"simd", kernels::to_string(kernels::active_simd_level())}};
  if (with_timestamp) prov["timestamp"] = utc_timestamp();
  report["provenance"] = prov;
  report["config"] = to_json(config);
  report["config"].erase("output_dir");
  return report;
}

void write_outputs(const PipelineResult& result, const RunConfig& config) {
  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  write_text_file((dir / "report.json").string(), make_report(result, config).dump(2) + "\n");
  for (const auto& c : result.cases) {
    if (c.curve) {
      std::ostringstream s;
      write_csv(*c.curve, s);
      write_text_file((dir / ("dispersion_" + c.name + ".csv")).string(), s.str());
    }
    if (c.trace) {
      std::ostringstream s;
      write_csv(*c.trace, s);
      write_text_file((dir / ("decay_" + c.name + ".csv")).string(), s.str());
    }
  }
}

}  // namespace dissiplab
