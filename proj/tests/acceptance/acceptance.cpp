// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance <path-to-dissiplab-cli> <configs-dir> <scratch-dir>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "dissiplab/config.hpp"
#include "dissiplab/coupling.hpp"
#include "dissiplab/decay.hpp"
#include "dissiplab/dispersion.hpp"
#include "dissiplab/errors.hpp"
#include "dissiplab/pipeline.hpp"
#include "dissiplab/spectral.hpp"

using namespace dissiplab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

FluidModel gas(double nu) {
  return FluidModel::ideal_gas(1.0, 1.4, PowerLawCoefficient::constant(1.0), PowerLawCoefficient::constant(nu), 1.0);
}

std::vector<StateVector> random_states(std::size_t n, std::uint64_t seed, bool equilibrium) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.1, 10.0), vel(-5.0, 5.0), flux(-2.0, 2.0);
  std::vector<StateVector> out(n);
  for (auto& s : out) {
    s.rho = pos(rng);
    s.u = vel(rng);
    s.theta = pos(rng);
    s.q = equilibrium ? 0.0 : flux(rng);
  }
  return out;
}

const StateVector kUnit{1.0, 0.0, 1.0, 0.0};

void speeds_oracle(const std::vector<StateVector>& states) {
  const FluidModel m = gas(0.0);
  double worst = 0.0, worst_forms = 0.0, min_disc = 1e300;
  for (const auto& s : states) {
    const CharSpeeds cs = char_speeds_closed_form(s, m);
    const auto eig = char_speeds_eigen(assemble(s, m));
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(cs.zeta[i] - eig[i]));
    const auto f = discriminant_forms(evaluate(m, s.rho, s.theta), s.rho, s.theta, m.tau());
    worst_forms = std::max(worst_forms, std::abs(f.from_coefficients - f.sum_of_squares) / f.sum_of_squares);
    min_disc = std::min(min_disc, cs.discriminant);
  }
  report(1, "characteristic-speed oracle equivalence", worst <= 1e-9 && min_disc > 0.0 && worst_forms <= 1e-12,
         "1000 states, max |closed - eigen| = " + num(worst) + ", min discriminant = " + num(min_disc) +
             ", discriminant forms rel diff = " + num(worst_forms));
}

void reference_state() {
  const CharSpeeds cs = char_speeds_closed_form(kUnit, gas(0.0));
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-5; };
  const bool ok = close(cs.b_tilde, -1.8) && close(cs.c_tilde, 0.4) && close(cs.discriminant, 1.64) &&
                  close(cs.zeta[0], -1.241097) && close(cs.zeta[1], -0.509596) && close(cs.zeta[2], 0.509596) &&
                  close(cs.zeta[3], 1.241097);
  report(2, "reference-state regression", ok,
         "b = " + num(cs.b_tilde) + ", c = " + num(cs.c_tilde) + ", discriminant = " + num(cs.discriminant) +
             ", speeds = +-" + num(cs.c_slow) + ", +-" + num(cs.c_fast));
}

void symmetrization(const std::vector<StateVector>& states) {
  double residual = 0.0, a0_min = 1e300, bl_min = 1e300;
  const FluidModel m = gas(0.1);
  for (const auto& s : states) {
    const SymmetricSystem ss = symmetric_system(s, m);
    residual = std::max({residual, symmetry_residual(ss.A0h), symmetry_residual(ss.A1h), symmetry_residual(ss.Bh),
                         symmetry_residual(ss.L)});
    a0_min = std::min(a0_min, min_eigenvalue(ss.A0h));
    bl_min = std::min({bl_min, min_eigenvalue(ss.Bh), min_eigenvalue(ss.L)});
  }
  report(3, "symmetrization", residual <= 1e-12 && a0_min > 0.0 && bl_min >= -1e-14,
         "max residual = " + num(residual) + ", min eig A0 = " + num(a0_min) + ", min eig B, L = " + num(bl_min));
}

void coupling(const std::vector<StateVector>& states) {
  bool ok = true;
  double overlap = 1e300;
  for (double nu : {0.1, 0.0}) {
    const FluidModel m = gas(nu);
    for (const auto& s : states) {
      const CouplingVerdict v = check_genuine_coupling(symmetric_system(s, m));
      ok = ok && v.genuinely_coupled && v.min_kernel_overlap > 1e-8;
      overlap = std::min(overlap, v.min_kernel_overlap);
    }
  }
  report(4, "genuine coupling", ok, "1000 states x {viscous, inviscid}, min kernel overlap = " + num(overlap));
}

void compensating() {
  bool ok = true;
  double skew = 0.0, min_eig = 1e300;
  for (const auto& s : random_states(100, 2024, true)) {
    const CompensatingMatrix kv = compensating_viscous(symmetric_system(s, gas(0.1)));
    const CompensatingMatrix ki = compensating_inviscid(symmetric_system(s, gas(0.0)));
    for (const auto* k : {&kv, &ki}) {
      skew = std::max(skew, k->diagnostics.skew_residual);
      min_eig = std::min(min_eig, k->diagnostics.min_eig_sym);
      ok = ok && k->diagnostics.skew_residual <= 1e-12 && k->diagnostics.min_eig_sym > 0.0;
    }
  }
  const SymmetricSystem unit = symmetric_system(kUnit, gas(0.1));
  const double bound = std::min(viscous_delta_bounds(unit).thermal, viscous_delta_bounds(unit).viscous);
  const double delta = compensating_viscous(unit).delta;
  bool rejected = false;
  try {
    ViscousOptions o;
    o.delta = 0.2;
    compensating_viscous(unit, o);
  } catch (const DeltaTooLargeError&) {
    rejected = true;
  }
  ok = ok && std::abs(delta - 0.03125) <= 1e-15 && std::abs(bound - 0.0625) <= 1e-15 && rejected;
  report(5, "compensating matrices", ok,
         "100 equilibria x 2 constructions, max skew residual = " + num(skew) + ", min eig = " + num(min_eig) +
             "; unit auto delta = " + num(delta) + " (bound " + num(bound) + "), delta = 0.2 " +
             (rejected ? "rejected" : "accepted"));
}

struct ReferenceRun {
  std::string name;
  RunConfig config;
  PipelineResult result;
  SymmetricSystem ss;
};

void dissipativity(const std::vector<ReferenceRun>& runs) {
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    const CaseResult& c = r.result.cases.at(0);
    if (!c.curve) {
      ok = false;
      detail += r.name + ": no curve; ";
      continue;
    }
    const DispersionCurve& curve = *c.curve;
    const double max_re = *std::max_element(curve.max_re.begin(), curve.max_re.end());
    const BoundCheck b = verify_bound(curve, curve.k_sharp);
    const double slack_at_argmin =
        -curve.k_sharp * curve.xi_grid[curve.argmin] * curve.xi_grid[curve.argmin] /
            (1.0 + curve.xi_grid[curve.argmin] * curve.xi_grid[curve.argmin]) -
        curve.max_re[curve.argmin];
    const auto zero = dispersion_eigenvalues(r.ss, 0.0);
    double zero_err = std::abs(zero[3] + 1.0);
    for (int i = 0; i < 3; ++i) zero_err = std::max(zero_err, std::abs(zero[i]));
    const bool case_ok = curve.xi_grid.size() == 200 && max_re < 0.0 && curve.k_sharp > 0.0 && b.holds &&
                         std::abs(slack_at_argmin) <= 1e-14 * std::abs(curve.max_re[curve.argmin]) && zero_err <= 1e-10;
    ok = ok && case_ok;
    detail += r.name + ": max Re = " + num(max_re) + ", k_sharp = " + num(curve.k_sharp) +
              ", slack at argmin = " + num(slack_at_argmin) + ", xi=0 error = " + num(zero_err) + "; ";
  }
  report(6, "strict dissipativity sweep", ok, detail);
}

void energy_identities(const std::vector<ReferenceRun>& runs) {
  bool ok = true;
  std::string detail;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal;
  for (const auto& r : runs) {
    const CVec4 u0(1.0, 0.3, -0.2, 0.5);
    const double r1 = energy_balance_residual(r.ss, sample_trajectory(r.ss, 1.0, u0, 1e-3, 10000));
    const double r2 = energy_balance_residual(r.ss, sample_trajectory(r.ss, 1.0, u0, 5e-4, 20000));
    const double ratio = r1 / r2;

    const CompensatingMatrix& K = *r.result.cases.at(0).compensating;
    const LyapunovParameters p = auto_lyapunov_delta(r.ss, K);
    std::size_t modes = 0, bad = 0;
    for (double xi : make_grid(1e-2, 1e2, 9, Spacing::Log))
      for (int n = 0; n < 6; ++n) {
        CVec4 v;
        for (int i = 0; i < 4; ++i) v(i) = Complex(normal(rng), normal(rng));
        const LyapunovResult lr = lyapunov_check(r.ss, K.K, xi, p.delta, sample_trajectory(r.ss, xi, v, 0.01, 2000));
        ++modes;
        if (!lr.passed || lr.halvings != 0) ++bad;
      }
    const bool case_ok = r1 <= 1e-5 && ratio >= 3.5 && ratio <= 4.5 && bad == 0;
    ok = ok && case_ok;
    detail += r.name + ": residual = " + num(r1) + ", halving ratio = " + num(ratio) + ", M checked on " +
              std::to_string(modes) + " modes (delta = " + num(p.delta) + "), failures = " + std::to_string(bad) + "; ";
  }
  report(7, "energy identities", ok, detail);
}

void pointwise_bound(const std::vector<ReferenceRun>& runs) {
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    const double k = r.result.cases.at(0).curve->k_sharp;
    const PointwiseBoundCheck c = check_pointwise_bound(r.ss, k, make_grid(1e-3, 1e3, 50, Spacing::Log),
                                                        make_grid(1e-2, 100.0, 50, Spacing::Linear));
    ok = ok && c.points == 2500 && c.violations == 0;
    detail += r.name + ": " + std::to_string(c.violations) + " violations of " + std::to_string(c.points) +
              ", worst ratio = " + num(c.worst_ratio) + "; ";
  }
  report(8, "pointwise Fourier bound", ok, detail);
}

void decay_rates(const std::vector<ReferenceRun>& runs) {
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    const CaseResult& c = r.result.cases.at(0);
    if (!c.trace) {
      ok = false;
      detail += r.name + ": no trace (" + c.stages.dump() + "); ";
      continue;
    }
    const DecayTrace& t = *c.trace;
    const double s0 = t.fitted_slopes.at(0), s1 = t.fitted_slopes.at(1);
    const bool case_ok = r.config.decay.t_max == 1000.0 && r.config.decay.width == 1.0 && s0 >= -0.35 &&
                         s0 <= -0.15 && s1 >= -0.90 && s1 <= -0.60 && t.envelope_violations == 0;
    ok = ok && case_ok;
    detail += r.name + ": slopes l0 = " + num(s0) + ", l1 = " + num(s1) +
              ", envelope violations = " + std::to_string(t.envelope_violations) + "; ";
  }
  report(9, "decay rates", ok, detail);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string without_timestamp(const std::string& text) {
  auto j = nlohmann::ordered_json::parse(text);
  j["provenance"].erase("timestamp");
  return j.dump();
}

void determinism(const std::string& cli, const fs::path& configs, const fs::path& scratch) {
  bool ok = true;
  std::string detail;
  for (const char* name : {"ideal_gas_inviscid", "ideal_gas_viscous"}) {
    const fs::path cfg = configs / (std::string(name) + ".json");
    const fs::path a = scratch / name / "a";
    const fs::path b = scratch / name / "b";
    fs::remove_all(scratch / name);
    const std::string base = "\"" + cli + "\" verify-all --config \"" + cfg.string() + "\" --seed 7 --output ";
    const int ca = std::system(("DISSIPLAB_THREADS=1 " + base + "\"" + a.string() + "\" > /dev/null").c_str());
    const int cb = std::system(("DISSIPLAB_THREADS=3 " + base + "\"" + b.string() + "\" > /dev/null").c_str());
    std::size_t files = 0, differ = 0;
    if (ca != 0 || cb != 0) {
      ok = false;
      detail += std::string(name) + ": exit codes " + std::to_string(ca) + ", " + std::to_string(cb) + "; ";
      continue;
    }
    for (const auto& entry : fs::directory_iterator(a)) {
      const fs::path other = b / entry.path().filename();
      ++files;
      if (!fs::exists(other)) {
        ++differ;
        continue;
      }
      const std::string x = slurp(entry.path()), y = slurp(other);
      const bool same = entry.path().filename() == "report.json" ? without_timestamp(x) == without_timestamp(y) : x == y;
      if (!same) ++differ;
    }
    ok = ok && files == 3 && differ == 0;
    detail += std::string(name) + ": " + std::to_string(files) + " files, " + std::to_string(differ) + " differ; ";
  }
  report(10, "determinism", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::fprintf(stderr, "usage: %s <dissiplab-cli> <configs-dir> <scratch-dir>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path configs = argv[2];
  const fs::path scratch = argv[3];

  const auto states = random_states(1000, 20240611, false);
  auto guarded = [](int id, const char* name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, name, false, std::string("exception: ") + e.what());
    }
  };
  guarded(1, "characteristic-speed oracle equivalence", [&] { speeds_oracle(states); });
  guarded(2, "reference-state regression", [&] { reference_state(); });
  guarded(3, "symmetrization", [&] { symmetrization(states); });
  guarded(4, "genuine coupling", [&] { coupling(states); });
  guarded(5, "compensating matrices", [&] { compensating(); });

  std::vector<ReferenceRun> runs;
  try {
    for (const char* name : {"ideal_gas_inviscid", "ideal_gas_viscous"}) {
      ReferenceRun r;
      r.name = std::string(name).substr(10);
      r.config = load_config((configs / (std::string(name) + ".json")).string());
      r.result = run_pipeline(r.config);
      r.ss = symmetric_system(r.config.state, r.result.cases.at(0).name == "viscous" ? r.config.model
                                                                                    : r.config.model.inviscid());
      runs.push_back(std::move(r));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "reference runs failed: %s\n", e.what());
  }
  guarded(6, "strict dissipativity sweep", [&] { dissipativity(runs); });
  guarded(7, "energy identities", [&] { energy_identities(runs); });
  guarded(8, "pointwise Fourier bound", [&] { pointwise_bound(runs); });
  guarded(9, "decay rates", [&] { decay_rates(runs); });
  guarded(10, "determinism", [&] { determinism(cli, configs, scratch); });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
