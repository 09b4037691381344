#include "dissiplab/config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "dissiplab/errors.hpp"

namespace dissiplab {

using nlohmann::ordered_json;

namespace {

void check_keys(const ordered_json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

double number(const ordered_json& j, const char* key, const std::string& where, std::optional<double> fallback) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + "." + key + " is required");
  }
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

bool non_negative_integer(const ordered_json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::size_t count(const ordered_json& j, const char* key, const std::string& where, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!non_negative_integer(v)) throw ConfigError(where + "." + key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

bool boolean(const ordered_json& j, const char* key, const std::string& where, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(where + "." + key + " must be true or false");
  return j.at(key).get<bool>();
}

PowerLawCoefficient coefficient(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
  const auto& v = j.at(key);
  if (v.is_number()) return PowerLawCoefficient::constant(v.get<double>());
  const std::string sub = where + "." + key;
  check_keys(v, sub, {"coefficient", "rho_exponent", "theta_exponent"});
  return {number(v, "coefficient", sub, std::nullopt), number(v, "rho_exponent", sub, 0.0),
          number(v, "theta_exponent", sub, 0.0)};
}

ordered_json coefficient_json(const PowerLawCoefficient& c) {
  if (c.rho_exponent == 0.0 && c.theta_exponent == 0.0) return c.coefficient;
  return {{"coefficient", c.coefficient}, {"rho_exponent", c.rho_exponent}, {"theta_exponent", c.theta_exponent}};
}

FluidModel parse_model(const ordered_json& j) {
  if (!j.is_object() || !j.contains("eos") || !j.at("eos").is_string())
    throw ConfigError("model.eos must be \"ideal_gas\" or \"power_law\"");
  const std::string eos = j.at("eos").get<std::string>();
  try {
    if (eos == "ideal_gas") {
      check_keys(j, "model", {"eos", "R", "gamma", "kappa", "nu", "tau"});
      return FluidModel::ideal_gas(number(j, "R", "model", std::nullopt), number(j, "gamma", "model", std::nullopt),
                                   coefficient(j, "kappa", "model"), coefficient(j, "nu", "model"),
                                   number(j, "tau", "model", std::nullopt));
    }
    if (eos == "power_law") {
      check_keys(j, "model", {"eos", "A", "alpha", "beta", "cv", "kappa", "nu", "tau"});
      return FluidModel::power_law(number(j, "A", "model", std::nullopt), number(j, "alpha", "model", std::nullopt),
                                   number(j, "beta", "model", std::nullopt), number(j, "cv", "model", std::nullopt),
                                   coefficient(j, "kappa", "model"), coefficient(j, "nu", "model"),
                                   number(j, "tau", "model", std::nullopt));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  throw ConfigError("model.eos must be \"ideal_gas\" or \"power_law\"");
}

Spacing parse_spacing(const std::string& s) {
  if (s == "log") return Spacing::Log;
  if (s == "linear") return Spacing::Linear;
  throw ConfigError("dispersion.spacing must be \"log\" or \"linear\"");
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

const char* to_string(CaseSelect c) {
  switch (c) {
    case CaseSelect::Viscous:
      return "viscous";
    case CaseSelect::Inviscid:
      return "inviscid";
    case CaseSelect::Both:
      return "both";
  }
  return "?";
}

CaseSelect parse_case(const std::string& s) {
  if (s == "viscous") return CaseSelect::Viscous;
  if (s == "inviscid") return CaseSelect::Inviscid;
  if (s == "both") return CaseSelect::Both;
  throw ConfigError("case must be viscous, inviscid or both (got \"" + s + "\")");
}

RunConfig parse_config(const ordered_json& j) {
  check_keys(j, "config", {"schema", "model", "state", "case", "hypotheses", "dispersion", "decay", "compensating",
                           "tolerances", "seed", "output_dir"});
  if (!j.contains("schema") || j.at("schema") != kConfigSchema)
    throw ConfigError(std::string("schema must be \"") + kConfigSchema + "\"");
  if (!j.contains("model")) throw ConfigError("model is required");

  RunConfig c;
  c.model = parse_model(j.at("model"));

  if (j.contains("state")) {
    const auto& s = j.at("state");
    check_keys(s, "state", {"rho", "u", "theta", "q"});
    c.state.rho = number(s, "rho", "state", 1.0);
    c.state.u = number(s, "u", "state", 0.0);
    c.state.theta = number(s, "theta", "state", 1.0);
    c.state.q = number(s, "q", "state", 0.0);
  }
  if (j.contains("case")) {
    if (!j.at("case").is_string()) throw ConfigError("case must be a string");
    c.case_select = parse_case(j.at("case").get<std::string>());
  }
  if (j.contains("hypotheses")) {
    const auto& h = j.at("hypotheses");
    check_keys(h, "hypotheses", {"rho", "theta", "samples"});
    auto range = [&](const char* key, double& lo, double& hi) {
      if (!h.contains(key)) return;
      const auto& r = h.at(key);
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        throw ConfigError(std::string("hypotheses.") + key + " must be [min, max]");
      lo = r[0].get<double>();
      hi = r[1].get<double>();
    };
    range("rho", c.box.rho_min, c.box.rho_max);
    range("theta", c.box.theta_min, c.box.theta_max);
    c.hypothesis_samples = count(h, "samples", "hypotheses", c.hypothesis_samples);
  }
  if (j.contains("dispersion")) {
    const auto& d = j.at("dispersion");
    check_keys(d, "dispersion", {"xi_min", "xi_max", "n", "spacing"});
    c.dispersion.xi_min = number(d, "xi_min", "dispersion", c.dispersion.xi_min);
    c.dispersion.xi_max = number(d, "xi_max", "dispersion", c.dispersion.xi_max);
    c.dispersion.n = count(d, "n", "dispersion", c.dispersion.n);
    if (d.contains("spacing")) {
      if (!d.at("spacing").is_string()) throw ConfigError("dispersion.spacing must be a string");
      c.dispersion.spacing = parse_spacing(d.at("spacing").get<std::string>());
    }
  }
  if (j.contains("decay")) {
    const auto& d = j.at("decay");
    check_keys(d, "decay", {"enabled", "t_max", "n_t", "width", "amplitude", "xi_cut", "n_xi", "l_list"});
    c.decay.enabled = boolean(d, "enabled", "decay", true);
    c.decay.t_max = number(d, "t_max", "decay", c.decay.t_max);
    c.decay.n_t = count(d, "n_t", "decay", c.decay.n_t);
    c.decay.width = number(d, "width", "decay", c.decay.width);
    if (d.contains("amplitude")) {
      const auto& a = d.at("amplitude");
      if (!a.is_array() || a.size() != 4) throw ConfigError("decay.amplitude must hold 4 numbers");
      for (int i = 0; i < 4; ++i) {
        if (!a[i].is_number()) throw ConfigError("decay.amplitude must hold 4 numbers");
        c.decay.amplitude(i) = a[i].get<double>();
      }
    }
    if (d.contains("xi_cut") && !d.at("xi_cut").is_null()) c.decay.quadrature.xi_cut = number(d, "xi_cut", "decay", {});
    c.decay.quadrature.n_xi = count(d, "n_xi", "decay", c.decay.quadrature.n_xi);
    if (d.contains("l_list")) {
      const auto& l = d.at("l_list");
      if (!l.is_array() || l.empty()) throw ConfigError("decay.l_list must be a non-empty array");
      c.decay.l_list.clear();
      for (const auto& v : l) {
        if (!non_negative_integer(v)) throw ConfigError("decay.l_list entries must be non-negative integers");
        c.decay.l_list.push_back(v.get<int>());
      }
    }
  }
  if (j.contains("compensating")) {
    const auto& k = j.at("compensating");
    check_keys(k, "compensating", {"delta", "alpha_power", "relaxation_coupling", "adjust_constants"});
    if (k.contains("delta") && !k.at("delta").is_null()) c.compensating.delta = number(k, "delta", "compensating", {});
    c.compensating.alpha_power =
        static_cast<int>(count(k, "alpha_power", "compensating", static_cast<std::size_t>(c.compensating.alpha_power)));
    c.compensating.relaxation_coupling = boolean(k, "relaxation_coupling", "compensating", true);
    c.compensating.adjust_constants = boolean(k, "adjust_constants", "compensating", true);
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    check_keys(t, "tolerances", {"coupling", "equilibrium", "speed_match", "energy_residual"});
    c.tolerances.coupling = number(t, "coupling", "tolerances", c.tolerances.coupling);
    c.tolerances.equilibrium = number(t, "equilibrium", "tolerances", c.tolerances.equilibrium);
    c.tolerances.speed_match = number(t, "speed_match", "tolerances", c.tolerances.speed_match);
    c.tolerances.energy_residual = number(t, "energy_residual", "tolerances", c.tolerances.energy_residual);
  }
  if (j.contains("seed")) {
    if (!non_negative_integer(j.at("seed"))) throw ConfigError("seed must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw ConfigError("output_dir must be a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

void validate(const RunConfig& c) {
  if (!c.state.admissible()) throw ConfigError("state must satisfy rho > 0 and theta > 0");
  if (c.hypothesis_samples == 0) throw ConfigError("hypotheses.samples must be at least 1");
  if (!(c.dispersion.xi_min > 0.0) || !(c.dispersion.xi_max > c.dispersion.xi_min) || c.dispersion.n < 2)
    throw ConfigError("dispersion grid needs 0 < xi_min < xi_max and n >= 2");
  if (!(c.decay.t_max > 0.0) || c.decay.n_t < 2) throw ConfigError("decay needs t_max > 0 and n_t >= 2");
  if (!(c.decay.width > 0.0)) throw ConfigError("decay.width must be positive");
  if (!(c.decay.amplitude.norm() > 0.0)) throw ConfigError("decay.amplitude must be non-zero");
  if (c.decay.quadrature.n_xi < 2 || c.decay.quadrature.n_xi % 2 != 0)
    throw ConfigError("decay.n_xi must be even and >= 2");
  if (c.compensating.alpha_power < 1) throw ConfigError("compensating.alpha_power must be >= 1");
  if (c.compensating.delta && !(*c.compensating.delta > 0.0)) throw ConfigError("compensating.delta must be positive");

  const double nu = c.model.nu().value(c.state.rho, c.state.theta);
  if ((c.case_select == CaseSelect::Viscous || c.case_select == CaseSelect::Both) && !(nu > 0.0))
    throw ConfigError(std::string("case = ") + to_string(c.case_select) + " requires nu > 0 at the state");
  if (c.case_select == CaseSelect::Inviscid && nu != 0.0)
    throw ConfigError("case = inviscid requires nu = 0 (use case = both to also run the viscous system)");
}

ordered_json to_json(const RunConfig& c) {
  ordered_json model;
  if (c.model.kind() == EosKind::IdealGas) {
    model = {{"eos", "ideal_gas"}, {"R", c.model.gas_constant()}, {"gamma", c.model.gamma()}};
  } else {
    model = {{"eos", "power_law"},
             {"A", c.model.amplitude()},
             {"alpha", c.model.alpha()},
             {"beta", c.model.beta()},
             {"cv", c.model.cv()}};
  }
  model["kappa"] = coefficient_json(c.model.kappa());
  model["nu"] = coefficient_json(c.model.nu());
  model["tau"] = c.model.tau();

  ordered_json j;
  j["schema"] = kConfigSchema;
  j["model"] = model;
  j["state"] = {{"rho", c.state.rho}, {"u", c.state.u}, {"theta", c.state.theta}, {"q", c.state.q}};
  j["case"] = to_string(c.case_select);
  j["hypotheses"] = {{"rho", {c.box.rho_min, c.box.rho_max}},
                     {"theta", {c.box.theta_min, c.box.theta_max}},
                     {"samples", c.hypothesis_samples}};
  j["dispersion"] = {{"xi_min", c.dispersion.xi_min},
                     {"xi_max", c.dispersion.xi_max},
                     {"n", c.dispersion.n},
                     {"spacing", c.dispersion.spacing == Spacing::Log ? "log" : "linear"}};
  ordered_json decay = {{"enabled", c.decay.enabled},
                        {"t_max", c.decay.t_max},
                        {"n_t", c.decay.n_t},
                        {"width", c.decay.width},
                        {"amplitude",
                         {c.decay.amplitude(0), c.decay.amplitude(1), c.decay.amplitude(2), c.decay.amplitude(3)}}};
  decay["xi_cut"] = c.decay.quadrature.xi_cut ? ordered_json(*c.decay.quadrature.xi_cut) : ordered_json(nullptr);
  decay["n_xi"] = c.decay.quadrature.n_xi;
  decay["l_list"] = c.decay.l_list;
  j["decay"] = decay;
  j["compensating"] = {{"delta", c.compensating.delta ? ordered_json(*c.compensating.delta) : ordered_json(nullptr)},
                       {"alpha_power", c.compensating.alpha_power},
                       {"relaxation_coupling", c.compensating.relaxation_coupling},
                       {"adjust_constants", c.compensating.adjust_constants}};
  j["tolerances"] = {{"coupling", c.tolerances.coupling},
                     {"equilibrium", c.tolerances.equilibrium},
                     {"speed_match", c.tolerances.speed_match},
                     {"energy_residual", c.tolerances.energy_residual}};
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j;
}

std::string config_hash(const RunConfig& c) {
  ordered_json j = to_json(c);
  j.erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

}  // namespace dissiplab
