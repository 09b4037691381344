#include "dissiplab/eos.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "dissiplab/errors.hpp"

namespace dissiplab {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) throw DomainError(std::string(what) + " must be positive and finite");
}

void require_transport(const PowerLawCoefficient& c, const char* what, bool allow_zero) {
  if (!std::isfinite(c.coefficient) || !std::isfinite(c.rho_exponent) || !std::isfinite(c.theta_exponent))
    throw DomainError(std::string(what) + " coefficients must be finite");
  if (allow_zero ? c.coefficient < 0.0 : !(c.coefficient > 0.0))
    throw DomainError(std::string(what) + (allow_zero ? " must be non-negative" : " must be positive"));
}

double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

}  // namespace

double PowerLawCoefficient::value(double rho, double theta) const {
  double v = coefficient;
  if (rho_exponent != 0.0) v *= std::pow(rho, rho_exponent);
  if (theta_exponent != 0.0) v *= std::pow(theta, theta_exponent);
  return v;
}

FluidModel FluidModel::ideal_gas(double gas_constant, double gamma, PowerLawCoefficient kappa,
                                 PowerLawCoefficient nu, double tau) {
  require_positive(gas_constant, "gas constant R");
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw DomainError("adiabatic exponent gamma must exceed 1");
  require_transport(kappa, "kappa", false);
  require_transport(nu, "nu", true);
  require_positive(tau, "relaxation time tau");
  FluidModel m;
  m.kind_ = EosKind::IdealGas;
  m.gas_constant_ = gas_constant;
  m.gamma_ = gamma;
  m.kappa_ = kappa;
  m.nu_ = nu;
  m.tau_ = tau;
  return m;
}

FluidModel FluidModel::power_law(double amplitude, double alpha, double beta, double cv,
                                 PowerLawCoefficient kappa, PowerLawCoefficient nu, double tau) {
  require_positive(amplitude, "power-law amplitude A");
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw DomainError("power-law exponents must be finite");
  require_positive(cv, "heat capacity c_v");
  require_transport(kappa, "kappa", false);
  require_transport(nu, "nu", true);
  require_positive(tau, "relaxation time tau");
  FluidModel m;
  m.kind_ = EosKind::PowerLaw;
  m.amplitude_ = amplitude;
  m.alpha_ = alpha;
  m.beta_ = beta;
  m.cv_ = cv;
  m.kappa_ = kappa;
  m.nu_ = nu;
  m.tau_ = tau;
  return m;
}

FluidModel FluidModel::inviscid() const { return with_viscosity(PowerLawCoefficient::constant(0.0)); }

FluidModel FluidModel::with_viscosity(PowerLawCoefficient nu) const {
  require_transport(nu, "nu", true);
  FluidModel m = *this;
  m.nu_ = nu;
  return m;
}

ThermoEval evaluate(const FluidModel& model, double rho, double theta) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("density must be positive");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("temperature must be positive");

  ThermoEval t;
  switch (model.kind()) {
    case EosKind::IdealGas: {
      const double r = model.gas_constant();
      t.p = r * rho * theta;
      t.p_rho = r * theta;
      t.p_theta = r * rho;
      t.e_theta = r / (model.gamma() - 1.0);
      t.e = t.e_theta * theta;
      break;
    }
    case EosKind::PowerLaw: {
      const double a = model.alpha();
      const double b = model.beta();
      t.p = model.amplitude() * std::pow(rho, a) * std::pow(theta, b);
      t.p_rho = a * t.p / rho;
      t.p_theta = b * t.p / theta;
      t.e_theta = model.cv();
      t.e = model.cv() * theta;
      break;
    }
  }
  t.e_rho = (t.p - theta * t.p_theta) / (rho * rho);
  t.kappa = model.kappa().value(rho, theta);
  t.nu = model.nu().value(rho, theta);
  return t;
}

bool HypothesisReport::all_passed() const { return first_failure() == nullptr; }

const HypothesisCheck* HypothesisReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

HypothesisReport check_hypotheses(const FluidModel& model, const SampleBox& box, std::size_t n_samples,
                                  std::uint64_t seed) {
  if (!(box.rho_min > 0.0) || !(box.theta_min > 0.0) || !(box.rho_max >= box.rho_min) ||
      !(box.theta_max >= box.theta_min) || !std::isfinite(box.rho_max) || !std::isfinite(box.theta_max))
    throw DomainError("sample box must lie in {rho > 0, theta > 0} with min <= max");
  if (n_samples == 0) throw DomainError("n_samples must be at least 1");

  struct Spec {
    const char* name;
    double ThermoEval::*field;
    bool strict;
  };
  static constexpr Spec specs[] = {
      {"p>0", &ThermoEval::p, true},           {"p_rho>0", &ThermoEval::p_rho, true},
      {"p_theta>0", &ThermoEval::p_theta, true}, {"e_theta>0", &ThermoEval::e_theta, true},
      {"kappa>0", &ThermoEval::kappa, true},   {"nu>=0", &ThermoEval::nu, false},
  };

  HypothesisReport report;
  report.n_samples = n_samples;
  for (const auto& s : specs) {
    HypothesisCheck c;
    c.name = s.name;
    c.worst_value = std::numeric_limits<double>::infinity();
    report.checks.push_back(c);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double shift_r = unit(rng);
  const double shift_t = unit(rng);

  for (std::size_t i = 0; i < n_samples; ++i) {
    const double hr = std::fmod(radical_inverse(i + 1, 2) + shift_r, 1.0);
    const double ht = std::fmod(radical_inverse(i + 1, 3) + shift_t, 1.0);
    const double rho = box.rho_min + hr * (box.rho_max - box.rho_min);
    const double theta = box.theta_min + ht * (box.theta_max - box.theta_min);
    const ThermoEval t = evaluate(model, rho, theta);
    for (std::size_t k = 0; k < std::size(specs); ++k) {
      const double v = t.*(specs[k].field);
      auto& c = report.checks[k];
      if (v < c.worst_value) {
        c.worst_value = v;
        c.worst_rho = rho;
        c.worst_theta = theta;
      }
      const bool ok = specs[k].strict ? v > 0.0 : v >= 0.0;
      if (!ok) c.passed = false;
    }
  }
  return report;
}

}  // namespace dissiplab
