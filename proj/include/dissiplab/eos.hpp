#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dissiplab {

/// c * rho^a * theta^b. Constant coefficients have a = b = 0.
struct PowerLawCoefficient {
  double coefficient = 0.0;
  double rho_exponent = 0.0;
  double theta_exponent = 0.0;

  static PowerLawCoefficient constant(double c) { return {c, 0.0, 0.0}; }

  double value(double rho, double theta) const;
};

enum class EosKind { IdealGas, PowerLaw };

/// Equation of state plus transport coefficients. Immutable once built.
///
/// IdealGas:  p = R rho theta,          e = R theta / (gamma - 1)
/// PowerLaw:  p = A rho^alpha theta^beta, e_theta = c_v
///
/// kappa and nu are power laws in (rho, theta); tau is a constant.
class FluidModel {
 public:
  static FluidModel ideal_gas(double gas_constant, double gamma, PowerLawCoefficient kappa,
                              PowerLawCoefficient nu, double tau);
  static FluidModel power_law(double amplitude, double alpha, double beta, double cv,
                              PowerLawCoefficient kappa, PowerLawCoefficient nu, double tau);

  EosKind kind() const { return kind_; }
  double gas_constant() const { return gas_constant_; }
  double gamma() const { return gamma_; }
  double amplitude() const { return amplitude_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double cv() const { return cv_; }
  const PowerLawCoefficient& kappa() const { return kappa_; }
  const PowerLawCoefficient& nu() const { return nu_; }
  double tau() const { return tau_; }

  /// Same fluid with viscosity switched off (nu == 0 everywhere).
  FluidModel inviscid() const;
  /// Same fluid with a different viscosity law.
  FluidModel with_viscosity(PowerLawCoefficient nu) const;

 private:
  FluidModel() = default;

  EosKind kind_ = EosKind::IdealGas;
  double gas_constant_ = 0.0;
  double gamma_ = 0.0;
  double amplitude_ = 0.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double cv_ = 0.0;
  PowerLawCoefficient kappa_;
  PowerLawCoefficient nu_;
  double tau_ = 0.0;
};

/// Pointwise thermodynamic evaluation at one (rho, theta).
struct ThermoEval {
  double p = 0.0;
  double p_rho = 0.0;
  double p_theta = 0.0;
  double e = 0.0;
  double e_theta = 0.0;
  double e_rho = 0.0;  // (p - theta p_theta) / rho^2
  double kappa = 0.0;
  double nu = 0.0;
};

/// Analytic evaluation; throws DomainError unless rho > 0 and theta > 0.
ThermoEval evaluate(const FluidModel& model, double rho, double theta);

struct SampleBox {
  double rho_min = 0.1;
  double rho_max = 10.0;
  double theta_min = 0.1;
  double theta_max = 10.0;
};

struct HypothesisCheck {
  std::string name;  // "p>0", "p_rho>0", ...
  bool passed = true;
  double worst_value = 0.0;
  double worst_rho = 0.0;
  double worst_theta = 0.0;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  std::size_t n_samples = 0;
  bool all_passed() const;
  /// First failing check, or nullptr.
  const HypothesisCheck* first_failure() const;
};

/// Samples the box on a shifted Halton sequence (shift drawn from `seed`) and
/// tests p > 0, p_rho > 0, p_theta > 0, e_theta > 0, kappa > 0, nu >= 0.
HypothesisReport check_hypotheses(const FluidModel& model, const SampleBox& box,
                                  std::size_t n_samples, std::uint64_t seed = 0);

}  // namespace dissiplab
