#include "gkpr/noise_channels.hpp"

#include <cmath>

#include "gkpr/errors.hpp"
#include "gkpr/gkp_math.hpp"

namespace gkpr {

namespace {

void check_transmittance(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("transmittance must lie in (0, 1]");
}

}  // namespace

SqueezingParameter::SqueezingParameter(double db) : db_(db) {
  if (!(db >= 0.0) || !std::isfinite(db)) throw DomainError("squeezing must be finite and >= 0 dB");
}

double squeezing_to_variance(SqueezingParameter s) {
  return kVacuumVariance * std::pow(10.0, -s.db() / 10.0);
}

SqueezingParameter variance_to_squeezing(double variance) {
  if (!(variance > 0.0 && variance <= kVacuumVariance)) {
    throw DomainError("variance must lie in (0, 1/2] to have non-negative squeezing");
  }
  return SqueezingParameter(-10.0 * std::log10(variance / kVacuumVariance));
}

void LinkParams::validate() const {
  if (!(spacing_km > 0.0)) throw DomainError("repeater spacing must be > 0");
  if (!(attenuation_km > 0.0)) throw DomainError("attenuation length must be > 0");
  if (!(coupling > 0.0 && coupling <= 1.0)) throw DomainError("coupling must lie in (0, 1]");
}

double fiber_transmittance(double length_km, double attenuation_km) {
  if (!(length_km >= 0.0)) throw DomainError("length must be >= 0");
  if (!(attenuation_km > 0.0)) throw DomainError("attenuation length must be > 0");
  return std::exp(-length_km / attenuation_km);
}

double loss_variance_classical_postamp(double eta_total) {
  check_transmittance(eta_total);
  return 1.0 / std::sqrt(eta_total) - 1.0;
}

double loss_variance_preamp(double eta_total) {
  check_transmittance(eta_total);
  return 1.0 - eta_total;
}

double loss_variance_postamp_optical(double eta) {
  check_transmittance(eta);
  return (1.0 - eta) / eta;
}

double input_noise_variance(double squeezing_variance, const LinkParams& link) {
  link.validate();
  if (!(squeezing_variance >= 0.0)) throw DomainError("variance must be >= 0");
  const double inverse_half_segment = std::exp(link.spacing_km / (2.0 * link.attenuation_km));
  return 3.0 * squeezing_variance + (1.0 - link.coupling) / link.coupling * inverse_half_segment;
}

int preparation_multiplicity(int dim) { return dim % 2 == 0 ? 2 : 3; }

NoiseBudget measurement_variance(MeasurementScheme scheme, int dim, double squeezing_variance,
                                 const LinkParams& link) {
  link.validate();
  if (dim < 2) throw DomainError("dimension must be >= 2");
  if (!(squeezing_variance >= 0.0)) throw DomainError("variance must be >= 0");

  NoiseBudget budget;
  budget.preparation = preparation_multiplicity(dim) * squeezing_variance;
  if (scheme == MeasurementScheme::TwoWay) {
    // 1/(eta_c sqrt(eta)) - 1 = (1/sqrt(eta) - 1) + (1 - eta_c)/eta_c / sqrt(eta)
    const double inverse_root_eta = std::exp(link.spacing_km / (2.0 * link.attenuation_km));
    budget.transmission = std::expm1(link.spacing_km / (2.0 * link.attenuation_km));
    budget.coupling = (1.0 - link.coupling) / link.coupling * inverse_root_eta;
  } else {
    // 1 - eta_c eta = (1 - eta) + eta (1 - eta_c)
    const double eta = fiber_transmittance(link.spacing_km, link.attenuation_km);
    budget.transmission = -std::expm1(-link.spacing_km / link.attenuation_km);
    budget.coupling = eta * (1.0 - link.coupling);
  }
  budget.total = budget.preparation + budget.coupling + budget.transmission;
  return budget;
}

}  // namespace gkpr
