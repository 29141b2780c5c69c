#pragma once

// Variance bookkeeping for the Gaussian displacement channels that act on a
// GKP qudit: approximate-state preparation, coupling and fiber loss under
// the amplification strategies, and the composed per-measurement variance.

namespace gkpr {

inline constexpr double kDefaultAttenuationKm = 22.0;
inline constexpr double kDefaultCoupling = 0.99;

/// Squeezing in dB. Non-negative.
class SqueezingParameter {
 public:
  explicit SqueezingParameter(double db);
  double db() const { return db_; }

 private:
  double db_;
};

/// sigma^2_vac * 10^(-dB/10).
double squeezing_to_variance(SqueezingParameter s);
SqueezingParameter variance_to_squeezing(double variance);

struct LinkParams {
  double spacing_km = 0.5;
  double attenuation_km = kDefaultAttenuationKm;
  double coupling = kDefaultCoupling;

  /// Throws DomainError unless spacing > 0, attenuation > 0 and 0 < coupling <= 1.
  void validate() const;
};

double fiber_transmittance(double length_km, double attenuation_km = kDefaultAttenuationKm);

/// Lossy channel followed by classical rescaling of the homodyne signal.
double loss_variance_classical_postamp(double eta_total);
/// Quantum-limited amplifier placed before the lossy channel.
double loss_variance_preamp(double eta_total);
/// Quantum-limited amplifier placed after the lossy channel.
double loss_variance_postamp_optical(double eta);

/// Noise reaching a two-way-protocol measurement from preparation and
/// coupling alone: 3 sigma_sq^2 + (1 - eta_c) / eta_c * exp(L0 / (2 L_att)).
double input_noise_variance(double squeezing_variance, const LinkParams& link);

enum class MeasurementScheme {
  TwoWay,  ///< classical post-amplification, two half-segments of fiber
  OneWay,  ///< optical pre-amplification, one full segment of fiber
};

struct NoiseBudget {
  double preparation = 0.0;
  double coupling = 0.0;
  double transmission = 0.0;
  double total = 0.0;
};

/// Number of GKP preparations whose noise reaches a Bell measurement:
/// 2 for even D (beam-splitter Bell pair), 3 for odd D.
int preparation_multiplicity(int dim);

/// Composed Gaussian variance per homodyne measurement, split into the
/// preparation, coupling and pure-transmission contributions.
NoiseBudget measurement_variance(MeasurementScheme scheme, int dim, double squeezing_variance,
                                 const LinkParams& link);

}  // namespace gkpr
