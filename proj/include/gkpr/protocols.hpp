#pragma once

// End-to-end secret-key rates of GKP repeater chains, bare and concatenated
// with the polynomial code, plus the optimizers over D and L0.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "gkpr/gkp_math.hpp"
#include "gkpr/half_teleport.hpp"
#include "gkpr/noise_channels.hpp"
#include "gkpr/polynomial_code.hpp"

namespace gkpr {

enum class Protocol { TwoWayTeleport, OneWayTeleport, OneWayHalfTeleport };

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view name);

struct RepeaterConfig {
  Protocol protocol = Protocol::TwoWayTeleport;
  int dimension = 2;
  double length_km = 100.0;
  double spacing_km = 0.5;
  double squeezing_db = 20.0;
  double coupling = kDefaultCoupling;
  double attenuation_km = kDefaultAttenuationKm;
  bool encoded = false;
  /// Discarding parameter; empty disables erasure decoding (same as 1).
  std::optional<double> gamma;
  Placement placement = Placement::Alternating;
  SymmetricVariances symmetric_mode = SymmetricVariances::CaptionPair;
  /// Extra homodyne variance added at every measurement.
  double measurement_variance = 0.0;
  TruncationPolicy truncation;
  Admissibility admissibility = Admissibility::Strict;

  LinkParams link() const { return {spacing_km, attenuation_km, coupling}; }
  /// Throws DomainError for inconsistent settings.
  void validate() const;
};

struct RateResult {
  double skr_bits = 0.0;
  double skr_per_station = 0.0;
  std::int64_t stations = 1;
  PauliDistribution marginal = PauliDistribution::delta(2);
  double station_variance = 0.0;
  double p0_station = 1.0;
  std::optional<double> p_cor_station;
};

/// round(L / L0), at least 1.
std::int64_t station_count(double length_km, double spacing_km);

/// Rate from a per-station marginal: N-fold convolution, X/Z product, clamped SKR.
RateResult chain_rate(const PauliDistribution& station, std::int64_t stations);

/// Variance binned at each homodyne measurement of a teleport protocol.
double teleport_station_variance(const RepeaterConfig& config);

RateResult bare_rate(const RepeaterConfig& config);
RateResult encoded_rate(const RepeaterConfig& config);
/// Dispatches on config.encoded.
RateResult evaluate(const RepeaterConfig& config);

struct DimensionOptimum {
  /// 1 when no dimension yields a positive key rate.
  int dimension = 1;
  double skr_bits = 0.0;
  std::vector<std::pair<int, double>> curve;
};

/// argmax of bare_rate over D in {2, ..., d_max}; ties go to the smaller D.
DimensionOptimum optimal_bare_dimension(const RepeaterConfig& base, int d_max);

/// Two-way encoded rate when every physical qudit sees input noise
/// sigma_in^2 on top of pure transmission loss.
RateResult rate_vs_input_noise(int dimension, double length_km, double spacing_km,
                               double input_variance, std::optional<double> gamma = std::nullopt,
                               double attenuation_km = kDefaultAttenuationKm);

struct SpacingPoint {
  double spacing_km;
  std::int64_t stations;
  double skr_bits;
  double skr_per_station;
};

struct SpacingOptimum {
  double spacing_km = 0.0;
  double skr_bits = 0.0;
  double skr_per_station = 0.0;
  /// Largest grid spacing with a positive key rate; empty if none.
  std::optional<double> cutoff_km;
  std::vector<SpacingPoint> curve;
};

/// argmax of SKR/N over the grid; ties go to the smaller spacing.
SpacingOptimum optimal_spacing(const RepeaterConfig& base, std::span<const double> grid);

/// Evenly spaced grid first, first + step, ..., up to last (inclusive within
/// half a step), built from integer multiples to avoid drift.
std::vector<double> linear_grid(double first, double last, double step);
/// count points log-spaced between first and last inclusive.
std::vector<double> log_grid(double first, double last, int count);

}  // namespace gkpr
