#include "gkpr/protocols.hpp"

#include <cmath>
#include <string>

#include "gkpr/errors.hpp"

namespace gkpr {

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::TwoWayTeleport: return "two-way";
    case Protocol::OneWayTeleport: return "one-way";
    case Protocol::OneWayHalfTeleport: return "half-teleport";
  }
  return "unknown";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "two-way" || name == "two-way-teleport") return Protocol::TwoWayTeleport;
  if (name == "one-way" || name == "one-way-teleport") return Protocol::OneWayTeleport;
  if (name == "half-teleport" || name == "one-way-half-teleport") {
    return Protocol::OneWayHalfTeleport;
  }
  throw DomainError("unknown protocol: " + std::string(name));
}

void RepeaterConfig::validate() const {
  link().validate();
  if (dimension < 2) throw DomainError("dimension must be >= 2");
  if (!(length_km >= spacing_km)) throw DomainError("total length must be >= repeater spacing");
  SqueezingParameter{squeezing_db};
  if (!(measurement_variance >= 0.0)) throw DomainError("measurement variance must be >= 0");
  if (gamma && !(*gamma > 0.0 && *gamma <= 1.0)) {
    throw DomainError("discarding parameter must lie in (0, 1]");
  }
  if (encoded) {
    PolynomialCode::make(dimension, admissibility);
    if (protocol == Protocol::OneWayHalfTeleport && gamma && *gamma < 1.0) {
      throw DomainError("erasure decoding is not defined for half-teleportation");
    }
  } else {
    if (protocol == Protocol::OneWayHalfTeleport) {
      throw DomainError("half-teleportation requires the polynomial code (use --encoded)");
    }
    if (gamma && *gamma < 1.0) throw DomainError("erasure decoding requires the polynomial code");
  }
}

std::int64_t station_count(double length_km, double spacing_km) {
  if (!(spacing_km > 0.0) || !(length_km >= spacing_km)) {
    throw DomainError("station count needs L >= L0 > 0");
  }
  return std::max<std::int64_t>(1, std::llround(length_km / spacing_km));
}

RateResult chain_rate(const PauliDistribution& station, std::int64_t stations) {
  RateResult out;
  out.stations = stations;
  out.marginal = convolve_power(station, stations);
  const auto joint = JointPauliDistribution::outer(out.marginal, out.marginal);
  out.skr_bits = secret_key_rate(joint);
  out.skr_per_station = out.skr_bits / static_cast<double>(stations);
  return out;
}

double teleport_station_variance(const RepeaterConfig& config) {
  const auto scheme = config.protocol == Protocol::TwoWayTeleport ? MeasurementScheme::TwoWay
                                                                  : MeasurementScheme::OneWay;
  const double sq = squeezing_to_variance(SqueezingParameter{config.squeezing_db});
  return measurement_variance(scheme, config.dimension, sq, config.link()).total +
         config.measurement_variance;
}

RateResult bare_rate(const RepeaterConfig& config) {
  if (config.encoded) throw DomainError("bare_rate called with an encoded configuration");
  config.validate();
  const double variance = teleport_station_variance(config);
  const auto station = distribution_from_gaussian(config.dimension, variance, config.truncation);
  auto out = chain_rate(station, station_count(config.length_km, config.spacing_km));
  out.station_variance = variance;
  out.p0_station = station[0];
  return out;
}

RateResult encoded_rate(const RepeaterConfig& config) {
  if (!config.encoded) throw DomainError("encoded_rate called with a bare configuration");
  config.validate();
  const auto code = PolynomialCode::make(config.dimension, config.admissibility);

  double p0 = 1.0;
  double variance = 0.0;
  double p_cor = 1.0;
  if (config.protocol == Protocol::OneWayHalfTeleport) {
    const double sq = squeezing_to_variance(SqueezingParameter{config.squeezing_db});
    const double loss = station_loss_variance(
        config.coupling, fiber_transmittance(config.spacing_km, config.attenuation_km));
    variance = placement_channels(config.placement, sq, loss, config.symmetric_mode).readout +
               config.measurement_variance;
    p0 = placement_p0(config.placement, config.dimension, sq, loss, config.symmetric_mode,
                      config.measurement_variance, config.truncation);
    p_cor = p_correctable(code, p0);
  } else {
    variance = teleport_station_variance(config);
    p0 = distribution_from_gaussian(config.dimension, variance, config.truncation)[0];
    if (config.gamma && *config.gamma < 1.0 && variance > 0.0) {
      p_cor = 1.0 - p_fail(code, variance, *config.gamma, config.truncation);
    } else {
      p_cor = p_correctable(code, p0);
    }
  }

  auto out = chain_rate(station_error_channel(code, p_cor),
                        station_count(config.length_km, config.spacing_km));
  out.station_variance = variance;
  out.p0_station = p0;
  out.p_cor_station = p_cor;
  return out;
}

RateResult evaluate(const RepeaterConfig& config) {
  return config.encoded ? encoded_rate(config) : bare_rate(config);
}

DimensionOptimum optimal_bare_dimension(const RepeaterConfig& base, int d_max) {
  if (d_max < 2) throw DomainError("maximum dimension must be >= 2");
  DimensionOptimum out;
  RepeaterConfig config = base;
  config.encoded = false;
  for (int dim = 2; dim <= d_max; ++dim) {
    config.dimension = dim;
    const double skr = bare_rate(config).skr_bits;
    out.curve.emplace_back(dim, skr);
    if (skr > out.skr_bits) {
      out.skr_bits = skr;
      out.dimension = dim;
    }
  }
  return out;
}

RateResult rate_vs_input_noise(int dimension, double length_km, double spacing_km,
                               double input_variance, std::optional<double> gamma,
                               double attenuation_km) {
  if (!(input_variance >= 0.0)) throw DomainError("input variance must be >= 0");
  if (!(attenuation_km > 0.0)) throw DomainError("attenuation length must be > 0");
  const auto code = PolynomialCode::make(dimension);
  const double variance = input_variance + std::expm1(spacing_km / (2.0 * attenuation_km));
  const double p0 = distribution_from_gaussian(dimension, variance)[0];
  const double p_cor = (gamma && *gamma < 1.0 && variance > 0.0)
                           ? 1.0 - p_fail(code, variance, *gamma)
                           : p_correctable(code, p0);
  auto out = chain_rate(station_error_channel(code, p_cor), station_count(length_km, spacing_km));
  out.station_variance = variance;
  out.p0_station = p0;
  out.p_cor_station = p_cor;
  return out;
}

SpacingOptimum optimal_spacing(const RepeaterConfig& base, std::span<const double> grid) {
  if (grid.empty()) throw DomainError("spacing grid is empty");
  SpacingOptimum out;
  RepeaterConfig config = base;
  bool have_best = false;
  for (double spacing : grid) {
    config.spacing_km = spacing;
    const auto r = evaluate(config);
    out.curve.push_back({spacing, r.stations, r.skr_bits, r.skr_per_station});
    if (r.skr_bits > 0.0) {
      if (!out.cutoff_km || spacing > *out.cutoff_km) out.cutoff_km = spacing;
    }
    const bool better = !have_best || r.skr_per_station > out.skr_per_station ||
                        (r.skr_per_station == out.skr_per_station && spacing < out.spacing_km);
    if (better) {
      have_best = true;
      out.spacing_km = spacing;
      out.skr_bits = r.skr_bits;
      out.skr_per_station = r.skr_per_station;
    }
  }
  return out;
}

std::vector<double> linear_grid(double first, double last, double step) {
  if (!(step > 0.0) || !(last >= first)) throw DomainError("invalid linear grid");
  const auto count = static_cast<std::int64_t>(std::floor((last - first) / step + 0.5)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(first + static_cast<double>(i) * step);
  return out;
}

std::vector<double> log_grid(double first, double last, int count) {
  if (!(first > 0.0) || !(last >= first) || count < 2) throw DomainError("invalid log grid");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  const double lo = std::log10(first);
  const double hi = std::log10(last);
  for (int i = 0; i < count; ++i) {
    out.push_back(std::pow(10.0, lo + (hi - lo) * i / (count - 1)));
  }
  out.front() = first;
  out.back() = last;
  return out;
}

}  // namespace gkpr
