#include "gkpr/half_teleport.hpp"

#include <algorithm>
#include <string>

#include "gkpr/errors.hpp"

namespace gkpr {

std::string_view to_string(Placement p) {
  switch (p) {
    case Placement::None: return "none";
    case Placement::After: return "after";
    case Placement::Before: return "before";
    case Placement::Alternating: return "alternating";
  }
  return "unknown";
}

Placement parse_placement(std::string_view name) {
  if (name == "none") return Placement::None;
  if (name == "after") return Placement::After;
  if (name == "before") return Placement::Before;
  if (name == "alternating") return Placement::Alternating;
  throw DomainError("unknown placement: " + std::string(name));
}

double station_loss_variance(double coupling, double eta) {
  if (!(coupling > 0.0 && coupling <= 1.0)) throw DomainError("coupling must lie in (0, 1]");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("transmittance must lie in (0, 1]");
  return 1.0 - coupling * eta;
}

PlacementChannels placement_channels(Placement placement, double squeezing_variance,
                                     double loss_variance, SymmetricVariances mode) {
  if (!(squeezing_variance >= 0.0) || !(loss_variance >= 0.0)) {
    throw DomainError("variances must be >= 0");
  }
  const double s = squeezing_variance;
  const double l = loss_variance;
  switch (placement) {
    case Placement::None:
      return {3.0 * s + 2.0 * l, std::nullopt};
    case Placement::After:
    case Placement::Before: {
      const double second = mode == SymmetricVariances::CaptionPair ? 4.0 * s + l : 2.0 * s + l;
      return {2.0 * s + l, second};
    }
    case Placement::Alternating:
      return {3.0 * s + l, 3.0 * s + l};
  }
  throw DomainError("unknown placement");
}

double placement_p0(Placement placement, int dim, double squeezing_variance, double loss_variance,
                    SymmetricVariances mode, double measurement_variance,
                    const TruncationPolicy& policy) {
  if (!(measurement_variance >= 0.0)) throw DomainError("measurement variance must be >= 0");
  const auto channels = placement_channels(placement, squeezing_variance, loss_variance, mode);
  const auto readout =
      distribution_from_gaussian(dim, channels.readout + measurement_variance, policy);
  if (!channels.stabilizer) return readout[0];
  const auto stabilizer =
      distribution_from_gaussian(dim, *channels.stabilizer + measurement_variance, policy);
  // No net shift: the two discrete shifts cancel modulo D.
  double p0 = 0.0;
  for (int k = 0; k < dim; ++k) p0 += readout[k] * stabilizer[(dim - k) % dim];
  return std::min(p0, 1.0);
}

std::vector<std::pair<Placement, double>> placement_ranking(int dim, double squeezing_variance,
                                                            double loss_variance) {
  std::vector<std::pair<Placement, double>> out;
  for (Placement p : {Placement::Alternating, Placement::After, Placement::Before, Placement::None}) {
    out.emplace_back(p, placement_p0(p, dim, squeezing_variance, loss_variance));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace gkpr
