#pragma once

// Station error probabilities of the one-way half-teleportation protocol for
// the four placements of the extra GKP stabilizer measurement.

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "gkpr/gkp_math.hpp"

namespace gkpr {

enum class Placement {
  None,        ///< no extra stabilizer measurement
  After,       ///< S_X measured on the target after every CZ
  Before,      ///< S_Z measured on the control before every CZ
  Alternating  ///< alternate After / Before between stations
};

std::string_view to_string(Placement p);
Placement parse_placement(std::string_view name);

/// Variances of the two discrete channels behind a symmetric placement.
enum class SymmetricVariances {
  CaptionPair,      ///< (2 s + l, 4 s + l), from the propagation diagrams
  EquationLiteral,  ///< (2 s + l, 2 s + l), as the closed form is printed
};

/// Per-transmission loss variance with optical pre-amplification:
/// 1 - eta_c * eta.
double station_loss_variance(double coupling, double eta);

/// Continuous readout variance and, for placements with an extra stabilizer
/// measurement, the variance binned by that measurement.
struct PlacementChannels {
  double readout = 0.0;
  std::optional<double> stabilizer;
};

PlacementChannels placement_channels(Placement placement, double squeezing_variance,
                                     double loss_variance,
                                     SymmetricVariances mode = SymmetricVariances::CaptionPair);

/// Probability that a p-measurement ends without a net logical shift.
/// Optional extra variance is added to every homodyne channel.
double placement_p0(Placement placement, int dim, double squeezing_variance, double loss_variance,
                    SymmetricVariances mode = SymmetricVariances::CaptionPair,
                    double measurement_variance = 0.0, const TruncationPolicy& policy = {});

/// Placements sorted by descending p0. Equal p0 keep enumeration order
/// (Alternating, After, Before, None).
std::vector<std::pair<Placement, double>> placement_ranking(int dim, double squeezing_variance,
                                                            double loss_variance);

}  // namespace gkpr
