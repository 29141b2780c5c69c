#pragma once

// Named sweeps behind the published plots. Each one fixes its reference parameters by
// default; overrides replace them for exploration.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gkpr/mc_oracle.hpp"
#include "gkpr/table_io.hpp"

namespace gkpr {

struct FigureOverrides {
  std::optional<double> squeezing_db;
  std::optional<double> coupling;
  std::optional<double> length_km;
  std::optional<double> spacing_km;
  std::optional<double> attenuation_km;
  std::optional<double> sigma2;
  std::optional<double> gamma;
  std::optional<int> dimension;
  std::optional<int> d_max;
};

struct FigureOutput {
  std::string name;
  SweepTable table;
  /// Fixed parameters and grids, for the JSON sidecar.
  nlohmann::json parameters;
};

const std::vector<std::string>& figure_names();
bool is_figure(std::string_view name);

/// Throws DomainError for an unknown name or for an override the figure has
/// no use for (for instance a squeezing override on a squeezing sweep).
FigureOutput make_figure(std::string_view name, const FigureOverrides& overrides = {},
                         Execution exec = Execution::Parallel);

}  // namespace gkpr
