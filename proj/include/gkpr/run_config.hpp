#pragma once

// JSON run configuration: a repeater configuration, optional sweep axes and
// output settings. Round-trips losslessly through its JSON form.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gkpr/mc_oracle.hpp"
#include "gkpr/protocols.hpp"
#include "gkpr/table_io.hpp"

namespace gkpr {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

enum class AxisScale { Linear, Log };

struct SweepAxis {
  /// One of sweep_parameters().
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int steps = 2;
  AxisScale scale = AxisScale::Linear;

  /// Throws DomainError for unknown names, steps < 2, min > max or a
  /// non-positive lower bound on a log axis.
  void validate() const;
  std::vector<double> values() const;
};

const std::vector<std::string>& sweep_parameters();

struct RunConfig {
  RepeaterConfig repeater;
  std::vector<SweepAxis> axes;
  std::string format = "csv";  ///< csv or json
  std::string output;          ///< empty writes to stdout
  std::uint64_t seed = SamplerSpec{}.seed;

  void validate() const;
};

nlohmann::json to_json(const RepeaterConfig& config);
RepeaterConfig repeater_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);
/// Unknown keys and ill-typed values raise DomainError.
RunConfig run_config_from_json(const nlohmann::json& j);

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& config, const std::filesystem::path& path);

/// Sets a named scalar on the repeater configuration.
void set_parameter(RepeaterConfig& config, std::string_view name, double value);

/// Cartesian product of the axes, rows in lexicographic order of the axis
/// indices (last axis fastest). Columns: axis names, then skr_bits,
/// skr_per_station, stations, p0_station.
SweepTable sweep(const RunConfig& config, Execution exec = Execution::Parallel);

}  // namespace gkpr
