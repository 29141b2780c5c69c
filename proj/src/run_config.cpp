#include "gkpr/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "gkpr/errors.hpp"
#include "gkpr/parallel.hpp"

namespace gkpr {

using nlohmann::json;

namespace {

std::string_view to_string(SymmetricVariances m) {
  return m == SymmetricVariances::CaptionPair ? "caption-pair" : "equation-literal";
}

SymmetricVariances parse_symmetric(std::string_view s) {
  if (s == "caption-pair") return SymmetricVariances::CaptionPair;
  if (s == "equation-literal") return SymmetricVariances::EquationLiteral;
  throw DomainError("unknown symmetric_mode: " + std::string(s));
}

std::string_view to_string(Admissibility a) {
  return a == Admissibility::Strict ? "strict" : "any-odd-prime";
}

Admissibility parse_admissibility(std::string_view s) {
  if (s == "strict") return Admissibility::Strict;
  if (s == "any-odd-prime") return Admissibility::AnyOddPrime;
  throw DomainError("unknown admissibility: " + std::string(s));
}

std::string_view to_string(AxisScale s) { return s == AxisScale::Linear ? "linear" : "log"; }

AxisScale parse_scale(std::string_view s) {
  if (s == "linear" || s == "lin") return AxisScale::Linear;
  if (s == "log") return AxisScale::Log;
  throw DomainError("unknown axis scale: " + std::string(s));
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const char* what) {
  if (!j.is_object()) throw DomainError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw DomainError(std::string("unknown key in ") + what + ": " + key);
  }
}

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad value for ") + key + ": " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{
      "length_km", "spacing_km",     "squeezing_db", "coupling",
      "attenuation_km", "dimension", "gamma",        "measurement_variance"};
  return names;
}

void SweepAxis::validate() const {
  const auto& names = sweep_parameters();
  if (std::find(names.begin(), names.end(), parameter) == names.end()) {
    throw DomainError("unknown sweep parameter: " + parameter);
  }
  if (steps < 2) throw DomainError("sweep axis " + parameter + " needs steps >= 2");
  if (!std::isfinite(min) || !std::isfinite(max) || min > max) {
    throw DomainError("sweep axis " + parameter + " needs finite min <= max");
  }
  if (scale == AxisScale::Log && !(min > 0.0)) {
    throw DomainError("log axis " + parameter + " needs min > 0");
  }
}

std::vector<double> SweepAxis::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    out[static_cast<std::size_t>(i)] =
        scale == AxisScale::Linear ? min + t * (max - min) : min * std::pow(max / min, t);
  }
  out.back() = max;
  return out;
}

void RunConfig::validate() const {
  repeater.validate();
  std::set<std::string> seen;
  for (const auto& a : axes) {
    a.validate();
    if (!seen.insert(a.parameter).second) throw DomainError("duplicate sweep axis " + a.parameter);
  }
  if (format != "csv" && format != "json") throw DomainError("format must be csv or json");
}

json to_json(const RepeaterConfig& c) {
  json j;
  j["protocol"] = std::string(to_string(c.protocol));
  j["dimension"] = c.dimension;
  j["encoded"] = c.encoded;
  j["length_km"] = c.length_km;
  j["spacing_km"] = c.spacing_km;
  j["squeezing_db"] = c.squeezing_db;
  j["coupling"] = c.coupling;
  j["attenuation_km"] = c.attenuation_km;
  j["gamma"] = c.gamma ? json(*c.gamma) : json(nullptr);
  j["placement"] = std::string(to_string(c.placement));
  j["symmetric_mode"] = std::string(to_string(c.symmetric_mode));
  j["measurement_variance"] = c.measurement_variance;
  j["j_max"] = c.truncation.j_max ? json(*c.truncation.j_max) : json(nullptr);
  j["admissibility"] = std::string(to_string(c.admissibility));
  return j;
}

RepeaterConfig repeater_from_json(const json& j) {
  reject_unknown(j,
                 {"protocol", "dimension", "encoded", "length_km", "spacing_km", "squeezing_db",
                  "coupling", "attenuation_km", "gamma", "placement", "symmetric_mode",
                  "measurement_variance", "j_max", "admissibility"},
                 "repeater config");
  RepeaterConfig c;
  c.protocol = parse_protocol(get<std::string>(j, "protocol", std::string(to_string(c.protocol))));
  c.dimension = get(j, "dimension", c.dimension);
  c.encoded = get(j, "encoded", c.encoded);
  c.length_km = get(j, "length_km", c.length_km);
  c.spacing_km = get(j, "spacing_km", c.spacing_km);
  c.squeezing_db = get(j, "squeezing_db", c.squeezing_db);
  c.coupling = get(j, "coupling", c.coupling);
  c.attenuation_km = get(j, "attenuation_km", c.attenuation_km);
  if (j.contains("gamma") && !j.at("gamma").is_null()) c.gamma = get(j, "gamma", 1.0);
  c.placement = parse_placement(get<std::string>(j, "placement", std::string(to_string(c.placement))));
  c.symmetric_mode =
      parse_symmetric(get<std::string>(j, "symmetric_mode", std::string(to_string(c.symmetric_mode))));
  c.measurement_variance = get(j, "measurement_variance", c.measurement_variance);
  if (j.contains("j_max") && !j.at("j_max").is_null()) c.truncation.j_max = get(j, "j_max", 1);
  c.admissibility =
      parse_admissibility(get<std::string>(j, "admissibility", std::string(to_string(c.admissibility))));
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["repeater"] = to_json(c.repeater);
  j["sweep"] = json::array();
  for (const auto& a : c.axes) {
    j["sweep"].push_back({{"parameter", a.parameter},
                          {"min", a.min},
                          {"max", a.max},
                          {"steps", a.steps},
                          {"scale", std::string(to_string(a.scale))}});
  }
  j["format"] = c.format;
  j["output"] = c.output;
  j["seed"] = c.seed;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  reject_unknown(j, {"repeater", "sweep", "format", "output", "seed"}, "run config");
  RunConfig c;
  if (j.contains("repeater")) c.repeater = repeater_from_json(j.at("repeater"));
  if (j.contains("sweep")) {
    if (!j.at("sweep").is_array()) throw DomainError("sweep must be an array");
    for (const auto& a : j.at("sweep")) {
      reject_unknown(a, {"parameter", "min", "max", "steps", "scale"}, "sweep axis");
      SweepAxis axis;
      axis.parameter = get<std::string>(a, "parameter", "");
      axis.min = get(a, "min", 0.0);
      axis.max = get(a, "max", 0.0);
      axis.steps = get(a, "steps", 2);
      axis.scale = parse_scale(get<std::string>(a, "scale", "linear"));
      c.axes.push_back(axis);
    }
  }
  c.format = get(j, "format", c.format);
  c.output = get(j, "output", c.output);
  c.seed = get(j, "seed", c.seed);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw DomainError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return run_config_from_json(j);
}

void save_run_config(const RunConfig& config, const std::filesystem::path& path) {
  atomic_write(path, to_json(config).dump(2) + "\n");
}

void set_parameter(RepeaterConfig& c, std::string_view name, double value) {
  if (name == "length_km") c.length_km = value;
  else if (name == "spacing_km") c.spacing_km = value;
  else if (name == "squeezing_db") c.squeezing_db = value;
  else if (name == "coupling") c.coupling = value;
  else if (name == "attenuation_km") c.attenuation_km = value;
  else if (name == "dimension") c.dimension = static_cast<int>(std::lround(value));
  else if (name == "gamma") c.gamma = value;
  else if (name == "measurement_variance") c.measurement_variance = value;
  else throw DomainError("unknown parameter: " + std::string(name));
}

SweepTable sweep(const RunConfig& config, Execution exec) {
  for (const auto& a : config.axes) a.validate();
  std::vector<std::vector<double>> grids;
  std::size_t total = 1;
  for (const auto& a : config.axes) {
    grids.push_back(a.values());
    total *= grids.back().size();
  }

  SweepTable table;
  for (const auto& a : config.axes) table.columns.push_back(a.parameter);
  for (const char* c : {"skr_bits", "skr_per_station", "stations", "p0_station"}) {
    table.columns.emplace_back(c);
  }
  table.metadata = {{"version", std::string(kArtifactVersion)},
                    {"config", to_json(config).dump()}};

  auto rows = map_ordered<std::vector<double>>(total, exec, [&](std::size_t flat) {
    std::vector<double> point(grids.size());
    std::size_t rest = flat;
    for (std::size_t k = grids.size(); k-- > 0;) {
      point[k] = grids[k][rest % grids[k].size()];
      rest /= grids[k].size();
    }
    RepeaterConfig rc = config.repeater;
    for (std::size_t k = 0; k < grids.size(); ++k) {
      set_parameter(rc, config.axes[k].parameter, point[k]);
    }
    const auto r = evaluate(rc);
    point.push_back(r.skr_bits);
    point.push_back(r.skr_per_station);
    point.push_back(static_cast<double>(r.stations));
    point.push_back(r.p0_station);
    return point;
  });
  for (auto& r : rows) table.add_row(std::move(r));
  return table;
}

}  // namespace gkpr
