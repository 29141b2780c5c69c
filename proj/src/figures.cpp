#include "gkpr/figures.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gkpr/errors.hpp"
#include "gkpr/parallel.hpp"
#include "gkpr/polynomial_code.hpp"
#include "gkpr/protocols.hpp"
#include "gkpr/run_config.hpp"

namespace gkpr {

using nlohmann::json;

namespace {

constexpr int kFig2MaxDimension = 32;
const std::vector<int> kCodeDimensions{5, 13, 17, 29};
const std::vector<int> kPlacementDimensions{5, 13, 17};
const std::vector<Protocol> kProtocols{Protocol::TwoWayTeleport, Protocol::OneWayTeleport,
                                       Protocol::OneWayHalfTeleport};
const std::vector<Placement> kPlacements{Placement::Alternating, Placement::After,
                                         Placement::Before, Placement::None};

// Tracks which overrides a figure consumed so that unused ones can be refused.
class Knobs {
 public:
  Knobs(std::string_view figure, const FigureOverrides& o) : figure_(figure), o_(o) {}

  double squeezing(double d) { return take("squeezing-db", o_.squeezing_db, d); }
  double coupling(double d) { return take("coupling", o_.coupling, d); }
  double length(double d) { return take("length-km", o_.length_km, d); }
  double spacing(double d) { return take("spacing-km", o_.spacing_km, d); }
  double attenuation() { return take("attenuation-km", o_.attenuation_km, kDefaultAttenuationKm); }
  double sigma2(double d) { return take("sigma2", o_.sigma2, d); }
  int dimension(int d) { return take("dimension", o_.dimension, d); }
  int d_max(int d) { return take("dmax", o_.d_max, d); }
  std::optional<double> gamma() {
    used_.insert("gamma");
    return o_.gamma;
  }

  void finish() const {
    const std::pair<const char*, bool> given[] = {
        {"squeezing-db", o_.squeezing_db.has_value()}, {"coupling", o_.coupling.has_value()},
        {"length-km", o_.length_km.has_value()},       {"spacing-km", o_.spacing_km.has_value()},
        {"attenuation-km", o_.attenuation_km.has_value()}, {"sigma2", o_.sigma2.has_value()},
        {"gamma", o_.gamma.has_value()},               {"dimension", o_.dimension.has_value()},
        {"dmax", o_.d_max.has_value()}};
    for (const auto& [flag, present] : given) {
      if (present && !used_.contains(flag)) {
        throw DomainError("--" + std::string(flag) + " does not apply to " + figure_);
      }
    }
  }

 private:
  template <class T>
  T take(const char* flag, const std::optional<T>& value, T fallback) {
    used_.insert(flag);
    return value.value_or(fallback);
  }

  std::string figure_;
  const FigureOverrides& o_;
  std::set<std::string> used_;
};

std::string column(std::string_view prefix, Protocol p, int dim) {
  return std::string(prefix) + "_" + std::string(to_string(p)) + "_D" + std::to_string(dim);
}

std::string column(std::string_view prefix, Placement p, int dim) {
  return std::string(prefix) + "_D" + std::to_string(dim) + "_" + std::string(to_string(p));
}

json grid_json(const std::vector<double>& g) {
  return {{"first", g.front()}, {"last", g.back()}, {"points", g.size()}};
}

FigureOutput fill(std::string_view name, std::vector<std::string> columns,
                  std::vector<std::vector<double>> rows, json parameters) {
  FigureOutput out;
  out.name = std::string(name);
  out.table.columns = std::move(columns);
  for (auto& r : rows) out.table.add_row(std::move(r));
  out.parameters = std::move(parameters);
  out.table.metadata = {{"figure", out.name},
                        {"version", std::string(kArtifactVersion)},
                        {"parameters", out.parameters.dump()}};
  return out;
}

FigureOutput fig2(std::string_view name, Protocol protocol, Knobs& k, Execution exec) {
  RepeaterConfig base;
  base.protocol = protocol;
  base.spacing_km = k.spacing(0.5);
  base.coupling = k.coupling(0.99);
  base.attenuation_km = k.attenuation();
  const int d_max = k.d_max(kFig2MaxDimension);
  k.finish();

  const auto lengths = log_grid(10.0, 1e5, 41);
  const auto squeezings = linear_grid(5.0, 40.0, 0.5);
  const std::size_t ns = squeezings.size();
  auto rows = map_ordered<std::vector<double>>(lengths.size() * ns, exec, [&](std::size_t i) {
    RepeaterConfig c = base;
    c.length_km = lengths[i / ns];
    c.squeezing_db = squeezings[i % ns];
    const auto best = optimal_bare_dimension(c, d_max);
    return std::vector<double>{c.length_km, c.squeezing_db, static_cast<double>(best.dimension),
                               best.skr_bits};
  });
  json p = {{"protocol", to_string(protocol)}, {"spacing_km", base.spacing_km},
            {"coupling", base.coupling},       {"attenuation_km", base.attenuation_km},
            {"d_max", d_max},                  {"length_km", grid_json(lengths)},
            {"squeezing_db", grid_json(squeezings)}};
  return fill(name, {"L_km", "s_db", "D_opt", "skr"}, std::move(rows), std::move(p));
}

FigureOutput fig3(std::string_view name, double squeezing, Knobs& k, Execution exec) {
  RepeaterConfig base;
  base.encoded = true;
  base.squeezing_db = k.squeezing(squeezing);
  base.spacing_km = k.spacing(0.1);
  base.coupling = k.coupling(0.99);
  base.attenuation_km = k.attenuation();
  const int d_max = k.d_max(kFig2MaxDimension);
  k.finish();

  const auto lengths = log_grid(1.0, 1e5, 51);
  std::vector<std::string> columns{"L_km"};
  for (Protocol p : kProtocols) {
    for (int d : kCodeDimensions) columns.push_back(column("skr", p, d));
  }
  columns.insert(columns.end(), {"bare_D_opt", "bare_skr"});

  auto rows = map_ordered<std::vector<double>>(lengths.size(), exec, [&](std::size_t i) {
    RepeaterConfig c = base;
    c.length_km = std::max(lengths[i], c.spacing_km);
    std::vector<double> row{lengths[i]};
    for (Protocol p : kProtocols) {
      for (int d : kCodeDimensions) {
        c.protocol = p;
        c.dimension = d;
        row.push_back(encoded_rate(c).skr_bits);
      }
    }
    c.protocol = Protocol::TwoWayTeleport;
    const auto bare = optimal_bare_dimension(c, d_max);
    row.push_back(bare.dimension);
    row.push_back(bare.skr_bits);
    return row;
  });
  json p = {{"squeezing_db", base.squeezing_db}, {"spacing_km", base.spacing_km},
            {"coupling", base.coupling},         {"attenuation_km", base.attenuation_km},
            {"placement", to_string(base.placement)}, {"dimensions", kCodeDimensions},
            {"bare_protocol", "two-way"},         {"d_max", d_max},
            {"length_km", grid_json(lengths)}};
  return fill(name, std::move(columns), std::move(rows), std::move(p));
}

std::vector<double> spacing_grid() { return linear_grid(0.1, 2.0, 0.01); }

FigureOutput fig4(std::string_view name, double squeezing, Knobs& k, Execution exec) {
  RepeaterConfig base;
  base.encoded = true;
  base.squeezing_db = k.squeezing(squeezing);
  base.length_km = k.length(2000.0);
  base.coupling = k.coupling(0.999);
  base.attenuation_km = k.attenuation();
  base.gamma = k.gamma();
  k.finish();

  const auto spacings = spacing_grid();
  std::vector<std::string> columns{"L0_km", "stations"};
  for (Protocol p : kProtocols) {
    for (int d : kCodeDimensions) {
      columns.push_back(column("skr", p, d));
      columns.push_back(column("skr_per_station", p, d));
    }
  }
  auto rows = map_ordered<std::vector<double>>(spacings.size(), exec, [&](std::size_t i) {
    RepeaterConfig c = base;
    c.spacing_km = spacings[i];
    std::vector<double> row{c.spacing_km,
                            static_cast<double>(station_count(c.length_km, c.spacing_km))};
    for (Protocol p : kProtocols) {
      c.protocol = p;
      // erasure decoding is defined for the teleport protocols only
      c.gamma = p == Protocol::OneWayHalfTeleport ? std::nullopt : base.gamma;
      for (int d : kCodeDimensions) {
        c.dimension = d;
        const auto r = encoded_rate(c);
        row.push_back(r.skr_bits);
        row.push_back(r.skr_per_station);
      }
    }
    return row;
  });
  json p = {{"squeezing_db", base.squeezing_db}, {"length_km", base.length_km},
            {"coupling", base.coupling},         {"attenuation_km", base.attenuation_km},
            {"gamma", base.gamma ? json(*base.gamma) : json(nullptr)},
            {"placement", to_string(base.placement)}, {"dimensions", kCodeDimensions},
            {"spacing_km", grid_json(spacings)}};
  return fill(name, std::move(columns), std::move(rows), std::move(p));
}

FigureOutput fig_noise_a(std::string_view name, Knobs& k, Execution exec) {
  LinkParams link;
  link.spacing_km = k.spacing(0.5);
  link.attenuation_km = k.attenuation();
  k.finish();
  const auto squeezings = linear_grid(0.0, 40.0, 0.5);
  const auto couplings = linear_grid(0.8, 1.0, 0.005);
  const std::size_t nc = couplings.size();
  auto rows = map_ordered<std::vector<double>>(squeezings.size() * nc, exec, [&](std::size_t i) {
    LinkParams l = link;
    l.coupling = couplings[i % nc];
    const double s = squeezings[i / nc];
    return std::vector<double>{s, l.coupling,
                               input_noise_variance(squeezing_to_variance(SqueezingParameter{s}), l)};
  });
  json p = {{"spacing_km", link.spacing_km}, {"attenuation_km", link.attenuation_km},
            {"squeezing_db", grid_json(squeezings)}, {"coupling", grid_json(couplings)}};
  return fill(name, {"s_db", "coupling", "sigma2_in"}, std::move(rows), std::move(p));
}

FigureOutput fig_noise_b(std::string_view name, Knobs& k, Execution exec) {
  const double length = k.length(5000.0);
  const double spacing = k.spacing(0.5);
  const double attenuation = k.attenuation();
  const auto gamma = k.gamma();
  k.finish();
  const auto variances = log_grid(1e-3, 1e-1, 81);
  std::vector<std::string> columns{"sigma2_in"};
  for (int d : kCodeDimensions) columns.push_back("skr_D" + std::to_string(d));
  auto rows = map_ordered<std::vector<double>>(variances.size(), exec, [&](std::size_t i) {
    std::vector<double> row{variances[i]};
    for (int d : kCodeDimensions) {
      row.push_back(rate_vs_input_noise(d, length, spacing, variances[i], gamma, attenuation).skr_bits);
    }
    return row;
  });
  json p = {{"protocol", "two-way"},  {"length_km", length},
            {"spacing_km", spacing},  {"attenuation_km", attenuation},
            {"gamma", gamma ? json(*gamma) : json(nullptr)}, {"dimensions", kCodeDimensions},
            {"sigma2_in", grid_json(variances)}};
  return fill(name, std::move(columns), std::move(rows), std::move(p));
}

FigureOutput fig5(std::string_view name, Knobs& k, Execution exec) {
  const int dim = k.dimension(13);
  const double variance = k.sigma2(0.01);
  k.finish();
  const auto code = PolynomialCode::make(dim);
  const auto gammas = linear_grid(0.5, 1.0, 0.001);
  auto rows = map_ordered<std::vector<double>>(gammas.size(), exec, [&](std::size_t i) {
    const auto pt = gamma_curve(code, variance, {gammas[i]}).front();
    return std::vector<double>{pt.gamma, pt.p_fail, pt.p_discard, pt.p0_kept};
  });
  json p = {{"dimension", dim}, {"sigma2", variance}, {"gamma", grid_json(gammas)}};
  return fill(name, {"gamma", "p_fail", "p_discard", "p0_kept"}, std::move(rows), std::move(p));
}

FigureOutput fig9(std::string_view name, double squeezing, Knobs& k, Execution exec) {
  RepeaterConfig base;
  base.encoded = true;
  base.protocol = Protocol::OneWayHalfTeleport;
  base.squeezing_db = k.squeezing(squeezing);
  base.length_km = k.length(2000.0);
  base.coupling = k.coupling(0.999);
  base.attenuation_km = k.attenuation();
  k.finish();
  const auto spacings = spacing_grid();
  std::vector<std::string> columns{"L0_km", "stations"};
  for (int d : kPlacementDimensions) {
    for (Placement p : kPlacements) {
      columns.push_back(column("skr", p, d));
      columns.push_back(column("skr_per_station", p, d));
    }
  }
  auto rows = map_ordered<std::vector<double>>(spacings.size(), exec, [&](std::size_t i) {
    RepeaterConfig c = base;
    c.spacing_km = spacings[i];
    std::vector<double> row{c.spacing_km,
                            static_cast<double>(station_count(c.length_km, c.spacing_km))};
    for (int d : kPlacementDimensions) {
      c.dimension = d;
      for (Placement p : kPlacements) {
        c.placement = p;
        const auto r = encoded_rate(c);
        row.push_back(r.skr_bits);
        row.push_back(r.skr_per_station);
      }
    }
    return row;
  });
  json p = {{"protocol", "half-teleport"}, {"squeezing_db", base.squeezing_db},
            {"length_km", base.length_km},  {"coupling", base.coupling},
            {"attenuation_km", base.attenuation_km}, {"dimensions", kPlacementDimensions},
            {"symmetric_mode", "caption-pair"}, {"spacing_km", grid_json(spacings)}};
  return fill(name, std::move(columns), std::move(rows), std::move(p));
}

}  // namespace

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig2a", "fig2b", "fig3a", "fig3b",
                                              "fig4a", "fig4b", "fig-noise-a", "fig-noise-b",
                                              "fig5",  "fig9a", "fig9b"};
  return names;
}

bool is_figure(std::string_view name) {
  const auto& names = figure_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

FigureOutput make_figure(std::string_view name, const FigureOverrides& overrides, Execution exec) {
  Knobs k(name, overrides);
  if (name == "fig2a") return fig2(name, Protocol::OneWayTeleport, k, exec);
  if (name == "fig2b") return fig2(name, Protocol::TwoWayTeleport, k, exec);
  if (name == "fig3a") return fig3(name, 20.0, k, exec);
  if (name == "fig3b") return fig3(name, 30.0, k, exec);
  if (name == "fig4a") return fig4(name, 20.0, k, exec);
  if (name == "fig4b") return fig4(name, 30.0, k, exec);
  if (name == "fig-noise-a") return fig_noise_a(name, k, exec);
  if (name == "fig-noise-b") return fig_noise_b(name, k, exec);
  if (name == "fig5") return fig5(name, k, exec);
  if (name == "fig9a") return fig9(name, 20.0, k, exec);
  if (name == "fig9b") return fig9(name, 30.0, k, exec);
  throw DomainError("unknown figure: " + std::string(name));
}

}  // namespace gkpr
