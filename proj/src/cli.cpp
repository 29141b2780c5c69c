#include "gkpr/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "gkpr/errors.hpp"
#include "gkpr/figures.hpp"
#include "gkpr/mc_oracle.hpp"
#include "gkpr/polynomial_code.hpp"
#include "gkpr/protocols.hpp"
#include "gkpr/run_config.hpp"
#include "gkpr/table_io.hpp"

namespace gkpr::cli {

using nlohmann::json;

namespace {

// Exit code for errors detected after parsing that are still usage errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json to_json(const RateResult& r) {
  json j;
  j["skr_bits"] = r.skr_bits;
  j["skr_per_station"] = r.skr_per_station;
  j["stations"] = r.stations;
  j["station_variance"] = r.station_variance;
  j["p0_station"] = r.p0_station;
  j["p_cor_station"] = r.p_cor_station ? json(*r.p_cor_station) : json(nullptr);
  j["marginal"] = std::vector<double>(r.marginal.probs().begin(), r.marginal.probs().end());
  return j;
}

// Repeater flags shared by rate, optimize and validate. Values given on the
// command line win over a --config file, which wins over the defaults.
class RepeaterFlags {
 public:
  void attach(CLI::App& app) {
    opts_.push_back(app.add_option("--protocol", protocol_, "two-way, one-way or half-teleport"));
    opts_.push_back(app.add_option("--dimension,-D", config_.dimension, "qudit dimension D"));
    opts_.push_back(app.add_flag("--encoded", config_.encoded, "concatenate with the polynomial code"));
    opts_.push_back(app.add_option("--length-km,-L", config_.length_km, "total length L"));
    opts_.push_back(app.add_option("--spacing-km", config_.spacing_km, "repeater spacing L0"));
    opts_.push_back(app.add_option("--squeezing-db,-s", config_.squeezing_db, "GKP squeezing"));
    opts_.push_back(app.add_option("--coupling", config_.coupling, "coupling efficiency"));
    opts_.push_back(app.add_option("--attenuation-km", config_.attenuation_km, "attenuation length"));
    opts_.push_back(app.add_option("--gamma", gamma_, "discarding parameter in (0, 1]"));
    opts_.push_back(app.add_option("--placement", placement_, "half-teleport stabilizer placement"));
    opts_.push_back(app.add_option("--symmetric-mode", symmetric_, "caption-pair or equation-literal"));
    opts_.push_back(app.add_option("--measurement-variance", config_.measurement_variance,
                                   "extra homodyne variance"));
    opts_.push_back(app.add_option("--j-max", j_max_, "explicit lattice image cutoff"));
    opts_.push_back(app.add_flag("--any-odd-prime", any_odd_prime_,
                                 "allow every odd prime D for the polynomial code"));
    app.add_option("--config", config_path_, "JSON run config to start from");
    app.add_option("--save-config", save_path_, "write the effective run config here");
  }

  RunConfig resolve() const {
    RunConfig rc;
    if (!config_path_.empty()) rc = load_run_config(config_path_);
    RepeaterConfig& c = rc.repeater;
    const auto given = [&](std::size_t i) { return opts_[i]->count() > 0; };
    if (given(0)) c.protocol = parse_protocol(protocol_);
    if (given(1)) c.dimension = config_.dimension;
    if (given(2)) c.encoded = config_.encoded;
    if (given(3)) c.length_km = config_.length_km;
    if (given(4)) c.spacing_km = config_.spacing_km;
    if (given(5)) c.squeezing_db = config_.squeezing_db;
    if (given(6)) c.coupling = config_.coupling;
    if (given(7)) c.attenuation_km = config_.attenuation_km;
    if (given(8)) c.gamma = gamma_;
    if (given(9)) c.placement = parse_placement(placement_);
    if (given(10)) {
      if (symmetric_ == "caption-pair") c.symmetric_mode = SymmetricVariances::CaptionPair;
      else if (symmetric_ == "equation-literal") c.symmetric_mode = SymmetricVariances::EquationLiteral;
      else throw DomainError("unknown symmetric mode: " + symmetric_);
    }
    if (given(11)) c.measurement_variance = config_.measurement_variance;
    if (given(12)) c.truncation.j_max = j_max_;
    if (given(13)) c.admissibility = any_odd_prime_ ? Admissibility::AnyOddPrime : Admissibility::Strict;
    return rc;
  }

  void maybe_save(const RunConfig& rc) const {
    if (!save_path_.empty()) save_run_config(rc, save_path_);
  }

 private:
  RepeaterConfig config_;
  std::string protocol_;
  std::string placement_;
  std::string symmetric_;
  double gamma_ = 1.0;
  int j_max_ = 1;
  bool any_odd_prime_ = false;
  std::string config_path_;
  std::string save_path_;
  std::vector<CLI::Option*> opts_;
};

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void set_threads(int threads) {
  if (threads > 0) {
    omp_set_num_threads(threads);
    return;
  }
  if (const char* env = std::getenv("GKPR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
}

void print_rate(const RateResult& r, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << to_json(r).dump(2) << "\n";
    return;
  }
  out << "skr_bits         " << format_double(r.skr_bits) << "\n"
      << "skr_per_station  " << format_double(r.skr_per_station) << "\n"
      << "stations         " << r.stations << "\n"
      << "station_variance " << format_double(r.station_variance) << "\n"
      << "p0_station       " << format_double(r.p0_station) << "\n";
  if (r.p_cor_station) out << "p_cor_station    " << format_double(*r.p_cor_station) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secret-key rates of GKP qudit quantum repeaters", "gkpr"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: GKPR_THREADS or all cores)");

  // rate
  auto* rate = app.add_subcommand("rate", "evaluate one repeater configuration");
  RepeaterFlags rate_flags;
  rate_flags.attach(*rate);
  std::string rate_format = "json";
  rate->add_option("--format", rate_format, "json or table")
      ->check(CLI::IsMember({"json", "table"}));

  // figure
  auto* figure = app.add_subcommand("figure", "write the data behind one figure");
  std::string figure_name;
  std::string out_dir = ".";
  bool figure_serial = false;
  FigureOverrides ov;
  figure->add_option("name", figure_name, "figure name")->required();
  figure->add_option("--out-dir", out_dir, "output directory");
  figure->add_flag("--serial", figure_serial, "evaluate rows on one thread");
  figure->add_option("--squeezing-db", ov.squeezing_db);
  figure->add_option("--coupling", ov.coupling);
  figure->add_option("--length-km", ov.length_km);
  figure->add_option("--spacing-km", ov.spacing_km);
  figure->add_option("--attenuation-km", ov.attenuation_km);
  figure->add_option("--sigma2", ov.sigma2);
  figure->add_option("--gamma", ov.gamma);
  figure->add_option("--dimension", ov.dimension);
  figure->add_option("--dmax", ov.d_max);

  // optimize
  auto* optimize = app.add_subcommand("optimize", "optimize D, L0 or gamma");
  optimize->require_subcommand(1);
  bool print_curve = false;
  optimize->add_flag("--curve", print_curve, "include the scanned curve");

  auto* opt_dim = optimize->add_subcommand("dimension", "best bare qudit dimension");
  RepeaterFlags dim_flags;
  dim_flags.attach(*opt_dim);
  int d_max = 32;
  opt_dim->add_option("--dmax", d_max, "largest dimension scanned");

  auto* opt_spacing = optimize->add_subcommand("spacing", "spacing maximizing SKR per station");
  RepeaterFlags spacing_flags;
  spacing_flags.attach(*opt_spacing);
  double grid_min = 0.1, grid_max = 2.0, grid_step = 0.01;
  opt_spacing->add_option("--grid-min", grid_min);
  opt_spacing->add_option("--grid-max", grid_max);
  opt_spacing->add_option("--grid-step", grid_step);

  auto* opt_gamma = optimize->add_subcommand("gamma", "discarding parameter minimizing p_fail");
  int gamma_dim = 13;
  double sigma2 = 0.01;
  double resolution = 1e-3;
  opt_gamma->add_option("--dimension,-D", gamma_dim, "code dimension");
  opt_gamma->add_option("--sigma2", sigma2, "Gaussian variance per qudit");
  opt_gamma->add_option("--resolution", resolution, "grid step before refinement");

  // validate
  auto* validate = app.add_subcommand("validate", "Monte-Carlo check of the closed forms");
  ValidationOptions vopts;
  vopts.spec.samples = 10'000'000;
  bool validate_serial = false;
  validate->add_option("--seed", vopts.spec.seed, "base seed");
  validate->add_option("--samples", vopts.spec.samples, "samples per check")
      ->check(CLI::Range(std::uint64_t{1000}, std::uint64_t{1'000'000'000}));
  validate->add_flag("--serial", validate_serial, "use the serial reference sampler");
  validate->add_option("--perturb", vopts.perturb)->group("");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run the sweep described by a config file");
  std::string sweep_config;
  std::string sweep_out;
  std::string sweep_format;
  sweep_cmd->add_option("--config", sweep_config, "JSON run config")->required();
  sweep_cmd->add_option("--out", sweep_out, "output file (default: config output or stdout)");
  sweep_cmd->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "json"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    set_threads(threads);

    if (*rate) {
      auto rc = rate_flags.resolve();
      rate_flags.maybe_save(rc);
      print_rate(evaluate(rc.repeater), rate_format, out);
      return 0;
    }

    if (*figure) {
      if (!is_figure(figure_name)) throw UsageError("unknown figure: " + figure_name);
      auto fig = make_figure(figure_name, ov, figure_serial ? Execution::Serial : Execution::Parallel);
      std::filesystem::create_directories(out_dir);
      const auto base = std::filesystem::path(out_dir) / fig.name;
      json sidecar = fig.parameters;
      sidecar["figure"] = fig.name;
      sidecar["version"] = kArtifactVersion;
      sidecar["columns"] = fig.table.columns;
      sidecar["rows"] = fig.table.rows.size();
      sidecar["timestamp"] = utc_timestamp();
      atomic_write(base.string() + ".csv", fig.table.to_csv());
      atomic_write(base.string() + ".json", sidecar.dump(2) + "\n");
      out << base.string() << ".csv (" << fig.table.rows.size() << " rows)\n";
      return 0;
    }

    if (*optimize) {
      json j;
      if (*opt_dim) {
        auto rc = dim_flags.resolve();
        dim_flags.maybe_save(rc);
        rc.repeater.encoded = false;
        const auto best = optimal_bare_dimension(rc.repeater, d_max);
        j = {{"dimension", best.dimension}, {"skr_bits", best.skr_bits}};
        if (print_curve) {
          for (const auto& [d, skr] : best.curve) j["curve"].push_back({{"dimension", d}, {"skr_bits", skr}});
        }
      } else if (*opt_spacing) {
        auto rc = spacing_flags.resolve();
        spacing_flags.maybe_save(rc);
        const auto grid = linear_grid(grid_min, grid_max, grid_step);
        const auto best = optimal_spacing(rc.repeater, grid);
        j = {{"spacing_km", best.spacing_km},
             {"skr_bits", best.skr_bits},
             {"skr_per_station", best.skr_per_station},
             {"cutoff_km", best.cutoff_km ? json(*best.cutoff_km) : json(nullptr)}};
        if (print_curve) {
          for (const auto& p : best.curve) {
            j["curve"].push_back({{"spacing_km", p.spacing_km},
                                  {"stations", p.stations},
                                  {"skr_bits", p.skr_bits},
                                  {"skr_per_station", p.skr_per_station}});
          }
        }
      } else {
        const auto code = PolynomialCode::make(gamma_dim);
        const auto best = optimal_gamma(code, sigma2, resolution, print_curve);
        j = {{"dimension", gamma_dim}, {"sigma2", sigma2}, {"gamma", best.gamma},
             {"p_fail", best.p_fail}, {"p_fail_gamma_1", p_fail(code, sigma2, 1.0)}};
        for (const auto& p : best.curve) {
          j["curve"].push_back({{"gamma", p.gamma}, {"p_fail", p.p_fail},
                                {"p_discard", p.p_discard}, {"p0_kept", p.p0_kept}});
        }
      }
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*validate) {
      vopts.exec = validate_serial ? Execution::Serial : Execution::Parallel;
      const auto report = run_validation(vopts);
      json j;
      j["seed"] = vopts.spec.seed;
      j["samples"] = vopts.spec.samples;
      j["gaussian_transform"] = kGaussianTransform;
      j["checks"] = json::array();
      for (const auto& c : report.checks) {
        j["checks"].push_back({{"name", c.name},
                               {"estimate", c.estimate},
                               {"stderr", c.std_error},
                               {"closed_form", c.closed_form},
                               {"z_score", c.z_score}});
      }
      j["warnings"] = report.warnings;
      for (const auto& [name, p0] : report.half_teleport_modes) j["half_teleport_modes"][name] = p0;
      j["max_abs_z"] = report.max_abs_z();
      j["passed"] = report.passed();
      out << j.dump(2) << "\n";
      for (const auto& w : report.warnings) err << "warning: " << w << "\n";
      return report.passed() ? 0 : 1;
    }

    if (*sweep_cmd) {
      auto rc = load_run_config(sweep_config);
      if (!sweep_format.empty()) rc.format = sweep_format;
      if (!sweep_out.empty()) rc.output = sweep_out;
      rc.validate();
      if (rc.axes.empty()) throw DomainError("config has no sweep axes");
      const auto table = sweep(rc);
      std::string text;
      if (rc.format == "csv") {
        text = table.to_csv();
      } else {
        json j;
        j["metadata"] = json::object();
        for (const auto& [k, v] : table.metadata) j["metadata"][k] = v;
        j["columns"] = table.columns;
        j["rows"] = table.rows;
        text = j.dump(2) + "\n";
      }
      if (rc.output.empty()) {
        out << text;
      } else {
        atomic_write(rc.output, text);
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace gkpr::cli
