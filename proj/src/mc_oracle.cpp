#include "gkpr/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "gkpr/errors.hpp"

namespace gkpr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t block_count(const SamplerSpec& spec) {
  if (spec.block_size == 0) throw DomainError("block size must be > 0");
  return (spec.samples + spec.block_size - 1) / spec.block_size;
}

// Runs kernel(sampler, count, tally) on every block and folds the per-block
// tallies in block order. The parallel and serial paths differ only in the
// loop pragma.
template <class Tally, class Kernel>
Tally run_blocks(const SamplerSpec& spec, Execution exec, const Tally& zero, Kernel kernel) {
  const std::uint64_t blocks = block_count(spec);
  std::vector<Tally> partial(blocks, zero);
  const auto body = [&](std::uint64_t b) {
    GaussianSampler sampler(derive_seed(spec.seed, b));
    const std::uint64_t begin = b * spec.block_size;
    const std::uint64_t count = std::min(spec.block_size, spec.samples - begin);
    kernel(sampler, count, partial[b]);
  };
  if (exec == Execution::Parallel) {
    const auto n = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < n; ++b) body(static_cast<std::uint64_t>(b));
  } else {
    for (std::uint64_t b = 0; b < blocks; ++b) body(b);
  }
  Tally total = zero;
  for (const auto& t : partial) total += t;
  return total;
}

struct Counts {
  std::vector<std::uint64_t> bins;
  Counts& operator+=(const Counts& other) {
    for (std::size_t i = 0; i < bins.size(); ++i) bins[i] += other.bins[i];
    return *this;
  }
};

std::int64_t floor_mod(std::int64_t m, int dim) {
  const std::int64_t r = m % dim;
  return r < 0 ? r + dim : r;
}

void check_samples(const SamplerSpec& spec) {
  if (spec.samples == 0) throw DomainError("sample count must be > 0");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task) {
  return splitmix64(seed ^ splitmix64(task));
}

double GaussianSampler::uniform() {
  // 53 random bits mapped to the open interval (0, 1).
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double GaussianSampler::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

int nearest_residue(double shift, int dim) {
  const auto m = static_cast<std::int64_t>(std::llround(shift / lattice_spacing(dim)));
  return static_cast<int>(floor_mod(m, dim));
}

double EmpiricalDistribution::probability(int k) const {
  return static_cast<double>(counts[static_cast<std::size_t>(k)]) / static_cast<double>(samples);
}

double EmpiricalDistribution::std_error(int k) const {
  const double p = probability(k);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

std::pair<double, double> EmpiricalDistribution::wilson_interval(int k, double z) const {
  const double n = static_cast<double>(samples);
  const double p = probability(k);
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

PauliDistribution EmpiricalDistribution::distribution() const {
  std::vector<double> probs(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) probs[k] = probability(static_cast<int>(k));
  return PauliDistribution::from_probs(std::move(probs));
}

EmpiricalDistribution sample_shift_distribution(int dim, double variance, const SamplerSpec& spec,
                                                Execution exec) {
  if (dim < 2) throw DomainError("dimension must be >= 2");
  if (!(variance >= 0.0)) throw DomainError("variance must be >= 0");
  check_samples(spec);
  const double sigma = std::sqrt(variance);
  const Counts zero{std::vector<std::uint64_t>(static_cast<std::size_t>(dim), 0)};
  const auto total = run_blocks(spec, exec, zero,
                                [&](GaussianSampler& rng, std::uint64_t count, Counts& tally) {
                                  for (std::uint64_t i = 0; i < count; ++i) {
                                    ++tally.bins[static_cast<std::size_t>(
                                        nearest_residue(sigma * rng.normal(), dim))];
                                  }
                                });
  return {dim, spec.samples, total.bins};
}

double ErasureTrialEstimate::p_fail() const {
  return static_cast<double>(failures) / static_cast<double>(trials);
}

double ErasureTrialEstimate::p_discard() const {
  return static_cast<double>(discards) / static_cast<double>(qudits);
}

ErasureTrialEstimate sample_erasure_trial(const PolynomialCode& code, double variance,
                                          double gamma, const SamplerSpec& spec, Execution exec) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("discarding parameter must lie in (0, 1]");
  if (!(variance > 0.0)) throw DomainError("variance must be > 0");
  check_samples(spec);
  const int dim = code.dim();
  const int n = code.length();
  const int d = code.distance();
  const double sigma = std::sqrt(variance);
  const double a = lattice_spacing(dim);
  const double keep_radius = 0.5 * gamma * a;

  // bins[0] = failures, bins[1] = discarded qudits
  const Counts zero{{0, 0}};
  const auto total = run_blocks(
      spec, exec, zero, [&](GaussianSampler& rng, std::uint64_t count, Counts& tally) {
        for (std::uint64_t t = 0; t < count; ++t) {
          int erased = 0;
          int wrong = 0;
          for (int q = 0; q < n; ++q) {
            const double x = sigma * rng.normal();
            const double m = std::nearbyint(x / a);
            if (std::abs(x - m * a) > keep_radius) {
              ++erased;
            } else if (floor_mod(static_cast<std::int64_t>(m), dim) != 0) {
              ++wrong;
            }
          }
          tally.bins[1] += static_cast<std::uint64_t>(erased);
          if (erased + 2 * wrong >= d) ++tally.bins[0];
        }
      });
  return {spec.samples, total.bins[0], total.bins[1], spec.samples * static_cast<std::uint64_t>(n)};
}

namespace {

struct ChainTally {
  std::vector<std::uint64_t> bins;
  std::int64_t sum = 0;
  std::int64_t sum_sq = 0;
  std::int64_t sum_lag = 0;
  std::uint64_t pairs = 0;
  std::uint64_t values = 0;

  ChainTally& operator+=(const ChainTally& o) {
    for (std::size_t i = 0; i < bins.size(); ++i) bins[i] += o.bins[i];
    sum += o.sum;
    sum_sq += o.sum_sq;
    sum_lag += o.sum_lag;
    pairs += o.pairs;
    values += o.values;
    return *this;
  }
};

}  // namespace

ChainEstimate sample_bare_chain(const RepeaterConfig& config, const SamplerSpec& spec,
                                Execution exec) {
  if (config.encoded) throw DomainError("chain sampling covers bare protocols only");
  config.validate();
  check_samples(spec);
  const std::int64_t stations = station_count(config.length_km, config.spacing_km);
  if (stations > 10'000) throw DomainError("chain sampling is limited to 10^4 stations");

  const int dim = config.dimension;
  const auto scheme = config.protocol == Protocol::TwoWayTeleport ? MeasurementScheme::TwoWay
                                                                  : MeasurementScheme::OneWay;
  const double sq = squeezing_to_variance(SqueezingParameter{config.squeezing_db});
  const auto budget = measurement_variance(scheme, dim, sq, config.link());
  const int preparations = preparation_multiplicity(dim);
  const double sigma_sq = std::sqrt(sq);
  const double sigma_coupling = std::sqrt(budget.coupling);
  const double sigma_transmission = std::sqrt(budget.transmission);
  const double sigma_meas = std::sqrt(config.measurement_variance);
  const int half = dim / 2;

  const ChainTally zero{std::vector<std::uint64_t>(static_cast<std::size_t>(dim), 0)};
  const auto total = run_blocks(
      spec, exec, zero, [&](GaussianSampler& rng, std::uint64_t count, ChainTally& tally) {
        for (std::uint64_t t = 0; t < count; ++t) {
          std::int64_t net = 0;
          std::int64_t previous = 0;
          for (std::int64_t s = 0; s < stations; ++s) {
            double shift = 0.0;
            for (int p = 0; p < preparations; ++p) shift += sigma_sq * rng.normal();
            shift += sigma_coupling * rng.normal();
            shift += sigma_transmission * rng.normal();
            shift += sigma_meas * rng.normal();
            const int r = nearest_residue(shift, dim);
            net += r;
            const std::int64_t centred = r > half ? r - dim : r;
            tally.sum += centred;
            tally.sum_sq += centred * centred;
            ++tally.values;
            if (s > 0) {
              tally.sum_lag += centred * previous;
              ++tally.pairs;
            }
            previous = centred;
          }
          ++tally.bins[static_cast<std::size_t>(floor_mod(net, dim))];
        }
      });

  ChainEstimate out;
  out.marginal = {dim, spec.samples, total.bins};
  out.stations = stations;
  if (total.pairs > 0) {
    const double mean = static_cast<double>(total.sum) / static_cast<double>(total.values);
    const double var = static_cast<double>(total.sum_sq) / static_cast<double>(total.values) - mean * mean;
    const double cov = static_cast<double>(total.sum_lag) / static_cast<double>(total.pairs) - mean * mean;
    out.lag1_correlation = var > 0.0 ? cov / var : 0.0;
  }
  return out;
}

EmpiricalDistribution sample_composed_shift(int dim, double variance_a, double variance_b,
                                            const SamplerSpec& spec, Execution exec) {
  if (dim < 2) throw DomainError("dimension must be >= 2");
  if (!(variance_a >= 0.0) || !(variance_b >= 0.0)) throw DomainError("variance must be >= 0");
  check_samples(spec);
  const double sa = std::sqrt(variance_a);
  const double sb = std::sqrt(variance_b);
  const Counts zero{std::vector<std::uint64_t>(static_cast<std::size_t>(dim), 0)};
  const auto total = run_blocks(spec, exec, zero,
                                [&](GaussianSampler& rng, std::uint64_t count, Counts& tally) {
                                  for (std::uint64_t i = 0; i < count; ++i) {
                                    const int ra = nearest_residue(sa * rng.normal(), dim);
                                    const int rb = nearest_residue(sb * rng.normal(), dim);
                                    ++tally.bins[static_cast<std::size_t>((ra + rb) % dim)];
                                  }
                                });
  return {dim, spec.samples, total.bins};
}

std::optional<std::string> resolvability_warning(double p, std::uint64_t trials) {
  constexpr double kMinProbability = 1e-6;
  constexpr double kMinExpectedEvents = 10.0;
  if (p >= kMinProbability && p * static_cast<double>(trials) >= kMinExpectedEvents) {
    return std::nullopt;
  }
  char buf[200];
  const double needed = p > 0.0 ? 100.0 / p : std::numeric_limits<double>::infinity();
  std::snprintf(buf, sizeof buf,
                "probability %.3g is not resolvable with %llu trials (needs ~%.3g trials)", p,
                static_cast<unsigned long long>(trials), needed);
  return std::string(buf);
}

double binomial_z(double estimate, double p, std::uint64_t n) {
  // sqrt(n) is factored out so that subnormal p does not underflow the SE.
  const double spread = std::sqrt(p) * std::sqrt(1.0 - p);
  if (spread == 0.0) {
    return estimate == p ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), estimate - p);
  }
  return (estimate - p) / spread * std::sqrt(static_cast<double>(n));
}

double ValidationReport::max_abs_z() const {
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, std::abs(c.z_score));
  return worst;
}

namespace {

ValidationCheck make_check(std::string name, double estimate, double closed_form, std::uint64_t n) {
  ValidationCheck c;
  c.name = std::move(name);
  c.estimate = estimate;
  c.closed_form = closed_form;
  c.std_error = std::sqrt(closed_form * (1.0 - closed_form) / static_cast<double>(n));
  c.z_score = binomial_z(estimate, std::clamp(closed_form, 0.0, 1.0), n);
  return c;
}

std::string label(const char* fmt, double a, double b, double c = 0.0, double d = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}

}  // namespace

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report;
  const auto& spec = options.spec;
  const double f = options.perturb;
  std::uint64_t task = 0;
  auto next_spec = [&](std::uint64_t samples) {
    SamplerSpec s = spec;
    s.samples = samples;
    s.seed = derive_seed(spec.seed, ++task);
    return s;
  };

  for (int dim : {2, 3, 5, 13}) {
    for (double var : {0.01, 0.05, 0.25, 1.0}) {
      const auto closed = distribution_from_gaussian(dim, var);
      const auto sampled = sample_shift_distribution(dim, var, next_spec(spec.samples), options.exec);
      for (int k = 0; k < dim; ++k) {
        report.checks.push_back(make_check(label("shift D=%g var=%g k=%g", dim, var, k),
                                           sampled.probability(k), f * closed[k], spec.samples));
      }
    }
  }

  struct ErasureCase {
    int dim;
    double variance;
    double gamma;
  };
  for (const auto& c : {ErasureCase{5, 0.15, 1.0}, ErasureCase{5, 0.15, 0.7},
                        ErasureCase{13, 0.05, 0.8}, ErasureCase{13, 0.01, 1.0},
                        ErasureCase{13, 0.01, 0.82}}) {
    const auto code = PolynomialCode::make(c.dim);
    const double closed = p_fail(code, c.variance, c.gamma);
    const auto binning = erasure_binning(c.dim, c.variance, c.gamma);
    const std::string tag = label("D=%g var=%g gamma=%g", c.dim, c.variance, c.gamma);
    if (auto warning = resolvability_warning(closed, spec.samples)) {
      report.warnings.push_back("p_fail " + tag + ": " + *warning);
      continue;
    }
    const auto est = sample_erasure_trial(code, c.variance, c.gamma, next_spec(spec.samples),
                                          options.exec);
    report.checks.push_back(make_check("p_fail " + tag, est.p_fail(), f * closed, est.trials));
    report.checks.push_back(
        make_check("p_discard " + tag, est.p_discard(), f * binning.p_discard, est.qudits));
  }

  {
    RepeaterConfig chain;
    chain.protocol = Protocol::TwoWayTeleport;
    chain.dimension = 2;
    chain.squeezing_db = 10.0;
    chain.length_km = 5.0;
    chain.spacing_km = 0.5;
    const auto closed = bare_rate(chain).marginal;
    const std::uint64_t trials = std::max<std::uint64_t>(spec.samples / 10, 1000);
    const auto est = sample_bare_chain(chain, next_spec(trials), options.exec);
    for (int k = 0; k < chain.dimension; ++k) {
      report.checks.push_back(make_check(label("chain D=%g N=%g k=%g", chain.dimension,
                                               static_cast<double>(est.stations), k),
                                         est.marginal.probability(k), f * closed[k], trials));
    }
    ValidationCheck corr;
    corr.name = "chain lag-1 correlation";
    corr.estimate = est.lag1_correlation;
    corr.std_error = 1.0 / std::sqrt(static_cast<double>(trials * static_cast<std::uint64_t>(est.stations - 1)));
    corr.closed_form = 0.0;
    corr.z_score = corr.estimate / corr.std_error;
    report.checks.push_back(corr);
  }

  {
    const int dim = 5;
    const double sq = squeezing_to_variance(SqueezingParameter{10.0});
    const double loss = station_loss_variance(kDefaultCoupling, fiber_transmittance(1.0));
    for (Placement p : {Placement::Alternating, Placement::After, Placement::None}) {
      const auto ch = placement_channels(p, sq, loss);
      const double closed = placement_p0(p, dim, sq, loss);
      const auto sampled =
          ch.stabilizer ? sample_composed_shift(dim, ch.readout, *ch.stabilizer, next_spec(spec.samples), options.exec)
                        : sample_shift_distribution(dim, ch.readout, next_spec(spec.samples), options.exec);
      report.checks.push_back(make_check("placement_p0 " + std::string(to_string(p)) + " D=5",
                                         sampled.probability(0), f * closed, spec.samples));
    }
    const double sq30 = squeezing_to_variance(SqueezingParameter{30.0});
    const double loss05 = station_loss_variance(0.999, fiber_transmittance(0.5));
    for (int d : {5, 13, 17}) {
      report.half_teleport_modes.emplace_back(
          label("symmetric caption-pair D=%g s=30dB L0=0.5km", d, 0),
          placement_p0(Placement::After, d, sq30, loss05, SymmetricVariances::CaptionPair));
      report.half_teleport_modes.emplace_back(
          label("symmetric equation-literal D=%g s=30dB L0=0.5km", d, 0),
          placement_p0(Placement::After, d, sq30, loss05, SymmetricVariances::EquationLiteral));
    }
  }
  return report;
}

}  // namespace gkpr
