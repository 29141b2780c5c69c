#pragma once

// Monte-Carlo counterparts of the closed-form error model. Samples are drawn
// in fixed-size blocks, each seeded from (seed, block index), so estimates
// are bit-identical for any worker count and for the serial path.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gkpr/polynomial_code.hpp"
#include "gkpr/protocols.hpp"

namespace gkpr {

enum class Execution { Serial, Parallel };

inline constexpr std::string_view kGaussianTransform = "box-muller(mt19937_64, 53-bit uniforms)";

struct SamplerSpec {
  std::uint64_t seed = 20240101;
  std::uint64_t samples = 1'000'000;
  std::uint64_t block_size = 1u << 16;
};

/// splitmix64 finalizer applied to seed ^ splitmix64(task).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task);

/// Reproducible standard normal source (Box-Muller on mt19937_64).
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}
  double uniform();  ///< in (0, 1)
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Residue modulo D of the lattice point nearest to the shift.
int nearest_residue(double shift, int dim);

struct EmpiricalDistribution {
  int dim = 2;
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> counts;

  double probability(int k) const;
  double std_error(int k) const;
  std::pair<double, double> wilson_interval(int k, double z = 1.96) const;
  PauliDistribution distribution() const;
};

EmpiricalDistribution sample_shift_distribution(int dim, double variance, const SamplerSpec& spec,
                                                Execution exec = Execution::Parallel);

struct ErasureTrialEstimate {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::uint64_t discards = 0;  ///< over trials * n qudits
  std::uint64_t qudits = 0;
  double p_fail() const;
  double p_discard() const;
};

/// Per trial: n i.i.d. shifts, each discarded when within
/// sqrt(pi / 2D) (1 - gamma) of a bin boundary, else wrong when the nearest
/// lattice point is not a multiple of D. Fails unless erasures + 2 errors < d.
ErasureTrialEstimate sample_erasure_trial(const PolynomialCode& code, double variance,
                                          double gamma, const SamplerSpec& spec,
                                          Execution exec = Execution::Parallel);

struct ChainEstimate {
  EmpiricalDistribution marginal;
  std::int64_t stations = 1;
  /// Pearson correlation of centred residues at neighbouring stations.
  double lag1_correlation = 0.0;
};

/// Bare teleport chain with i.i.d. stations: preparation, coupling,
/// transmission and measurement displacements drawn separately and added at
/// each Bell measurement. spec.samples is the number of chain trials.
ChainEstimate sample_bare_chain(const RepeaterConfig& config, const SamplerSpec& spec,
                                Execution exec = Execution::Parallel);

/// Residue distribution of the sum of two independently binned shifts.
EmpiricalDistribution sample_composed_shift(int dim, double variance_a, double variance_b,
                                            const SamplerSpec& spec,
                                            Execution exec = Execution::Parallel);

/// Warning text when p is too small to be resolved with the given trials.
std::optional<std::string> resolvability_warning(double p, std::uint64_t trials);

/// (estimate - p) / sqrt(p (1 - p) / n); 0 when both are exactly 0 or 1.
double binomial_z(double estimate, double p, std::uint64_t n);

struct ValidationCheck {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double closed_form = 0.0;
  double z_score = 0.0;
};

struct ValidationOptions {
  SamplerSpec spec;
  Execution exec = Execution::Parallel;
  /// Multiplies every closed form; anything but 1 is a harness self-test.
  double perturb = 1.0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::vector<std::string> warnings;
  /// Symmetric placement p0 under both variance readings, for the record.
  std::vector<std::pair<std::string, double>> half_teleport_modes;

  double max_abs_z() const;
  bool passed(double threshold = 5.0) const { return max_abs_z() <= threshold; }
};

ValidationReport run_validation(const ValidationOptions& options);

}  // namespace gkpr
