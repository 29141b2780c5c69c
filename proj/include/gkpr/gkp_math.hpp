#pragma once

// Probability primitives on the square GKP lattice: Gaussian-to-Pauli
// binning, cyclic convolution (and its N-fold power), Shannon entropy and
// the secret-key-rate figure of merit.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gkpr {

/// Quadrature variance of the vacuum state.
inline constexpr double kVacuumVariance = 0.5;

/// Distribution over shift powers X^0 .. X^{D-1} (or Z^k).
class PauliDistribution {
 public:
  /// Validates entries in [0,1] and total mass within 1e-9 of one, then
  /// renormalizes. Throws DomainError otherwise.
  static PauliDistribution from_probs(std::vector<double> probs);
  static PauliDistribution delta(int dim, int shift = 0);
  static PauliDistribution uniform(int dim);

  int dim() const { return static_cast<int>(probs_.size()); }
  double operator[](int k) const { return probs_[static_cast<std::size_t>(k)]; }
  std::span<const double> probs() const { return probs_; }

  friend bool operator==(const PauliDistribution&, const PauliDistribution&) = default;

 private:
  explicit PauliDistribution(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

/// D x D matrix with entry (a, b) = P(X^a, Z^b), row-major.
class JointPauliDistribution {
 public:
  static JointPauliDistribution outer(const PauliDistribution& x, const PauliDistribution& z);
  static JointPauliDistribution from_probs(int dim, std::vector<double> probs);

  int dim() const { return dim_; }
  double at(int a, int b) const {
    return probs_[static_cast<std::size_t>(a) * static_cast<std::size_t>(dim_) +
                  static_cast<std::size_t>(b)];
  }
  std::span<const double> probs() const { return probs_; }

 private:
  JointPauliDistribution(int dim, std::vector<double> probs)
      : dim_(dim), probs_(std::move(probs)) {}
  int dim_;
  std::vector<double> probs_;
};

/// How many lattice images j are summed when binning a Gaussian.
/// Empty means adaptive: every image whose bin centre lies within ten
/// standard deviations of the origin, and never fewer than |j| <= 1.
struct TruncationPolicy {
  std::optional<int> j_max;
};

/// Inclusive range of lattice points m (bin centres m * spacing) that are
/// summed. With an explicit j_max the points are j D + k for |j| <= j_max;
/// the adaptive range is symmetric about the origin.
struct LatticeRange {
  std::int64_t first;
  std::int64_t last;
};
LatticeRange lattice_range(int dim, double variance, const TruncationPolicy& policy);

/// Mass of N(0, variance) on [lo, hi]. Tails are taken from erfc so masses
/// far from the origin keep full relative precision.
double gaussian_interval_mass(double lo, double hi, double variance);

/// Lattice spacing sqrt(2 pi / D) of logical shifts.
double lattice_spacing(int dim);

/// Probability that a Gaussian shift of the given variance is decoded as
/// X^k, summing images |j| <= j_max. variance == 0 is handled as the exact
/// limit (1 for k == 0, else 0).
double shift_probability(int k, int dim, double variance, int j_max);

/// Unnormalized masses of the windows of half-width (keep_fraction / 2)
/// lattice spacings around every lattice point j D + k, per residue k.
/// keep_fraction == 1 tiles the line; smaller values leave gaps.
std::vector<double> binned_masses(int dim, double variance, double keep_fraction,
                                  const TruncationPolicy& policy = {});

/// Mass falling in the gaps left between windows when keep_fraction < 1,
/// summed directly over the gaps (exactly 0 for keep_fraction == 1).
double gap_mass(int dim, double variance, double keep_fraction,
                const TruncationPolicy& policy = {});

/// Gaussian shift channel binned on the square lattice, normalized to one.
PauliDistribution distribution_from_gaussian(int dim, double variance,
                                             const TruncationPolicy& policy = {});

/// Cyclic convolution modulo D.
PauliDistribution convolve(const PauliDistribution& a, const PauliDistribution& b);

/// N-fold cyclic convolution via the discrete Fourier transform. n == 0 gives
/// the delta at 0. Throws InternalError if the inverse transform produces an
/// entry below -1e-12.
PauliDistribution convolve_power(const PauliDistribution& p, std::int64_t n);

/// Shannon entropy in bits, 0 log 0 := 0.
double entropy(const PauliDistribution& p);
double entropy(const JointPauliDistribution& p);

/// max(0, log2 D - H(joint)).
double secret_key_rate(const JointPauliDistribution& joint);

}  // namespace gkpr
