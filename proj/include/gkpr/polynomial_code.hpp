#pragma once

// Distance-based decoding model of the [[D, 1, (D+1)/2]]_D quantum
// polynomial code: correctable-pattern probability, the worst-case station
// error channel, and erasure decoding driven by analog GKP syndromes.

#include <vector>

#include "gkpr/gkp_math.hpp"

namespace gkpr {

enum class Admissibility {
  Strict,      ///< D prime and (D - 1) divisible by 4
  AnyOddPrime  ///< extrapolation: any prime D >= 3 with the same decoder
};

bool is_prime(int n);

class PolynomialCode {
 public:
  /// Throws DomainError("dimension not admissible for polynomial code") when
  /// D fails the admissibility rule.
  static PolynomialCode make(int dim, Admissibility rule = Admissibility::Strict);

  int dim() const { return dim_; }
  int length() const { return dim_; }
  int logical() const { return 1; }
  int distance() const { return (dim_ + 1) / 2; }
  /// Errors with unknown location that are always corrected.
  int correctable() const { return (distance() - 1) / 2; }

 private:
  explicit PolynomialCode(int dim) : dim_(dim) {}
  int dim_;
};

/// Probability that at most floor((d-1)/2) of the D qudits are in error when
/// each is error free with probability p0.
double p_correctable(const PolynomialCode& code, double p0);

/// p_cor on the identity, (1 - p_cor) / (D - 1) elsewhere; the uniform
/// distribution once that would favour errors over the identity.
PauliDistribution station_error_channel(const PolynomialCode& code, double p_cor);

struct ErasureBinning {
  double gamma = 1.0;
  /// Shift distribution conditioned on not being discarded.
  PauliDistribution kept;
  /// Unconditional probability that a qudit is flagged as an erasure.
  double p_discard = 0.0;
  /// Unconditional mass inside the kept windows, 1 - p_discard.
  double kept_mass = 1.0;
  /// 1 - kept[0], accumulated from the shifted windows directly.
  double kept_error = 0.0;
};

/// Throws DomainError for gamma outside (0, 1] or variance <= 0.
ErasureBinning erasure_binning(int dim, double variance, double gamma,
                               const TruncationPolicy& policy = {});

/// Logical failure probability when decoding succeeds iff
/// erasures + 2 * unknown errors < d. Returned as a sum of failing
/// configurations, so it stays accurate far below machine epsilon of 1.
double p_fail(const PolynomialCode& code, double variance, double gamma,
              const TruncationPolicy& policy = {});

/// p_fail when each qudit is independently erased with p_discard and,
/// if kept, wrong with probability kept_error.
double p_fail_from_rates(const PolynomialCode& code, double p_discard, double kept_error);

struct GammaPoint {
  double gamma;
  double p_fail;
  double p_discard;
  double p0_kept;
};

struct GammaOptimum {
  double gamma = 1.0;
  double p_fail = 0.0;
  std::vector<GammaPoint> curve;
};

/// Grid scan over gamma in (0, 1] at the given resolution, then golden-section
/// refinement around the best grid point. Ties go to the larger gamma.
GammaOptimum optimal_gamma(const PolynomialCode& code, double variance, double resolution = 1e-3,
                           bool keep_curve = false);

/// p_fail, p_discard and p0 of the kept distribution at each gamma.
std::vector<GammaPoint> gamma_curve(const PolynomialCode& code, double variance,
                                    const std::vector<double>& gammas);

}  // namespace gkpr
