#include "gkpr/polynomial_code.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gkpr/errors.hpp"

namespace gkpr {

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// C(n, k) p^k (1 - p)^(n - k), evaluated in the log domain.
double binomial_term(int n, int k, double p) {
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_binomial(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

bool is_prime(int n) {
  if (n < 2) return false;
  for (int f = 2; f * f <= n; ++f) {
    if (n % f == 0) return false;
  }
  return true;
}

PolynomialCode PolynomialCode::make(int dim, Admissibility rule) {
  const bool ok = is_prime(dim) && dim >= 3 &&
                  (rule == Admissibility::AnyOddPrime || (dim - 1) % 4 == 0);
  if (!ok) {
    throw DomainError("dimension not admissible for polynomial code: " + std::to_string(dim));
  }
  return PolynomialCode(dim);
}

double p_correctable(const PolynomialCode& code, double p0) {
  check_probability(p0, "p0");
  const int n = code.length();
  double total = 0.0;
  for (int k = 0; k <= code.correctable(); ++k) total += binomial_term(n, k, 1.0 - p0);
  return std::min(total, 1.0);
}

PauliDistribution station_error_channel(const PolynomialCode& code, double p_cor) {
  check_probability(p_cor, "p_cor");
  const int dim = code.dim();
  const double other = (1.0 - p_cor) / (dim - 1);
  if (p_cor < other) return PauliDistribution::uniform(dim);
  std::vector<double> probs(static_cast<std::size_t>(dim), other);
  probs[0] = p_cor;
  return PauliDistribution::from_probs(std::move(probs));
}

ErasureBinning erasure_binning(int dim, double variance, double gamma,
                               const TruncationPolicy& policy) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw DomainError("discarding parameter must lie in (0, 1]");
  }
  if (!(variance > 0.0)) throw DomainError("variance must be > 0");
  auto masses = binned_masses(dim, variance, gamma, policy);
  const double kept_mass = std::accumulate(masses.begin(), masses.end(), 0.0);
  const double error_mass = std::accumulate(masses.begin() + 1, masses.end(), 0.0);

  ErasureBinning out{.gamma = gamma,
                     .kept = PauliDistribution::uniform(dim),
                     .p_discard = gap_mass(dim, variance, gamma, policy),
                     .kept_mass = kept_mass,
                     .kept_error = error_mass / kept_mass};
  for (double& m : masses) m /= kept_mass;
  out.kept = PauliDistribution::from_probs(std::move(masses));
  return out;
}

double p_fail_from_rates(const PolynomialCode& code, double p_discard, double kept_error) {
  check_probability(p_discard, "p_discard");
  check_probability(kept_error, "kept error probability");
  const int n = code.length();
  const int d = code.distance();
  double failure = 0.0;
  for (int erased = 0; erased <= n; ++erased) {
    const double layer = binomial_term(n, erased, p_discard);
    if (layer == 0.0) continue;
    if (erased >= d) {
      failure += layer;
      continue;
    }
    const int max_unknown = (d - erased - 1) / 2;
    const int kept = n - erased;
    double uncorrectable = 0.0;
    for (int unknown = max_unknown + 1; unknown <= kept; ++unknown) {
      uncorrectable += binomial_term(kept, unknown, kept_error);
    }
    failure += layer * uncorrectable;
  }
  return std::clamp(failure, 0.0, 1.0);
}

double p_fail(const PolynomialCode& code, double variance, double gamma,
              const TruncationPolicy& policy) {
  const auto binning = erasure_binning(code.dim(), variance, gamma, policy);
  return p_fail_from_rates(code, binning.p_discard, binning.kept_error);
}

std::vector<GammaPoint> gamma_curve(const PolynomialCode& code, double variance,
                                    const std::vector<double>& gammas) {
  std::vector<GammaPoint> curve;
  curve.reserve(gammas.size());
  for (double g : gammas) {
    const auto binning = erasure_binning(code.dim(), variance, g);
    curve.push_back({g, p_fail_from_rates(code, binning.p_discard, binning.kept_error),
                     binning.p_discard, binning.kept[0]});
  }
  return curve;
}

GammaOptimum optimal_gamma(const PolynomialCode& code, double variance, double resolution,
                           bool keep_curve) {
  if (!(resolution >= 1e-6 && resolution <= 0.5)) {
    throw DomainError("gamma resolution must lie in [1e-6, 0.5]");
  }
  const auto steps = static_cast<int>(std::llround(1.0 / resolution));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  for (int i = 1; i <= steps; ++i) grid.push_back(static_cast<double>(i) / steps);

  auto curve = gamma_curve(code, variance, grid);
  std::size_t best = curve.size() - 1;
  for (std::size_t i = curve.size(); i-- > 0;) {
    if (curve[i].p_fail < curve[best].p_fail) best = i;
  }

  GammaOptimum out{curve[best].gamma, curve[best].p_fail, {}};
  if (best > 0 && best + 1 < curve.size()) {
    // Golden-section search on the bracket around the grid minimum.
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = curve[best - 1].gamma;
    double hi = curve[best + 1].gamma;
    auto f = [&](double g) { return p_fail(code, variance, g); };
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-9; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = f(x2);
      }
    }
    const double g = 0.5 * (lo + hi);
    const double fg = f(g);
    if (fg < out.p_fail) out = {g, fg, {}};
  }
  if (keep_curve) out.curve = std::move(curve);
  return out;
}

}  // namespace gkpr
