#include "gkpr/gkp_math.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

#include "gkpr/errors.hpp"

namespace gkpr {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kClipTolerance = 1e-12;
constexpr double kAdaptiveSigmas = 10.0;

void check_dim(int dim) {
  if (dim < 2) throw DomainError("dimension must be >= 2, got " + std::to_string(dim));
}

void check_variance(double variance) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw DomainError("variance must be finite and >= 0");
  }
}

std::vector<double> validated(std::vector<double> probs) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0 + kNormTolerance)) {
      throw DomainError("probability outside [0, 1]");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw DomainError("probabilities do not sum to 1");
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::int64_t floor_mod(std::int64_t m, int dim) {
  const std::int64_t r = m % dim;
  return r < 0 ? r + dim : r;
}

}  // namespace

PauliDistribution PauliDistribution::from_probs(std::vector<double> probs) {
  check_dim(static_cast<int>(probs.size()));
  return PauliDistribution(validated(std::move(probs)));
}

PauliDistribution PauliDistribution::delta(int dim, int shift) {
  check_dim(dim);
  std::vector<double> p(static_cast<std::size_t>(dim), 0.0);
  p[static_cast<std::size_t>(floor_mod(shift, dim))] = 1.0;
  return PauliDistribution(std::move(p));
}

PauliDistribution PauliDistribution::uniform(int dim) {
  check_dim(dim);
  return PauliDistribution(std::vector<double>(static_cast<std::size_t>(dim), 1.0 / dim));
}

JointPauliDistribution JointPauliDistribution::outer(const PauliDistribution& x,
                                                     const PauliDistribution& z) {
  if (x.dim() != z.dim()) throw DomainError("marginal dimensions differ");
  const int dim = x.dim();
  std::vector<double> probs;
  probs.reserve(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) probs.push_back(x[a] * z[b]);
  }
  return JointPauliDistribution(dim, std::move(probs));
}

JointPauliDistribution JointPauliDistribution::from_probs(int dim, std::vector<double> probs) {
  check_dim(dim);
  if (probs.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
    throw DomainError("joint distribution must have D*D entries");
  }
  return JointPauliDistribution(dim, validated(std::move(probs)));
}

double lattice_spacing(int dim) { return std::sqrt(2.0 * std::numbers::pi / dim); }

LatticeRange lattice_range(int dim, double variance, const TruncationPolicy& policy) {
  check_dim(dim);
  if (policy.j_max) {
    const std::int64_t j = *policy.j_max;
    if (j < 1) throw DomainError("j_max must be >= 1");
    return {-j * dim, j * dim + dim - 1};
  }
  const double sigma = std::sqrt(variance);
  const auto reach =
      static_cast<std::int64_t>(std::ceil(kAdaptiveSigmas * sigma / lattice_spacing(dim)));
  const std::int64_t m = std::max<std::int64_t>(reach, 1) + dim;
  return {-m, m};
}

double gaussian_interval_mass(double lo, double hi, double variance) {
  if (!(hi > lo)) return 0.0;
  if (variance == 0.0) return (lo <= 0.0 && 0.0 < hi) ? 1.0 : 0.0;
  const double scale = std::sqrt(2.0 * variance);
  if (lo >= 0.0) return 0.5 * (std::erfc(lo / scale) - std::erfc(hi / scale));
  if (hi <= 0.0) return 0.5 * (std::erfc(-hi / scale) - std::erfc(-lo / scale));
  return 0.5 * (std::erf(hi / scale) - std::erf(lo / scale));
}

double shift_probability(int k, int dim, double variance, int j_max) {
  check_dim(dim);
  check_variance(variance);
  if (k < 0 || k >= dim) throw DomainError("shift index out of range");
  if (j_max < 1) throw DomainError("j_max must be >= 1");
  if (variance == 0.0) return k == 0 ? 1.0 : 0.0;
  const double a = lattice_spacing(dim);
  double total = 0.0;
  for (int j = -j_max; j <= j_max; ++j) {
    const double centre = static_cast<double>(j * dim + k);
    total += gaussian_interval_mass(a * (centre - 0.5), a * (centre + 0.5), variance);
  }
  return total;
}

std::vector<double> binned_masses(int dim, double variance, double keep_fraction,
                                  const TruncationPolicy& policy) {
  check_dim(dim);
  check_variance(variance);
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw DomainError("keep fraction must lie in (0, 1]");
  }
  std::vector<double> masses(static_cast<std::size_t>(dim), 0.0);
  if (variance == 0.0) {
    masses[0] = 1.0;
    return masses;
  }
  const double a = lattice_spacing(dim);
  const double half = 0.5 * keep_fraction;
  const auto range = lattice_range(dim, variance, policy);
  for (std::int64_t m = range.first; m <= range.last; ++m) {
    const double centre = static_cast<double>(m);
    masses[static_cast<std::size_t>(floor_mod(m, dim))] +=
        gaussian_interval_mass(a * (centre - half), a * (centre + half), variance);
  }
  return masses;
}

double gap_mass(int dim, double variance, double keep_fraction,
                const TruncationPolicy& policy) {
  check_dim(dim);
  check_variance(variance);
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw DomainError("keep fraction must lie in (0, 1]");
  }
  if (keep_fraction == 1.0 || variance == 0.0) return 0.0;
  const double a = lattice_spacing(dim);
  const double half = 0.5 * keep_fraction;
  const auto range = lattice_range(dim, variance, policy);
  double total = 0.0;
  // Gap between lattice points m and m + 1.
  for (std::int64_t m = range.first - 1; m <= range.last; ++m) {
    const double left = static_cast<double>(m);
    total += gaussian_interval_mass(a * (left + half), a * (left + 1.0 - half), variance);
  }
  return total;
}

PauliDistribution distribution_from_gaussian(int dim, double variance,
                                             const TruncationPolicy& policy) {
  auto masses = binned_masses(dim, variance, 1.0, policy);
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  for (double& m : masses) m /= total;
  return PauliDistribution::from_probs(std::move(masses));
}

PauliDistribution convolve(const PauliDistribution& a, const PauliDistribution& b) {
  if (a.dim() != b.dim()) throw DomainError("cannot convolve distributions of different dimension");
  const int dim = a.dim();
  std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
  for (int i = 0; i < dim; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < dim; ++j) {
      out[static_cast<std::size_t>((i + j) % dim)] += a[i] * b[j];
    }
  }
  return PauliDistribution::from_probs(std::move(out));
}

namespace {

using Complex = std::complex<double>;

std::vector<Complex> roots_of_unity(int dim, double sign) {
  std::vector<Complex> w(static_cast<std::size_t>(dim));
  for (int t = 0; t < dim; ++t) {
    w[static_cast<std::size_t>(t)] = std::polar(1.0, sign * 2.0 * std::numbers::pi * t / dim);
  }
  return w;
}

Complex integer_power(Complex base, std::int64_t n) {
  Complex result{1.0, 0.0};
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

}  // namespace

PauliDistribution convolve_power(const PauliDistribution& p, std::int64_t n) {
  if (n < 0) throw DomainError("convolution power must be >= 0");
  const int dim = p.dim();
  if (n == 0) return PauliDistribution::delta(dim);
  if (n == 1) return p;

  const auto forward = roots_of_unity(dim, -1.0);
  const auto backward = roots_of_unity(dim, 1.0);
  std::vector<Complex> spectrum(static_cast<std::size_t>(dim));
  for (int m = 0; m < dim; ++m) {
    Complex acc{0.0, 0.0};
    for (int k = 0; k < dim; ++k) acc += p[k] * forward[static_cast<std::size_t>((m * k) % dim)];
    spectrum[static_cast<std::size_t>(m)] = integer_power(acc, n);
  }

  std::vector<double> out(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    Complex acc{0.0, 0.0};
    for (int m = 0; m < dim; ++m) {
      acc += spectrum[static_cast<std::size_t>(m)] * backward[static_cast<std::size_t>((m * k) % dim)];
    }
    double value = acc.real() / dim;
    if (value < 0.0) {
      if (value < -kClipTolerance) {
        throw InternalError("spectral power produced probability " + std::to_string(value));
      }
      value = 0.0;
    }
    out[static_cast<std::size_t>(k)] = std::min(value, 1.0);
  }
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v /= total;
  return PauliDistribution::from_probs(std::move(out));
}

namespace {

double entropy_bits(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

}  // namespace

double entropy(const PauliDistribution& p) { return entropy_bits(p.probs()); }

double entropy(const JointPauliDistribution& p) { return entropy_bits(p.probs()); }

double secret_key_rate(const JointPauliDistribution& joint) {
  return std::max(0.0, std::log2(static_cast<double>(joint.dim())) - entropy(joint));
}

}  // namespace gkpr
