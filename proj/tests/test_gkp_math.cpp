#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gkpr/errors.hpp"
#include "gkpr/gkp_math.hpp"

using namespace gkpr;

namespace {

// Composite Simpson rule on the Gaussian density, independent of erf.
double simpson_mass(double lo, double hi, double variance, int panels = 2000) {
  const double sigma = std::sqrt(variance);
  const auto pdf = [&](double x) {
    return std::exp(-0.5 * x * x / variance) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  };
  const double h = (hi - lo) / panels;
  double s = pdf(lo) + pdf(hi);
  for (int i = 1; i < panels; ++i) s += pdf(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double quadrature_shift(int k, int dim, double variance) {
  const double a = lattice_spacing(dim);
  const double sigma = std::sqrt(variance);
  double total = 0.0;
  for (int m = -400; m <= 400; ++m) {
    if (((m % dim) + dim) % dim != k) continue;
    const double lo = a * (m - 0.5);
    const double hi = a * (m + 0.5);
    if (lo > 12 * sigma || hi < -12 * sigma) continue;
    total += simpson_mass(std::max(lo, -12 * sigma), std::min(hi, 12 * sigma), variance);
  }
  return total;
}

PauliDistribution random_distribution(std::mt19937_64& rng, int dim) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(static_cast<std::size_t>(dim));
  double total = 0.0;
  for (double& x : p) total += (x = e(rng));
  for (double& x : p) x /= total;
  return PauliDistribution::from_probs(p);
}

PauliDistribution naive_power(const PauliDistribution& p, int n) {
  auto acc = PauliDistribution::delta(p.dim());
  for (int i = 0; i < n; ++i) acc = convolve(acc, p);
  return acc;
}

}  // namespace

TEST_CASE("lattice spacing") {
  CHECK(lattice_spacing(2) == doctest::Approx(std::sqrt(std::numbers::pi)));
  CHECK(lattice_spacing(8) == doctest::Approx(std::sqrt(std::numbers::pi / 4)));
}

TEST_CASE("shift probability matches Simpson quadrature") {
  for (int dim : {2, 3, 5, 13}) {
    for (double var : {0.01, 0.1, 0.5, 2.0}) {
      for (int k = 0; k < dim; ++k) {
        CAPTURE(dim);
        CAPTURE(var);
        CAPTURE(k);
        const double expected = quadrature_shift(k, dim, var);
        CHECK(shift_probability(k, dim, var, 30) == doctest::Approx(expected).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("qubit reference value") {
  // Half-width sqrt(pi)/2 at sigma = 0.5: two tails of a 1.772 sigma cut,
  // plus the images at +-2 sqrt(pi) which are negligible here.
  const double tail = 0.5 * std::erfc(std::sqrt(std::numbers::pi) / 2 / 0.5 / std::sqrt(2.0));
  const auto p = distribution_from_gaussian(2, 0.25);
  CHECK(p[1] == doctest::Approx(2 * tail).epsilon(1e-4));
}

TEST_CASE("distribution_from_gaussian agrees with explicit truncation") {
  for (int dim : {2, 7, 13}) {
    for (double var : {0.02, 0.3, 1.5}) {
      const auto p = distribution_from_gaussian(dim, var);
      double total = 0.0;
      for (int k = 0; k < dim; ++k) {
        CHECK(p[k] == doctest::Approx(shift_probability(k, dim, var, 60)).epsilon(1e-12));
        total += p[k];
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("explicit j_max range") {
  const auto r = lattice_range(5, 0.1, TruncationPolicy{2});
  CHECK(r.first == -10);
  CHECK(r.last == 14);
  CHECK_THROWS_AS(lattice_range(5, 0.1, TruncationPolicy{0}), DomainError);
  // j_max = 1 already captures a narrow Gaussian
  const auto narrow = distribution_from_gaussian(3, 0.05, TruncationPolicy{1});
  CHECK(narrow[1] == doctest::Approx(distribution_from_gaussian(3, 0.05)[1]).epsilon(1e-12));
}

TEST_CASE("zero variance is the identity channel") {
  const auto p = distribution_from_gaussian(7, 0.0);
  CHECK(p == PauliDistribution::delta(7));
  CHECK(shift_probability(0, 7, 0.0, 1) == 1.0);
  CHECK(shift_probability(3, 7, 0.0, 1) == 0.0);
}

TEST_CASE("large variance tends to uniform") {
  const auto p = distribution_from_gaussian(4, 50.0);
  for (int k = 0; k < 4; ++k) CHECK(p[k] == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("interval mass keeps tail precision") {
  // additivity far in the tail, where 1 - erf would cancel
  const double v = 0.01;
  const double a = gaussian_interval_mass(1.0, 1.1, v);
  const double b = gaussian_interval_mass(1.1, 1.3, v);
  const double c = gaussian_interval_mass(1.0, 1.3, v);
  CHECK(a > 0.0);
  CHECK(a + b == doctest::Approx(c).epsilon(1e-12));
  CHECK(gaussian_interval_mass(-1.3, -1.0, v) == doctest::Approx(c).epsilon(1e-12));
  CHECK(gaussian_interval_mass(1.0, 1.0, v) == 0.0);
}

TEST_CASE("gap mass complements the kept windows") {
  for (double keep : {0.3, 0.8, 0.99}) {
    for (double var : {0.01, 0.2}) {
      const auto kept = binned_masses(13, var, keep);
      double total = gap_mass(13, var, keep);
      for (double m : kept) total += m;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  CHECK(gap_mass(5, 0.1, 1.0) == 0.0);
  CHECK_THROWS_AS(gap_mass(5, 0.1, 0.0), DomainError);
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(PauliDistribution::from_probs({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(PauliDistribution::from_probs({1.2, -0.2}), DomainError);
  CHECK_THROWS_AS(PauliDistribution::from_probs({1.0}), DomainError);
  const auto p = PauliDistribution::from_probs({0.5 + 4e-10, 0.5});
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(distribution_from_gaussian(1, 0.1), DomainError);
  CHECK_THROWS_AS(distribution_from_gaussian(3, -0.1), DomainError);
}

TEST_CASE("convolve_power matches repeated convolution") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 30);
    const auto p = random_distribution(rng, dim);
    for (int n : {0, 1, 2, 3, 17, 64}) {
      const auto fast = convolve_power(p, n);
      const auto slow = naive_power(p, n);
      for (int k = 0; k < dim; ++k) CHECK(std::abs(fast[k] - slow[k]) < 1e-12);
    }
  }
  CHECK_THROWS_AS(convolve_power(PauliDistribution::uniform(3), -1), DomainError);
}

TEST_CASE("convolution properties") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 12);
    const auto a = random_distribution(rng, dim);
    const auto b = random_distribution(rng, dim);
    const auto ab = convolve(a, b);
    const auto ba = convolve(b, a);
    for (int k = 0; k < dim; ++k) CHECK(ab[k] == doctest::Approx(ba[k]).epsilon(1e-14));
    // mixing never lowers entropy
    CHECK(entropy(ab) >= std::max(entropy(a), entropy(b)) - 1e-12);
  }
  CHECK_THROWS_AS(convolve(PauliDistribution::uniform(3), PauliDistribution::uniform(4)), DomainError);
}

TEST_CASE("huge convolution powers converge to uniform") {
  const auto p = distribution_from_gaussian(5, 0.05);
  const auto q = convolve_power(p, 1'000'000'000);
  for (int k = 0; k < 5; ++k) CHECK(q[k] == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("entropy and key rate") {
  CHECK(entropy(PauliDistribution::uniform(8)) == doctest::Approx(3.0));
  CHECK(entropy(PauliDistribution::delta(8, 3)) == 0.0);
  const auto d = PauliDistribution::delta(5);
  CHECK(secret_key_rate(JointPauliDistribution::outer(d, d)) == doctest::Approx(std::log2(5.0)));
  const auto u = PauliDistribution::uniform(5);
  CHECK(secret_key_rate(JointPauliDistribution::outer(u, d)) == 0.0);

  const auto p = PauliDistribution::from_probs({0.9, 0.1});
  const auto joint = JointPauliDistribution::outer(p, p);
  CHECK(entropy(joint) == doctest::Approx(2 * entropy(p)));
  CHECK(joint.at(0, 1) == doctest::Approx(0.09));
  CHECK_THROWS_AS(JointPauliDistribution::from_probs(2, {1.0, 0.0, 0.0}), DomainError);
}
