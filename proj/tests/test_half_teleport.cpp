#include <doctest.h>

#include "gkpr/errors.hpp"
#include "gkpr/half_teleport.hpp"
#include "gkpr/noise_channels.hpp"

using namespace gkpr;

TEST_CASE("placement names round-trip") {
  for (Placement p : {Placement::None, Placement::After, Placement::Before, Placement::Alternating}) {
    CHECK(parse_placement(to_string(p)) == p);
  }
  CHECK_THROWS_AS(parse_placement("sideways"), DomainError);
}

TEST_CASE("station loss") {
  CHECK(station_loss_variance(0.99, 0.9) == doctest::Approx(1 - 0.891));
  CHECK(station_loss_variance(1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(station_loss_variance(0.0, 0.9), DomainError);
}

TEST_CASE("propagated variances per placement") {
  const double s = 0.01, l = 0.03;
  auto none = placement_channels(Placement::None, s, l);
  CHECK(none.readout == doctest::Approx(3 * s + 2 * l));
  CHECK_FALSE(none.stabilizer);

  for (Placement p : {Placement::After, Placement::Before}) {
    auto caption = placement_channels(p, s, l);
    CHECK(caption.readout == doctest::Approx(2 * s + l));
    CHECK(*caption.stabilizer == doctest::Approx(4 * s + l));
    auto literal = placement_channels(p, s, l, SymmetricVariances::EquationLiteral);
    CHECK(*literal.stabilizer == doctest::Approx(2 * s + l));
  }
  auto alt = placement_channels(Placement::Alternating, s, l);
  CHECK(alt.readout == doctest::Approx(3 * s + l));
  CHECK(*alt.stabilizer == doctest::Approx(3 * s + l));
}

TEST_CASE("p0 composes the two discrete channels") {
  const double s = 0.02, l = 0.05;
  const int dim = 5;
  CHECK(placement_p0(Placement::None, dim, s, l) ==
        doctest::Approx(distribution_from_gaussian(dim, 3 * s + 2 * l)[0]));
  const auto a = distribution_from_gaussian(dim, 2 * s + l);
  const auto b = distribution_from_gaussian(dim, 4 * s + l);
  CHECK(placement_p0(Placement::After, dim, s, l) == doctest::Approx(convolve(a, b)[0]).epsilon(1e-14));
  // measurement noise enters every channel
  const auto am = distribution_from_gaussian(dim, 2 * s + l + 0.01);
  const auto bm = distribution_from_gaussian(dim, 4 * s + l + 0.01);
  CHECK(placement_p0(Placement::After, dim, s, l, SymmetricVariances::CaptionPair, 0.01) ==
        doctest::Approx(convolve(am, bm)[0]).epsilon(1e-14));
}

TEST_CASE("placement ranking at realistic loss") {
  const double s = squeezing_to_variance(SqueezingParameter{20.0});
  const double l = station_loss_variance(0.999, fiber_transmittance(0.5));
  const auto ranking = placement_ranking(13, s, l);
  REQUIRE(ranking.size() == 4);
  CHECK(ranking.front().first == Placement::Alternating);
  CHECK(ranking.back().first == Placement::None);
  // After and Before share the same channel pair, so they tie in enumeration order
  CHECK(ranking[1].first == Placement::After);
  CHECK(ranking[2].first == Placement::Before);
  CHECK(ranking[1].second == ranking[2].second);
}

TEST_CASE("noiseless half-teleport step") {
  for (Placement p : {Placement::None, Placement::After, Placement::Alternating}) {
    CHECK(placement_p0(p, 13, 0.0, 0.0) == 1.0);
  }
}
