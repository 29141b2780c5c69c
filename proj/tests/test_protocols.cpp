#include <doctest.h>

#include <cmath>

#include "gkpr/errors.hpp"
#include "gkpr/protocols.hpp"

using namespace gkpr;

namespace {

RepeaterConfig encoded(Protocol p, int dim, double s, double L, double L0, double coupling) {
  RepeaterConfig c;
  c.protocol = p;
  c.dimension = dim;
  c.encoded = true;
  c.squeezing_db = s;
  c.length_km = L;
  c.spacing_km = L0;
  c.coupling = coupling;
  return c;
}

}  // namespace

TEST_CASE("protocol names") {
  for (Protocol p : {Protocol::TwoWayTeleport, Protocol::OneWayTeleport, Protocol::OneWayHalfTeleport}) {
    CHECK(parse_protocol(to_string(p)) == p);
  }
  CHECK(parse_protocol("one-way-half-teleport") == Protocol::OneWayHalfTeleport);
  CHECK_THROWS_AS(parse_protocol("three-way"), DomainError);
}

TEST_CASE("station count") {
  CHECK(station_count(2000, 0.55) == 3636);
  CHECK(station_count(1, 1) == 1);
  CHECK(station_count(1.4, 1.0) == 1);
  CHECK(station_count(10, 0.1) == 100);
  CHECK_THROWS_AS(station_count(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(station_count(1.0, 0.0), DomainError);
}

TEST_CASE("single station rate") {
  const auto p = PauliDistribution::from_probs({0.95, 0.04, 0.01});
  const auto r = chain_rate(p, 1);
  CHECK(r.skr_bits == doctest::Approx(std::log2(3.0) - 2 * entropy(p)));
  CHECK(r.skr_per_station == doctest::Approx(r.skr_bits));
  CHECK(chain_rate(PauliDistribution::uniform(3), 5).skr_bits == 0.0);
}

TEST_CASE("bare two-way reference point") {
  RepeaterConfig c;
  c.dimension = 2;
  c.squeezing_db = 5;
  CHECK(bare_rate(c).skr_bits == 0.0);

  c.squeezing_db = 30;
  c.length_km = 10;
  c.spacing_km = 0.1;
  const auto best = optimal_bare_dimension(c, 32);
  CHECK(best.dimension == 8);
  CHECK(best.curve.size() == 31);
}

TEST_CASE("bare optimum prefers qubits at low squeezing") {
  RepeaterConfig c;
  c.squeezing_db = 20;
  c.length_km = 500;
  c.spacing_km = 0.1;
  CHECK(optimal_bare_dimension(c, 16).dimension == 2);
  c.squeezing_db = 3;
  CHECK(optimal_bare_dimension(c, 16).dimension == 1);
  CHECK_THROWS_AS(optimal_bare_dimension(c, 1), DomainError);
}

TEST_CASE("encoded headline rates") {
  const auto r5 = encoded_rate(encoded(Protocol::TwoWayTeleport, 5, 30, 1000, 0.1, 0.99));
  CHECK(r5.skr_bits == doctest::Approx(std::log2(5.0)).epsilon(1e-3));
  const auto r17 = encoded_rate(encoded(Protocol::TwoWayTeleport, 17, 30, 1000, 0.1, 0.99));
  CHECK(r17.skr_bits > 3.5);
  CHECK(r17.skr_bits < 4.5);
  CHECK(r17.stations == 10000);
}

TEST_CASE("gamma = 1 is identical to no erasure decoding") {
  for (int dim : {5, 13, 17}) {
    auto c = encoded(Protocol::TwoWayTeleport, dim, 22, 800, 0.4, 0.99);
    const auto plain = encoded_rate(c);
    c.gamma = 1.0;
    const auto with = encoded_rate(c);
    CHECK(plain.skr_bits == with.skr_bits);
    CHECK(plain.p_cor_station == with.p_cor_station);
  }
}

TEST_CASE("configuration validation") {
  RepeaterConfig c;
  c.protocol = Protocol::OneWayHalfTeleport;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.protocol = Protocol::TwoWayTeleport;
  c.gamma = 0.8;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.gamma.reset();
  c.length_km = 0.1;
  CHECK_THROWS_AS(c.validate(), DomainError);
  auto h = encoded(Protocol::OneWayHalfTeleport, 5, 20, 100, 0.5, 0.99);
  h.gamma = 0.9;
  CHECK_THROWS_AS(h.validate(), DomainError);
  h.gamma.reset();
  CHECK_NOTHROW(h.validate());
  CHECK_THROWS_AS(encoded_rate(encoded(Protocol::TwoWayTeleport, 6, 20, 100, 0.5, 0.99)), DomainError);
}

TEST_CASE("rate decreases with length") {
  for (Protocol p : {Protocol::TwoWayTeleport, Protocol::OneWayTeleport, Protocol::OneWayHalfTeleport}) {
    auto c = encoded(p, 13, 25, 1, 0.1, 0.99);
    double previous = 1e9;
    for (double L : log_grid(1, 1e5, 26)) {
      c.length_km = L;
      const double skr = encoded_rate(c).skr_bits;
      CHECK(skr <= previous + 1e-12);
      previous = skr;
    }
  }
  RepeaterConfig bare;
  bare.dimension = 3;
  bare.squeezing_db = 18;
  double previous = 1e9;
  for (double L : log_grid(1, 1e4, 21)) {
    bare.length_km = L;
    const double skr = bare_rate(bare).skr_bits;
    CHECK(skr <= previous + 1e-12);
    previous = skr;
  }
}

TEST_CASE("bare rate increases with squeezing") {
  for (int dim : {2, 3, 4, 5}) {
    RepeaterConfig c;
    c.dimension = dim;
    c.length_km = 50;
    double previous = -1;
    for (double s = 5; s <= 40; s += 1) {
      c.squeezing_db = s;
      const double skr = bare_rate(c).skr_bits;
      CHECK(skr >= previous - 1e-12);
      previous = skr;
    }
  }
}

TEST_CASE("protocol ordering at matched parameters") {
  for (int dim : {5, 13}) {
    for (double L : {10.0, 300.0, 5000.0}) {
      const double two = encoded_rate(encoded(Protocol::TwoWayTeleport, dim, 25, L, 0.2, 0.99)).skr_bits;
      const double one = encoded_rate(encoded(Protocol::OneWayTeleport, dim, 25, L, 0.2, 0.99)).skr_bits;
      const double half = encoded_rate(encoded(Protocol::OneWayHalfTeleport, dim, 25, L, 0.2, 0.99)).skr_bits;
      CHECK(two >= one - 1e-12);
      CHECK(one >= half - 1e-12);
    }
  }
}

TEST_CASE("spacing optimum at 20 dB") {
  auto c = encoded(Protocol::TwoWayTeleport, 5, 20, 2000, 0.5, 0.999);
  const auto grid = linear_grid(0.1, 2.0, 0.01);
  const auto opt = optimal_spacing(c, grid);
  CHECK(opt.spacing_km == doctest::Approx(0.55).epsilon(0.05));
  CHECK(opt.skr_bits == doctest::Approx(1.81).epsilon(0.02));
  REQUIRE(opt.cutoff_km);
  CHECK(*opt.cutoff_km == doctest::Approx(0.88).epsilon(0.02));
  CHECK(opt.curve.size() == grid.size());
}

TEST_CASE("input noise cliff") {
  const double full = std::log2(5.0);
  CHECK(rate_vs_input_noise(5, 5000, 0.5, 0.01).skr_bits >= 0.9 * full);
  CHECK(rate_vs_input_noise(5, 5000, 0.5, 0.02).skr_bits == 0.0);
  CHECK_THROWS_AS(rate_vs_input_noise(5, 5000, 0.5, -0.1), DomainError);
}

TEST_CASE("grids") {
  const auto g = linear_grid(0.1, 2.0, 0.01);
  CHECK(g.size() == 191);
  CHECK(g.front() == 0.1);
  CHECK(g.back() == doctest::Approx(2.0));
  CHECK(g[45] == doctest::Approx(0.55));
  const auto l = log_grid(1, 1e4, 5);
  CHECK(l.size() == 5);
  CHECK(l[2] == doctest::Approx(100));
  CHECK(l.back() == 1e4);
}
