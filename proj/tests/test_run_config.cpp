#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "gkpr/errors.hpp"
#include "gkpr/run_config.hpp"

using namespace gkpr;
using nlohmann::json;

namespace {

RunConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RunConfig c;
  c.repeater.protocol = static_cast<Protocol>(rng() % 3);
  c.repeater.dimension = 2 + static_cast<int>(rng() % 30);
  c.repeater.encoded = rng() % 2;
  c.repeater.length_km = 1 + 1e4 * u(rng);
  c.repeater.spacing_km = 0.01 + u(rng);
  c.repeater.squeezing_db = 40 * u(rng);
  c.repeater.coupling = 0.5 + 0.5 * u(rng);
  c.repeater.attenuation_km = 10 + 20 * u(rng);
  if (rng() % 2) c.repeater.gamma = u(rng);
  c.repeater.placement = static_cast<Placement>(rng() % 4);
  c.repeater.symmetric_mode = rng() % 2 ? SymmetricVariances::CaptionPair : SymmetricVariances::EquationLiteral;
  c.repeater.measurement_variance = 1e-3 * u(rng);
  if (rng() % 2) c.repeater.truncation.j_max = 1 + static_cast<int>(rng() % 5);
  c.repeater.admissibility = rng() % 2 ? Admissibility::Strict : Admissibility::AnyOddPrime;
  c.axes.push_back({"length_km", 1 + u(rng), 100 + u(rng), 2 + static_cast<int>(rng() % 10),
                    rng() % 2 ? AxisScale::Linear : AxisScale::Log});
  c.format = rng() % 2 ? "csv" : "json";
  c.output = "out_" + std::to_string(rng() % 1000) + ".csv";
  c.seed = rng();
  return c;
}

void check_same(const RunConfig& a, const RunConfig& b) {
  CHECK(to_json(a) == to_json(b));
  CHECK(a.repeater.length_km == b.repeater.length_km);
  CHECK(a.repeater.coupling == b.repeater.coupling);
  CHECK(a.repeater.gamma == b.repeater.gamma);
  CHECK(a.repeater.truncation.j_max == b.repeater.truncation.j_max);
  CHECK(a.seed == b.seed);
  REQUIRE(a.axes.size() == b.axes.size());
  CHECK(a.axes[0].min == b.axes[0].min);
  CHECK(a.axes[0].scale == b.axes[0].scale);
}

}  // namespace

TEST_CASE("config round-trips through JSON text") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_config(rng);
    const auto back = run_config_from_json(json::parse(to_json(c).dump()));
    check_same(c, back);
  }
}

TEST_CASE("config round-trips through a file") {
  std::mt19937_64 rng(5);
  const auto c = random_config(rng);
  const auto path = std::filesystem::temp_directory_path() / "gkpr_run_config_test.json";
  save_run_config(c, path);
  check_same(c, load_run_config(path));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_run_config(path), DomainError);
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(run_config_from_json(json{{"colour", 1}}), DomainError);
  CHECK_THROWS_AS(run_config_from_json(json{{"repeater", {{"dimension", "five"}}}}), DomainError);
  CHECK_THROWS_AS(run_config_from_json(json{{"repeater", {{"protocol", "three-way"}}}}), DomainError);
  CHECK_THROWS_AS(run_config_from_json(json{{"sweep", {{{"parameter", "length_km"}, {"bins", 3}}}}}),
                  DomainError);
  const auto partial = run_config_from_json(json{{"repeater", {{"dimension", 7}}}});
  CHECK(partial.repeater.dimension == 7);
  CHECK(partial.repeater.squeezing_db == RepeaterConfig{}.squeezing_db);
}

TEST_CASE("axis validation and values") {
  SweepAxis a{"squeezing_db", 10, 20, 3, AxisScale::Linear};
  CHECK(a.values() == std::vector<double>{10, 15, 20});
  SweepAxis l{"length_km", 1, 100, 3, AxisScale::Log};
  CHECK(l.values()[1] == doctest::Approx(10));
  CHECK_THROWS_AS((SweepAxis{"length_km", 1, 100, 1, AxisScale::Linear}.validate()), DomainError);
  CHECK_THROWS_AS((SweepAxis{"length_km", 0, 100, 3, AxisScale::Log}.validate()), DomainError);
  CHECK_THROWS_AS((SweepAxis{"colour", 0, 1, 3, AxisScale::Linear}.validate()), DomainError);
  CHECK_THROWS_AS((SweepAxis{"coupling", 1, 0.5, 3, AxisScale::Linear}.validate()), DomainError);
  RunConfig dup;
  dup.axes = {a, a};
  CHECK_THROWS_AS(dup.validate(), DomainError);
}

TEST_CASE("sweep rows are lexicographic and match single evaluations") {
  RunConfig c;
  c.repeater.dimension = 3;
  c.axes = {{"squeezing_db", 15, 25, 3, AxisScale::Linear}, {"length_km", 10, 1000, 4, AxisScale::Log}};
  const auto t = sweep(c);
  REQUIRE(t.rows.size() == 12);
  CHECK(t.columns[0] == "squeezing_db");
  CHECK(t.columns[1] == "length_km");
  CHECK(t.rows[0][0] == 15);
  CHECK(t.rows[1][0] == 15);
  CHECK(t.rows[4][0] == 20);
  CHECK(t.rows[1][1] == doctest::Approx(std::pow(10.0, 5.0 / 3.0)));
  for (const auto& row : t.rows) {
    RepeaterConfig rc = c.repeater;
    rc.squeezing_db = row[0];
    rc.length_km = row[1];
    CHECK(row[t.column_index("skr_bits")] == bare_rate(rc).skr_bits);
  }
  CHECK(sweep(c, Execution::Serial).to_csv() == t.to_csv());
}

TEST_CASE("dimension axis rounds to integers") {
  RunConfig c;
  c.axes = {{"dimension", 2, 6, 5, AxisScale::Linear}};
  const auto t = sweep(c);
  CHECK(t.column("dimension") == std::vector<double>{2, 3, 4, 5, 6});
}
