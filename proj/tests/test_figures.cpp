#include <doctest.h>

#include <cmath>

#include "gkpr/errors.hpp"
#include "gkpr/figures.hpp"

using namespace gkpr;

TEST_CASE("figure catalogue") {
  CHECK(figure_names().size() == 11);
  CHECK(is_figure("fig-noise-b"));
  CHECK_FALSE(is_figure("fig7"));
  CHECK_THROWS_AS(make_figure("fig7"), DomainError);
}

TEST_CASE("fig5 grid and dip") {
  const auto f = make_figure("fig5");
  CHECK(f.table.columns == std::vector<std::string>{"gamma", "p_fail", "p_discard", "p0_kept"});
  REQUIRE(f.table.rows.size() == 501);
  CHECK(f.table.rows.front()[0] == 0.5);
  CHECK(f.table.rows.back()[0] == doctest::Approx(1.0));
  const auto p = f.table.column("p_fail");
  const double minimum = *std::min_element(p.begin(), p.end());
  CHECK(minimum < p.back() / 10);
  CHECK(f.parameters["sigma2"] == 0.01);
}

TEST_CASE("fig2b columns and low-squeezing zero region") {
  const auto f = make_figure("fig2b");
  CHECK(f.table.columns == std::vector<std::string>{"L_km", "s_db", "D_opt", "skr"});
  CHECK(f.table.rows.size() == 41 * 71);
  for (const auto& r : f.table.rows) {
    if (r[1] < 10) {
      CHECK(r[2] == 1);
      CHECK(r[3] == 0);
    }
  }
}

TEST_CASE("fig9 has four placements per code") {
  const auto f = make_figure("fig9a");
  CHECK(f.table.columns.size() == 2 + 3 * 4 * 2);
  CHECK(f.table.column_index("skr_per_station_D13_alternating") > 0);
  CHECK(f.table.rows.size() == 191);
}

TEST_CASE("overrides") {
  FigureOverrides o;
  o.sigma2 = 0.02;
  const auto f = make_figure("fig5", o);
  CHECK(f.parameters["sigma2"] == 0.02);
  FigureOverrides bad;
  bad.squeezing_db = 25;
  CHECK_THROWS_AS(make_figure("fig2a", bad), DomainError);
  CHECK_NOTHROW(make_figure("fig4a", bad));
}

TEST_CASE("row evaluation is independent of the execution path") {
  for (const char* name : {"fig3a", "fig-noise-b", "fig9b"}) {
    CHECK(make_figure(name, {}, Execution::Serial).table.to_csv() ==
          make_figure(name, {}, Execution::Parallel).table.to_csv());
  }
}
