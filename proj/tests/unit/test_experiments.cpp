#include "doctest.h"

#include "momentmix/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

using namespace momentmix::experiments;

TEST_SUITE("experiments") {
  TEST_CASE("summarize") {
    CHECK_FALSE(summarize({}).has_value());
    CHECK_FALSE(summarize({std::nan("")}).has_value());
    const auto s = summarize({3.0, 1.0, std::numeric_limits<double>::infinity(), 2.0, 10.0});
    REQUIRE(s.has_value());
    CHECK(s->min == 1.0);
    CHECK(s->max == 10.0);
    CHECK(s->avg == 4.0);
    CHECK(s->median == 2.5);
  }

  TEST_CASE("zero trials give an empty table") {
    Table2Options opts;
    opts.trials = 0;
    const auto cells = run_table2(opts);
    for (const auto& cell : cells) CHECK(cell.trials.empty());
    // header and separator only
    const auto md = render_table2(cells, Format::md);
    CHECK(std::count(md.begin(), md.end(), '\n') == 2);
    const auto csv = render_table2(cells, Format::csv);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
  }

  TEST_CASE("table2 small grid is exact and deterministic") {
    Table2Options opts;
    opts.d = 8;
    opts.orders = {3, 4};
    opts.trials = 2;
    const auto a = run_table2(opts);
    REQUIRE(a.size() == 2);
    for (const auto& cell : a) {
      CHECK(cell.failures() == 0);
      for (double v : cell.column(0)) CHECK(v <= 1e-8);
    }
    CHECK(a[0].r == 3);
    const auto b = run_table2(opts);
    CHECK(render_table2(a, Format::csv) == render_table2(b, Format::csv));
    CHECK(render_table2(a, Format::json).find("decomp-err") != std::string::npos);
  }

  TEST_CASE("table3 scales with epsilon") {
    Table3Options opts;
    opts.d = 8;
    opts.orders = {3};
    opts.epsilons = {0.1, 0.001};
    opts.trials = 2;
    const auto cells = run_table3(opts);
    REQUIRE(cells.size() == 2);
    const auto big = summarize(cells[0].column(0)), small = summarize(cells[1].column(0));
    REQUIRE(big.has_value());
    REQUIRE(small.has_value());
    CHECK(small->avg < big->avg);
    CHECK(render_table3(cells, Format::md).find("abs-err") != std::string::npos);
  }

  TEST_CASE("format names") {
    CHECK(parse_format("md") == Format::md);
    CHECK(parse_format("csv") == Format::csv);
    CHECK(parse_format("json") == Format::json);
    CHECK_THROWS(parse_format("xml"));
  }
}
