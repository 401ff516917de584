#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "mixbound/errors.hpp"
#include "mixbound/gallery.hpp"

using namespace mixbound;
using namespace mixbound::gallery;
using nlohmann::json;

class EveryScenario : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryScenario, DefaultsHaveNoDeviation) {
  const auto r = run_scenario(GetParam());
  EXPECT_EQ(r.name, GetParam());
  EXPECT_FALSE(r.entries.empty());
  for (const Entry& e : r.entries) {
    EXPECT_NE(e.verdict, Verdict::deviation) << e.key << " " << e.computed;
    EXPECT_EQ(e.predicted.has_value(), e.verdict != Verdict::informational)
        << e.key;
  }
  for (const auto& row : r.table.rows) {
    EXPECT_EQ(row.size(), r.table.columns.size());
  }
}

INSTANTIATE_TEST_SUITE_P(Gallery, EveryScenario,
                         ::testing::ValuesIn(scenario_names()),
                         [](const auto& info) { return info.param; });

TEST(Gallery, RejectsUnknownNamesAndKeys) {
  EXPECT_THROW(run_scenario("no_such_scenario"), UnknownScenario);
  EXPECT_THROW(run_scenario("two_uniforms", {{"b", 1}}), InvalidParameter);
  EXPECT_THROW(run_scenario("two_uniforms", {{"a", 1.5}}), InvalidParameter);
  EXPECT_THROW(run_scenario("two_uniforms", {{"witness_p", 0.1}}),
               InvalidParameter);
}

TEST(Gallery, OverridesAreRecorded) {
  const auto r = run_scenario("two_squares", {{"p", 0.2}});
  EXPECT_EQ(r.parameters["p"], 0.2);
  EXPECT_EQ(r.parameters["grid"], 61);
  EXPECT_DOUBLE_EQ(r.entry("horizontal.mean_diff_constant").computed, 5.0);
}

TEST(Gallery, TwoUniformWitnessValue) {
  const double a = 0.5;
  const double p = 1e-4;
  const double u = p * a / 2;
  const double expected = -u * std::log(u) * a / (2 * p) / 150;
  const auto r = run_scenario("two_uniforms");
  EXPECT_NEAR(r.entry("witness(p=0.0001)").computed, expected, 1e-15);
  EXPECT_NEAR(expected, 0.0044152644721233642, 1e-15);
  EXPECT_NEAR(r.entry("witness_vs_log_inv_p").computed, a * a / 600, 1e-12);
}

TEST(Gallery, SurprisingSlopeWindow) {
  const auto r = run_scenario("surprising_blowup", {{"a", 4}});
  const double s = r.entry("log_chain_vs_log_neg_log_p").computed;
  EXPECT_GE(s, 0.35);
  EXPECT_LE(s, 0.65);
  EXPECT_GE(r.entry("log_chain_vs_log_neg_log_p.r_squared").computed, 0.98);
}

TEST(Gallery, SameMeanRateBelowPrediction) {
  for (double s2 : {4.0, 6.0}) {
    const auto r = run_scenario("two_gaussians_same_mean", {{"sigma2", s2}});
    const Entry& e = r.entry("log_I_vs_log_inv_p");
    EXPECT_EQ(e.verdict, Verdict::match) << s2;
    EXPECT_GT(e.computed, 0.0);
  }
}

TEST(Gallery, SeededRunsAreReproducible) {
  const json small = {{"mc_samples", 20000}, {"p_grid", {0.5}}};
  RunOptions o;
  o.seed = 11;
  const auto a = run_scenario("two_gaussians_same_variance", small, o);
  o.threads = 3;
  const auto b = run_scenario("two_gaussians_same_variance", small, o);
  EXPECT_EQ(dump_json(result_to_json(a)), dump_json(result_to_json(b)));
  o.seed = 12;
  const auto c = run_scenario("two_gaussians_same_variance", small, o);
  EXPECT_NE(a.entry("mc_tail(p=0.1)(r=1)").computed,
            c.entry("mc_tail(p=0.1)(r=1)").computed);
}

TEST(Gallery, RunAllMatchesSequential) {
  RunOptions o;
  o.threads = 4;
  const auto all = run_all(o);
  ASSERT_EQ(all.size(), scenario_names().size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].name, scenario_names()[i]);
  }
  const auto one = run_scenario("scaled_gaussians");
  EXPECT_EQ(dump_json(result_to_json(all[7])), dump_json(result_to_json(one)));
}

TEST(Figure, MultipleWells) {
  const Table t = figure_explo_data(0.01, 4.0);
  ASSERT_EQ(t.rows.size(), 2001u);
  EXPECT_EQ(t.rows.front()[0], -5.0);
  EXPECT_EQ(t.rows.back()[0], 5.0);
  int changes = 0;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    if ((t.rows[i][2] > 0) != (t.rows[i - 1][2] > 0)) ++changes;
  }
  EXPECT_GE(changes, 4);
}

TEST(Figure, SymmetricAndNormalised) {
  const Table t = figure_explo_data(0.3, 3.0);
  const std::size_t n = t.rows.size();
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = t.rows[i];
    const auto& m = t.rows[n - 1 - i];
    EXPECT_EQ(r[0], -m[0]);
    EXPECT_NEAR(r[1], m[1], 1e-9);
    EXPECT_NEAR(r[2], m[2], 1e-9);
    if (i > 0) mass += 0.5 * (r[1] + t.rows[i - 1][1]) * (r[0] - t.rows[i - 1][0]);
  }
  EXPECT_NEAR(mass, 1.0, 1e-4);
}

TEST(Figure, RejectsBadInput) {
  EXPECT_THROW(figure_explo_data(0.01, 2.0), InvalidParameter);
  EXPECT_THROW(figure_explo_data(0.0, 4.0), InvalidParameter);
}

TEST(Output, SeventeenDigitsRoundTrip) {
  const double x = 0.1 + 0.2;
  EXPECT_EQ(format_double(x), "0.30000000000000004");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  const json j = {{"a", x},
                  {"b", -std::numeric_limits<double>::infinity()},
                  {"c", {1.0 / 3, 2}},
                  {"d", "text"}};
  const json back = json::parse(dump_json(j));
  EXPECT_EQ(json_number(back["a"]), x);
  EXPECT_EQ(json_number(back["b"]), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(json_number(back["c"][0]), 1.0 / 3);
  EXPECT_EQ(back["d"], "text");
  EXPECT_THROW(json_number(json("x")), InvalidParameter);
}

TEST(Output, CsvHeaderAndRows) {
  Table t{{"x", "y"}, {{1.0, 0.5}, {2.0, std::numeric_limits<double>::infinity()}}};
  const std::string csv = table_to_csv(t, {"scenario demo"});
  EXPECT_EQ(csv, "# scenario demo\n# columns: x,y\nx,y\n1,0.5\n2,inf\n");
}
