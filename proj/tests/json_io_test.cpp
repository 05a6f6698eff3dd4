#include "marweight/json_io.hpp"

#include <gtest/gtest.h>

#include <cstring>

#include "fixtures.hpp"

namespace marweight {
namespace {

TEST(InstanceJson, MinimalBundleDefaults) {
  const auto inst = parse_instance(R"({"tree": {"dyadic": 2}})");
  EXPECT_EQ(inst.tree, build_dyadic(2));
  EXPECT_EQ(inst.v, weight::unit(4));
  EXPECT_EQ(inst.exps, exponent_config(2, 2));
  EXPECT_FALSE(inst.f.has_value());
  EXPECT_FALSE(inst.exact.has_value());
}

TEST(InstanceJson, RationalStrings) {
  const auto inst = parse_instance(R"({
    "tree": {"masses": ["1/3", "2/3"], "levels": [[[0, 1]], [[0], [1]]]},
    "weights": {"w1": ["2/3", 2]},
    "exponents": {"p1": 3, "p2": "9/2"},
    "functions": {"f": [1, "-1/2"], "g": ["0.25", 4]}
  })");
  ASSERT_TRUE(inst.exact.has_value());
  EXPECT_EQ(inst.exact->mass(0), rational(1, 3));
  EXPECT_EQ(inst.exps.p2(), 4.5);
  EXPECT_EQ(inst.w1[0], 2.0 / 3.0);
  EXPECT_EQ((*inst.f)[1], -0.5);
  EXPECT_EQ((*inst.g)[0], 0.25);
}

TEST(InstanceJson, RoundTripIsExact) {
  auto rng = make_rng(101);
  for (int i = 0; i < 50; ++i) {
    instance inst(testing::random_dyadic(bounded(rng, 4), rng));
    const auto n = inst.leaf_count();
    inst.v = testing::random_weight(n, rng);
    inst.w1 = testing::random_weight(n, rng, 3.0);
    inst.w2 = testing::random_weight(n, rng);
    inst.exps = exponent_config(uniform(rng, 1.01, 15), uniform(rng, 1.01, 15));
    inst.f = testing::random_function(n, rng);
    if (i % 2) inst.g = testing::random_function(n, rng);
    const auto text = to_json(inst).dump();
    const auto back = parse_instance(text);
    EXPECT_EQ(back, inst);
    for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(std::memcmp(&back.w1[j], &inst.w1[j], sizeof(double)), 0);
    EXPECT_EQ(to_json(back).dump(), text);
  }
  const auto exact = parse_instance(R"({"tree": {"masses": ["1/7", "6/7"], "levels": [[[0, 1]], [[0], [1]]]}})");
  EXPECT_EQ(parse_instance(to_json(exact).dump()), exact);
}

TEST(InstanceJson, Errors) {
  auto code_of = [](const std::string& text) {
    try {
      parse_instance(text);
    } catch (const error& e) {
      return e.code();
    }
    return errc::bad_spec;
  };
  EXPECT_EQ(code_of(R"({"tree": {"dyadic": 2}, "weights": {"v": [1, 1)"), errc::parse_error);
  EXPECT_EQ(code_of(R"({"weights": {}})"), errc::parse_error);
  EXPECT_EQ(code_of(R"({"tree": {"levels": "x"}})"), errc::parse_error);
  EXPECT_EQ(code_of(R"({"tree": {"dyadic": 1}, "weights": {"v": [1, "1/0"]}})"), errc::parse_error);
  EXPECT_EQ(code_of(R"({"tree": {"dyadic": 1}, "weights": {"v": [1, 0]}})"), errc::non_positive_weight);
  EXPECT_EQ(code_of(R"({"tree": {"dyadic": 1}, "weights": {"v": [1, 1, 1]}})"), errc::leaf_count_mismatch);
  EXPECT_EQ(code_of(R"({"tree": {"masses": [0.5, 0.6], "levels": [[[0, 1]], [[0], [1]]]}})"), errc::mass_sum_not_one);
  EXPECT_EQ(code_of(R"({"tree": {"dyadic": 1}, "exponents": {"p1": 1, "p2": 2}})"), errc::exponent_out_of_range);
}

TEST(ReportJson, StepsAndStoppingTimes) {
  proof_chain_report rep;
  rep.check("a", 1, 2);
  rep.check("b", 3, 1);
  rep.note_failure({"b", 2, simple_function{1, 0}, simple_function{0, 1}});
  const auto j = to_json(rep);
  EXPECT_FALSE(j["passed"].get<bool>());
  ASSERT_EQ(j["steps"].size(), 2u);
  EXPECT_EQ(j["steps"][1]["step"], "b");
  EXPECT_EQ(j["steps"][1]["lhs"], 3.0);
  EXPECT_EQ(j["steps"][1]["pass"], false);
  EXPECT_EQ(j["failure"]["trial"], 2);
  EXPECT_EQ(to_json(stopping_time{2, -1, 2, -1}).dump(), "[2,-1,2,-1]");
}

TEST(ParseRational, DecimalForms) {
  EXPECT_EQ(parse_rational("010"), rational(10));
  EXPECT_EQ(parse_rational("-0.5"), rational(-1, 2));
  EXPECT_EQ(parse_rational("-1.25"), rational(-5, 4));
  EXPECT_EQ(parse_rational(".5"), rational(1, 2));
  EXPECT_EQ(parse_rational("003/06"), rational(1, 2));
  EXPECT_EQ(parse_rational("4.5"), rational(9, 2));
  for (const char* bad : {"0x1", "1/0", "", "1.", "1e3", "a/b", "1.2.3", "--1"}) EXPECT_THROW(parse_rational(bad), error) << bad;
}

}  // namespace
}  // namespace marweight
