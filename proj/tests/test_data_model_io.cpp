#include <catch_amalgamated.hpp>

#include <cstdint>
#include <random>
#include <sstream>

#include "successodds.hpp"

using namespace successodds;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::usage;
}

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an error");
  return {};
}

CsvConfig numeric_config(int decimals) {
  CsvConfig c;
  c.scale = Scale::numeric(decimals);
  return c;
}

}  // namespace

TEST_CASE("numeric values parse exactly at the declared scale") {
  Scale s = Scale::numeric(2);
  CHECK(s.parse_value("1.7") == OrderedValue::numeric(17, 1));
  CHECK(s.parse_value("1.70") == s.parse_value("1.7"));
  CHECK(s.parse_value("-0.05") < s.parse_value("0"));
  CHECK(s.parse_value("  3 ") == OrderedValue::numeric(3, 0));
  CHECK(code_of([&] { s.parse_value("1.234"); }) == ErrorCode::scale);
  CHECK(code_of([&] { s.parse_value("abc"); }) == ErrorCode::parse);
  CHECK(code_of([&] { s.parse_value(""); }) == ErrorCode::parse);
}

TEST_CASE("payload magnitude is bounded at scale") {
  Scale s = Scale::numeric(0);
  CHECK_NOTHROW(s.parse_value("1000000000000000"));
  CHECK(code_of([&] { s.parse_value("1000000000000001"); }) != ErrorCode::usage);
}

TEST_CASE("ordinal categories compare by list position") {
  Scale s = Scale::ordinal({"low", "mid", "high"});
  CHECK(s.parse_value("low") < s.parse_value("mid"));
  CHECK(s.parse_value("mid") < s.parse_value("high"));
  // lexicographic order would put "high" first
  CHECK(s.parse_value("high") > s.parse_value("low"));
  CHECK(code_of([&] { s.parse_value("High"); }) == ErrorCode::scale);
  CHECK(code_of([] { Scale::ordinal({"a", "a"}); }) != ErrorCode::degenerate);
}

TEST_CASE("values of different kinds or category lists do not compare") {
  auto n = OrderedValue::numeric(1, 0);
  auto o = Scale::ordinal({"1", "2"}).parse_value("1");
  auto p = Scale::ordinal({"1", "2", "3"}).parse_value("1");
  CHECK(code_of([&] { (void)(n < o); }) == ErrorCode::scale);
  CHECK(code_of([&] { (void)(o < p); }) == ErrorCode::scale);
}

TEST_CASE("scale specs parse and print") {
  CHECK(Scale::parse("numeric(1)").spec() == "numeric(1)");
  CHECK(Scale::parse("ordinal([1,2,3])").categories() == std::vector<std::string>{"1", "2", "3"});
  CHECK(code_of([] { Scale::parse("numeric(10)"); }) != ErrorCode::degenerate);
  CHECK(code_of([] { Scale::parse("interval(2)"); }) != ErrorCode::degenerate);
}

TEST_CASE("numeric comparison agrees with rational comparison") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> mant(-1'000'000'000, 1'000'000'000);
  std::uniform_int_distribution<int> dec(0, kMaxDecimals);
  for (int i = 0; i < 5000; ++i) {
    auto x = OrderedValue::numeric(mant(rng), dec(rng));
    auto y = OrderedValue::numeric(i % 7 == 0 ? x.payload() : mant(rng), dec(rng));
    const Rational rx = Rational(x.payload()) / Rational(BigInt(detail::pow10(x.decimals())));
    const Rational ry = Rational(y.payload()) / Rational(BigInt(detail::pow10(y.decimals())));
    REQUIRE((x < y) == (rx < ry));
    REQUIRE((x == y) == (rx == ry));
  }
}

TEST_CASE("parse_csv examples") {
  SECTION("two records") {
    Dataset d = parse_csv("value,group\n1.7,A\n1.4,B", numeric_config(1));
    REQUIRE(d.size() == 2);
    CHECK(d.sample("A").values()[0] == decimal("1.7"));
    CHECK(d.sample("B").values()[0] == decimal("1.4"));
  }
  SECTION("precision exceeded names the row") {
    auto f = [] { parse_csv("value,group\n1.75,A", numeric_config(1)); };
    CHECK(code_of(f) == ErrorCode::scale);
    const std::string msg = message_of(f);
    CHECK_THAT(msg, Catch::Matchers::ContainsSubstring("decimal precision exceeded"));
    CHECK_THAT(msg, Catch::Matchers::ContainsSubstring("row 2"));
    CHECK_THAT(msg, Catch::Matchers::ContainsSubstring("1.75"));
  }
  SECTION("ten measurements") {
    std::string text = "value,group\n";
    for (auto v : {"1.7", "3.3", "3.8", "4.9", "6.3"}) text += std::string(v) + ",A\n";
    for (auto v : {"1.4", "1.6", "2.7", "4.3", "5.0"}) text += std::string(v) + ",B\n";
    Dataset d = parse_csv(text, numeric_config(1));
    CHECK(d.size() == 10);
    Sample a = d.sample("A");
    std::vector<OrderedValue> expected{decimal("1.7"), decimal("3.3"), decimal("3.8"), decimal("4.9"), decimal("6.3")};
    CHECK(std::vector<OrderedValue>(a.values().begin(), a.values().end()) == expected);
  }
}

TEST_CASE("parse_csv error paths") {
  auto cfg = numeric_config(1);
  CHECK(code_of([&] { parse_csv("", cfg); }) == ErrorCode::parse);
  CHECK_THAT(message_of([&] { parse_csv("", cfg); }), Catch::Matchers::ContainsSubstring("empty file"));
  CHECK_THAT(message_of([&] { parse_csv("v,group\n1,A", cfg); }), Catch::Matchers::ContainsSubstring("value"));
  CHECK_THAT(message_of([&] { parse_csv("value,group\n1,A\nx,B", cfg); }), Catch::Matchers::ContainsSubstring("row 3"));
  CHECK(code_of([&] { parse_csv("value,group\n1,A\n,B", cfg); }) == ErrorCode::parse);
  CHECK(code_of([&] { parse_csv("value,group\n1,A,extra", cfg); }) == ErrorCode::parse);

  CsvConfig ord;
  ord.scale = Scale::ordinal({"1", "2", "3"});
  CHECK(code_of([&] { parse_csv("value,group\n4,A", ord); }) == ErrorCode::scale);
}

TEST_CASE("blank rows fail unless skipped") {
  auto cfg = numeric_config(0);
  const char* text = "value,group\n1,A\n\n2,B\n";
  CHECK(code_of([&] { parse_csv(text, cfg); }) == ErrorCode::parse);
  cfg.skip_blank_rows = true;
  CHECK(parse_csv(text, cfg).size() == 2);
  // a row with empty cells is not blank
  CHECK(code_of([&] { parse_csv("value,group\n1,A\n,\n", cfg); }) == ErrorCode::parse);
}

TEST_CASE("quoted fields and CRLF line endings") {
  CsvConfig cfg = numeric_config(1);
  cfg.stratum_column = "site";
  Dataset d = parse_csv("\"value\",group,site\r\n1.5,\"A, treated\",\"x \"\"1\"\"\"\r\n2,B,y\r\n", cfg);
  REQUIRE(d.size() == 2);
  CHECK(d.records()[0].group == "A, treated");
  CHECK(d.records()[0].stratum == std::optional<std::string>("x \"1\""));
}

TEST_CASE("CSV round trip preserves records exactly") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int decimals = static_cast<int>(rng() % 4);
    CsvConfig cfg = numeric_config(decimals);
    cfg.stratum_column = "stratum";
    std::vector<Record> records;
    const std::size_t n = 1 + rng() % 40;
    for (std::size_t i = 0; i < n; ++i) {
      auto m = static_cast<std::int64_t>(rng() % 20001) - 10000;
      records.push_back({OrderedValue::numeric(m, decimals), rng() % 2 ? "A" : "B,1",
                         "s\"" + std::to_string(rng() % 3)});
    }
    Dataset original(cfg.scale, records);
    Dataset again = parse_csv(write_csv(original, cfg), cfg);
    REQUIRE(again == original);
  }
}

TEST_CASE("group multisets do not depend on row order") {
  auto cfg = numeric_config(1);
  Dataset d1 = parse_csv("value,group\n1.5,A\n2,B\n0.5,A\n3,B\n", cfg);
  Dataset d2 = parse_csv("value,group\n3,B\n0.5,A\n2,B\n1.5,A\n", cfg);
  for (const char* g : {"A", "B"}) {
    auto s1 = d1.sample(g);
    auto s2 = d2.sample(g);
    std::vector<OrderedValue> v1(s1.values().begin(), s1.values().end());
    std::vector<OrderedValue> v2(s2.values().begin(), s2.values().end());
    auto less = [](const auto& x, const auto& y) { return x < y; };
    std::sort(v1.begin(), v1.end(), less);
    std::sort(v2.begin(), v2.end(), less);
    CHECK(v1 == v2);
  }
}

TEST_CASE("numeric scale inference") {
  CHECK(infer_numeric_scale("value,group\n1.25,A\n3,B\n2.50,B\n", "value").decimals() == 2);
  CHECK(infer_numeric_scale("value,group\n1,A\n", "value").decimals() == 0);
}

TEST_CASE("distribution documents") {
  SECTION("three distributions over 1..3") {
    auto ds = parse_distribution_spec(R"j({"scale":"ordinal([1,2,3])","distributions":[
      {"label":"A","support":[1,2,3],"probs":[0.10,0.90,0]},
      {"label":"B","support":[1,2,3],"probs":[0,0.90,0.10]},
      {"label":"C","support":[1,2,3],"probs":[0,0.10,0.90]}]})j");
    REQUIRE(ds.size() == 3);
    CHECK(ds[0].label() == "A");
    CHECK(ds[0].probs()[0] == ratio(1, 10));
    CHECK(ds[0].probs()[1] == ratio(9, 10));
    CHECK(ds[0].probs()[2] == 0);
  }
  SECTION("one-point distribution") {
    auto ds = parse_distribution_spec(R"j({"support":[1],"probs":[1.0]})j");
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].probs()[0] == 1);
  }
  SECTION("sum must be one") {
    auto f = [] { parse_distribution_spec(R"j({"support":[1,2],"probs":[0.5,0.6]})j"); };
    CHECK_THAT(message_of(f), Catch::Matchers::ContainsSubstring("probabilities sum to 1.1"));
  }
  SECTION("support strictly increasing and lengths equal") {
    CHECK(code_of([] { parse_distribution_spec(R"j({"support":[2,1],"probs":[0.5,0.5]})j"); }) == ErrorCode::parse);
    CHECK(code_of([] { parse_distribution_spec(R"j({"support":[1,1],"probs":[0.5,0.5]})j"); }) == ErrorCode::parse);
    CHECK(code_of([] { parse_distribution_spec(R"j({"support":[1,2],"probs":[1]})j"); }) == ErrorCode::parse);
  }
  SECTION("malformed JSON") {
    CHECK(code_of([] { parse_distribution_spec("{"); }) == ErrorCode::parse);
  }
}

TEST_CASE("decimal probabilities within 1e-12 of one are accepted") {
  Scale s = Scale::numeric(0);
  std::vector<OrderedValue> support{OrderedValue::numeric(1, 0), OrderedValue::numeric(2, 0),
                                    OrderedValue::numeric(3, 0)};
  std::vector<Rational> third(3, from_double(1.0 / 3.0));
  CHECK_NOTHROW(DiscreteDistribution("d", s, support, third));
  std::vector<Rational> off{ratio(1, 3), ratio(1, 3), Rational(ratio(1, 3) + ratio(1, 1'000'000'000))};
  CHECK_THROWS_AS(DiscreteDistribution("d", s, support, off), Error);
}

TEST_CASE("extended values order and render") {
  auto one = ExtendedRational::finite(Rational(1));
  CHECK(one < ExtendedRational::infinity());
  CHECK_FALSE(ExtendedRational::undefined() < one);
  CHECK_FALSE(one < ExtendedRational::undefined());
  CHECK(ExtendedRational::ratio(Rational(1), Rational(0)).is_infinite());
  CHECK(ExtendedRational::ratio(Rational(0), Rational(0)).is_undefined());
  CHECK(std::string(state_token(ExtendedState::undefined)) == "undef");
}

TEST_CASE("rounding is half away from zero") {
  CHECK(format_fixed(ratio(2125, 1000), 2) == "2.13");
  CHECK(format_fixed(ratio(-2125, 1000), 2) == "-2.13");
  CHECK(format_fixed(ratio(595, 1000), 2) == "0.60");
  CHECK(format_fixed(Rational(0), 3) == "0.000");
}
