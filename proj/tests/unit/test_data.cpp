#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "volrelax/data.hpp"
#include "volrelax/error.hpp"
#include "volrelax/rng.hpp"

using namespace volrelax;

namespace {

PriceSeries parse(const std::string& text, CsvSchema schema = {}) {
    std::istringstream in(text);
    return parse_price_csv(in, schema);
}

ErrorCode parse_error(const std::string& text) {
    try {
        (void)parse(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a parse error");
    return ErrorCode::InvalidArgument;
}

PriceSeries daily(const std::vector<double>& prices) {
    std::string text;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "2000-01-%02zu,%.17g\n", i + 1, prices[i]);
        text += buf;
    }
    return parse(text);
}

ReturnSeries returns_of(std::vector<double> values) {
    ReturnSeries r;
    r.values = std::move(values);
    r.slot_index.assign(r.values.size(), 0);
    return r;
}

} // namespace

TEST_CASE("parse_price_csv reads a daily file") {
    const auto s = parse("2000-01-03,100\n2000-01-04,110\n2000-01-05,121\n");
    CHECK(s.size() == 3);
    CHECK(s.cadence == "daily");
    CHECK(s.slots_per_day == 1);
    CHECK(s.records[2].price == 121.0);
    CHECK(s.records[0].timestamp.date_only);
}

TEST_CASE("parse_price_csv skips a header, comments and blank lines") {
    const auto s = parse("timestamp,price\n# comment\n\n2000-01-03,100\r\n2000-01-04,101.5\n");
    CHECK(s.size() == 2);
    CHECK(s.records[1].price == doctest::Approx(101.5));
}

TEST_CASE("parse_price_csv rejects invariant violations") {
    CHECK(parse_error("2000-01-03,100\n2000-01-04,0\n") == ErrorCode::NonPositivePrice);
    CHECK(parse_error("2000-01-03,100\n2000-01-04,-3\n") == ErrorCode::NonPositivePrice);
    CHECK(parse_error("2000-01-03T09:30,1\n2000-01-03T09:35,2\n2000-01-03T09:35,3\n") ==
          ErrorCode::NonMonotoneTimestamp);
    CHECK(parse_error("2000-01-04,100\n2000-01-03,100\n") == ErrorCode::NonMonotoneTimestamp);
    CHECK(parse_error("2000-01-03,100\n") == ErrorCode::TooShort);
    CHECK(parse_error("") == ErrorCode::TooShort);
    CHECK(parse_error("2000-01-03,100\n2000-01-04,abc\n") == ErrorCode::MalformedRow);
    CHECK(parse_error("2000-01-03,100\n2000-13-04,100\n") == ErrorCode::MalformedRow);
    CHECK(parse_error("2000-01-03,100\n2000-01-04\n") == ErrorCode::MalformedRow);
    CHECK(parse_error("2000-01-03,100\n2000-01-04,1e3x\n") == ErrorCode::MalformedRow);
    CHECK(parse_error("2000-01-03,100\n2000-01-04T10:00,100\n") == ErrorCode::MalformedRow);
    CHECK(parse_error("2000-01-03T25:00,100\n2000-01-04T10:00,100\n") == ErrorCode::MalformedRow);
}

TEST_CASE("intraday files derive cadence and time-of-day slots") {
    const auto s = parse(
        "2000-01-03T09:30:00,100\n2000-01-03T09:35,101\n2000-01-03T09:40,102\n"
        "2000-01-04T09:30,103\n2000-01-04T09:40,104\n");
    CHECK(s.cadence == "5min");
    CHECK(s.step_seconds == 300);
    CHECK(s.slots_per_day == 3);
    const auto r = log_returns(s);
    REQUIRE(r.size() == 4);
    CHECK(r.slot_index == std::vector<int>{0, 1, 2, 0});
    CHECK(r.slots_per_day == 3);

    SUBCASE("configured slots_per_day overrides the derived count") {
        CsvSchema schema;
        schema.slots_per_day = 48;
        std::istringstream in("2000-01-03T09:30,1\n2000-01-03T09:35,2\n");
        CHECK(parse_price_csv(in, schema).slots_per_day == 48);
    }
    SUBCASE("a configured count below the observed slots is rejected") {
        CsvSchema schema;
        schema.slots_per_day = 2;
        std::istringstream in("2000-01-03T09:30,1\n2000-01-03T09:35,2\n2000-01-03T09:40,3\n");
        CHECK_THROWS_AS((void)parse_price_csv(in, schema), Error);
    }
    SUBCASE("session-crossing returns can be dropped") {
        const auto dropped = log_returns(s, {true});
        CHECK(dropped.size() == 3);
        CHECK(dropped.slot_index == std::vector<int>{0, 1, 0});
        CHECK(dropped.values[2] == doctest::Approx(std::log(104.0 / 103.0)));
    }
}

TEST_CASE("log_returns examples") {
    CHECK(log_returns(daily({100, 100})).values == std::vector<double>{0.0});
    CHECK(log_returns(daily({100, 100 * std::numbers::e})).values[0] == doctest::Approx(1.0).epsilon(1e-15));
    const auto r = log_returns(daily({100, 110, 121}));
    REQUIRE(r.size() == 2);
    CHECK(r.values[0] == doctest::Approx(std::log(1.1)).epsilon(1e-14));
    CHECK(r.values[1] == doctest::Approx(std::log(1.1)).epsilon(1e-14));
    CHECK(r.timestamps[1] == daily({1, 2, 3}).records[1].timestamp);
}

TEST_CASE("absolute_volatility examples") {
    CHECK(absolute_volatility(returns_of({-0.02, 0.03})).values == std::vector<double>{0.02, 0.03});
    CHECK(absolute_volatility(returns_of({0.0})).values == std::vector<double>{0.0});
    const double l = std::log(1.1);
    const auto v = absolute_volatility(returns_of({l, -l}));
    CHECK(v.values == std::vector<double>{l, l});
    CHECK_FALSE(v.adjusted);
}

TEST_CASE("mean_volatility examples") {
    VolatilitySeries v;
    v.values = {0.02, 0.04};
    CHECK(mean_volatility(v).sigma == doctest::Approx(0.03).epsilon(1e-15));
    CHECK(mean_volatility(v).n == 2);
    v.values.assign(7, 0.0);
    CHECK(mean_volatility(v).sigma == 0.0);
    v.values.clear();
    CHECK_THROWS_AS((void)mean_volatility(v), Error);
}

TEST_CASE("mean_volatility of half-normal samples matches s*sqrt(2/pi)") {
    const double s = 0.013;
    Rng rng(2024);
    VolatilitySeries v;
    for (int i = 0; i < 10000; ++i) v.values.push_back(std::abs(s * rng.normal()));
    const double expected = s * std::sqrt(2.0 / std::numbers::pi);
    const double se = oracle::stddev(v.values) / std::sqrt(10000.0);
    CHECK(std::abs(mean_volatility(v).sigma - expected) < 3.0 * se);
}

TEST_CASE("reverse examples") {
    const auto r = returns_of({1.0, 2.0, 3.0});
    CHECK(reverse(r).values == std::vector<double>{3.0, 2.0, 1.0});
    CHECK(reverse(reverse(r)).values == r.values);
    const auto pal = returns_of({1.0, 5.0, 1.0});
    CHECK(reverse(pal).values == pal.values);

    auto slotted = with_periodic_slots(returns_of({1, 2, 3, 4, 5}), 2);
    const auto rev = reverse(slotted);
    CHECK(rev.slot_index == std::vector<int>{0, 1, 0, 1, 0});
    CHECK(reverse(rev).slot_index == slotted.slot_index);
}

TEST_CASE("shuffle_surrogate examples") {
    CHECK(shuffle_surrogate(returns_of({0.7}), 3).values == std::vector<double>{0.7});
    Rng rng(5);
    std::vector<double> xs;
    for (int i = 0; i < 1000; ++i) xs.push_back(rng.normal());
    const auto base = returns_of(xs);
    const auto a = shuffle_surrogate(base, 42);
    const auto b = shuffle_surrogate(base, 42);
    CHECK(a.values == b.values);
    CHECK(a.values != shuffle_surrogate(base, 43).values);
    CHECK(a.values != base.values);
    auto sa = a.values, sb = base.values;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    CHECK(sa == sb);
}

TEST_CASE("property: length, idempotence and sigma invariance over random series") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        Rng rng(seed);
        const std::size_t n = 2 + rng.below(400);
        std::vector<double> prices{100.0};
        for (std::size_t i = 1; i < n; ++i) prices.push_back(prices.back() * std::exp(0.02 * rng.normal()));
        PriceSeries ps;
        for (std::size_t i = 0; i < n; ++i) {
            ps.records.push_back({Timestamp{static_cast<std::int64_t>(i) * 86400, true}, prices[i]});
        }
        const auto r = log_returns(ps);
        CHECK(r.size() == n - 1);

        const auto vol = absolute_volatility(r);
        ReturnSeries as_returns;
        as_returns.values = vol.values;
        CHECK(absolute_volatility(as_returns).values == vol.values);

        const double sigma = mean_volatility(vol).sigma;
        CHECK(mean_volatility(absolute_volatility(reverse(r))).sigma == sigma);
        CHECK(mean_volatility(absolute_volatility(shuffle_surrogate(r, seed * 7))).sigma == sigma);
    }
}

TEST_CASE("write_price_csv round-trips through parse_price_csv") {
    const auto s = parse("2000-01-03T09:30,100\n2000-01-03T09:31,100.25\n2000-01-03T09:32,99.875\n");
    std::ostringstream out;
    write_price_csv(out, s);
    const auto back = parse(out.str());
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back.records[i].price == s.records[i].price);
        CHECK(back.records[i].timestamp == s.records[i].timestamp);
    }
    CHECK(back.cadence == "1min");
}
