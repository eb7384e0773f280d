#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgfit/data.hpp"
#include "qgfit/sampling.hpp"

#include "oracles.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace qgfit;

namespace {

std::string write_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path()
                      / ("qgfit_data_test_" + name);
    std::ofstream out(path);
    out << content;
    return path.string();
}

std::vector<Date> make_dates(std::size_t n) {
    std::vector<Date> out;
    out.reserve(n);
    int y = 1990, m = 1, d = 1;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(Date{y, m, d});
        if (++d > 28) {
            d = 1;
            if (++m > 12) {
                m = 1;
                ++y;
            }
        }
    }
    return out;
}

PriceSeries make_series(const std::vector<double>& closes) {
    PriceSeries p;
    p.dates = make_dates(closes.size());
    p.closes = closes;
    return p;
}

// Geometric random walk with lognormal daily steps of width sigma.
PriceSeries make_walk(std::size_t n, double sigma, std::uint64_t seed) {
    SeededStream s(seed);
    std::vector<double> closes(n);
    double ln_s = std::log(100.0);
    const QGaussianParams normal(1.0, 0.5); // unit-variance gaussian steps
    const auto steps = sample_q_gaussian(normal, n, s);
    for (std::size_t i = 0; i < n; ++i) {
        ln_s += sigma * steps[i];
        closes[i] = std::exp(ln_s);
    }
    return make_series(closes);
}

} // namespace

TEST_CASE("date parsing accepts exactly the civil calendar") {
    const Date d = parse_date("2001-02-28");
    CHECK(d.y == 2001);
    CHECK(d.m == 2);
    CHECK(d.d == 28);
    CHECK(parse_date("2000-02-29").d == 29); // 400-year leap rule
    CHECK_THROWS_AS(parse_date("1900-02-29"), ParseError); // century non-leap
    CHECK_THROWS_AS(parse_date("2001-02-29"), ParseError);
    CHECK_THROWS_AS(parse_date("2001-13-01"), ParseError);
    CHECK_THROWS_AS(parse_date("2001-00-10"), ParseError);
    CHECK_THROWS_AS(parse_date("2001-04-31"), ParseError);
    CHECK_THROWS_AS(parse_date("2001-4-01"), ParseError);
    CHECK_THROWS_AS(parse_date("01-04-2001"), ParseError);
    CHECK_THROWS_AS(parse_date("2001/04/01"), ParseError);
    CHECK_THROWS_AS(parse_date("2001-04-011"), ParseError);
    CHECK_THROWS_AS(parse_date(""), ParseError);
}

TEST_CASE("date serial anchors and ordering") {
    CHECK(Date{1970, 1, 1}.serial() == 0);
    CHECK(Date{1970, 1, 2}.serial() == 1);
    CHECK(Date{1969, 12, 31}.serial() == -1);
    CHECK(Date{1990, 1, 1}.serial() == 7305); // five leap years in between
    CHECK(Date{2000, 3, 1}.serial() - Date{2000, 2, 28}.serial() == 2);
    CHECK(Date{1991, 11, 11} < Date{2002, 7, 29});
    CHECK(parse_date("1993-07-15").iso() == "1993-07-15");
}

TEST_CASE("month parsing is strict") {
    const YearMonth ym = parse_year_month("1991-11");
    CHECK(ym.y == 1991);
    CHECK(ym.m == 11);
    CHECK(ym.str() == "1991-11");
    CHECK(YearMonth{1991, 12}.key() + 1 == YearMonth{1992, 1}.key());
    CHECK_THROWS_AS(parse_year_month("1991-13"), ParseError);
    CHECK_THROWS_AS(parse_year_month("1991-00"), ParseError);
    CHECK_THROWS_AS(parse_year_month("199-11"), ParseError);
    CHECK_THROWS_AS(parse_year_month("1991-11-11"), ParseError);
}

TEST_CASE("price loader round trip and windows line endings") {
    const auto path = write_file("prices_ok.csv",
                                 "date,close\r\n"
                                 "1990-01-02,100.5\r\n"
                                 "\n"
                                 "1990-01-03,101.25\n");
    const PriceSeries p = load_price_series(path);
    REQUIRE(p.dates.size() == 2);
    CHECK(p.dates[0].iso() == "1990-01-02");
    CHECK(p.closes[0] == 100.5);
    CHECK(p.closes[1] == 101.25);
    CHECK_FALSE(p.deflated);
}

TEST_CASE("price loader reports the offending line") {
    const auto bad_number = write_file("prices_badnum.csv",
                                       "date,close\n"
                                       "1990-01-02,100.5\n"
                                       "1990-01-03,10x.5\n");
    try {
        load_price_series(bad_number);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    const auto bad_date = write_file("prices_baddate.csv",
                                     "date,close\n"
                                     "1990-02-30,100.5\n");
    CHECK_THROWS_AS(load_price_series(bad_date), ParseError);

    const auto bad_header = write_file("prices_badheader.csv",
                                       "timestamp,close\n1990-01-02,1\n");
    CHECK_THROWS_AS(load_price_series(bad_header), ParseError);

    CHECK_THROWS_AS(load_price_series("/nonexistent/prices.csv"), ParseError);
}

TEST_CASE("price loader enforces ordering and positivity") {
    const auto unsorted = write_file("prices_unsorted.csv",
                                     "date,close\n"
                                     "1990-01-03,100\n"
                                     "1990-01-02,101\n");
    CHECK_THROWS_AS(load_price_series(unsorted), ValidationError);

    const auto duplicate = write_file("prices_dup.csv",
                                      "date,close\n"
                                      "1990-01-02,100\n"
                                      "1990-01-02,101\n");
    CHECK_THROWS_AS(load_price_series(duplicate), ValidationError);

    const auto nonpositive = write_file("prices_zero.csv",
                                        "date,close\n"
                                        "1990-01-02,0\n");
    CHECK_THROWS_AS(load_price_series(nonpositive), ValidationError);

    const auto negative = write_file("prices_neg.csv",
                                     "date,close\n"
                                     "1990-01-02,-3\n");
    CHECK_THROWS_AS(load_price_series(negative), ValidationError);
}

TEST_CASE("cpi loader mirrors the price loader rules") {
    const auto path = write_file("cpi_ok.csv",
                                 "month,index\n"
                                 "1990-01,100\n"
                                 "1990-02,100.7\n");
    const CpiSeries c = load_cpi_series(path);
    REQUIRE(c.months.size() == 2);
    CHECK(c.index[1] == 100.7);

    const auto bad_header = write_file("cpi_badheader.csv", "date,index\n");
    CHECK_THROWS_AS(load_cpi_series(bad_header), ParseError);
    const auto unsorted = write_file("cpi_unsorted.csv",
                                     "month,index\n"
                                     "1990-02,100\n"
                                     "1990-01,101\n");
    CHECK_THROWS_AS(load_cpi_series(unsorted), ValidationError);
}

TEST_CASE("constant cpi leaves prices untouched") {
    PriceSeries p = make_series({10.0, 11.0, 12.5});
    CpiSeries c;
    for (int m = 1; m <= 3; ++m) {
        c.months.push_back(YearMonth{1990, m});
        c.index.push_back(140.0);
    }
    const PriceSeries out =
        cpi_detrend(p, c, YearMonth{p.dates.back().y, p.dates.back().m});
    CHECK(out.deflated);
    for (std::size_t i = 0; i < p.closes.size(); ++i)
        CHECK(out.closes[i] == doctest::Approx(p.closes[i]).epsilon(1e-15));
}

TEST_CASE("prices tracking cpi deflate to a flat series") {
    // One price per month, both doubling every month.
    PriceSeries p;
    CpiSeries c;
    for (int m = 1; m <= 6; ++m) {
        p.dates.push_back(Date{2020, m, 15});
        p.closes.push_back(50.0 * std::pow(2.0, m - 1));
        c.months.push_back(YearMonth{2020, m});
        c.index.push_back(100.0 * std::pow(2.0, m - 1));
    }
    const PriceSeries out = cpi_detrend(p, c, YearMonth{2020, 6});
    const double want = 50.0 * 32.0; // last close, base month is its own
    for (double v : out.closes)
        CHECK(v == doctest::Approx(want).epsilon(1e-14));
    CHECK(out.closes.back() == p.closes.back());
}

TEST_CASE("cpi coverage gaps are named") {
    PriceSeries p = make_series({10.0, 11.0});
    CpiSeries c;
    c.months.push_back(YearMonth{1990, 1});
    c.index.push_back(100.0);
    p.dates[1] = Date{1990, 7, 3};
    try {
        cpi_detrend(p, c, YearMonth{1990, 1});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("1990-07") != std::string::npos);
    }
}

TEST_CASE("region slicing is inclusive on both ends") {
    const PriceSeries p = make_series({1.0, 2.0, 3.0, 4.0, 5.0});
    const PriceSeries mid = slice_region(p, p.dates[1], p.dates[3]);
    REQUIRE(mid.closes.size() == 3);
    CHECK(mid.closes.front() == 2.0);
    CHECK(mid.closes.back() == 4.0);

    const PriceSeries all = slice_region(p, Date{1900, 1, 1}, Date{2100, 1, 1});
    CHECK(all.closes == p.closes);

    CHECK_THROWS_AS(slice_region(p, Date{2100, 1, 1}, Date{2100, 2, 1}),
                    ValidationError);
    CHECK_THROWS_AS(slice_region(p, p.dates[3], p.dates[1]), ValidationError);
}

TEST_CASE("region presets") {
    const auto r1 = named_region("region1");
    CHECK(r1.first.iso() == "1991-11-11");
    CHECK(r1.second.iso() == "2002-07-29");
    const auto r2 = named_region("region2");
    CHECK(r2.first.iso() == "2002-07-30");
    CHECK(r2.second.iso() == "2013-09-04");
    CHECK_THROWS_AS(named_region("region3"), ValidationError);
}

TEST_CASE("return panel counting, overlapping and not") {
    const PriceSeries p = make_walk(100, 0.01, 5);
    const ReturnPanel over = build_return_panel(p, {1, 7, 60});
    CHECK(over.omega[0].size() == 99);
    CHECK(over.omega[1].size() == 93);
    CHECK(over.omega[2].size() == 40);

    const ReturnPanel indep = build_return_panel(p, {1, 7}, false);
    CHECK(indep.omega[0].size() == 99);
    CHECK(indep.omega[1].size() == 14);
    CHECK_FALSE(indep.overlapping);
}

TEST_CASE("return panel is centered and delay-1 standardized") {
    const PriceSeries p = make_walk(100000, 0.01, 88);
    const ReturnPanel panel = build_return_panel(p, {1, 2, 5, 10, 30, 60});
    for (const auto& w : panel.omega) {
        CHECK(std::fabs(oracle::mean(w)) < 1e-12);
    }
    CHECK(std::fabs(oracle::sd(panel.omega[0]) - 1.0) < 1e-12);
    CHECK(panel.sigma1 > 0.0);
}

TEST_CASE("gaussian walk variance grows linearly in the delay") {
    const PriceSeries p = make_walk(100000, 0.01, 88);
    const std::vector<int> delays{1, 2, 5, 10, 30, 60};
    const ReturnPanel panel = build_return_panel(p, delays);
    for (std::size_t k = 0; k < delays.size(); ++k) {
        const double ratio =
            oracle::variance(panel.omega[k]) / static_cast<double>(delays[k]);
        CHECK(ratio > 0.9);
        CHECK(ratio < 1.1);
    }
}

TEST_CASE("price units do not reach the standardized returns") {
    const PriceSeries p = make_walk(1000, 0.01, 21);
    PriceSeries scaled = p;
    for (double& c : scaled.closes) c *= 3.7;
    const ReturnPanel a = build_return_panel(p, {1, 5, 20});
    const ReturnPanel b = build_return_panel(scaled, {1, 5, 20});
    for (std::size_t k = 0; k < a.omega.size(); ++k) {
        for (std::size_t i = 0; i < a.omega[k].size(); ++i) {
            CHECK(std::fabs(a.omega[k][i] - b.omega[k][i])
                  < 1e-12 * std::max(1.0, std::fabs(a.omega[k][i])));
        }
    }
}

TEST_CASE("degenerate price series are refused") {
    CHECK_THROWS_AS(build_return_panel(make_series(std::vector<double>(50, 7.0)),
                                       {1, 2, 3, 4}),
                    DegenerateError);
    // Deterministic exponential growth: delay-1 returns all identical.
    std::vector<double> expo(50);
    for (std::size_t i = 0; i < expo.size(); ++i)
        expo[i] = std::exp(0.01 * static_cast<double>(i));
    CHECK_THROWS_AS(build_return_panel(make_series(expo), {1, 2, 3, 4}),
                    DegenerateError);
}

TEST_CASE("return panel rejects bad delay lists and short series") {
    const PriceSeries p = make_walk(61, 0.01, 3);
    CHECK_THROWS_AS(build_return_panel(p, {}), ValidationError);
    CHECK_THROWS_AS(build_return_panel(p, {0, 1}), ValidationError);
    CHECK_THROWS_AS(build_return_panel(p, {1, 5, 5}), ValidationError);
    CHECK_THROWS_AS(build_return_panel(p, {1, 5, 3}), ValidationError);
    CHECK_THROWS_AS(build_return_panel(make_walk(60, 0.01, 4), {1, 60}),
                    InsufficientDataError);
    const ReturnPanel ok = build_return_panel(p, {1, 60});
    CHECK(ok.omega[1].size() == 1);
}
