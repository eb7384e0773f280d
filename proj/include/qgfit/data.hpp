#pragma once

#include "qgfit/errors.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qgfit {

struct Date {
    int y = 1970;
    int m = 1;
    int d = 1;

    // Days since 1970-01-01 (civil calendar).
    long serial() const;
    std::string iso() const;

    friend bool operator==(const Date&, const Date&) = default;
    friend auto operator<=>(const Date& a, const Date& b) {
        return a.serial() <=> b.serial();
    }
};

struct YearMonth {
    int y = 1970;
    int m = 1;

    int key() const { return y * 12 + (m - 1); }
    std::string str() const;

    friend bool operator==(const YearMonth&, const YearMonth&) = default;
};

// Strict ISO-8601 date "YYYY-MM-DD"; rejects impossible dates.
Date parse_date(const std::string& s);
// Strict "YYYY-MM".
YearMonth parse_year_month(const std::string& s);

struct PriceSeries {
    std::vector<Date> dates;   // strictly increasing trading days
    std::vector<double> closes; // positive
    bool deflated = false;
};

struct CpiSeries {
    std::vector<YearMonth> months; // strictly increasing
    std::vector<double> index;     // positive
};

// CSV with header "date,close". Throws ParseError with the line number on
// malformed rows, ValidationError naming the offending row otherwise.
PriceSeries load_price_series(const std::string& path);

// CSV with header "month,index", months as "YYYY-MM".
CpiSeries load_cpi_series(const std::string& path);

// Deflated close = close * CPI(base_month)/CPI(month of date); monthly CPI
// applied uniformly within each month. Every price month must be covered.
PriceSeries cpi_detrend(const PriceSeries& p, const CpiSeries& c,
                        const YearMonth& base_month);

// Inclusive date slice; empty result is an error.
PriceSeries slice_region(const PriceSeries& p, const Date& start, const Date& end);

// Built-in presets: "region1" and "region2".
std::pair<Date, Date> named_region(const std::string& name);

// Per-delay standardized log returns sharing one sigma1:
//   y(t, t0) = ln S(t0 + t) - ln S(t0) over start indices t0
//   omega = (y - mu_t)/sigma1, sigma1 = sample std of the delay-1 y values.
struct ReturnPanel {
    std::vector<int> delays;
    std::vector<std::vector<double>> omega; // parallel to delays
    std::vector<double> mu;                 // per-delay mean of y
    double sigma1 = 0.0;
    bool overlapping = true;
};

// overlapping=true uses every start index (L - t samples per delay);
// false advances t0 by t (independent windows).
ReturnPanel build_return_panel(const PriceSeries& p,
                               const std::vector<int>& delays,
                               bool overlapping = true);

} // namespace qgfit
