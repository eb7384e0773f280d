#include "qgfit/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace qgfit {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

int days_in_month(int y, int m) {
    static const int k[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2) {
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return k[m - 1];
}

// Strips one trailing carriage return (windows line endings).
void chomp(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

double parse_positive_real(const std::string& tok, const char* what,
                           std::size_t line_no) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last)
        throw ParseError(std::string("line ") + std::to_string(line_no)
                         + ": cannot parse " + what + " '" + tok + "'");
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(std::string("line ") + std::to_string(line_no)
                              + ": " + what + " must be positive, got '" + tok + "'");
    return v;
}

} // namespace

long Date::serial() const {
    // Days-from-civil, shifted so 1970-01-01 is day 0.
    int yy = y;
    const unsigned mm = static_cast<unsigned>(m);
    const unsigned dd = static_cast<unsigned>(d);
    yy -= mm <= 2;
    const int era = (yy >= 0 ? yy : yy - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(yy - era * 400);
    const unsigned doy = (153 * (mm + (mm > 2 ? -3 : 9)) + 2) / 5 + dd - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<long>(era) * 146097 + static_cast<long>(doe) - 719468;
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

std::string YearMonth::str() const {
    char buf[12];
    std::snprintf(buf, sizeof buf, "%04d-%02d", y, m);
    return buf;
}

Date parse_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-'
        || !all_digits(s, 0, 4) || !all_digits(s, 5, 7) || !all_digits(s, 8, 10))
        throw ParseError("invalid date '" + s + "' (expected YYYY-MM-DD)");
    Date dt;
    dt.y = std::stoi(s.substr(0, 4));
    dt.m = std::stoi(s.substr(5, 2));
    dt.d = std::stoi(s.substr(8, 2));
    if (dt.m < 1 || dt.m > 12 || dt.d < 1 || dt.d > days_in_month(dt.y, dt.m))
        throw ParseError("impossible date '" + s + "'");
    return dt;
}

YearMonth parse_year_month(const std::string& s) {
    if (s.size() != 7 || s[4] != '-' || !all_digits(s, 0, 4) || !all_digits(s, 5, 7))
        throw ParseError("invalid month '" + s + "' (expected YYYY-MM)");
    YearMonth ym;
    ym.y = std::stoi(s.substr(0, 4));
    ym.m = std::stoi(s.substr(5, 2));
    if (ym.m < 1 || ym.m > 12)
        throw ParseError("impossible month '" + s + "'");
    return ym;
}

PriceSeries load_price_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line))
        throw ParseError(path + ": empty file");
    ++line_no;
    chomp(line);
    if (line != "date,close")
        throw ParseError(path + ": expected header 'date,close', got '" + line + "'");

    PriceSeries p;
    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'date,close'");
        Date dt;
        try {
            dt = parse_date(line.substr(0, comma));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        const double close =
            parse_positive_real(line.substr(comma + 1), "close", line_no);
        if (!p.dates.empty() && dt.serial() <= p.dates.back().serial())
            throw ValidationError("row " + std::to_string(line_no) + " (" + dt.iso()
                                  + "): dates must be strictly increasing");
        p.dates.push_back(dt);
        p.closes.push_back(close);
    }
    return p;
}

CpiSeries load_cpi_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line))
        throw ParseError(path + ": empty file");
    ++line_no;
    chomp(line);
    if (line != "month,index")
        throw ParseError(path + ": expected header 'month,index', got '" + line + "'");

    CpiSeries c;
    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'month,index'");
        YearMonth ym;
        try {
            ym = parse_year_month(line.substr(0, comma));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        const double v = parse_positive_real(line.substr(comma + 1), "index", line_no);
        if (!c.months.empty() && ym.key() <= c.months.back().key())
            throw ValidationError("row " + std::to_string(line_no) + " (" + ym.str()
                                  + "): months must be strictly increasing");
        c.months.push_back(ym);
        c.index.push_back(v);
    }
    return c;
}

PriceSeries cpi_detrend(const PriceSeries& p, const CpiSeries& c,
                        const YearMonth& base_month) {
    auto lookup = [&](const YearMonth& ym) {
        const auto it = std::lower_bound(
            c.months.begin(), c.months.end(), ym,
            [](const YearMonth& a, const YearMonth& b) { return a.key() < b.key(); });
        if (it == c.months.end() || !(*it == ym))
            throw ValidationError("CPI series does not cover " + ym.str());
        return c.index[static_cast<std::size_t>(it - c.months.begin())];
    };
    const double base = lookup(base_month);
    PriceSeries out = p;
    for (std::size_t i = 0; i < p.dates.size(); ++i) {
        const YearMonth ym{p.dates[i].y, p.dates[i].m};
        out.closes[i] = p.closes[i] * base / lookup(ym);
    }
    out.deflated = true;
    return out;
}

PriceSeries slice_region(const PriceSeries& p, const Date& start, const Date& end) {
    if (!(start.serial() < end.serial()))
        throw ValidationError("slice_region: start must precede end");
    PriceSeries out;
    out.deflated = p.deflated;
    for (std::size_t i = 0; i < p.dates.size(); ++i) {
        const long s = p.dates[i].serial();
        if (s >= start.serial() && s <= end.serial()) {
            out.dates.push_back(p.dates[i]);
            out.closes.push_back(p.closes[i]);
        }
    }
    if (out.dates.empty())
        throw ValidationError("slice_region: no rows between " + start.iso()
                              + " and " + end.iso());
    return out;
}

std::pair<Date, Date> named_region(const std::string& name) {
    if (name == "region1") return {Date{1991, 11, 11}, Date{2002, 7, 29}};
    if (name == "region2") return {Date{2002, 7, 30}, Date{2013, 9, 4}};
    throw ValidationError("unknown region preset '" + name
                          + "' (expected region1 or region2)");
}

ReturnPanel build_return_panel(const PriceSeries& p,
                               const std::vector<int>& delays,
                               bool overlapping) {
    if (delays.empty())
        throw ValidationError("build_return_panel: empty delay list");
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (delays[i] < 1)
            throw ValidationError("build_return_panel: delays must be >= 1");
        if (i > 0 && delays[i] <= delays[i - 1])
            throw ValidationError("build_return_panel: delays must be strictly increasing");
    }
    const std::size_t L = p.closes.size();
    const int max_delay = delays.back();
    if (L <= static_cast<std::size_t>(max_delay))
        throw InsufficientDataError("build_return_panel: series length "
                                    + std::to_string(L)
                                    + " does not exceed max delay "
                                    + std::to_string(max_delay));

    std::vector<double> ln_s(L);
    for (std::size_t i = 0; i < L; ++i) ln_s[i] = std::log(p.closes[i]);

    // sigma1 always comes from delay-1 returns, whether or not 1 is requested.
    double sigma1 = 0.0;
    {
        const std::size_t n1 = L - 1;
        std::vector<double> y1(n1);
        double mean = 0.0, amax = 0.0;
        for (std::size_t i = 0; i < n1; ++i) {
            y1[i] = ln_s[i + 1] - ln_s[i];
            mean += y1[i];
            amax = std::max(amax, std::fabs(y1[i]));
        }
        mean /= static_cast<double>(n1);
        double ss = 0.0;
        for (double v : y1) ss += (v - mean) * (v - mean);
        sigma1 = n1 > 1 ? std::sqrt(ss / static_cast<double>(n1 - 1)) : 0.0;
        if (sigma1 <= 1e-12 * std::max(1.0, amax))
            throw DegenerateError("build_return_panel: delay-1 returns have zero "
                                  "variance (constant or deterministic prices)");
    }

    ReturnPanel panel;
    panel.delays = delays;
    panel.sigma1 = sigma1;
    panel.overlapping = overlapping;
    panel.omega.resize(delays.size());
    panel.mu.resize(delays.size());

    for (std::size_t k = 0; k < delays.size(); ++k) {
        const std::size_t t = static_cast<std::size_t>(delays[k]);
        const std::size_t step = overlapping ? 1 : t;
        std::vector<double> y;
        y.reserve((L - t) / step + 1);
        for (std::size_t t0 = 0; t0 + t < L; t0 += step)
            y.push_back(ln_s[t0 + t] - ln_s[t0]);
        double mu = 0.0;
        for (double v : y) mu += v;
        mu /= static_cast<double>(y.size());
        panel.mu[k] = mu;
        for (double& v : y) v = (v - mu) / sigma1;
        panel.omega[k] = std::move(y);
    }
    return panel;
}

} // namespace qgfit
