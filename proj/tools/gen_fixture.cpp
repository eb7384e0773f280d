// Generates the synthetic i.i.d. q-Gaussian walk fixture: a weekday-dated
// price CSV whose daily log increments are 0.01 * qGaussian(q=1.5, beta=2)
// deviates (unit-variance shape scaled to ~1% daily moves).
//
// Usage: gen_fixture SEED OUT.csv [N_ROWS]

#include "qgfit/data.hpp"
#include "qgfit/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

int days_in_month(int y, int m) {
    static const int k[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2) {
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return k[m - 1];
}

qgfit::Date next_trading_day(qgfit::Date d) {
    do {
        if (++d.d > days_in_month(d.y, d.m)) {
            d.d = 1;
            if (++d.m > 12) {
                d.m = 1;
                ++d.y;
            }
        }
    } while ((d.serial() + 4) % 7 == 0 || (d.serial() + 4) % 7 == 6);
    return d;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: gen_fixture SEED OUT.csv [N_ROWS]\n");
        return 2;
    }
    const auto seed = static_cast<std::uint64_t>(std::strtoull(argv[1], nullptr, 10));
    const std::string out_path = argv[2];
    const std::size_t n_rows = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 10000;
    if (n_rows < 2) {
        std::fprintf(stderr, "need at least 2 rows\n");
        return 2;
    }

    qgfit::QGaussianParams p(1.5, 2.0);
    qgfit::SeededStream stream(seed);
    std::vector<double> steps = qgfit::sample_q_gaussian(p, n_rows - 1, stream);

    std::FILE* f = std::fopen(out_path.c_str(), "wb");
    if (!f) {
        std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
        return 2;
    }
    std::fputs("date,close\n", f);
    qgfit::Date d{1990, 1, 1}; // a Monday
    double ln_s = std::log(100.0);
    std::fprintf(f, "%s,%.17g\n", d.iso().c_str(), std::exp(ln_s));
    for (double x : steps) {
        ln_s += 0.01 * x;
        d = next_trading_day(d);
        std::fprintf(f, "%s,%.17g\n", d.iso().c_str(), std::exp(ln_s));
    }
    std::fclose(f);
    return 0;
}
