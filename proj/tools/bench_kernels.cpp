// Times the serial reference kernels against their parallel counterparts and
// checks that both produce identical terms while at it.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "heckmort/replay.hpp"
#include "heckmort/theta.hpp"

using namespace heckmort;

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double best_of(int repeats, F&& body) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        auto t0 = Clock::now();
        body();
        double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        best = std::min(best, ms);
    }
    return best;
}

void bench_products(int repeats) {
    std::printf("%-34s %12s %12s %8s\n", "cauchy product", "serial ms", "parallel ms", "same");
    for (std::int64_t order : {100, 200, 400}) {
        Exponent P(order);
        QSeries a = J(0, 1, JKind::Eta, P);
        QSeries b = J(1, 3, JKind::Bar, P);
        QSeries rs(P), rp(P);
        double serial = best_of(repeats, [&] { rs = mul_serial(a, b); });
        double parallel = best_of(repeats, [&] { rp = mul_parallel(a, b); });
        std::printf("%-34s %12.2f %12.2f %8s\n",
                    ("eta x bar theta, order " + std::to_string(order)).c_str(), serial, parallel,
                    rs.terms() == rp.terms() ? "yes" : "NO");
    }
}

LatticeSum cone(const Exponent& precision) {
    LatticeSum sum;
    sum.dims = 3;
    sum.scale = 2;
    sum.x = SignedMonomial(Coeff(1), Exponent(1));
    sum.y = SignedMonomial(Coeff(1), Exponent(1));
    sum.precision = precision;
    sum.terms = [](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t r = idx[0], s = idx[1], w = idx[2];
        const int w2 = 2 * sg2(r, s);
        if (w2 == 0) return;
        out.push_back({r * (r - 1) + 4 * r * s + s * (s - 1) + 8 * w * (w + 1), r, s, w2});
    };
    return sum;
}

void bench_lattice(int repeats) {
    std::printf("%-34s %12s %12s %8s\n", "lattice box sum", "serial ms", "parallel ms", "same");
    for (std::int64_t radius : {24, 48, 72}) {
        LatticeSum sum = cone(Exponent(60));
        QSeries rs(Exponent(1)), rp(Exponent(1));
        double serial = best_of(repeats, [&] { rs = lattice_box_sum_serial(sum, radius); });
        double parallel = best_of(repeats, [&] { rp = lattice_box_sum_parallel(sum, radius); });
        std::printf("%-34s %12.2f %12.2f %8s\n",
                    ("cone, radius " + std::to_string(radius)).c_str(), serial, parallel,
                    rs.terms() == rp.terms() ? "yes" : "NO");
    }
}

}  // namespace

int main(int argc, char** argv) {
    int repeats = 3;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--repeat" && i + 1 < argc) {
            repeats = std::atoi(argv[++i]);
            if (repeats < 1) repeats = 1;
        } else {
            std::fprintf(stderr, "usage: %s [--repeat N]\n", argv[0]);
            return 2;
        }
    }
    bench_products(repeats);
    std::printf("\n");
    bench_lattice(repeats);
    return 0;
}
