// Benchmark: the exhaustive best-approximation scan, serial reference vs
// the OpenMP kernel. Both must produce identical hit lists.

#include <chrono>
#include <cstring>
#include <iostream>

#include "pcf/cf.hpp"
#include "pcf/scan.hpp"

using namespace pcf;

namespace {

double time_ms(const std::function<scan::Result()>& fn, scan::Result& out) {
    auto start = std::chrono::steady_clock::now();
    out = fn();
    auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

RationalPuiseux<GF> target(const GF& fld) {
    // [t; t^(1/2)+1, t, 2t^(1/2), t+3] over F_p, ramification 2
    auto t = PuiseuxPoly<GF>::t_power(fld, Rational(1));
    auto th = PuiseuxPoly<GF>::t_power(fld, Rational(1, 2));
    auto c = [&](unsigned long v) { return PuiseuxPoly<GF>::constant(fld, v % fld.modulus()); };
    CFExpression<GF> cf(t, {th + c(1), t, th.scaled(2 % fld.modulus()), t + c(3)}, true);
    return evaluate_exact(cf);
}

}  // namespace

int main(int argc, char** argv) {
    bool smoke = argc > 1 && std::strcmp(argv[1], "--smoke") == 0;
    GF f5(5);
    auto z = target(f5);
    long dp = smoke ? 4 : 7;
    long dq = smoke ? 3 : 4;
    auto task = scan::make_task(f5, z.num(), z.den(), 2, dp, dq);

    unsigned long long pairs =
        scan::detail::p_count(task) * scan::detail::q_count(task);
    std::cout << "target z = " << z.str() << " over F_5\n";
    std::cout << "pairs: " << pairs << " (p up to u-degree " << dp
              << ", monic q up to u-degree " << dq << ")\n";
    std::cout << "threads: " << par::max_threads() << "\n\n";

    scan::Result rs, rp;
    double ts = time_ms([&] { return scan::scan_serial(task); }, rs);
    double tp = time_ms([&] { return scan::scan_parallel(task); }, rp);

    std::cout << "serial reference: " << ts << " ms\n";
    std::cout << "openmp kernel:    " << tp << " ms\n";
    if (tp > 0) std::cout << "speedup:          " << ts / tp << "x\n";
    std::cout << "hits: " << rs.hits.size() << "\n";

    if (!(rs == rp)) {
        std::cout << "MISMATCH between serial and parallel results\n";
        return 1;
    }
    std::cout << "serial and parallel results identical\n";
    return 0;
}
