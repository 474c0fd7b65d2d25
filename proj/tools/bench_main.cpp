#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>

#include "CLI11.hpp"

#include "rpp/fkmc.hpp"
#include "rpp/parallel.hpp"
#include "rpp/specfun.hpp"

// Compares the OpenMP kernels against the serial reference paths.  The
// blocked reductions are fixed-order, so the parallel results must match the
// serial ones bit for bit; the table reports timing and that equality.

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP benchmark"};
    std::int64_t n = 20000000;
    long paths = 20000;
    app.add_option("--n", n, "reduction length");
    app.add_option("--paths", paths, "confinement MC paths");
    CLI11_PARSE(app, argc, argv);

    std::printf("%-28s %10s %10s %8s %s\n", "kernel", "serial_s", "openmp_s", "speedup",
                "identical");

    auto integrand = [](std::int64_t i) {
        const double r = 1e-3 + 1e-6 * static_cast<double>(i);
        return rpp::psi(std::pow(r, -0.75)) * r;
    };
    {
        const double t0 = now_s();
        const double serial = rpp::par::block_sum_serial(n, integrand);
        const double t1 = now_s();
        const double parallel = rpp::par::block_sum(n, integrand);
        const double t2 = now_s();
        std::printf("%-28s %10.3f %10.3f %8.2f %s\n", "blocked-reduction", t1 - t0,
                    t2 - t1, (t1 - t0) / std::max(t2 - t1, 1e-9),
                    serial == parallel ? "yes" : "NO");
    }
    {
        const int max_threads = rpp::par::max_threads();
        rpp::par::set_threads(1);
        const double t0 = now_s();
        const rpp::Estimate serial = rpp::confinement_probability(2.0, 1.0, 1, paths,
                                                                  1.0 / 256, 42);
        const double t1 = now_s();
        rpp::par::set_threads(max_threads);
        const rpp::Estimate parallel = rpp::confinement_probability(2.0, 1.0, 1, paths,
                                                                    1.0 / 256, 42);
        const double t2 = now_s();
        std::printf("%-28s %10.3f %10.3f %8.2f %s\n", "confinement-mc", t1 - t0, t2 - t1,
                    (t1 - t0) / std::max(t2 - t1, 1e-9),
                    serial.value == parallel.value ? "yes" : "NO");
    }
    return 0;
}
