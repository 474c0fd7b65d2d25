#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"

#include "rpp/field.hpp"
#include "rpp/parallel.hpp"

using namespace rpp;

namespace {

double item(std::int64_t i) {
    const double x = 1e-4 * static_cast<double>(i);
    return std::sin(x) * std::exp(-x * 0.25) + 1.0 / (1.0 + x);
}

bool bits_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_SUITE("parallel") {

TEST_CASE("serial reference and parallel reduction are bit-identical") {
    for (std::int64_t n : {1LL, 1000LL, 1024LL, 1025LL, 65536LL, 100001LL}) {
        const double s = par::block_sum_serial(n, item);
        const double p = par::block_sum(n, item);
        CHECK(bits_equal(s, p));
    }
}

TEST_CASE("reduction is invariant under the thread count") {
    const std::int64_t n = 200000;
    const int before = par::max_threads();
    par::set_threads(1);
    const double one = par::block_sum(n, item);
    par::set_threads(4);
    const double four = par::block_sum(n, item);
    par::set_threads(3);
    const double three = par::block_sum(n, item);
    par::set_threads(before);
    CHECK(bits_equal(one, four));
    CHECK(bits_equal(one, three));
}

TEST_CASE("sum and sum of squares agree with the plain reduction") {
    const std::int64_t n = 50000;
    const auto [s1, s2] = par::block_sum2(n, item);
    CHECK(bits_equal(s1, par::block_sum(n, item)));
    const double ref2 = par::block_sum_serial(n, [](std::int64_t i) {
        const double v = item(i);
        return v * v;
    });
    CHECK(bits_equal(s2, ref2));
}

TEST_CASE("block apply fills by index") {
    std::vector<double> out;
    par::block_apply(777, out, [](std::int64_t i) { return 2.0 * static_cast<double>(i); });
    REQUIRE(out.size() == 777);
    CHECK(out[0] == 0.0);
    CHECK(out[491] == 982.0);
    CHECK(out[776] == 1552.0);
}

TEST_CASE("mc estimate is deterministic and thread-invariant") {
    auto per_rep = [](rng::Stream& stream, std::int64_t) {
        double s = 0.0;
        for (int k = 0; k < 16; ++k) s += stream.uniform();
        return s;
    };
    const int before = par::max_threads();
    par::set_threads(1);
    const Estimate a = mc_estimate(20000, 42, 100, per_rep);
    par::set_threads(4);
    const Estimate b = mc_estimate(20000, 42, 100, per_rep);
    par::set_threads(before);
    CHECK(bits_equal(a.value, b.value));
    CHECK(bits_equal(a.std_error, b.std_error));
    CHECK(a.n == 20000);
    CHECK(a.seed == 42);

    const Estimate c = mc_estimate(20000, 43, 100, per_rep);
    CHECK_FALSE(bits_equal(a.value, c.value));

    // mean of 16 uniforms is 8; the estimate should sit within 6 se
    CHECK(a.std_error > 0.0);
    CHECK(std::fabs(a.value - 8.0) < 6.0 * a.std_error);
}

TEST_CASE("mc estimate of a constant has zero spread") {
    const Estimate e = mc_estimate(100, 7, 0, [](rng::Stream&, std::int64_t) { return 3.25; });
    CHECK(e.value == 3.25);
    CHECK(e.std_error == 0.0);
}

} // TEST_SUITE
