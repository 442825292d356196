#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "jolo/rng.hpp"

TEST_CASE("identical seeds give identical streams") {
    jolo::Rng a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) CHECK(a.raw() == b.raw());
    jolo::Rng c(12345), d(54321);
    bool all_equal = true;
    for (int i = 0; i < 10; ++i) all_equal = all_equal && (c.raw() == d.raw());
    CHECK_FALSE(all_equal);
}

TEST_CASE("uniform stays in [0,1) and uniform_pos in (0,1]") {
    jolo::Rng r(7);
    for (int i = 0; i < 100000; ++i) {
        double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    jolo::Rng r2(7);
    for (int i = 0; i < 100000; ++i) {
        double u = r2.uniform_pos();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("normal moments") {
    jolo::Rng r(42);
    const int N = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < N; ++i) {
        double z = r.normal();
        s += z;
        s2 += z * z;
    }
    double mean = s / N, var = s2 / N - mean * mean;
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(double(N)));
    CHECK(std::fabs(var - 1.0) < 4.0 * std::sqrt(2.0 / N));
}

TEST_CASE("gamma moments across shapes, including shape < 1") {
    struct Case {
        double shape, rate;
    };
    for (auto c : {Case{0.3, 1.0}, Case{0.9, 2.5}, Case{1.0, 0.5}, Case{4.7, 3.0},
                   Case{40.0, 10.0}}) {
        jolo::Rng r(777);
        const int N = 200000;
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < N; ++i) {
            double g = r.gamma(c.shape, c.rate);
            CHECK(g > 0.0);
            s += g;
            s2 += g * g;
        }
        double mean = s / N, var = s2 / N - mean * mean;
        double true_mean = c.shape / c.rate, true_var = c.shape / (c.rate * c.rate);
        double sd_mean = std::sqrt(true_var / N);
        CHECK(std::fabs(mean - true_mean) < 5.0 * sd_mean);
        CHECK(std::fabs(var - true_var) < 0.05 * true_var + 5.0 * sd_mean);
    }
}

TEST_CASE("derive_seed separates streams and is order-sensitive") {
    auto s1 = jolo::derive_seed({1, 2, 3});
    auto s2 = jolo::derive_seed({1, 2, 4});
    auto s3 = jolo::derive_seed({3, 2, 1});
    CHECK(s1 != s2);
    CHECK(s1 != s3);
    CHECK(s1 == jolo::derive_seed({1, 2, 3}));

    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(jolo::derive_seed({99, i}));
    CHECK(seen.size() == 10000);
}

TEST_CASE("normal quantile inverts the normal cdf") {
    auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    for (double p : {1e-9, 1e-5, 0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.999,
                     1.0 - 1e-6}) {
        double z = jolo::normal_quantile(p);
        CHECK(phi(z) == doctest::Approx(p).epsilon(1e-8));
    }
    CHECK(jolo::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(jolo::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK(jolo::normal_quantile(0.2) ==
          doctest::Approx(-jolo::normal_quantile(0.8)).epsilon(1e-10));
}
