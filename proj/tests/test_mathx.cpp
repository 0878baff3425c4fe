#include <doctest.h>

#include <cmath>
#include <random>

#include "bklab/mathx.hpp"

using namespace bklab;

TEST_CASE("pairwise sum matches sequential on random data") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cplx> data(10001);
    for (auto& v : data) v = cplx{dist(rng), dist(rng)};
    const cplx a = pairwise_map_sum(0, data.size(), [&](std::size_t i) { return data[i]; });
    const cplx b = sequential_map_sum(0, data.size(), [&](std::size_t i) { return data[i]; });
    CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("pairwise sum is deterministic") {
    std::vector<cplx> data(4097);
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = cplx{std::sin(0.1 * i), std::cos(0.2 * i)};
    const cplx a = pairwise_map_sum(0, data.size(), [&](std::size_t i) { return data[i]; });
    const cplx b = pairwise_map_sum(0, data.size(), [&](std::size_t i) { return data[i]; });
    CHECK(a == b);
}

TEST_CASE("bessel_j0 against the library function") {
    for (double x : {0.0, 0.3, 1.0, 2.9, 3.2, 7.9, 8.1, 25.0, 120.0, 800.0}) {
        CHECK(std::fabs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) < 2e-7);
    }
    CHECK(bessel_j0(0.0) == doctest::Approx(1.0));
}

TEST_CASE("line fit recovers slope and intercept") {
    std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(-1.5 * xi + 0.25);
    const LineFit fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("bump profile support") {
    CHECK(bump_profile(0.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(bump_profile(1.0) == 0.0);
    CHECK(bump_profile(1.5) == 0.0);
    CHECK(bump_profile(0.999) >= 0.0);
}
