#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "macrodim/estimator.hpp"

using namespace macrodim;

namespace {

// shell counts of Z (the full 1-d lattice): |S_n| = 2^n for n >= 1, 2 for n=0
ShellCounts integer_lattice(int n_max) {
    ShellCounts sc;
    sc.counts.push_back(2);
    for (int n = 1; n <= n_max; ++n) sc.counts.push_back(std::uint64_t{1} << n);
    return sc;
}

}  // namespace

TEST_CASE("Log_+ floors at 1") {
    CHECK(log2_plus(0) == doctest::Approx(1.0));
    CHECK(log2_plus(1) == doctest::Approx(1.0));
    CHECK(log2_plus(2) == doctest::Approx(1.0));
    CHECK(log2_plus(8) == doctest::Approx(3.0));
}

TEST_CASE("the integer lattice has dimension exactly 1") {
    const ShellCounts sc = integer_lattice(20);
    const FitWindow w = default_fit_window(20);
    CHECK(estimate_dim_shell(sc, w).value == doctest::Approx(1.0));
    CHECK(estimate_dim_shell(sc, w, Aggregation::slope).value == doctest::Approx(1.0));
    // ball counts 2^{n+1} give exponent (n+1)/n -> max picks the window start
    const auto ball = estimate_dim_ball(sc, w);
    CHECK(ball.value == doctest::Approx((w.lo + 1.0) / w.lo));
    CHECK(estimate_dim_ball(sc, w, Aggregation::slope).value == doctest::Approx(1.0));
}

TEST_CASE("bounded sets estimate to zero under the slope aggregation") {
    ShellCounts sc;
    sc.counts.assign(21, 0);
    sc.counts[0] = 1;  // a single cell at the origin
    const FitWindow w = default_fit_window(20);
    CHECK(estimate_dim_shell(sc, w, Aggregation::slope).value == doctest::Approx(0.0));
    // the max surrogate decays like 1/n: Log_+(0) = 1 at the window start
    CHECK(estimate_dim_shell(sc, w).value == doctest::Approx(1.0 / w.lo));
}

TEST_CASE("perfect squares come out near one half") {
    // ball count at level n is #{k >= 0 : k^2 < 2^n} = ceil(2^{n/2})
    ShellCounts sc;
    sc.counts.assign(41, 0);
    for (std::int64_t k = 0; k * k < (std::int64_t{1} << 40); ++k) {
        std::int64_t x = k * k;
        const std::span<const std::int64_t> xs(&x, 1);
        int n = 0;
        std::uint64_t r = 1;
        while (static_cast<std::uint64_t>(x) + 1 > r) {
            r <<= 1;
            ++n;
        }
        sc.counts[static_cast<std::size_t>(n)] += 1;
    }
    const auto est = estimate_dim_ball(sc, default_fit_window(40));
    CHECK(est.value == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::abs(est.value - 0.5) <= 0.05);
}

TEST_CASE("geometric points are macroscopically sparse") {
    // one pixel per shell: 2^k sits in shell k+1
    ShellCounts sc;
    sc.counts.assign(31, 1);
    const auto est = estimate_dim_shell(sc, default_fit_window(30), Aggregation::slope);
    CHECK(est.value == doctest::Approx(0.0));
}

TEST_CASE("fit window validation") {
    const ShellCounts sc = integer_lattice(10);
    CHECK_THROWS_AS(estimate_dim_shell(sc, FitWindow{8, 4}), std::invalid_argument);
    CHECK_THROWS_AS(estimate_dim_shell(sc, FitWindow{0, 5}), std::invalid_argument);
    CHECK_THROWS_AS(estimate_dim_shell(sc, FitWindow{5, 11}), std::invalid_argument);
}

TEST_CASE("slope fit diagnostics on a clean power law") {
    ShellCounts sc;
    sc.counts.assign(16, 0);
    for (int n = 0; n <= 15; ++n)
        sc.counts[static_cast<std::size_t>(n)] =
            static_cast<std::uint64_t>(std::llround(std::exp2(0.7 * n + 2)));
    const auto est = estimate_dim_shell(sc, FitWindow{8, 15}, Aggregation::slope);
    REQUIRE(est.slope_fit.has_value());
    CHECK(est.slope_fit->slope == doctest::Approx(0.7).epsilon(0.01));
    CHECK(est.slope_fit->residual < 0.01);
    CHECK(est.value == doctest::Approx(0.7).epsilon(0.01));
}
