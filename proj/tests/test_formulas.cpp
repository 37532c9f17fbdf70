#include <doctest.h>

#include <cmath>
#include <vector>

#include "macrodim/formulas.hpp"

using namespace macrodim;

TEST_CASE("graph dimension formula") {
    CHECK(graph_dim(0.5) == doctest::Approx(0.0));
    CHECK(graph_dim(0.75) == doctest::Approx(2.0 / 3.0));
    CHECK(graph_dim(1.0) == doctest::Approx(1.0));
    CHECK(graph_dim(1.5) == doctest::Approx(1.0));
    CHECK(graph_dim(2.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(graph_dim(0.0), std::invalid_argument);
    CHECK_THROWS_AS(graph_dim(2.5), std::invalid_argument);
}

TEST_CASE("tall peaks dimension is a sharp zero-one law") {
    CHECK(peaks_dim(1.2, 0.8) == doctest::Approx(1.0));   // 1/beta = 1.25
    CHECK(peaks_dim(1.25, 0.8) == doctest::Approx(1.0));  // endpoint included
    CHECK(peaks_dim(1.3, 0.8) == doctest::Approx(0.0));
    CHECK(peaks_dim_brownian(1.0) == doctest::Approx(1.0));
    CHECK(peaks_dim_brownian(1.01) == doctest::Approx(0.0));
    CHECK_THROWS_AS(peaks_dim(1.0, 2.0), std::invalid_argument);
}

TEST_CASE("subordinator range dimension from the Laplace exponent") {
    CHECK(*subordinator_range_dim(LaplaceExponent::power(0.3)).value ==
          doctest::Approx(0.3));
    CHECK(*subordinator_range_dim(LaplaceExponent::power(1.0)).value ==
          doctest::Approx(1.0));

    const auto user = subordinator_range_dim(
        LaplaceExponent::user([](double y) { return std::pow(y, 0.6); }));
    REQUIRE(user.value.has_value());
    CHECK(*user.value == doctest::Approx(0.6).epsilon(1e-6));

    // stable plus drift: the smaller exponent wins near zero
    const auto mixed = subordinator_range_dim(
        LaplaceExponent::user([](double y) { return std::sqrt(y) + y; }));
    REQUIRE(mixed.value.has_value());
    CHECK(*mixed.value == doctest::Approx(0.5).epsilon(0.01));

    CHECK_THROWS_AS(subordinator_range_dim(LaplaceExponent::user(
                        [](double y) { return std::sin(1.0 / (y + 1e-30)) + 2.0; })),
                    std::invalid_argument);  // not monotone
    CHECK_THROWS_AS(LaplaceExponent::power(1.5), std::invalid_argument);
}

TEST_CASE("fourier criterion recovers the stable index exactly") {
    const std::vector<double> grid = {0.2, 0.5, 0.9};
    for (double beta : {0.3, 0.6, 0.9}) {
        const auto v =
            fourier_alpha_c(CharacteristicExponent::stable_exponent(beta), 1, grid);
        CHECK(std::abs(v.critical_alpha - beta) <= 0.01);
        for (const auto& p : v.probes) {
            if (p.alpha > beta + 0.05) CHECK(p.verdict == IntegralVerdict::converges);
            if (p.alpha < beta - 0.05) CHECK(p.verdict == IntegralVerdict::diverges);
        }
    }
    // brownian motion in d = 3 sits at the classical critical exponent 2
    const auto b3 = fourier_alpha_c(CharacteristicExponent::stable_exponent(2.0), 3,
                                    std::vector<double>{1.0, 2.5});
    CHECK(b3.critical_alpha == doctest::Approx(2.0).epsilon(0.005));
}

TEST_CASE("fourier criterion rejects recurrent processes") {
    // beta >= d: the transience integral itself diverges
    CHECK_THROWS_AS(fourier_alpha_c(CharacteristicExponent::stable_exponent(1.5), 1,
                                    std::vector<double>{0.5}),
                    std::domain_error);
}

TEST_CASE("user-supplied characteristic exponents work") {
    CharacteristicExponent psi;
    psi.kind = CharacteristicExponent::Kind::user;
    psi.fn = [](std::span<const double> z) {
        double s = 0;
        for (double c : z) s += c * c;
        return std::complex<double>(std::pow(s, 0.35), 0.0);  // |z|^0.7
    };
    const auto v = fourier_alpha_c(psi, 1, std::vector<double>{0.7});
    CHECK(v.critical_alpha == doctest::Approx(0.7).epsilon(0.01));
}

TEST_CASE("monte carlo potential criterion tracks the fourier one") {
    const auto mc = potential_alpha_c_mc(McProcess::stable_subordinator, 0.5, 1, 14, 64,
                                         2024);
    CHECK(std::abs(mc.critical_alpha - 0.5) <= 0.15);
    CHECK(mc.truncation_bias < 0.5);

    CHECK_THROWS_AS(potential_alpha_c_mc(McProcess::brownian, 2.0, 2, 8, 4, 1),
                    std::domain_error);  // recurrent
    CHECK_THROWS_AS(potential_alpha_c_mc(McProcess::symmetric_stable, 1.5, 1, 8, 4, 1),
                    std::domain_error);  // recurrent
}

TEST_CASE("bessel function: closed form, symmetry, recurrence, envelopes") {
    // K_{1/2}(w) = sqrt(pi/(2w)) e^-w
    for (double w : {1e-3, 0.1, 1.0, 5.0, 30.0}) {
        const double exact = std::sqrt(3.14159265358979323846 / (2.0 * w)) * std::exp(-w);
        CHECK(bessel_k(0.5, w) == doctest::Approx(exact).epsilon(1e-8));
        CHECK(bessel_k(-0.5, w) == doctest::Approx(bessel_k(0.5, w)).epsilon(1e-12));
    }
    // K_{nu+1}(w) = K_{nu-1}(w) + (2 nu / w) K_nu(w)
    for (double w : {0.5, 2.0, 10.0}) {
        const double lhs = bessel_k(1.75, w);
        const double rhs = bessel_k(-0.25, w) + 1.5 / w * bessel_k(0.75, w);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
    // small-argument envelope: K_nu(w) ~ Gamma(nu)/2 * (2/w)^nu
    const double nu = 0.75, w0 = 1e-3;
    const double small = 0.5 * std::tgamma(nu) * std::pow(2.0 / w0, nu);
    CHECK(bessel_k(nu, w0) == doctest::Approx(small).epsilon(0.02));
    // large-argument envelope: K_nu(w) ~ sqrt(pi/(2w)) e^-w for any nu
    const double env = std::sqrt(3.14159265358979323846 / 60.0) * std::exp(-30.0);
    CHECK(bessel_k(0.9, 30.0) == doctest::Approx(env).epsilon(0.02));
    CHECK_THROWS_AS(bessel_k(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("fourier transform of the smoothed kernel matches the Bessel form") {
    std::vector<double> zs;
    for (int i = 0; i <= 20; ++i) zs.push_back(0.1 + (5.0 - 0.1) * i / 20.0);
    // alpha = 2 is an exact classical pair (proportional to e^-|z|)
    CHECK(verify_lemma_ft(2.0, zs) < 1e-8);
    CHECK(verify_lemma_ft(2.5, zs) <= 1e-4);
    CHECK(verify_lemma_ft(1.5, zs) <= 1e-4);
    CHECK_THROWS_AS(verify_lemma_ft(0.5, zs), std::invalid_argument);
    CHECK_THROWS_AS(verify_lemma_ft(3.5, zs), std::invalid_argument);
}

TEST_CASE("verdict serialization") {
    ConvergenceVerdict v;
    v.criterion = "fourier";
    v.critical_alpha = 0.6;
    v.probes.push_back({0.5, IntegralVerdict::diverges, -0.1});
    const auto j = v.to_json();
    CHECK(j.at("criterion") == "fourier");
    CHECK(j.at("probes").at(0).at("verdict") == "diverges");
}
