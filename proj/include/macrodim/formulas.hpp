#pragma once

#include <json.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Theory oracles: closed-form and numerical evaluation of the dimension
// formulas, independent of the simulators they validate.
namespace macrodim {

// Graph dimension of a symmetric beta-stable process: min{(2b-1)_+/b, 1}.
double graph_dim(double beta);

// Tall-peaks dimension: 1 for alpha <= 1/beta (endpoint included), else 0.
double peaks_dim(double alpha, double beta);
// Brownian counterpart with the iterated-logarithm envelope: threshold 1.
double peaks_dim_brownian(double alpha);

struct CharacteristicExponent {
    enum class Kind { stable, user };
    Kind kind = Kind::stable;
    double beta = 2.0;
    std::function<std::complex<double>(std::span<const double>)> fn;

    std::complex<double> operator()(std::span<const double> z) const;
    static CharacteristicExponent stable_exponent(double beta);
};

struct LaplaceExponent {
    enum class Kind { power, user };
    Kind kind = Kind::power;
    double rho = 0.5;
    std::function<double(double)> fn;

    double operator()(double y) const;
    static LaplaceExponent power(double rho);
    static LaplaceExponent user(std::function<double(double)> fn);
};

// Small-argument growth exponent of a Laplace exponent, clamped to [0,1];
// equals the macroscopic dimension of the subordinator's range.
struct SubordinatorDimResult {
    std::optional<double> value;
    double spread = 0;
};
SubordinatorDimResult subordinator_range_dim(const LaplaceExponent& phi);

enum class IntegralVerdict { converges, diverges, critical };
std::string to_string(IntegralVerdict v);

struct ConvergenceProbe {
    double alpha = 0;
    IntegralVerdict verdict = IntegralVerdict::critical;
    double exponent = 0;  // fitted geometric decay rate of the dyadic tail
};

struct ConvergenceVerdict {
    std::string criterion;
    double critical_alpha = 0;
    std::vector<ConvergenceProbe> probes;
    bool non_asymptotic = false;
    double truncation_bias = 0;  // potential-mc only
    nlohmann::json to_json() const;
};

// Classifies \int_{|z|<=1} Re(1/Psi) |z|^{alpha-d} dz per probed alpha by
// dyadic-shell quadrature with local-exponent extrapolation; critical_alpha
// is the crossover. Throws if the Port-Stone integral itself diverges
// (recurrent process) or Psi vanishes on the probe set.
ConvergenceVerdict fourier_alpha_c(const CharacteristicExponent& psi, int d,
                                   std::span<const double> alpha_grid);

// Monte Carlo estimate of the same crossover from occupation times:
// limsup n^{-1} Log U_X(S_n) with U_X estimated over replicas truncated at
// T = 2^{b (n_max+2)}, b the self-similarity index.
enum class McProcess { symmetric_stable, brownian, stable_subordinator };
ConvergenceVerdict potential_alpha_c_mc(McProcess kind, double index, int d, int n_max,
                                        int replicas, std::uint64_t seed,
                                        double dt = 1.0);

// Modified Bessel function of the second kind, via the integral
// representation \int_0^inf exp(-w cosh u) cosh(nu u) du.
double bessel_k(double nu, double w);

// Max relative deviation, over z_grid, between the directly computed Fourier
// transform of (1+x^2)^{-alpha/2} (d = 1) and c K_{(1-alpha)/2}(|z|) /
// |z|^{(1-alpha)/2} with c fitted at the first grid point. Requires
// alpha in (1,3): below 1 the transform only exists distributionally.
double verify_lemma_ft(double alpha, std::span<const double> z_grid);

}  // namespace macrodim
