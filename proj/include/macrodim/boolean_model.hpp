#pragma once

#include <absl/container/flat_hash_map.h>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "macrodim/lattice.hpp"

// Boolean coverage models B(p): each lattice cell x is kept independently
// with probability p(x), driven by a counter RNG keyed on (seed, x) so the
// sample is identical under any generation order or sharding.
namespace macrodim {

// Probabilities are clamped into [2^-60, 1 - 2^-60].
inline constexpr double kProbFloor = 0x1.0p-60;

struct CoverageField {
    enum class Family { power_law, constant, table };

    Family family = Family::constant;
    // power-law: p(x) = min(c * (1+|x|)^-lambda, cap), |x| the max-norm.
    double lambda = 0;
    double c = 1.0;
    double cap = 0.5;
    // constant family
    double p0 = 0.5;
    // table family: explicit map on a finite box
    int table_dim = 0;
    std::vector<std::pair<std::vector<std::int64_t>, double>> table;
    std::optional<double> index_hint;

    double p(std::span<const std::int64_t> x) const;

    static CoverageField power_law_field(double lambda, double c = 1.0, double cap = 0.5);
    static CoverageField constant_field(double p0);

    nlohmann::json to_json() const;
    static CoverageField from_json(const nlohmann::json& j);
};

struct BooleanSample {
    PixelSet pixels;
    CoverageField field;
    std::uint64_t seed = 0;
    int d = 0;
    int n_max = 0;
};

// Guard: refuse lattice balls larger than 2^28 cells.
inline constexpr std::uint64_t kCellGuard = std::uint64_t{1} << 28;

// Samples B(p) over every cell of B(0;2^{n_max}) in Z^d.
BooleanSample sample_boolean(const CoverageField& field, int d, int n_max,
                             std::uint64_t seed);

// Samples B(p) restricted to the cells of A, i.e. A ∩ B(p). Uses the same
// per-cell coin as sample_boolean for the same seed.
PixelSet sample_boolean_on(const PixelSet& A, const CoverageField& field,
                           std::uint64_t seed);

// Exact expected shell occupancy: sum of p(x) over S_n, n = 0..n_max, along
// with the corresponding Bernoulli variances.
struct ShellMoments {
    std::vector<double> mean;
    std::vector<double> variance;
};
ShellMoments expected_shell_counts(const CoverageField& field, int d, int n_max);

// Ind(p): decay exponent of the coverage probabilities, when it exists.
struct IndexEstimate {
    std::optional<double> value;
    double spread = 0;  // max deviation across probe points (numeric path)
    bool analytic = false;
};
IndexEstimate index_of(const CoverageField& field, int n_max = 12);

// Borel-Cantelli diagnostic for sum_{x in A} p(x): per-shell partial sums and
// a geometric-tail classification of the full series.
enum class TailVerdict { converges, diverges, critical };

struct RecurrenceDiagnostic {
    TailVerdict verdict = TailVerdict::critical;
    std::vector<double> shell_sums;
    double fitted_exponent = 0;
    // Dim(A) vs Ind(p) comparison when both are supplied/known.
    std::optional<double> dim_minus_index;
};
RecurrenceDiagnostic recurrence_diagnostic(const PixelSet& A, const CoverageField& field,
                                           std::optional<double> a_dim = std::nullopt);

// Theoretical a.s. dimension of A ∩ B(p): max(Dim(A) - Ind(p), 0).
double boolean_intersection_dim(double a_dim, const CoverageField& field);

std::string to_string(TailVerdict v);

}  // namespace macrodim
