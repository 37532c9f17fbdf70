#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "macrodim/lattice.hpp"

// Macroscopic Minkowski dimension estimates from shell occupancy counts.
namespace macrodim {

// Log_+(y) = log2(max(y,2)); empty shells contribute exponent 1/n, not -inf.
inline double log2_plus(double y) { return std::log2(std::max(y, 2.0)); }

enum class CountMethod { ball, shell };
// Finite-n surrogate for the limsup: max of per-shell exponents (default), or
// the least-squares slope of Log_+ counts vs n.
enum class Aggregation { max, slope };

struct FitWindow {
    int lo = 0;
    int hi = 0;
    bool contains(int n) const { return lo <= n && n <= hi; }
};

// Default window: top half of the available shells, never below shell 2.
inline FitWindow default_fit_window(int n_top) {
    return FitWindow{std::max(2, (n_top + 1) / 2), std::max(2, n_top)};
}

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    double residual = 0;  // rms of fit residuals
};

struct DimEstimate {
    double value = 0;
    CountMethod method = CountMethod::shell;
    Aggregation aggregation = Aggregation::max;
    FitWindow fit_window;
    // per_shell_exponents[i] = Log_+(count at shell fit_window.lo + i) / n.
    std::vector<double> per_shell_exponents;
    std::optional<SlopeFit> slope_fit;
};

DimEstimate estimate_dim_ball(const ShellCounts& c, FitWindow w,
                              Aggregation agg = Aggregation::max);
DimEstimate estimate_dim_shell(const ShellCounts& c, FitWindow w,
                               Aggregation agg = Aggregation::max);

nlohmann::json to_json(const DimEstimate& e);

std::string to_string(CountMethod m);
std::string to_string(Aggregation a);

}  // namespace macrodim
