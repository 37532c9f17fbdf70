#include "macrodim/estimator.hpp"

#include <stdexcept>

namespace macrodim {

namespace {

DimEstimate estimate(const std::vector<std::uint64_t>& series, CountMethod method,
                     FitWindow w, Aggregation agg) {
    const int n_top = static_cast<int>(series.size()) - 1;
    if (w.lo > w.hi) throw std::invalid_argument("estimate_dim: empty fit window");
    if (w.lo < 1 || w.hi > n_top)
        throw std::invalid_argument("estimate_dim: fit window outside available shells");

    DimEstimate e;
    e.method = method;
    e.aggregation = agg;
    e.fit_window = w;

    double max_exp = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = w.hi - w.lo + 1;
    for (int n = w.lo; n <= w.hi; ++n) {
        const double logc = log2_plus(static_cast<double>(series[static_cast<std::size_t>(n)]));
        const double ex = logc / n;
        e.per_shell_exponents.push_back(ex);
        max_exp = std::max(max_exp, ex);
        sx += n;
        sy += logc;
        sxx += static_cast<double>(n) * n;
        sxy += n * logc;
    }
    if (m >= 2) {
        SlopeFit fit;
        const double det = m * sxx - sx * sx;
        fit.slope = (m * sxy - sx * sy) / det;
        fit.intercept = (sy * sxx - sx * sxy) / det;
        double ss = 0;
        for (int n = w.lo; n <= w.hi; ++n) {
            const double logc =
                log2_plus(static_cast<double>(series[static_cast<std::size_t>(n)]));
            const double r = logc - (fit.intercept + fit.slope * n);
            ss += r * r;
        }
        fit.residual = std::sqrt(ss / m);
        e.slope_fit = fit;
    }
    e.value = agg == Aggregation::max ? max_exp
                                      : std::max(0.0, e.slope_fit ? e.slope_fit->slope : 0.0);
    return e;
}

}  // namespace

DimEstimate estimate_dim_ball(const ShellCounts& c, FitWindow w, Aggregation agg) {
    return estimate(c.cumulative(), CountMethod::ball, w, agg);
}

DimEstimate estimate_dim_shell(const ShellCounts& c, FitWindow w, Aggregation agg) {
    return estimate(c.counts, CountMethod::shell, w, agg);
}

std::string to_string(CountMethod m) { return m == CountMethod::ball ? "ball" : "shell"; }
std::string to_string(Aggregation a) { return a == Aggregation::max ? "max" : "slope"; }

nlohmann::json to_json(const DimEstimate& e) {
    nlohmann::json j;
    j["value"] = e.value;
    j["method"] = to_string(e.method);
    j["aggregation"] = to_string(e.aggregation);
    j["fit_window"] = {e.fit_window.lo, e.fit_window.hi};
    j["per_shell_exponents"] = e.per_shell_exponents;
    if (e.slope_fit)
        j["slope_fit"] = {{"slope", e.slope_fit->slope},
                          {"intercept", e.slope_fit->intercept},
                          {"residual", e.slope_fit->residual}};
    return j;
}

}  // namespace macrodim
