#include "macrodim/boolean_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "macrodim/rng.hpp"

namespace macrodim {

namespace {

constexpr std::uint64_t kBooleanStream = 0x626f6f6c65616eULL;  // field coins

double clamp_prob(double p) {
    // the ceiling must stay strictly below 1 after rounding: 1 - 2^-60 is
    // not representable, the closest gap below 1.0 is 2^-53
    return std::clamp(p, kProbFloor, 1.0 - 0x1.0p-53);
}

double max_norm(std::span<const std::int64_t> x) {
    std::int64_t m = 0;
    for (auto c : x) m = std::max(m, c >= 0 ? c : -c);
    return static_cast<double>(m);
}

// Deterministic per-cell word, independent of iteration order.
std::uint64_t cell_word(std::uint64_t key, std::span<const std::int64_t> x) {
    std::uint64_t h = key;
    for (auto c : x) h = rng::mix(h, static_cast<std::uint64_t>(c));
    return h;
}

template <typename F>
void for_each_ball_cell(int d, int n_max, F&& f) {
    const std::int64_t lo = -(std::int64_t{1} << n_max);
    const std::int64_t hi = (std::int64_t{1} << n_max) - 1;
    std::int64_t x[3];
    if (d == 1) {
        for (x[0] = lo; x[0] <= hi; ++x[0]) f(std::span<const std::int64_t>(x, 1));
    } else if (d == 2) {
        for (x[0] = lo; x[0] <= hi; ++x[0])
            for (x[1] = lo; x[1] <= hi; ++x[1]) f(std::span<const std::int64_t>(x, 2));
    } else if (d == 3) {
        for (x[0] = lo; x[0] <= hi; ++x[0])
            for (x[1] = lo; x[1] <= hi; ++x[1])
                for (x[2] = lo; x[2] <= hi; ++x[2]) f(std::span<const std::int64_t>(x, 3));
    } else {
        throw std::invalid_argument("Boolean model: d must be 1, 2 or 3");
    }
}

void check_cell_guard(int d, int n_max) {
    if (n_max > PixelSet::max_shell(d) ||
        ball_cells(d, n_max) > kCellGuard)
        throw std::invalid_argument(
            "Boolean model: lattice ball exceeds the 2^28 cell guard (requested " +
            std::to_string(d * (n_max + 1)) + " bits of cells)");
}

}  // namespace

double CoverageField::p(std::span<const std::int64_t> x) const {
    switch (family) {
        case Family::constant: return clamp_prob(p0);
        case Family::power_law:
            return clamp_prob(std::min(c * std::pow(1.0 + max_norm(x), -lambda), cap));
        case Family::table:
            for (const auto& [pt, prob] : table) {
                if (pt.size() == x.size() && std::equal(pt.begin(), pt.end(), x.begin()))
                    return clamp_prob(prob);
            }
            return kProbFloor;  // cells outside the table are effectively off
    }
    return kProbFloor;
}

CoverageField CoverageField::power_law_field(double lambda, double c, double cap) {
    CoverageField f;
    f.family = Family::power_law;
    f.lambda = lambda;
    f.c = c;
    f.cap = cap;
    if (lambda < 0 || c <= 0 || cap <= 0 || cap >= 1)
        throw std::invalid_argument("power-law field: need lambda >= 0, c > 0, cap in (0,1)");
    return f;
}

CoverageField CoverageField::constant_field(double p0) {
    CoverageField f;
    f.family = Family::constant;
    f.p0 = p0;
    return f;
}

nlohmann::json CoverageField::to_json() const {
    nlohmann::json j;
    switch (family) {
        case Family::power_law:
            j["family"] = "power-law";
            j["lambda"] = lambda;
            j["c"] = c;
            j["cap"] = cap;
            break;
        case Family::constant:
            j["family"] = "constant";
            j["p0"] = p0;
            break;
        case Family::table: {
            j["family"] = "table";
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& [pt, prob] : table) {
                nlohmann::json row;
                row["x"] = pt;
                row["p"] = prob;
                rows.push_back(row);
            }
            j["table"] = rows;
            break;
        }
    }
    if (index_hint) j["index_hint"] = *index_hint;
    return j;
}

CoverageField CoverageField::from_json(const nlohmann::json& j) {
    CoverageField f;
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "power-law") {
        f = power_law_field(j.at("lambda").get<double>(), j.value("c", 1.0),
                            j.value("cap", 0.5));
    } else if (fam == "constant") {
        f = constant_field(j.at("p0").get<double>());
    } else if (fam == "table") {
        f.family = Family::table;
        for (const auto& row : j.at("table")) {
            f.table.emplace_back(row.at("x").get<std::vector<std::int64_t>>(),
                                 row.at("p").get<double>());
        }
        if (!f.table.empty()) f.table_dim = static_cast<int>(f.table.front().first.size());
    } else {
        throw std::invalid_argument("coverage field: unknown family '" + fam + "'");
    }
    if (j.contains("index_hint")) f.index_hint = j.at("index_hint").get<double>();
    return f;
}

BooleanSample sample_boolean(const CoverageField& field, int d, int n_max,
                             std::uint64_t seed) {
    check_cell_guard(d, n_max);
    const rng::Stream coins(seed, kBooleanStream);
    BooleanSample out{PixelSet(d, n_max), field, seed, d, n_max};
    for_each_ball_cell(d, n_max, [&](std::span<const std::int64_t> x) {
        if (rng::u01(cell_word(coins.key(), x)) < field.p(x)) out.pixels.insert(x);
    });
    return out;
}

PixelSet sample_boolean_on(const PixelSet& A, const CoverageField& field,
                           std::uint64_t seed) {
    const rng::Stream coins(seed, kBooleanStream);
    PixelSet out(A.dim(), A.n_max());
    A.for_each([&](std::span<const std::int64_t> x) {
        if (rng::u01(cell_word(coins.key(), x)) < field.p(x)) out.insert(x);
    });
    return out;
}

ShellMoments expected_shell_counts(const CoverageField& field, int d, int n_max) {
    check_cell_guard(d, n_max);
    ShellMoments m;
    m.mean.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    m.variance.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    for_each_ball_cell(d, n_max, [&](std::span<const std::int64_t> x) {
        const double p = field.p(x);
        const auto n = static_cast<std::size_t>(shell_of(x));
        m.mean[n] += p;
        m.variance[n] += p * (1.0 - p);
    });
    return m;
}

IndexEstimate index_of(const CoverageField& field, int n_max) {
    IndexEstimate out;
    if (field.family == CoverageField::Family::power_law) {
        out.value = field.lambda;
        out.analytic = true;
        return out;
    }
    if (field.family == CoverageField::Family::constant) {
        out.value = 0.0;
        out.analytic = true;
        return out;
    }
    if (field.index_hint) {
        out.value = field.index_hint;
        out.analytic = true;
        return out;
    }
    // Numeric path: -log p(x)/log|x| over table points with |x| in
    // [2^{n_max-2}, 2^{n_max}].
    const double lo = std::ldexp(1.0, n_max - 2);
    const double hi = std::ldexp(1.0, n_max);
    double sum = 0, mn = 1e300, mx = -1e300;
    std::size_t k = 0;
    for (const auto& [pt, prob] : field.table) {
        const double r = max_norm(pt);
        if (r < lo || r > hi) continue;
        const double ratio = -std::log2(clamp_prob(prob)) / std::log2(r);
        sum += ratio;
        mn = std::min(mn, ratio);
        mx = std::max(mx, ratio);
        ++k;
    }
    if (k == 0) return out;  // no probes, no index
    out.spread = mx - mn;
    if (out.spread > 0.1) return out;  // unstable: the defining limit need not exist
    out.value = sum / static_cast<double>(k);
    return out;
}

RecurrenceDiagnostic recurrence_diagnostic(const PixelSet& A, const CoverageField& field,
                                           std::optional<double> a_dim) {
    RecurrenceDiagnostic out;
    out.shell_sums.assign(static_cast<std::size_t>(A.n_max()) + 1, 0.0);
    A.for_each([&](std::span<const std::int64_t> x) {
        out.shell_sums[static_cast<std::size_t>(shell_of(x))] += field.p(x);
    });

    int top = -1;
    for (int n = A.n_max(); n >= 0; --n)
        if (out.shell_sums[static_cast<std::size_t>(n)] > 0) {
            top = n;
            break;
        }

    // Fit the geometric tail of the shell increments over the top half of the
    // populated shells; too few populated shells means a plain finite sum.
    std::vector<std::pair<double, double>> pts;
    for (int n = std::max(1, (top + 1) / 2); n <= top; ++n) {
        const double s = out.shell_sums[static_cast<std::size_t>(n)];
        if (s > 0) pts.emplace_back(static_cast<double>(n), std::log2(s));
    }
    if (pts.size() < 2) {
        out.verdict = TailVerdict::converges;
        out.fitted_exponent = -1.0;
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double m = static_cast<double>(pts.size());
        out.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        if (out.fitted_exponent > 0.05)
            out.verdict = TailVerdict::diverges;
        else if (out.fitted_exponent < -0.05)
            out.verdict = TailVerdict::converges;
        else
            out.verdict = TailVerdict::critical;
    }

    const IndexEstimate idx = index_of(field);
    if (a_dim && idx.value) out.dim_minus_index = *a_dim - *idx.value;
    return out;
}

double boolean_intersection_dim(double a_dim, const CoverageField& field) {
    const IndexEstimate idx = index_of(field);
    if (!idx.value)
        throw std::domain_error("boolean_intersection_dim: field has no index");
    return std::max(a_dim - *idx.value, 0.0);
}

std::string to_string(TailVerdict v) {
    switch (v) {
        case TailVerdict::converges: return "converges";
        case TailVerdict::diverges: return "diverges";
        case TailVerdict::critical: return "critical";
    }
    return "critical";
}

}  // namespace macrodim
