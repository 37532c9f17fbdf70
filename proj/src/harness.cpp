#include "macrodim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "macrodim/boolean_model.hpp"
#include "macrodim/formulas.hpp"
#include "macrodim/levy.hpp"
#include "macrodim/rng.hpp"

namespace macrodim {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) throw std::logic_error("median of empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Aggregation resolve_aggregation(const ExperimentSpec& spec) {
    if (spec.aggregation == "max") return Aggregation::max;
    if (spec.aggregation == "slope") return Aggregation::slope;
    if (!spec.aggregation.empty())
        throw std::invalid_argument("unknown aggregation '" + spec.aggregation + "'");
    // Boolean samples carry a constant-factor bias that the max surrogate
    // turns into a +log(A)/n offset; the slope is the honest default there.
    return spec.kind == ExperimentKind::boolean_dim ? Aggregation::slope
                                                    : Aggregation::max;
}

struct ReplicaOutput {
    DimEstimate estimate;
    std::vector<double> shell_exponents;  // shells 1..n_max
};

ReplicaOutput summarize(const PixelSet& pixels, const ExperimentSpec& spec) {
    const ShellCounts& sc = pixels.shell_counts();
    const FitWindow w = spec.fit_window ? *spec.fit_window : default_fit_window(spec.n_max);
    ReplicaOutput out;
    out.estimate = estimate_dim_shell(sc, w, resolve_aggregation(spec));
    for (int n = 1; n <= spec.n_max; ++n)
        out.shell_exponents.push_back(
            log2_plus(static_cast<double>(sc.counts[static_cast<std::size_t>(n)])) / n);
    return out;
}

PixelSet positive_axis(int n_max) {
    PixelSet a(1, n_max);
    const std::int64_t hi = (std::int64_t{1} << n_max) - 1;
    for (std::int64_t x = 0; x <= hi; ++x)
        a.insert(std::span<const std::int64_t>(&x, 1));
    return a;
}

ReplicaOutput run_replica(const ExperimentSpec& spec, int replica) {
    const std::uint64_t seed =
        rng::replica_seed(spec.base_seed, static_cast<std::uint64_t>(replica));
    return summarize(sample_pixels(spec.kind, spec.params, spec.n_max, seed), spec);
}

std::optional<double> theory_value(const ExperimentSpec& spec) {
    switch (spec.kind) {
        case ExperimentKind::boolean_dim: {
            const CoverageField field =
                spec.params.contains("field")
                    ? CoverageField::from_json(spec.params.at("field"))
                    : CoverageField::power_law_field(spec.params.at("lambda").get<double>(),
                                                     spec.params.value("c", 1.0),
                                                     spec.params.value("cap", 0.5));
            const IndexEstimate idx = index_of(field);
            if (!idx.value) return std::nullopt;
            const std::string set = spec.params.value("set", "full");
            const double ambient =
                set == "zplus" ? 1.0 : static_cast<double>(spec.params.value("d", 1));
            return std::max(ambient - *idx.value, 0.0);
        }
        case ExperimentKind::stable_range_dim: {
            const double beta = spec.params.at("beta").get<double>();
            const int d = spec.params.value("d", 1);
            return std::min(beta, static_cast<double>(d));
        }
        case ExperimentKind::graph_dim:
            return graph_dim(spec.params.at("beta").get<double>());
        case ExperimentKind::zero_set_dim:
            return 1.0 - 1.0 / spec.params.at("beta").get<double>();
        case ExperimentKind::peaks_dim: {
            const double beta = spec.params.at("beta").get<double>();
            const double alpha = spec.params.at("alpha").get<double>();
            return beta == 2.0 ? peaks_dim_brownian(alpha) : peaks_dim(alpha, beta);
        }
        default: return std::nullopt;
    }
}

// Oracle-only and lemma-check kinds produce a single scalar, no pixel sets.
ExperimentResult run_scalar_kind(const ExperimentSpec& spec) {
    ExperimentResult out;
    out.spec = spec;
    if (spec.kind == ExperimentKind::lemma_ft_check) {
        const double alpha = spec.params.at("alpha").get<double>();
        std::vector<double> zs;
        if (spec.params.contains("z")) {
            zs = spec.params.at("z").get<std::vector<double>>();
        } else {
            const double lo = spec.params.value("z_lo", 0.1);
            const double hi = spec.params.value("z_hi", 5.0);
            const int pts = spec.params.value("points", 20);
            for (int i = 0; i < pts; ++i)
                zs.push_back(lo + (hi - lo) * i / std::max(1, pts - 1));
        }
        out.median = verify_lemma_ft(alpha, zs);
        out.theory = 0.0;
        out.pass = out.median <= spec.tolerance;
        return out;
    }

    const std::string oracle = spec.params.at("oracle").get<std::string>();
    if (oracle == "fourier") {
        const double beta = spec.params.at("beta").get<double>();
        const int d = spec.params.value("d", 1);
        std::vector<double> grid =
            spec.params.value("alpha_grid", std::vector<double>{0.25, 0.5, 1.0, 1.5});
        const auto v = fourier_alpha_c(CharacteristicExponent::stable_exponent(beta), d,
                                       grid);
        out.median = v.critical_alpha;
        out.theory = beta;
    } else if (oracle == "potential-mc") {
        const std::string proc = spec.params.value("process", "symmetric-stable");
        McProcess kind;
        double closed_form;
        const double index = spec.params.value("index", 0.5);
        if (proc == "symmetric-stable") {
            kind = McProcess::symmetric_stable;
            closed_form = index;
        } else if (proc == "brownian") {
            kind = McProcess::brownian;
            closed_form = 2.0;
        } else if (proc == "stable-subordinator") {
            kind = McProcess::stable_subordinator;
            closed_form = index;
        } else {
            throw std::invalid_argument("oracle-only: unknown process '" + proc + "'");
        }
        const auto v = potential_alpha_c_mc(kind, index, spec.params.value("d", 1),
                                            spec.n_max, spec.replicas, spec.base_seed,
                                            spec.params.value("dt", 1.0));
        out.median = v.critical_alpha;
        out.theory = closed_form;
        for (const auto& p : v.probes) out.shell_exponents.push_back(p.exponent);
    } else if (oracle == "subordinator-range") {
        const double rho = spec.params.at("rho").get<double>();
        const auto r = subordinator_range_dim(LaplaceExponent::power(rho));
        if (!r.value) return out;  // no stable index: no-theory record
        out.median = *r.value;
        out.theory = rho;
    } else {
        throw std::invalid_argument("oracle-only: unknown oracle '" + oracle + "'");
    }
    if (out.theory) out.pass = std::abs(out.median - *out.theory) <= spec.tolerance;
    return out;
}

}  // namespace

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::boolean_dim: return "boolean-dim";
        case ExperimentKind::stable_range_dim: return "stable-range-dim";
        case ExperimentKind::graph_dim: return "graph-dim";
        case ExperimentKind::zero_set_dim: return "zero-set-dim";
        case ExperimentKind::peaks_dim: return "peaks-dim";
        case ExperimentKind::oracle_only: return "oracle-only";
        case ExperimentKind::lemma_ft_check: return "lemma-ft-check";
    }
    return "boolean-dim";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    if (s == "boolean-dim") return ExperimentKind::boolean_dim;
    if (s == "stable-range-dim") return ExperimentKind::stable_range_dim;
    if (s == "graph-dim") return ExperimentKind::graph_dim;
    if (s == "zero-set-dim") return ExperimentKind::zero_set_dim;
    if (s == "peaks-dim") return ExperimentKind::peaks_dim;
    if (s == "oracle-only") return ExperimentKind::oracle_only;
    if (s == "lemma-ft-check") return ExperimentKind::lemma_ft_check;
    throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

nlohmann::json ExperimentSpec::to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["kind"] = to_string(kind);
    j["params"] = params;
    j["n_max"] = n_max;
    j["replicas"] = replicas;
    j["base_seed"] = base_seed;
    if (fit_window) j["fit_window"] = {fit_window->lo, fit_window->hi};
    j["tolerance"] = tolerance;
    if (!aggregation.empty()) j["aggregation"] = aggregation;
    return j;
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
    ExperimentSpec s;
    s.id = j.at("id").get<std::string>();
    s.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
    s.params = j.value("params", nlohmann::json::object());
    s.n_max = j.at("n_max").get<int>();
    s.replicas = j.value("replicas", 1);
    s.base_seed = j.value("base_seed", std::uint64_t{0});
    if (j.contains("fit_window")) {
        const auto& w = j.at("fit_window");
        s.fit_window = FitWindow{w.at(0).get<int>(), w.at(1).get<int>()};
    }
    s.tolerance = j.value("tolerance", 0.1);
    s.aggregation = j.value("aggregation", std::string{});
    return s;
}

void ExperimentSpec::validate() const {
    if (id.empty()) throw std::invalid_argument("experiment id must be non-empty");
    if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    if (tolerance < 0) throw std::invalid_argument("tolerance must be >= 0");
    resolve_aggregation(*this);
}

nlohmann::json ExperimentResult::record() const {
    nlohmann::json j;
    j["spec"] = spec.to_json();
    nlohmann::json ests = nlohmann::json::array();
    for (const auto& e : estimates) ests.push_back(to_json(e));
    j["estimates"] = ests;
    j["median"] = median;
    j["spread"] = spread;
    j["theory"] = theory ? nlohmann::json(*theory) : nlohmann::json();
    if (pass) j["pass"] = *pass;
    j["shell_exponents"] = shell_exponents;
    return j;
}

PixelSet sample_pixels(ExperimentKind kind, const nlohmann::json& params, int n_max,
                       std::uint64_t seed) {
    switch (kind) {
        case ExperimentKind::boolean_dim: {
            const CoverageField field =
                params.contains("field")
                    ? CoverageField::from_json(params.at("field"))
                    : CoverageField::power_law_field(params.at("lambda").get<double>(),
                                                     params.value("c", 1.0),
                                                     params.value("cap", 0.5));
            const int d = params.value("d", 1);
            const std::string set = params.value("set", "full");
            if (set == "full") return sample_boolean(field, d, n_max, seed).pixels;
            if (set == "zplus") {
                if (d != 1)
                    throw std::invalid_argument("boolean-dim: set=zplus needs d=1");
                return sample_boolean_on(positive_axis(n_max), field, seed);
            }
            throw std::invalid_argument("boolean-dim: unknown set '" + set + "'");
        }
        case ExperimentKind::stable_range_dim: {
            PathSpec ps;
            ps.kind = PathKind::symmetric_stable;
            ps.index = params.at("beta").get<double>();
            ps.d = params.value("d", 1);
            ps.T = params.at("T").get<double>();
            ps.dt = params.value("dt", 1.0);
            ps.seed = seed;
            return range_pixels(ps, n_max);
        }
        case ExperimentKind::graph_dim: {
            PathSpec ps;
            ps.kind = PathKind::symmetric_stable;
            ps.index = params.at("beta").get<double>();
            ps.d = 1;
            ps.T = params.at("T").get<double>();
            ps.dt = params.value("dt", 1.0);
            ps.seed = seed;
            return graph_pixels(ps, n_max);
        }
        case ExperimentKind::zero_set_dim:
            return zero_set_pixels(params.at("beta").get<double>(),
                                   params.at("T").get<double>(), seed, n_max);
        case ExperimentKind::peaks_dim: {
            PathSpec ps;
            const double beta = params.at("beta").get<double>();
            ps.kind = beta == 2.0 ? PathKind::brownian : PathKind::symmetric_stable;
            ps.index = beta;
            ps.d = 1;
            ps.T = params.at("T").get<double>();
            ps.dt = params.value("dt", 1.0);
            ps.seed = seed;
            PeaksConfig cfg;
            cfg.alpha = params.at("alpha").get<double>();
            cfg.envelope = beta == 2.0 ? PeaksConfig::Envelope::brownian
                                       : PeaksConfig::Envelope::stable;
            return tall_peaks_pixels(ps, cfg, n_max);
        }
        default:
            throw std::invalid_argument("sample_pixels: kind produces no pixel sets");
    }
}

int parallelism_degree() {
    if (const char* env = std::getenv("MACRODIM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

ExperimentResult run(const ExperimentSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        spec.validate();
        if (spec.kind == ExperimentKind::oracle_only ||
            spec.kind == ExperimentKind::lemma_ft_check) {
            ExperimentResult out = run_scalar_kind(spec);
            out.wall_time = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
            return out;
        }

        std::vector<ReplicaOutput> reps(static_cast<std::size_t>(spec.replicas));
        const int workers = std::min(parallelism_degree(), spec.replicas);
        std::vector<std::future<void>> pool;
        for (int w = 0; w < workers; ++w) {
            pool.push_back(std::async(std::launch::async, [&, w] {
                for (int r = w; r < spec.replicas; r += workers)
                    reps[static_cast<std::size_t>(r)] = run_replica(spec, r);
            }));
        }
        for (auto& f : pool) f.get();

        ExperimentResult out;
        out.spec = spec;
        std::vector<double> values;
        for (auto& rep : reps) {
            values.push_back(rep.estimate.value);
            out.estimates.push_back(std::move(rep.estimate));
        }
        out.median = median_of(values);
        out.spread = *std::max_element(values.begin(), values.end()) -
                     *std::min_element(values.begin(), values.end());
        for (int n = 1; n <= spec.n_max; ++n) {
            std::vector<double> per_rep;
            for (const auto& rep : reps)
                per_rep.push_back(rep.shell_exponents[static_cast<std::size_t>(n - 1)]);
            out.shell_exponents.push_back(median_of(per_rep));
        }
        out.theory = theory_value(spec);
        if (out.theory) out.pass = std::abs(out.median - *out.theory) <= spec.tolerance;
        out.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(spec.id + ": " + e.what());
    } catch (const std::domain_error& e) {
        throw std::domain_error(spec.id + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(spec.id + ": " + e.what());
    }
}

void append_record(const std::string& store_path, const nlohmann::json& record) {
    std::ofstream os(store_path, std::ios::app);
    if (!os) throw std::runtime_error("cannot open result store '" + store_path + "'");
    os << record.dump() << '\n';
}

std::vector<ExperimentResult> run_campaign(const std::vector<ExperimentSpec>& specs,
                                           const std::string& store_path) {
    std::vector<ExperimentResult> out;
    for (const auto& spec : specs) {
        out.push_back(run(spec));
        append_record(store_path, out.back().record());
    }
    return out;
}

namespace {

std::string csv_quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

}  // namespace

void write_report_csv(std::istream& store, std::ostream& csv, const ReportFilter& filter) {
    csv << "id,kind,params,empirical,theory,diff,pass\n";
    std::string line;
    while (std::getline(store, line)) {
        if (line.empty()) continue;
        const nlohmann::json rec = nlohmann::json::parse(line);
        const nlohmann::json& spec = rec.at("spec");
        const std::string kind = spec.at("kind").get<std::string>();
        const std::string id = spec.at("id").get<std::string>();
        if (!filter.kind.empty() && kind != filter.kind) continue;
        if (!filter.id.empty() && id != filter.id) continue;
        csv << csv_quote(id) << ',' << kind << ','
            << csv_quote(spec.value("params", nlohmann::json::object()).dump()) << ','
            << rec.at("median").get<double>() << ',';
        if (rec.contains("theory") && !rec.at("theory").is_null()) {
            const double th = rec.at("theory").get<double>();
            csv << th << ',' << (rec.at("median").get<double>() - th) << ','
                << (rec.value("pass", false) ? "true" : "false");
        } else {
            csv << ",,";
        }
        csv << '\n';
    }
}

void write_shell_series_csv(const nlohmann::json& record, std::ostream& os) {
    os << "shell,exponent\n";
    int n = 1;
    for (const auto& e : record.at("shell_exponents"))
        os << n++ << ',' << e.get<double>() << '\n';
}

}  // namespace macrodim
