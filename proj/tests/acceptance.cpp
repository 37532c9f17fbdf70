// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Monte Carlo settings and seeds are fixed for
// reproducibility; tolerances are pinned in each check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "macrodim/boolean_model.hpp"
#include "macrodim/estimator.hpp"
#include "macrodim/formulas.hpp"
#include "macrodim/harness.hpp"
#include "macrodim/levy.hpp"
#include "macrodim/rng.hpp"

using namespace macrodim;

namespace {

int g_failures = 0;

void report(const std::string& label, bool ok, double empirical, double target,
            double tol) {
    std::printf("%-58s %s  (value=%.4f target=%.4f tol=%.3g)\n", label.c_str(),
                ok ? "PASS" : "FAIL", empirical, target, tol);
    if (!ok) ++g_failures;
}

void report_plain(const std::string& label, bool ok, const std::string& detail) {
    std::printf("%-58s %s  (%s)\n", label.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
    if (!ok) ++g_failures;
}

ExperimentSpec make_spec(const std::string& id, ExperimentKind kind,
                         nlohmann::json params, int n_max, int replicas,
                         std::uint64_t seed, double tol) {
    ExperimentSpec s;
    s.id = id;
    s.kind = kind;
    s.params = std::move(params);
    s.n_max = n_max;
    s.replicas = replicas;
    s.base_seed = seed;
    s.tolerance = tol;
    return s;
}

void run_and_report(const std::string& label, const ExperimentSpec& spec,
                    double target, double tol) {
    const ExperimentResult res = run(spec);
    report(label, std::abs(res.median - target) <= tol, res.median, target, tol);
}

// --- criterion 1: coverage-model dimension law --------------------------------
void criterion_1() {
    const struct {
        double lambda, target;
    } cases[] = {{0.3, 1.7}, {0.7, 1.3}};
    for (const auto& c : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto spec = make_spec("acc1-lambda" + std::to_string(c.lambda),
                                    ExperimentKind::boolean_dim,
                                    {{"d", 2}, {"lambda", c.lambda}}, 11, 8, 401, 0.10);
        const ExperimentResult res = run(spec);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report("1. coverage model d=2 lambda=" + std::to_string(c.lambda).substr(0, 3),
               std::abs(res.median - c.target) <= 0.10 && secs <= 60.0, res.median,
               c.target, 0.10);
    }
}

// --- criterion 2: intersection with the positive axis -------------------------
void criterion_2() {
    run_and_report("2. coverage intersection on Z+ lambda=0.5",
                   make_spec("acc2", ExperimentKind::boolean_dim,
                             {{"d", 1}, {"lambda", 0.5}, {"set", "zplus"}}, 20, 8, 403,
                             0.10),
                   0.5, 0.10);
}

// --- criterion 3: range of stable and Brownian paths --------------------------
void criterion_3() {
    run_and_report("3. stable range beta=0.5",
                   make_spec("acc3-b05", ExperimentKind::stable_range_dim,
                             {{"beta", 0.5}, {"d", 1}, {"T", 16777216.0}, {"dt", 1.0}},
                             44, 4, 101, 0.15),
                   0.5, 0.15);
    run_and_report("3. stable range beta=0.8",
                   make_spec("acc3-b08", ExperimentKind::stable_range_dim,
                             {{"beta", 0.8}, {"d", 1}, {"T", 16777216.0}, {"dt", 1.0}},
                             26, 4, 102, 0.15),
                   0.8, 0.15);
    run_and_report("3. brownian range d=3",
                   make_spec("acc3-bm", ExperimentKind::stable_range_dim,
                             {{"beta", 2.0}, {"d", 3}, {"T", 16777216.0}, {"dt", 1.0}},
                             12, 4, 103, 0.15),
                   2.0, 0.15);
}

// --- criterion 4: graph dimension across the stability index ------------------
void criterion_4() {
    const struct {
        double beta, target;
    } cases[] = {{0.5, 0.0}, {0.75, 2.0 / 3.0}, {1.5, 1.0}, {2.0, 1.0}};
    for (const auto& c : cases) {
        run_and_report("4. graph dimension beta=" + std::to_string(c.beta).substr(0, 4),
                       make_spec("acc4-b" + std::to_string(c.beta),
                                 ExperimentKind::graph_dim,
                                 {{"beta", c.beta}, {"T", 4194304.0}, {"dt", 0.0625}},
                                 22, 3, 201, 0.15),
                       c.target, 0.15);
    }
}

// --- criterion 5: zero set through the inverse subordinator -------------------
void criterion_5() {
    run_and_report("5. zero set beta=2",
                   make_spec("acc5-b2", ExperimentKind::zero_set_dim,
                             {{"beta", 2.0}, {"T", 4194304.0}}, 40, 4, 301, 0.10),
                   0.5, 0.10);
    run_and_report("5. zero set beta=4/3",
                   make_spec("acc5-b43", ExperimentKind::zero_set_dim,
                             {{"beta", 4.0 / 3.0}, {"T", 4194304.0}}, 56, 4, 302, 0.15),
                   0.25, 0.15);
}

// --- criterion 6: tall peaks --------------------------------------------------
void criterion_6() {
    run_and_report("6. peaks brownian alpha=0.5",
                   make_spec("acc6-bm", ExperimentKind::peaks_dim,
                             {{"beta", 2.0}, {"alpha", 0.5}, {"T", 16777216.0},
                              {"dt", 1.0}},
                             24, 8, 303, 0.10),
                   1.0, 0.10);
    run_and_report("6. peaks stable beta=0.8 alpha=1",
                   make_spec("acc6-st", ExperimentKind::peaks_dim,
                             {{"beta", 0.8}, {"alpha", 1.0}, {"T", 16777216.0},
                              {"dt", 1.0}},
                             24, 8, 304, 0.10),
                   1.0, 0.10);

    // supercritical envelope: far shells must stay dark in >= 7 of 8 replicas
    const nlohmann::json params = {
        {"beta", 0.8}, {"alpha", 1.25 / 0.8}, {"T", 16777216.0}, {"dt", 1.0}};
    int dark = 0;
    for (int r = 0; r < 8; ++r) {
        const PixelSet px =
            sample_pixels(ExperimentKind::peaks_dim, params, 24,
                          rng::replica_seed(305, static_cast<std::uint64_t>(r)));
        std::uint64_t far_pixels = 0;
        for (int n = 20; n <= 24; ++n)
            far_pixels += px.shell_counts().counts[static_cast<std::size_t>(n)];
        if (far_pixels == 0) ++dark;
    }
    report_plain("6. peaks supercritical alpha=1.25/beta", dark >= 7,
                 std::to_string(dark) + "/8 replicas with empty shells >= 20");
}

// --- criterion 7: agreement of the two integral-test oracles ------------------
void criterion_7() {
    const std::vector<double> grid = {0.2, 0.5, 0.8};
    // deeper shells for smaller beta: the finite-horizon bias of the shell
    // exponent decays like 1/n_max while the step count stays ~2^{beta n}
    const struct {
        double beta;
        int n_max, replicas;
        std::uint64_t seed;
    } mc_cases[] = {{0.3, 40, 256, 503}, {0.6, 24, 128, 506}, {0.9, 18, 64, 509}};
    for (const auto& c : mc_cases) {
        const auto f =
            fourier_alpha_c(CharacteristicExponent::stable_exponent(c.beta), 1, grid);
        report("7. fourier criterion beta=" + std::to_string(c.beta).substr(0, 3),
               std::abs(f.critical_alpha - c.beta) <= 0.01, f.critical_alpha, c.beta,
               0.01);
        const auto mc = potential_alpha_c_mc(McProcess::symmetric_stable, c.beta, 1,
                                             c.n_max, c.replicas, c.seed);
        report("7. fourier vs monte-carlo beta=" + std::to_string(c.beta).substr(0, 3),
               std::abs(f.critical_alpha - mc.critical_alpha) <= 0.15,
               mc.critical_alpha, f.critical_alpha, 0.15);
    }
}

// --- criterion 8: Fourier-Bessel identity and Bessel envelopes ----------------
void criterion_8() {
    std::vector<double> zs;
    for (int i = 0; i <= 24; ++i) zs.push_back(0.1 + (5.0 - 0.1) * i / 24.0);
    const double e2 = verify_lemma_ft(2.0, zs);
    report("8. transform identity alpha=2 (exact pair)", e2 <= 1e-8, e2, 0.0, 1e-8);
    const double e25 = verify_lemma_ft(2.5, zs);
    report("8. transform identity alpha=2.5", e25 <= 1e-4, e25, 0.0, 1e-4);

    // small-argument envelope K_nu(w) ~ Gamma(nu) 2^{nu-1} w^{-nu}
    bool small_ok = true;
    for (double nu : {0.25, 0.75}) {
        const double w = 1e-3;
        const double env = 0.5 * std::tgamma(nu) * std::pow(2.0 / w, nu);
        if (std::abs(bessel_k(nu, w) / env - 1.0) > 0.05) small_ok = false;
    }
    report_plain("8. bessel small-argument envelope", small_ok, "w=1e-3, nu in {0.25,0.75}");

    // large-argument envelope K_nu(w) ~ sqrt(pi/2w) e^-w
    bool large_ok = true;
    for (double nu : {0.3, 0.9}) {
        const double w = 30.0;
        const double env = std::sqrt(3.14159265358979323846 / (2.0 * w)) * std::exp(-w);
        if (std::abs(bessel_k(nu, w) / env - 1.0) > 0.05) large_ok = false;
    }
    report_plain("8. bessel large-argument envelope", large_ok, "w=30, nu in {0.3,0.9}");
}

// --- criterion 9: property suites ---------------------------------------------
void criterion_9() {
    // lattice partition fuzz
    bool lattice_ok = true;
    const rng::Stream s(909, 9);
    std::uint64_t ctr = 0;
    for (int d = 1; d <= 3 && lattice_ok; ++d) {
        for (int i = 0; i < 100000; ++i) {
            std::int64_t x[3];
            for (int j = 0; j < d; ++j)
                x[j] = static_cast<std::int64_t>(s.word(ctr++) % (1 << 21)) - (1 << 20);
            const auto xs = std::span<const std::int64_t>(x, static_cast<std::size_t>(d));
            const int n = shell_of(xs);
            const std::uint64_t rho = radius_of(xs);
            if (rho > (std::uint64_t{1} << n) ||
                (n > 0 && rho <= (std::uint64_t{1} << (n - 1)))) {
                lattice_ok = false;
                break;
            }
        }
    }
    report_plain("9. lattice shell partition fuzz", lattice_ok, "3x100000 points");

    // estimator exactness
    ShellCounts lattice_counts;
    lattice_counts.counts.push_back(2);
    for (int n = 1; n <= 20; ++n) lattice_counts.counts.push_back(std::uint64_t{1} << n);
    const double dim_z =
        estimate_dim_shell(lattice_counts, default_fit_window(20)).value;
    ShellCounts point;
    point.counts.assign(21, 0);
    point.counts[0] = 1;
    const double dim_pt =
        estimate_dim_shell(point, default_fit_window(20), Aggregation::slope).value;
    report_plain("9. estimator exactness (line=1, point=0)",
                 dim_z == 1.0 && dim_pt == 0.0,
                 "line=" + std::to_string(dim_z) + " point=" + std::to_string(dim_pt));

    // perfect squares
    ShellCounts squares;
    squares.counts.assign(41, 0);
    for (std::int64_t k = 0; k * k < (std::int64_t{1} << 40); ++k) {
        std::int64_t v = k * k;
        int n = 0;
        while (static_cast<std::uint64_t>(v) + 1 > (std::uint64_t{1} << n)) ++n;
        squares.counts[static_cast<std::size_t>(n)] += 1;
    }
    const double dim_sq = estimate_dim_ball(squares, default_fit_window(40)).value;
    report("9. perfect squares dimension", std::abs(dim_sq - 0.5) <= 0.05, dim_sq, 0.5,
           0.05);

    // sampler invariants: variance, scaling, symmetry
    const rng::Stream draws(911);
    const int n = 100000;
    double var = 0, signed_count = 0;
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i) {
        const double g = sample_stable_increment(2.0, 1.0, draws, i);
        var += g * g;
        const double x =
            sample_stable_increment(0.7, 2.0, rng::Stream(913), i);
        const double y =
            sample_stable_increment(0.7, 1.0, rng::Stream(917), i) * std::exp2(1.0 / 0.7);
        a.push_back(x);
        b.push_back(y);
        signed_count += x > 0 ? 1 : -1;
    }
    var /= n;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ks = 0;
    for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        ks = std::max(ks, std::abs(static_cast<double>(i) - static_cast<double>(j)) / n);
    }
    const bool sampler_ok = std::abs(var - 2.0) < 0.05 &&
                            ks < 1.95 * std::sqrt(2.0 / n) &&
                            std::abs(signed_count) / n < 0.02;
    report_plain("9. stable sampler invariants", sampler_ok,
                 "var=" + std::to_string(var) + " ks=" + std::to_string(ks));

    // end-to-end determinism
    const auto spec = make_spec("acc9-det", ExperimentKind::boolean_dim,
                                {{"d", 1}, {"lambda", 0.4}}, 14, 4, 919, 0.2);
    const bool det_ok = run(spec).record().dump() == run(spec).record().dump();
    report_plain("9. end-to-end determinism", det_ok, "byte-identical records");
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("---\n%d criterion check(s) failed; total %.1f s\n", g_failures, secs);
    return g_failures;
}
