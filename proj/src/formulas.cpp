#include "macrodim/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "macrodim/estimator.hpp"
#include "macrodim/lattice.hpp"
#include "macrodim/levy.hpp"
#include "macrodim/rng.hpp"

namespace macrodim {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// 16-point Gauss-Legendre rule on [-1,1], positive half.
constexpr int kGlHalf = 8;
constexpr double kGlNode[kGlHalf] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[kGlHalf] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// Integrates f over [a,b] with a single 16-node Gauss-Legendre panel.
template <typename F>
double gl16(double a, double b, F&& f) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0;
    for (int i = 0; i < kGlHalf; ++i)
        acc += kGlWeight[i] * (f(mid - half * kGlNode[i]) + f(mid + half * kGlNode[i]));
    return half * acc;
}

// Same, but split wide intervals so panels never exceed length 2: a single
// panel cannot resolve an integrand peaked at the origin when the half-period
// is long (small frequencies).
template <typename F>
double gl16_split(double a, double b, F&& f) {
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / 2.0)));
    double acc = 0;
    for (int i = 0; i < panels; ++i)
        acc += gl16(a + (b - a) * i / panels, a + (b - a) * (i + 1) / panels, f);
    return acc;
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(F&& f, double a, double b, double rel_tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = rel_tol * std::max(std::abs(whole), 1e-300);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

IntegralVerdict classify(double exponent) {
    if (exponent > 0.05) return IntegralVerdict::converges;
    if (exponent < -0.05) return IntegralVerdict::diverges;
    return IntegralVerdict::critical;
}

}  // namespace

double graph_dim(double beta) {
    if (beta <= 0 || beta > 2)
        throw std::invalid_argument("graph_dim: need beta in (0,2]");
    return std::min(std::max(2.0 * beta - 1.0, 0.0) / beta, 1.0);
}

double peaks_dim(double alpha, double beta) {
    if (beta <= 0 || beta >= 2)
        throw std::invalid_argument("peaks_dim: need beta in (0,2)");
    return alpha <= 1.0 / beta ? 1.0 : 0.0;
}

double peaks_dim_brownian(double alpha) { return alpha <= 1.0 ? 1.0 : 0.0; }

std::complex<double> CharacteristicExponent::operator()(std::span<const double> z) const {
    if (kind == Kind::user) return fn(z);
    double s = 0;
    for (double c : z) s += c * c;
    return {std::pow(s, 0.5 * beta), 0.0};
}

CharacteristicExponent CharacteristicExponent::stable_exponent(double beta) {
    if (beta <= 0 || beta > 2)
        throw std::invalid_argument("stable exponent: need beta in (0,2]");
    CharacteristicExponent psi;
    psi.kind = Kind::stable;
    psi.beta = beta;
    return psi;
}

double LaplaceExponent::operator()(double y) const {
    if (y < 0) throw std::invalid_argument("Laplace exponent: need y >= 0");
    return kind == Kind::power ? std::pow(y, rho) : fn(y);
}

LaplaceExponent LaplaceExponent::power(double rho) {
    if (rho <= 0 || rho > 1)
        throw std::invalid_argument("Laplace exponent: power index must be in (0,1]");
    LaplaceExponent phi;
    phi.kind = Kind::power;
    phi.rho = rho;
    return phi;
}

LaplaceExponent LaplaceExponent::user(std::function<double(double)> fn) {
    LaplaceExponent phi;
    phi.kind = Kind::user;
    phi.fn = std::move(fn);
    return phi;
}

SubordinatorDimResult subordinator_range_dim(const LaplaceExponent& phi) {
    if (phi.kind == LaplaceExponent::Kind::power)
        return {std::clamp(phi.rho, 0.0, 1.0), 0.0};

    // Growth exponent of Phi near 0, read off a dyadic log grid y = 2^-k.
    constexpr int kLo = 10, kHi = 40;
    double val[kHi - kLo + 2];
    for (int k = kLo; k <= kHi + 1; ++k) {
        const double v = phi(std::ldexp(1.0, -k));
        if (!(v > 0) || !std::isfinite(v))
            throw std::invalid_argument("subordinator_range_dim: Phi must be positive");
        val[k - kLo] = v;
    }
    double sum = 0, mn = 1e300, mx = -1e300;
    for (int k = kLo; k <= kHi; ++k) {
        if (val[k - kLo + 1] > val[k - kLo] * (1.0 + 1e-9))
            throw std::invalid_argument("subordinator_range_dim: Phi not nondecreasing");
        const double slope = std::log2(val[k - kLo]) - std::log2(val[k - kLo + 1]);
        sum += slope;
        mn = std::min(mn, slope);
        mx = std::max(mx, slope);
    }
    SubordinatorDimResult out;
    out.spread = mx - mn;
    if (out.spread > 0.05) return out;  // no clean power behaviour at 0
    out.value = std::clamp(sum / (kHi - kLo + 1), 0.0, 1.0);
    return out;
}

std::string to_string(IntegralVerdict v) {
    switch (v) {
        case IntegralVerdict::converges: return "converges";
        case IntegralVerdict::diverges: return "diverges";
        case IntegralVerdict::critical: return "critical";
    }
    return "critical";
}

nlohmann::json ConvergenceVerdict::to_json() const {
    nlohmann::json j;
    j["criterion"] = criterion;
    j["critical_alpha"] = critical_alpha;
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& p : probes) {
        nlohmann::json q;
        q["alpha"] = p.alpha;
        q["verdict"] = to_string(p.verdict);
        q["exponent"] = p.exponent;
        ps.push_back(q);
    }
    j["probes"] = ps;
    j["non_asymptotic"] = non_asymptotic;
    j["truncation_bias"] = truncation_bias;
    return j;
}

namespace {

// Direction-averaged Re(1/Psi) sampled on Gauss nodes of dyadic radial
// shells [2^-k-1, 2^-k]; one evaluation pass serves every probed alpha.
struct ShellTable {
    static constexpr int kShells = 36;
    // log-radius nodes and h values, 16 per shell
    double s[kShells][2 * kGlHalf];
    double h[kShells][2 * kGlHalf];

    // I_k(alpha) = int over shell k of h(r) r^{alpha-1} dr
    double shell_integral(int k, double alpha) const {
        double acc = 0;
        for (int i = 0; i < 2 * kGlHalf; ++i)
            acc += kGlWeight[i % kGlHalf] * h[k][i] * std::exp(alpha * s[k][i]);
        return 0.25 * kLn2 * acc;
    }

    // fitted geometric decay rate of I_k(alpha) over the innermost shells
    double exponent(double alpha) const {
        double acc = 0;
        int m = 0;
        for (int k = kShells - 8; k < kShells - 1; ++k) {
            const double a = shell_integral(k, alpha);
            const double b = shell_integral(k + 1, alpha);
            if (!(a > 0) || !(b > 0))
                throw std::domain_error("fourier_alpha_c: degenerate shell integral");
            acc += std::log2(a / b);
            ++m;
        }
        return acc / m;
    }
};

ShellTable build_shell_table(const CharacteristicExponent& psi, int d) {
    std::vector<std::array<double, kMaxDim>> dirs;
    for (int j = 0; j < d; ++j) {
        std::array<double, kMaxDim> u{};
        u[static_cast<std::size_t>(j)] = 1.0;
        dirs.push_back(u);
        u[static_cast<std::size_t>(j)] = -1.0;
        dirs.push_back(u);
    }
    if (d > 1) {
        std::array<double, kMaxDim> u{};
        const double inv = 1.0 / std::sqrt(static_cast<double>(d));
        for (int j = 0; j < d; ++j) u[static_cast<std::size_t>(j)] = inv;
        dirs.push_back(u);
        for (int j = 0; j < d; ++j) u[static_cast<std::size_t>(j)] = -inv;
        dirs.push_back(u);
    }

    ShellTable tab;
    double z[kMaxDim];
    for (int k = 0; k < ShellTable::kShells; ++k) {
        const double lo = -(k + 1) * kLn2, hi = -k * kLn2;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int i = 0; i < 2 * kGlHalf; ++i) {
            const double sgn = i < kGlHalf ? -1.0 : 1.0;
            const double s = mid + sgn * half * kGlNode[i % kGlHalf];
            const double r = std::exp(s);
            double hsum = 0;
            for (const auto& u : dirs) {
                for (int j = 0; j < d; ++j) z[j] = r * u[static_cast<std::size_t>(j)];
                const std::complex<double> v =
                    psi(std::span<const double>(z, static_cast<std::size_t>(d)));
                if (!(std::abs(v) > 0) || !std::isfinite(v.real()) ||
                    !std::isfinite(v.imag()))
                    throw std::domain_error(
                        "fourier_alpha_c: Psi vanishes or is not finite on a probe point");
                hsum += (1.0 / v).real();
            }
            tab.s[k][i] = s;
            tab.h[k][i] = hsum / static_cast<double>(dirs.size());
        }
    }
    return tab;
}

}  // namespace

ConvergenceVerdict fourier_alpha_c(const CharacteristicExponent& psi, int d,
                                   std::span<const double> alpha_grid) {
    if (d < 1 || d > kMaxDim)
        throw std::invalid_argument("fourier_alpha_c: d out of range");
    const ShellTable tab = build_shell_table(psi, d);

    // The alpha = d case is the transience integral itself; a process that
    // fails it has no finite potential to probe.
    if (tab.exponent(static_cast<double>(d)) <= 0.05)
        throw std::domain_error(
            "fourier_alpha_c: transience integral does not converge (recurrent "
            "process)");

    ConvergenceVerdict out;
    out.criterion = "fourier";
    for (double a : alpha_grid) {
        ConvergenceProbe p;
        p.alpha = a;
        p.exponent = tab.exponent(a);
        p.verdict = classify(p.exponent);
        out.probes.push_back(p);
    }

    // The decay rate grows by delta when alpha grows by delta, so the root is
    // well bracketed; bisect for the crossover.
    double lo = -2.0, hi = d + 4.0;
    double flo = tab.exponent(lo), fhi = tab.exponent(hi);
    if (flo >= 0) {
        out.critical_alpha = lo;
    } else if (fhi <= 0) {
        out.critical_alpha = hi;
    } else {
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (tab.exponent(mid) > 0)
                hi = mid;
            else
                lo = mid;
        }
        out.critical_alpha = 0.5 * (lo + hi);
    }
    return out;
}

ConvergenceVerdict potential_alpha_c_mc(McProcess kind, double index, int d, int n_max,
                                        int replicas, std::uint64_t seed, double dt) {
    if (replicas < 1) throw std::invalid_argument("potential_alpha_c_mc: replicas >= 1");
    if (n_max < 0 || dt <= 0)
        throw std::invalid_argument("potential_alpha_c_mc: need n_max >= 0, dt > 0");

    PathSpec spec;
    spec.d = d;
    spec.dt = dt;
    double b;  // radius 2^n is reached around time 2^{b n}
    switch (kind) {
        case McProcess::symmetric_stable:
            if (index <= 0 || index >= 2)
                throw std::invalid_argument("potential_alpha_c_mc: stable index in (0,2)");
            if (index >= d)
                throw std::domain_error(
                    "potential_alpha_c_mc: recurrent process (index >= d)");
            spec.kind = PathKind::symmetric_stable;
            spec.index = index;
            b = index;
            break;
        case McProcess::brownian:
            if (d < 3)
                throw std::domain_error(
                    "potential_alpha_c_mc: Brownian motion is recurrent for d < 3");
            spec.kind = PathKind::brownian;
            spec.index = 2.0;
            b = 2.0;
            break;
        case McProcess::stable_subordinator:
            if (d != 1)
                throw std::invalid_argument("potential_alpha_c_mc: subordinator needs d=1");
            spec.kind = PathKind::stable_subordinator;
            spec.index = index;
            b = index;
            break;
        default: throw std::invalid_argument("potential_alpha_c_mc: unknown process");
    }
    spec.T = std::exp2(b * (n_max + 2));
    if (spec.T / dt > static_cast<double>(kStepGuard))
        throw std::invalid_argument(
            "potential_alpha_c_mc: horizon needs more than 2^31 steps; lower n_max or "
            "raise dt");

    std::vector<double> occ(static_cast<std::size_t>(n_max) + 1, 0.0);
    double late_mass = 0, total_mass = 0;
    const double late_start = 0.9 * spec.T;
    for (int r = 0; r < replicas; ++r) {
        spec.seed = rng::replica_seed(seed, static_cast<std::uint64_t>(r));
        PathSimulator sim(spec);
        double x[kMaxDim] = {};
        std::int64_t cell[kMaxDim] = {};
        double t = 0;
        // the t = 0 sample sits in the origin cell
        occ[0] += dt;
        total_mass += dt;
        while (sim.next(t, std::span<double>(x, static_cast<std::size_t>(d)))) {
            bool in_view = true;
            for (int j = 0; j < d; ++j) {
                if (!(std::abs(x[j]) < 0x1.0p60)) {
                    in_view = false;
                    break;
                }
                cell[j] = static_cast<std::int64_t>(std::floor(x[j]));
            }
            if (!in_view) continue;
            const int s = shell_of(std::span<const std::int64_t>(
                cell, static_cast<std::size_t>(d)));
            if (s > n_max) continue;
            occ[static_cast<std::size_t>(s)] += dt;
            total_mass += dt;
            if (t > late_start) late_mass += dt;
        }
    }

    ConvergenceVerdict out;
    out.criterion = "potential-mc";
    out.truncation_bias = total_mass > 0 ? late_mass / total_mass : 0.0;

    const double inv_r = 1.0 / static_cast<double>(replicas);
    if (n_max == 0) {
        out.non_asymptotic = true;
        out.critical_alpha = log2_plus(occ[0] * inv_r);
        ConvergenceProbe p;
        p.alpha = 0;
        p.exponent = out.critical_alpha;
        p.verdict = IntegralVerdict::critical;
        out.probes.push_back(p);
        return out;
    }

    const FitWindow w = default_fit_window(n_max);
    double best = -1e300;
    for (int n = 1; n <= n_max; ++n) {
        const double u = occ[static_cast<std::size_t>(n)] * inv_r;
        ConvergenceProbe p;
        p.alpha = static_cast<double>(n);
        if (u > 0) {
            p.exponent = std::log2(u) / n;
        } else if (w.contains(n)) {
            throw std::runtime_error(
                "potential_alpha_c_mc: empty occupation shell inside the fit window; "
                "raise replicas");
        } else {
            p.exponent = 0;
        }
        if (w.contains(n)) best = std::max(best, p.exponent);
        out.probes.push_back(p);
    }
    out.critical_alpha = best;
    for (auto& p : out.probes)
        p.verdict = p.exponent >= best - 0.05 ? IntegralVerdict::diverges
                                              : IntegralVerdict::converges;
    return out;
}

double bessel_k(double nu, double w) {
    if (w <= 0) throw std::invalid_argument("bessel_k: need w > 0");
    nu = std::abs(nu);  // K_{-nu} = K_nu
    const auto f = [nu, w](double u) {
        return std::exp(-w * std::cosh(u)) * std::cosh(nu * u);
    };
    // Truncate once the integrand is ~e^-45 relative to its u = 0 value.
    double u_max = 1.0;
    while (u_max < 300.0 && w * (std::cosh(u_max) - 1.0) - nu * u_max < 45.0)
        u_max += 0.5;
    // Split at u = 1 so the peak near 0 and the decaying tail are refined
    // independently.
    const double split = std::min(1.0, u_max);
    double out = integrate(f, 0.0, split, 1e-12);
    if (u_max > split) out += integrate(f, split, u_max, 1e-12);
    return out;
}

double verify_lemma_ft(double alpha, std::span<const double> z_grid) {
    if (alpha <= 1 || alpha >= 3)
        throw std::invalid_argument("verify_lemma_ft: need alpha in (1,3)");
    if (z_grid.size() < 2)
        throw std::invalid_argument("verify_lemma_ft: need at least two z values");

    const auto transform = [alpha](double z) {
        // 2 int_0^inf cos(z x) (1+x^2)^{-alpha/2} dx, summed over half-periods
        // of the cosine with averaging acceleration for the alternating tail.
        const auto g = [alpha, z](double x) {
            return std::cos(z * x) * std::pow(1.0 + x * x, -0.5 * alpha);
        };
        double head = 0;
        double x0 = 0, x1 = 0.5 * 3.14159265358979323846 / z;
        constexpr int kDirect = 40, kTail = 24;
        for (int m = 0; m < kDirect; ++m) {
            head += gl16_split(x0, x1, g);
            x0 = x1;
            x1 += 3.14159265358979323846 / z;
        }
        double partial[kTail];
        double s = head;
        for (int m = 0; m < kTail; ++m) {
            s += gl16_split(x0, x1, g);
            partial[m] = s;
            x0 = x1;
            x1 += 3.14159265358979323846 / z;
        }
        for (int lvl = kTail - 1; lvl > 0; --lvl)
            for (int i = 0; i < lvl; ++i) partial[i] = 0.5 * (partial[i] + partial[i + 1]);
        return 2.0 * partial[0];
    };

    const double nu = 0.5 * (1.0 - alpha);
    const auto model = [nu](double z) { return bessel_k(nu, z) / std::pow(z, nu); };

    const double z0 = z_grid[0];
    if (!(z0 > 0)) throw std::invalid_argument("verify_lemma_ft: z values must be > 0");
    const double c = transform(z0) / model(z0);

    double worst = 0;
    for (std::size_t i = 1; i < z_grid.size(); ++i) {
        const double z = z_grid[i];
        if (!(z > 0)) throw std::invalid_argument("verify_lemma_ft: z values must be > 0");
        const double direct = transform(z);
        const double predicted = c * model(z);
        worst = std::max(worst, std::abs(direct - predicted) / std::abs(direct));
    }
    return worst;
}

}  // namespace macrodim
