#include "macrodim/levy.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace macrodim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kPathStream = 0x70617468ULL;

// Chambers-Mallows-Stuck, symmetric case: with U uniform on (-pi/2, pi/2) and
// E unit exponential,
//   sin(beta U) / cos(U)^{1/beta} * (cos((1-beta) U)/E)^{(1-beta)/beta}
// has characteristic function exp(-|z|^beta).
double stable_standard(double beta, double u, double e) {
    const double U = kPi * (u - 0.5);
    if (beta == 1.0) return std::tan(U);
    return std::sin(beta * U) / std::pow(std::cos(U), 1.0 / beta) *
           std::pow(std::cos((1.0 - beta) * U) / e, (1.0 - beta) / beta);
}

// Kanter's representation: with U uniform on (0, pi) and E unit exponential,
//   (A(U)/E)^{(1-rho)/rho},
//   A(u) = [sin(rho u)^rho sin((1-rho) u)^{1-rho} / sin(u)]^{1/(1-rho)},
// has Laplace transform exp(-lambda^rho).
double subordinator_standard(double rho, double u, double e) {
    const double U = kPi * u;
    const double A = std::pow(std::pow(std::sin(rho * U), rho) *
                                  std::pow(std::sin((1.0 - rho) * U), 1.0 - rho) /
                                  std::sin(U),
                              1.0 / (1.0 - rho));
    return std::pow(A / e, (1.0 - rho) / rho);
}

}  // namespace

double sample_stable_increment(double beta, double dt, const rng::Stream& s,
                               std::uint64_t ctr) {
    if (beta <= 0 || beta > 2 || dt <= 0)
        throw std::invalid_argument("sample_stable_increment: need beta in (0,2], dt > 0");
    if (beta == 2.0) return std::sqrt(2.0 * dt) * s.normal(ctr);
    const double u = s.uniform(2 * ctr);
    const double e = s.exponential(2 * ctr + 1);
    return std::pow(dt, 1.0 / beta) * stable_standard(beta, u, e);
}

double sample_subordinator_increment(double rho, double dt, const rng::Stream& s,
                                     std::uint64_t ctr) {
    if (rho <= 0 || rho >= 1 || dt <= 0)
        throw std::invalid_argument(
            "sample_subordinator_increment: need rho in (0,1), dt > 0");
    const double u = s.uniform(2 * ctr);
    const double e = s.exponential(2 * ctr + 1);
    return std::pow(dt, 1.0 / rho) * subordinator_standard(rho, u, e);
}

std::uint64_t PathSpec::steps() const {
    return static_cast<std::uint64_t>(std::llround(T / dt));
}

void PathSpec::validate() const {
    if (d < 1 || d > kMaxDim - 1)
        throw std::invalid_argument("PathSpec: d out of range");
    if (T < 0 || dt <= 0) throw std::invalid_argument("PathSpec: need T >= 0, dt > 0");
    if (steps() > kStepGuard)
        throw std::invalid_argument("PathSpec: step guard exceeded (T/dt > 2^31)");
    switch (kind) {
        case PathKind::symmetric_stable:
            if (index <= 0 || index > 2)
                throw std::invalid_argument("PathSpec: stable index must be in (0,2]");
            break;
        case PathKind::brownian:
            break;
        case PathKind::stable_subordinator:
            if (index <= 0 || index >= 1)
                throw std::invalid_argument("PathSpec: subordinator index must be in (0,1)");
            if (d != 1)
                throw std::invalid_argument("PathSpec: subordinators are 1-dimensional");
            break;
    }
}

PathSimulator::PathSimulator(const PathSpec& spec)
    : spec_(spec), stream_(spec.seed, kPathStream), n_steps_(spec.steps()) {
    spec_.validate();
}

bool PathSimulator::next(double& t, std::span<double> x) {
    if (step_ >= n_steps_) return false;
    ++step_;
    t = static_cast<double>(step_) * spec_.dt;
    const std::uint64_t base = (step_ - 1) * static_cast<std::uint64_t>(spec_.d);
    for (int j = 0; j < spec_.d; ++j) {
        double inc;
        switch (spec_.kind) {
            case PathKind::symmetric_stable:
                inc = sample_stable_increment(spec_.index, spec_.dt, stream_, base + j);
                break;
            case PathKind::brownian:
                inc = sample_stable_increment(2.0, spec_.dt, stream_, base + j);
                break;
            case PathKind::stable_subordinator:
                inc = sample_subordinator_increment(spec_.index, spec_.dt, stream_,
                                                    base + j);
                break;
        }
        x_[static_cast<std::size_t>(j)] += inc;
        x[static_cast<std::size_t>(j)] = x_[static_cast<std::size_t>(j)];
    }
    return true;
}

PixelSet range_pixels(const PathSpec& spec, int n_max) {
    PathSimulator sim(spec);
    PixelSet out(spec.d, n_max);
    std::array<double, kMaxDim> x{};
    const std::span<double> xs(x.data(), static_cast<std::size_t>(spec.d));
    out.insert_floor(std::span<const double>(xs));  // X_0 = 0
    double t;
    while (sim.next(t, xs)) out.insert_floor(std::span<const double>(xs));
    return out;
}

PixelSet graph_pixels(const PathSpec& spec, int n_max) {
    PathSimulator sim(spec);
    PixelSet out(spec.d + 1, n_max);
    std::array<double, kMaxDim> pt{};
    const std::span<double> xs(pt.data() + 1, static_cast<std::size_t>(spec.d));
    pt[0] = 0;
    out.insert_floor(std::span<const double>(pt.data(), static_cast<std::size_t>(spec.d + 1)));
    while (sim.next(pt[0], xs))
        out.insert_floor(
            std::span<const double>(pt.data(), static_cast<std::size_t>(spec.d + 1)));
    return out;
}

PixelSet zero_set_pixels(double beta, double T, std::uint64_t seed, int n_max) {
    if (beta <= 1 || beta > 2)
        throw std::invalid_argument(
            "zero_set_pixels: need beta in (1,2]; the zero set is degenerate otherwise");
    PathSpec spec;
    spec.kind = PathKind::stable_subordinator;
    spec.index = 1.0 - 1.0 / beta;
    spec.d = 1;
    spec.T = T;
    spec.dt = 1.0;
    spec.seed = seed;
    return range_pixels(spec, n_max);
}

double PeaksConfig::operator()(double t, double beta) const {
    switch (envelope) {
        case Envelope::stable:
            return std::pow(t, 1.0 / beta) * std::pow(std::log2(t), alpha);
        case Envelope::brownian:
            return alpha * std::sqrt(2.0 * t * std::log(std::log(t)));
    }
    return 0;
}

PixelSet tall_peaks_pixels(const PathSpec& spec, const PeaksConfig& cfg, int n_max) {
    if (spec.kind == PathKind::stable_subordinator)
        throw std::invalid_argument("tall_peaks_pixels: need a stable or brownian path");
    if (spec.d != 1)
        throw std::invalid_argument("tall_peaks_pixels: peaks are defined for d = 1");
    if (spec.dt > 1.0)
        throw std::invalid_argument("tall_peaks_pixels: need dt <= 1");
    const double beta = spec.kind == PathKind::brownian ? 2.0 : spec.index;
    PathSimulator sim(spec);
    PixelSet out(1, n_max);
    double t, x;
    std::int64_t last_cell = -1;
    while (sim.next(t, std::span<double>(&x, 1))) {
        if (t < 3.0) continue;  // envelope domain starts above e
        const auto cell = static_cast<std::int64_t>(std::floor(t));
        if (cell == last_cell) continue;  // this time pixel is already lit
        if (x >= cfg(t, beta)) {
            const double tc = static_cast<double>(cell);
            out.insert_floor(std::span<const double>(&tc, 1));
            last_cell = cell;
        }
    }
    return out;
}

void write_path_csv(std::ostream& os, const PathSpec& spec) {
    PathSimulator sim(spec);
    std::array<double, kMaxDim> x{};
    const std::span<double> xs(x.data(), static_cast<std::size_t>(spec.d));
    os << "t,value\n0,0\n";
    double t;
    while (sim.next(t, xs)) os << t << ',' << x[0] << '\n';
}

}  // namespace macrodim
