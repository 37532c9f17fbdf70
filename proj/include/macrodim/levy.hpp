#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>

#include "macrodim/lattice.hpp"
#include "macrodim/rng.hpp"

// Sample paths of symmetric stable processes, Brownian motion and stable
// subordinators, and the pixel streams of the random sets they carry:
// range, graph, zero set, tall peaks.
//
// Normalizations, per coordinate:
//   symmetric stable:   E exp(izX_t) = exp(-t|z|^beta),  beta in (0,2]
//   brownian:           the beta = 2 case (variance 2t), Gaussian branch
//   stable subordinator: E exp(-lambda X_t) = exp(-t lambda^rho), rho in (0,1)
namespace macrodim {

enum class PathKind { symmetric_stable, brownian, stable_subordinator };

struct PathSpec {
    PathKind kind = PathKind::brownian;
    double index = 2.0;  // beta for stable kinds, rho for the subordinator
    int d = 1;           // components independent and identically scaled
    double T = 0;        // horizon
    double dt = 1.0;     // resolution
    std::uint64_t seed = 0;

    std::uint64_t steps() const;
    void validate() const;
};

inline constexpr std::uint64_t kStepGuard = std::uint64_t{1} << 31;

// One draw of X_dt for the symmetric beta-stable normalization above.
// Consumes counters 2*ctr and 2*ctr+1 of the stream.
double sample_stable_increment(double beta, double dt, const rng::Stream& s,
                               std::uint64_t ctr);
// One draw of X_dt for a stable subordinator of index rho.
double sample_subordinator_increment(double rho, double dt, const rng::Stream& s,
                                     std::uint64_t ctr);

// Streaming walk over X_{k dt}, k = 1..T/dt. Holds only the current value;
// increments come from a counter RNG keyed on (seed, step, coordinate).
class PathSimulator {
  public:
    explicit PathSimulator(const PathSpec& spec);

    // Advances one step; fills t and x, returns false when past the horizon.
    bool next(double& t, std::span<double> x);

    const PathSpec& spec() const { return spec_; }

  private:
    PathSpec spec_;
    rng::Stream stream_;
    std::uint64_t step_ = 0;
    std::uint64_t n_steps_;
    std::array<double, kMaxDim> x_{};
};

// pix of the range {X_t : 0 <= t <= T} sampled on the dt grid.
PixelSet range_pixels(const PathSpec& spec, int n_max);

// pix of the graph {(t, X_t)}; output dimension d+1. Jumps do not fill
// intermediate cells: the graph is a set of sampled points, not a curve.
PixelSet graph_pixels(const PathSpec& spec, int n_max);

// Zero-set surrogate for a symmetric beta-stable process, beta in (1,2]:
// the range of a stable subordinator of index 1 - 1/beta.
PixelSet zero_set_pixels(double beta, double T, std::uint64_t seed, int n_max);

struct PeaksConfig {
    double alpha = 1.0;
    enum class Envelope { stable, brownian } envelope = Envelope::stable;

    // Defined for t >= e only; stable: t^{1/beta} (Log t)^alpha with Log the
    // base-2 logarithm, brownian: alpha sqrt(2 t log log t).
    double operator()(double t, double beta) const;
};

// Time pixels t with some sample s in [t, t+1), s >= 3, where X_s clears the
// envelope. Output is 1-dimensional (time axis).
PixelSet tall_peaks_pixels(const PathSpec& spec, const PeaksConfig& cfg, int n_max);

// Debug export: CSV "t,value" (first coordinate).
void write_path_csv(std::ostream& os, const PathSpec& spec);

}  // namespace macrodim
