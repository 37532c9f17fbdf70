#pragma once

#include <absl/container/flat_hash_set.h>

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

// Dyadic shell geometry on Z^d and the pixelization map.
//
// All boxes are half-open: B(0;r) = [-r, r)^d, so the shells
//   S_0 = B(0;1),  S_n = B(0;2^n) \ B(0;2^{n-1})  (n >= 1)
// partition Z^d exactly.
namespace macrodim {

inline constexpr int kMaxDim = 4;

// Smallest dyadic radius 2^n with x in B(0;2^n) is governed by
// rho(x) = max_j (x_j >= 0 ? x_j + 1 : -x_j).
inline std::uint64_t radius_of(std::span<const std::int64_t> coords) {
    std::uint64_t rho = 1;
    for (std::int64_t c : coords) {
        const std::uint64_t r = c >= 0 ? static_cast<std::uint64_t>(c) + 1
                                       : static_cast<std::uint64_t>(-c);
        if (r > rho) rho = r;
    }
    return rho;
}

// Index n of the unique shell S_n containing x.
inline int shell_of(std::span<const std::int64_t> coords) {
    return std::bit_width(radius_of(coords) - 1);
}

// |B(0;2^n) ∩ Z^d| = 2^{d(n+1)}.
inline std::uint64_t ball_cells(int d, int n) { return std::uint64_t{1} << (d * (n + 1)); }

// |S_n ∩ Z^d|.
inline std::uint64_t shell_cells(int d, int n) {
    return n == 0 ? ball_cells(d, 0) : ball_cells(d, n) - ball_cells(d, n - 1);
}

// Per-shell occupancy of a pixel set, n = 0..n_max.
struct ShellCounts {
    std::vector<std::uint64_t> counts;

    int n_max() const { return static_cast<int>(counts.size()) - 1; }

    // Ball counts |pix ∩ B(0;2^n)| = sum of shell counts up to n.
    std::vector<std::uint64_t> cumulative() const {
        std::vector<std::uint64_t> cum(counts.size());
        std::uint64_t acc = 0;
        for (std::size_t n = 0; n < counts.size(); ++n) cum[n] = (acc += counts[n]);
        return cum;
    }

    std::uint64_t total() const {
        std::uint64_t acc = 0;
        for (auto c : counts) acc += c;
        return acc;
    }
};

// Finite set of lattice cells inside B(0;2^{n_max}), with shell counts kept
// incrementally. Coordinates are packed into one 64-bit key, so capacity in
// n_max depends on the dimension (see coord_bits).
class PixelSet {
  public:
    PixelSet(int dim, int n_max);

    static int coord_bits(int dim);
    // Largest supported n_max for a given dimension.
    static int max_shell(int dim) { return coord_bits(dim) - 2; }

    int dim() const { return dim_; }
    int n_max() const { return n_max_; }
    std::uint64_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    // Points seen by insert() that fell outside B(0;2^{n_max}).
    std::uint64_t discarded() const { return discarded_; }

    // Inserts a lattice point; returns false if out of range (tallied) or a
    // duplicate. Out-of-range points are dropped, never an error.
    bool insert(std::span<const std::int64_t> coords);
    // floor() of a continuous point, then insert.
    bool insert_floor(std::span<const double> point);

    bool contains(std::span<const std::int64_t> coords) const;

    const ShellCounts& shell_counts() const { return shell_counts_; }
    // Top non-empty shell, or -1 if empty.
    int top_shell() const;

    // Set union; other must have identical dim and n_max.
    void merge(const PixelSet& other);
    PixelSet intersect(const PixelSet& other) const;

    template <typename F>
    void for_each(F&& f) const {
        std::int64_t coords[kMaxDim];
        for (std::uint64_t key : cells_) {
            unpack(key, coords);
            f(std::span<const std::int64_t>(coords, static_cast<std::size_t>(dim_)));
        }
    }

    void reserve(std::uint64_t n) { cells_.reserve(n); }

    // One point per line, space-separated signed integers, LF endings.
    void write_points(std::ostream& os) const;
    static PixelSet read_points(std::istream& is, int dim, int n_max);

  private:
    std::uint64_t pack(std::span<const std::int64_t> coords) const;
    void unpack(std::uint64_t key, std::int64_t* coords) const;
    bool in_range(std::span<const std::int64_t> coords) const;

    int dim_;
    int n_max_;
    int bits_;
    std::uint64_t discarded_ = 0;
    absl::flat_hash_set<std::uint64_t> cells_;
    ShellCounts shell_counts_;
};

// Floor-maps a stream of continuous points into a PixelSet. All points must
// share dimension d; points outside B(0;2^{n_max}) are discarded (tallied).
PixelSet pixelize(std::span<const std::vector<double>> points, int dim, int n_max);

ShellCounts shell_counts(const PixelSet& pixels);

void write_shell_counts_csv(std::ostream& os, const ShellCounts& sc);
ShellCounts read_shell_counts_csv(std::istream& is);

}  // namespace macrodim
