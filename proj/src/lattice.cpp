#include "macrodim/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace macrodim {

int PixelSet::coord_bits(int dim) {
    switch (dim) {
        case 1: return 62;
        case 2: return 31;
        case 3: return 21;
        case 4: return 16;
        default: throw std::invalid_argument("PixelSet: dimension must be in [1,4]");
    }
}

PixelSet::PixelSet(int dim, int n_max) : dim_(dim), n_max_(n_max), bits_(coord_bits(dim)) {
    if (n_max < 0 || n_max > max_shell(dim))
        throw std::invalid_argument("PixelSet: n_max out of range for dimension " +
                                    std::to_string(dim));
    shell_counts_.counts.assign(static_cast<std::size_t>(n_max) + 1, 0);
}

bool PixelSet::in_range(std::span<const std::int64_t> coords) const {
    return radius_of(coords) <= (std::uint64_t{1} << n_max_);
}

std::uint64_t PixelSet::pack(std::span<const std::int64_t> coords) const {
    const std::uint64_t half = std::uint64_t{1} << (bits_ - 1);
    const std::uint64_t mask = (std::uint64_t{1} << bits_) - 1;
    std::uint64_t key = 0;
    for (int j = 0; j < dim_; ++j)
        key |= ((static_cast<std::uint64_t>(coords[j]) + half) & mask) << (j * bits_);
    return key;
}

void PixelSet::unpack(std::uint64_t key, std::int64_t* coords) const {
    const std::uint64_t half = std::uint64_t{1} << (bits_ - 1);
    const std::uint64_t mask = (std::uint64_t{1} << bits_) - 1;
    for (int j = 0; j < dim_; ++j)
        coords[j] = static_cast<std::int64_t>(((key >> (j * bits_)) & mask)) -
                    static_cast<std::int64_t>(half);
}

bool PixelSet::insert(std::span<const std::int64_t> coords) {
    if (static_cast<int>(coords.size()) != dim_)
        throw std::invalid_argument("PixelSet: dimension mismatch in stream");
    if (!in_range(coords)) {
        ++discarded_;
        return false;
    }
    if (!cells_.insert(pack(coords)).second) return false;
    ++shell_counts_.counts[static_cast<std::size_t>(shell_of(coords))];
    return true;
}

bool PixelSet::insert_floor(std::span<const double> point) {
    if (static_cast<int>(point.size()) != dim_)
        throw std::invalid_argument("PixelSet: dimension mismatch in stream");
    std::int64_t coords[kMaxDim];
    for (int j = 0; j < dim_; ++j) {
        const double f = std::floor(point[j]);
        // Values beyond any representable shell are plain discards.
        if (std::abs(f) > 0x1.0p62 || std::isnan(f)) {
            ++discarded_;
            return false;
        }
        coords[j] = static_cast<std::int64_t>(f);
    }
    return insert(std::span<const std::int64_t>(coords, static_cast<std::size_t>(dim_)));
}

bool PixelSet::contains(std::span<const std::int64_t> coords) const {
    if (static_cast<int>(coords.size()) != dim_ || !in_range(coords)) return false;
    return cells_.contains(pack(coords));
}

int PixelSet::top_shell() const {
    for (int n = n_max_; n >= 0; --n)
        if (shell_counts_.counts[static_cast<std::size_t>(n)] > 0) return n;
    return -1;
}

void PixelSet::merge(const PixelSet& other) {
    if (other.dim_ != dim_ || other.n_max_ != n_max_)
        throw std::invalid_argument("PixelSet::merge: incompatible sets");
    std::int64_t coords[kMaxDim];
    for (std::uint64_t key : other.cells_) {
        if (cells_.insert(key).second) {
            unpack(key, coords);
            ++shell_counts_.counts[static_cast<std::size_t>(
                shell_of({coords, static_cast<std::size_t>(dim_)}))];
        }
    }
    discarded_ += other.discarded_;
}

PixelSet PixelSet::intersect(const PixelSet& other) const {
    if (other.dim_ != dim_ || other.n_max_ != n_max_)
        throw std::invalid_argument("PixelSet::intersect: incompatible sets");
    PixelSet out(dim_, n_max_);
    const PixelSet& small = size() <= other.size() ? *this : other;
    const PixelSet& large = size() <= other.size() ? other : *this;
    std::int64_t coords[kMaxDim];
    for (std::uint64_t key : small.cells_) {
        if (large.cells_.contains(key)) {
            out.cells_.insert(key);
            unpack(key, coords);
            ++out.shell_counts_.counts[static_cast<std::size_t>(
                shell_of({coords, static_cast<std::size_t>(dim_)}))];
        }
    }
    return out;
}

void PixelSet::write_points(std::ostream& os) const {
    // canonical (sorted) order: hash iteration order is salted per process
    std::vector<std::uint64_t> keys(cells_.begin(), cells_.end());
    std::sort(keys.begin(), keys.end());
    std::int64_t coords[kMaxDim];
    for (std::uint64_t key : keys) {
        unpack(key, coords);
        for (int j = 0; j < dim_; ++j) {
            if (j) os << ' ';
            os << coords[j];
        }
        os << '\n';
    }
}

PixelSet PixelSet::read_points(std::istream& is, int dim, int n_max) {
    PixelSet out(dim, n_max);
    std::string line;
    std::vector<std::int64_t> coords;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        coords.clear();
        std::int64_t c;
        while (ls >> c) coords.push_back(c);
        out.insert(coords);
    }
    return out;
}

PixelSet pixelize(std::span<const std::vector<double>> points, int dim, int n_max) {
    PixelSet out(dim, n_max);
    for (const auto& p : points) out.insert_floor(p);
    return out;
}

ShellCounts shell_counts(const PixelSet& pixels) { return pixels.shell_counts(); }

void write_shell_counts_csv(std::ostream& os, const ShellCounts& sc) {
    os << "shell,count,cumulative\n";
    const auto cum = sc.cumulative();
    for (std::size_t n = 0; n < sc.counts.size(); ++n)
        os << n << ',' << sc.counts[n] << ',' << cum[n] << '\n';
}

ShellCounts read_shell_counts_csv(std::istream& is) {
    ShellCounts sc;
    std::string line;
    if (!std::getline(is, line) || line.rfind("shell,count", 0) != 0)
        throw std::runtime_error("shell counts CSV: missing header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::getline(ls, field, ',');
        const std::size_t n = std::stoull(field);
        std::getline(ls, field, ',');
        if (sc.counts.size() <= n) sc.counts.resize(n + 1, 0);
        sc.counts[n] = std::stoull(field);
    }
    return sc;
}

}  // namespace macrodim
