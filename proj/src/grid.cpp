#include "ftmm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ftmm/errors.hpp"

namespace ftmm {

std::vector<std::size_t> default_resolution(std::size_t dimension) {
    if (dimension == 1) return {4001};
    if (dimension == 2) return {201, 201};
    const auto m = static_cast<std::size_t>(
        std::max(2.0, std::floor(std::pow(1.0e6, 1.0 / static_cast<double>(dimension)))));
    return std::vector<std::size_t>(dimension, m);
}

Grid::Grid(Hypercube domain, std::vector<std::size_t> points_per_axis)
    : domain_(std::move(domain)), counts_(std::move(points_per_axis)) {
    const std::size_t d = domain_.dimension();
    if (counts_.empty()) counts_ = default_resolution(d);
    if (counts_.size() == 1 && d > 1) counts_.assign(d, counts_.front());
    if (counts_.size() != d) {
        throw ContractViolation("grid resolution has " + std::to_string(counts_.size()) +
                                " entries for a " + std::to_string(d) + "-D domain");
    }
    node_count_ = 1;
    for (std::size_t m : counts_) {
        if (m < 2) throw ContractViolation("grid resolution must be >= 2 points per axis");
        if (node_count_ > std::numeric_limits<std::uint64_t>::max() / m) {
            node_count_ = std::numeric_limits<std::uint64_t>::max();
        } else if (node_count_ != std::numeric_limits<std::uint64_t>::max()) {
            node_count_ *= m;
        }
    }
}

std::vector<double> Grid::steps() const {
    std::vector<double> s(dimension());
    for (std::size_t t = 0; t < s.size(); ++t) {
        s[t] = domain_.width(t) / static_cast<double>(counts_[t] - 1);
    }
    return s;
}

double Grid::half_cell_diameter() const {
    return 0.5 * euclidean_norm(steps());
}

std::vector<std::size_t> Grid::multi_index(std::uint64_t flat) const {
    std::vector<std::size_t> idx(dimension());
    for (std::size_t t = dimension(); t-- > 0;) {
        idx[t] = static_cast<std::size_t>(flat % counts_[t]);
        flat /= counts_[t];
    }
    return idx;
}

double Grid::coordinate(std::size_t axis, std::size_t i) const {
    const std::size_t last = counts_[axis] - 1;
    if (i == last) return domain_.upper()[axis];
    const double lo = domain_.lower()[axis];
    return lo + domain_.width(axis) * static_cast<double>(i) / static_cast<double>(last);
}

void Grid::node_into(std::uint64_t flat, std::span<double> out) const {
    for (std::size_t t = dimension(); t-- > 0;) {
        out[t] = coordinate(t, static_cast<std::size_t>(flat % counts_[t]));
        flat /= counts_[t];
    }
}

Point Grid::node(std::uint64_t flat) const {
    Point x(dimension());
    node_into(flat, x);
    return x;
}

}  // namespace ftmm
