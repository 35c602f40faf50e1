#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ftmm/hypercube.hpp"

namespace ftmm {

// Per-axis point counts used when the caller does not choose one:
// 4001 for d = 1, 201 for d = 2, and roughly 10^6 nodes total above that.
std::vector<std::size_t> default_resolution(std::size_t dimension);

// Regular tensor grid over a hypercube, including both endpoints of every
// axis. Nodes are enumerated in lexicographic order of their multi-index with
// axis 0 most significant, so a flat index comparison is a lexicographic one.
class Grid {
public:
    // `points_per_axis` has either one entry (broadcast to every axis) or d
    // entries; an empty list selects default_resolution. Each count must be >= 2.
    Grid(Hypercube domain, std::vector<std::size_t> points_per_axis);

    const Hypercube& domain() const noexcept { return domain_; }
    std::size_t dimension() const noexcept { return domain_.dimension(); }
    const std::vector<std::size_t>& points_per_axis() const noexcept { return counts_; }

    // Saturates at UINT64_MAX rather than overflowing.
    std::uint64_t node_count() const noexcept { return node_count_; }

    std::vector<double> steps() const;
    // Half the diagonal of one grid cell: every point of the domain lies
    // within this distance of some node.
    double half_cell_diameter() const;

    std::vector<std::size_t> multi_index(std::uint64_t flat) const;
    void node_into(std::uint64_t flat, std::span<double> out) const;
    Point node(std::uint64_t flat) const;
    double coordinate(std::size_t axis, std::size_t i) const;

private:
    Hypercube domain_;
    std::vector<std::size_t> counts_;
    std::uint64_t node_count_;
};

}  // namespace ftmm
