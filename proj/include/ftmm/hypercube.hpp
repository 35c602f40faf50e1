#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ftmm {

using Point = std::vector<double>;

double euclidean_norm(std::span<const double> v);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Axis-aligned box [lower, upper] in R^d. Every algorithm in the library
// operates on one of these; it is always compact.
class Hypercube {
public:
    Hypercube(Point lower, Point upper);

    static Hypercube cube(std::size_t dimension, double lo, double hi);

    std::size_t dimension() const noexcept { return lower_.size(); }
    const Point& lower() const noexcept { return lower_; }
    const Point& upper() const noexcept { return upper_; }
    double width(std::size_t axis) const { return upper_.at(axis) - lower_.at(axis); }

    Point center() const;
    // Euclidean length of the main diagonal.
    double diameter() const;
    double volume() const;

    bool contains(std::span<const double> x) const;
    bool on_boundary(std::span<const double> x) const;

    // Distance from p to the farthest point of the box (always a corner).
    double max_distance_from(std::span<const double> p) const;
    // Distance from p to the nearest point of the box; 0 when p is inside.
    double min_distance_from(std::span<const double> p) const;

    bool operator==(const Hypercube&) const = default;

private:
    Point lower_;
    Point upper_;
};

}  // namespace ftmm
