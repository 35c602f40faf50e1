#include "ftmm/hypercube.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ftmm/errors.hpp"

namespace ftmm {

double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ContractViolation("euclidean_distance: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double d = a[t] - b[t];
        s += d * d;
    }
    return std::sqrt(s);
}

Hypercube::Hypercube(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty()) {
        throw ContractViolation("hypercube must have dimension >= 1");
    }
    if (lower_.size() != upper_.size()) {
        throw ContractViolation("hypercube lower/upper dimension mismatch");
    }
    for (std::size_t t = 0; t < lower_.size(); ++t) {
        if (!std::isfinite(lower_[t]) || !std::isfinite(upper_[t]) || !(lower_[t] < upper_[t])) {
            throw ContractViolation("hypercube requires finite lower < upper on axis " +
                                    std::to_string(t));
        }
    }
}

Hypercube Hypercube::cube(std::size_t dimension, double lo, double hi) {
    return Hypercube(Point(dimension, lo), Point(dimension, hi));
}

Point Hypercube::center() const {
    Point c(dimension());
    for (std::size_t t = 0; t < c.size(); ++t) c[t] = 0.5 * (lower_[t] + upper_[t]);
    return c;
}

double Hypercube::diameter() const {
    return euclidean_distance(lower_, upper_);
}

double Hypercube::volume() const {
    double v = 1.0;
    for (std::size_t t = 0; t < dimension(); ++t) v *= upper_[t] - lower_[t];
    return v;
}

bool Hypercube::contains(std::span<const double> x) const {
    if (x.size() != dimension()) return false;
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (!(x[t] >= lower_[t] && x[t] <= upper_[t])) return false;
    }
    return true;
}

bool Hypercube::on_boundary(std::span<const double> x) const {
    if (!contains(x)) return false;
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (x[t] == lower_[t] || x[t] == upper_[t]) return true;
    }
    return false;
}

double Hypercube::max_distance_from(std::span<const double> p) const {
    if (p.size() != dimension()) {
        throw ContractViolation("max_distance_from: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t t = 0; t < p.size(); ++t) {
        const double d = std::max(std::abs(p[t] - lower_[t]), std::abs(p[t] - upper_[t]));
        s += d * d;
    }
    return std::sqrt(s);
}

double Hypercube::min_distance_from(std::span<const double> p) const {
    if (p.size() != dimension()) {
        throw ContractViolation("min_distance_from: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t t = 0; t < p.size(); ++t) {
        const double c = std::clamp(p[t], lower_[t], upper_[t]);
        const double d = p[t] - c;
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace ftmm
