#pragma once

#include <vector>

#include "ftmm/ensemble.hpp"
#include "ftmm/functions.hpp"

namespace fixtures {

inline ftmm::CostFunction cone1(double center, double slope = 1.0, double offset = 0.0) {
    return ftmm::CostFunction::cone({center}, slope, offset);
}

inline ftmm::Hypercube interval(double lo = -2.0, double hi = 2.0) { return ftmm::Hypercube({lo}, {hi}); }

// Q = (|x|, |x-1|, |x+1|) on [-2, 2], f = 1; the third function is faulty.
inline ftmm::Ensemble cone_ensemble() {
    return ftmm::Ensemble({cone1(0.0), cone1(1.0), cone1(-1.0)}, 1, interval(), true);
}
inline ftmm::GroundTruth cone_truth() { return ftmm::GroundTruth(3, 1, {2}); }

inline std::vector<ftmm::CostFunction> two_cones(double offset = 0.0) {
    return {cone1(0.0, 1.0, offset), cone1(1.0, 1.0, offset)};
}

// Two honest cones plus an above-all adversary in position 3.
inline ftmm::Ensemble above_all_ensemble(double margin = 0.5) {
    auto specs = two_cones();
    specs.push_back(ftmm::make_above_all_adversary(specs, margin));
    return ftmm::Ensemble(std::move(specs), 1, interval(), true);
}

}  // namespace fixtures
