#pragma once

#include <vector>

#include "capkit/space.hpp"

namespace capkit {

struct ContentParams {
    double d = 0;    // codimension
    double rho = 1;  // radius restriction
};

struct CoverBall {
    int center = -1;
    double radius = 0;
    double cost = 0;
};

struct Cover {
    double total = 0;
    std::vector<CoverBall> balls;
};

// Branch-and-bound over point-centered open balls. Throws when F has more
// than kContentMaxSet points or there are more than kContentMaxBalls candidates
// covering distinct subsets of F.
constexpr std::size_t kContentMaxSet = 24;
constexpr std::size_t kContentMaxBalls = 20000;

Cover content_exact(const Space& s, const PointSet& f, const ContentParams& prm);
Cover content_greedy(const Space& s, const PointSet& f, const ContentParams& prm);

}  // namespace capkit
