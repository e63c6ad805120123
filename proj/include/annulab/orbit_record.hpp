#pragma once

#include <string>
#include <vector>

#include "annulab/geometry.hpp"
#include "annulab/rational.hpp"

namespace annulab {

// A certified periodic orbit. points[j] is the j-th iterate of points[0];
// the cycle is rotated so points[0] is the lexicographically smallest point,
// which keeps database output stable across seed orderings.
struct OrbitRecord {
    std::vector<AnnulusPoint> points;
    long period = 1;
    Rational rotation;
    double residual = 0.0;      // max over the orbit of |f~^q(z) - T^p(z)|
    bool prime_certified = false;
    bool symmetric = false;
    bool non_isolated = false;  // root lies on a non-isolated circle of roots
    std::string family;         // serialized family record of the map searched
};

} // namespace annulab
