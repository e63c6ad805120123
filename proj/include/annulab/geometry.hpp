#pragma once

#include <cmath>
#include <vector>

#include "annulab/errors.hpp"

namespace annulab {

// Point on the annulus R/Z x [0,1]; x is the mod-1 circle coordinate.
struct AnnulusPoint {
    double x = 0.0;
    double y = 0.0;
};

// Point on the universal cover R x [0,1]; xt is the unbounded coordinate.
struct LiftedPoint {
    double xt = 0.0;
    double y = 0.0;
};

// Reduce to the representative in [0,1).
inline double wrap_unit(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0; // floor rounding can land exactly on 1
    return r;
}

inline AnnulusPoint project(const LiftedPoint& zt) {
    if (!(zt.y >= 0.0 && zt.y <= 1.0))
        throw DomainError("project: y outside [0,1]");
    return {wrap_unit(zt.xt), zt.y};
}

// Deck transformation T^k: (xt, y) -> (xt + k, y).
inline LiftedPoint deck(const LiftedPoint& zt, long k) {
    return {zt.xt + static_cast<double>(k), zt.y};
}

// Canonical lift with xt = x.
inline LiftedPoint embed(const AnnulusPoint& z) {
    return {z.x, z.y};
}

inline double circle_dist(double a, double b) {
    double d = std::fabs(wrap_unit(a) - wrap_unit(b));
    return std::min(d, 1.0 - d);
}

// Annulus metric min(|dx|, 1-|dx|) + |dy|.
inline double annulus_dist(const AnnulusPoint& a, const AnnulusPoint& b) {
    return circle_dist(a.x, b.x) + std::fabs(a.y - b.y);
}

inline double lift_dist(const LiftedPoint& a, const LiftedPoint& b) {
    return std::fabs(a.xt - b.xt) + std::fabs(a.y - b.y);
}

// Rectangular seed grid, generated in row-major deterministic order.
struct GridSpec {
    int nx = 4;
    int ny = 7;
    double x_min = 0.0, x_max = 1.0; // x_max exclusive when equal to x_min+1
    double y_min = 0.1, y_max = 0.9;

    std::vector<AnnulusPoint> points() const {
        std::vector<AnnulusPoint> pts;
        pts.reserve(static_cast<std::size_t>(nx) * ny);
        for (int iy = 0; iy < ny; ++iy) {
            double y = (ny == 1) ? 0.5 * (y_min + y_max)
                                 : y_min + (y_max - y_min) * iy / (ny - 1);
            for (int ix = 0; ix < nx; ++ix) {
                double x = x_min + (x_max - x_min) * ix / nx;
                pts.push_back({wrap_unit(x), y});
            }
        }
        return pts;
    }
};

} // namespace annulab
