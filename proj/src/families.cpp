#include "annulab/families.hpp"

#include <cmath>
#include <sstream>

#include "annulab/rng.hpp"

namespace annulab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double poly_eval(const std::vector<double>& c, double y) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * y + c[k];
    return v;
}

// V(y) = y^2 (1-y)^2 and its derivative; evaluated as global polynomials so
// finite-difference probes slightly outside [0,1] stay well defined.
double bump(double y) {
    double u = y * (1.0 - y);
    return u * u;
}

double bump_deriv(double y) { return 2.0 * y * (1.0 - y) * (1.0 - 2.0 * y); }

struct KickFieldEval {
    double dx;
    double dy;
};

// X = (c(x) V'(y), -c'(x) V(y)), the Hamiltonian field of h = c V.
KickFieldEval kick_field(const KickShape& shape, double x, double y) {
    double c = 0.0;
    double dc = 0.0;
    for (std::size_t k = 0; k < shape.cos_coeffs.size(); ++k) {
        double a = shape.cos_coeffs[k];
        if (a == 0.0) continue;
        double w = kTwoPi * static_cast<double>(k);
        c += a * std::cos(w * x);
        dc -= a * w * std::sin(w * x);
    }
    for (std::size_t k = 0; k < shape.sin_coeffs.size(); ++k) {
        double b = shape.sin_coeffs[k];
        if (b == 0.0) continue;
        double w = kTwoPi * static_cast<double>(k);
        c += b * std::sin(w * x);
        dc += b * w * std::cos(w * x);
    }
    return {c * bump_deriv(y), -dc * bump(y)};
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string fmt_list(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ",";
        out += fmt(vs[i]);
    }
    return out;
}

} // namespace

double twist_profile(const std::vector<double>& omega, double y) {
    return poly_eval(omega, y);
}

double twist_profile_deriv(const std::vector<double>& omega, double y) {
    double v = 0.0;
    for (std::size_t k = omega.size(); k-- > 1;)
        v = v * y + omega[k] * static_cast<double>(k);
    return v;
}

KickShape default_kick_shape() { return KickShape{{0.0, 1.0}, {}}; }

LiftedPoint kick_flow(const KickShape& shape, double eps, int substeps, LiftedPoint z) {
    if (substeps < 1) throw ConstructionError("kick flow needs at least one substep");
    if (eps == 0.0) return z;
    const double tau = eps / substeps;
    for (int s = 0; s < substeps; ++s) {
        // Solve m = z + (tau/2) X(m) by fixed-point iteration, then step
        // z' = z + tau X(m). The break threshold is absolute; coordinates
        // here are O(1).
        KickFieldEval f = kick_field(shape, z.xt, z.y);
        double mx = z.xt + 0.5 * tau * f.dx;
        double my = z.y + 0.5 * tau * f.dy;
        for (int it = 0; it < 20; ++it) {
            f = kick_field(shape, mx, my);
            double nx = z.xt + 0.5 * tau * f.dx;
            double ny = z.y + 0.5 * tau * f.dy;
            double delta = std::abs(nx - mx) + std::abs(ny - my);
            mx = nx;
            my = ny;
            if (delta < 1e-16) break;
        }
        z.xt += tau * f.dx;
        z.y += tau * f.dy;
    }
    return z;
}

MapSpec make_rotation(double alpha) {
    MapSpec spec;
    spec.name = "rotation(" + fmt(alpha) + ")";
    spec.family.kind = FamilyKind::rotation;
    spec.family.alpha = alpha;
    spec.area_preserving = true;
    spec.reversible = true;
    spec.lift = [alpha](const LiftedPoint& zt) {
        return LiftedPoint{zt.xt + alpha, zt.y};
    };
    spec.lift_inverse = [alpha](const LiftedPoint& zt) {
        return LiftedPoint{zt.xt - alpha, zt.y};
    };
    spec.map_direct = [alpha](const AnnulusPoint& z) {
        return AnnulusPoint{wrap_unit(z.x + alpha), z.y};
    };
    return spec;
}

MapSpec make_twist(std::vector<double> omega) {
    MapSpec spec;
    spec.name = "twist(" + fmt_list(omega) + ")";
    spec.family.kind = FamilyKind::twist;
    spec.family.omega = omega;
    spec.area_preserving = true;
    spec.reversible = true;
    spec.lift = [omega](const LiftedPoint& zt) {
        return LiftedPoint{zt.xt + poly_eval(omega, zt.y), zt.y};
    };
    spec.lift_inverse = [omega](const LiftedPoint& zt) {
        return LiftedPoint{zt.xt - poly_eval(omega, zt.y), zt.y};
    };
    spec.map_direct = [omega](const AnnulusPoint& z) {
        return AnnulusPoint{wrap_unit(z.x + poly_eval(omega, z.y)), z.y};
    };
    return spec;
}

MapSpec make_kicked_twist(std::vector<double> omega, double eps, KickShape shape,
                          int substeps) {
    MapSpec spec;
    spec.name = "kicked_twist(" + fmt_list(omega) + ";eps=" + fmt(eps) + ")";
    spec.family.kind = FamilyKind::kicked_twist;
    spec.family.omega = omega;
    spec.family.eps = eps;
    spec.family.kick = shape;
    spec.family.substeps = substeps;
    spec.area_preserving = true;
    spec.reversible = false;
    spec.lift = [omega, eps, shape, substeps](const LiftedPoint& zt) {
        LiftedPoint w{zt.xt + poly_eval(omega, zt.y), zt.y};
        return kick_flow(shape, eps, substeps, w);
    };
    spec.lift_inverse = [omega, eps, shape, substeps](const LiftedPoint& zt) {
        LiftedPoint w = kick_flow(shape, -eps, substeps, zt);
        return LiftedPoint{w.xt - poly_eval(omega, w.y), w.y};
    };
    spec.map_direct = [omega, eps, shape, substeps](const AnnulusPoint& z) {
        LiftedPoint w{wrap_unit(z.x) + poly_eval(omega, z.y), z.y};
        w = kick_flow(shape, eps, substeps, w);
        return AnnulusPoint{wrap_unit(w.xt), w.y};
    };
    return spec;
}

MapSpec make_split_kicked_twist(std::vector<double> omega, double eps, KickShape shape,
                                int substeps) {
    MapSpec spec;
    spec.name = "split_kicked_twist(" + fmt_list(omega) + ";eps=" + fmt(eps) + ")";
    spec.family.kind = FamilyKind::split_kicked_twist;
    spec.family.omega = omega;
    spec.family.eps = eps;
    spec.family.kick = shape;
    spec.family.substeps = substeps;
    spec.area_preserving = true;
    spec.reversible = shape.even_in_x();
    const double half = 0.5 * eps;
    spec.lift = [omega, half, shape, substeps](const LiftedPoint& zt) {
        LiftedPoint w = kick_flow(shape, half, substeps, zt);
        w.xt += poly_eval(omega, w.y);
        return kick_flow(shape, half, substeps, w);
    };
    spec.lift_inverse = [omega, half, shape, substeps](const LiftedPoint& zt) {
        LiftedPoint w = kick_flow(shape, -half, substeps, zt);
        w.xt -= poly_eval(omega, w.y);
        return kick_flow(shape, -half, substeps, w);
    };
    spec.map_direct = [omega, half, shape, substeps](const AnnulusPoint& z) {
        LiftedPoint w = kick_flow(shape, half, substeps, LiftedPoint{wrap_unit(z.x), z.y});
        w.xt += poly_eval(omega, w.y);
        w = kick_flow(shape, half, substeps, w);
        return AnnulusPoint{wrap_unit(w.xt), w.y};
    };
    return spec;
}

MapSpec make_map(const FamilySpec& fam) {
    switch (fam.kind) {
        case FamilyKind::rotation: return make_rotation(fam.alpha);
        case FamilyKind::twist: return make_twist(fam.omega);
        case FamilyKind::kicked_twist:
            return make_kicked_twist(fam.omega, fam.eps, fam.kick, fam.substeps);
        case FamilyKind::split_kicked_twist:
            return make_split_kicked_twist(fam.omega, fam.eps, fam.kick, fam.substeps);
        case FamilyKind::custom:
            throw ConstructionError("custom maps cannot be rebuilt from a family spec");
    }
    throw ConstructionError("unknown family kind");
}

AreaCheckReport area_check(const MapSpec& map, long boxes, long samples_per_box,
                           std::uint64_t seed) {
    if (boxes < 1 || samples_per_box < 100)
        throw DomainError("area_check: need >= 1 box and >= 100 samples per box");
    if (!map.has_inverse())
        throw DomainError("area_check: map has no inverse");
    Rng base(seed);
    AreaCheckReport rep;
    rep.samples = samples_per_box;
    Rng boxer = base.fork(1);
    for (long k = 0; k < boxes; ++k) {
        AreaCheckReport::BoxStat bs;
        const double w = boxer.uniform(0.05, 0.3);
        const double h = boxer.uniform(0.05, 0.3);
        const double x0 = boxer.uniform(0.0, 1.0);
        const double y0 = boxer.uniform(0.0, 1.0 - h);
        bs.x_lo = x0;
        bs.x_hi = x0 + w;  // may pass 1; membership wraps
        bs.y_lo = y0;
        bs.y_hi = y0 + h;
        bs.box_area = w * h;
        Rng stream = base.fork(100 + static_cast<std::uint64_t>(k));
        long hits = 0;
        for (long i = 0; i < samples_per_box; ++i) {
            AnnulusPoint u{stream.uniform(), stream.uniform()};
            AnnulusPoint v = apply_map_inverse(map, u);
            double dx = v.x - x0;
            dx -= std::floor(dx);
            if (dx < w && v.y >= y0 && v.y <= y0 + h) hits += 1;
        }
        bs.image_mass = static_cast<double>(hits) / static_cast<double>(samples_per_box);
        bs.sigma = std::sqrt(std::max(bs.box_area * (1.0 - bs.box_area), 1e-12) /
                             static_cast<double>(samples_per_box));
        bs.rel_dev = std::abs(bs.image_mass - bs.box_area) / bs.box_area;
        rep.max_rel_dev = std::max(rep.max_rel_dev, bs.rel_dev);
        rep.max_abs_dev = std::max(rep.max_abs_dev, std::abs(bs.image_mass - bs.box_area));
        rep.confidence_radius = std::max(rep.confidence_radius, 3.0 * bs.sigma);
        if (std::abs(bs.image_mass - bs.box_area) > 3.0 * bs.sigma + 1e-12)
            rep.pass = false;
        rep.boxes.push_back(bs);
    }
    return rep;
}

std::vector<MapSpec> builtin_families() {
    std::vector<MapSpec> out;
    out.push_back(make_rotation(0.25));
    out.push_back(make_rotation(1.0 / 3.0));
    out.push_back(make_twist({0.0, 1.0}));
    out.push_back(make_twist({-0.5, 1.0}));
    out.push_back(make_twist({0.1, 0.5, 0.25}));
    out.push_back(make_kicked_twist({0.0, 1.0}, 0.1));
    out.push_back(make_split_kicked_twist({0.0, 1.0}, 0.1));
    out.push_back(make_split_kicked_twist({-0.5, 1.0}, 0.2));
    return out;
}

} // namespace annulab
