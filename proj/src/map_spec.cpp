#include "annulab/map_spec.hpp"

#include <cmath>

#include "annulab/rng.hpp"

namespace annulab {

std::string family_kind_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::rotation: return "rotation";
        case FamilyKind::twist: return "twist";
        case FamilyKind::kicked_twist: return "kicked_twist";
        case FamilyKind::split_kicked_twist: return "split_kicked_twist";
        case FamilyKind::custom: return "custom";
    }
    throw DomainError("unknown family kind");
}

FamilyKind family_kind_from_name(const std::string& name) {
    if (name == "rotation") return FamilyKind::rotation;
    if (name == "twist") return FamilyKind::twist;
    if (name == "kicked_twist") return FamilyKind::kicked_twist;
    if (name == "split_kicked_twist") return FamilyKind::split_kicked_twist;
    if (name == "custom") return FamilyKind::custom;
    throw DomainError("unknown family kind: " + name);
}

static bool finite(const LiftedPoint& zt) {
    return std::isfinite(zt.xt) && std::isfinite(zt.y);
}

LiftedPoint apply_lift(const MapSpec& spec, const LiftedPoint& zt) {
    if (!spec.lift) throw ConstructionError("map '" + spec.name + "' has no lift");
    if (!finite(zt)) throw EvaluationError("non-finite input to lift", 0);
    LiftedPoint out = spec.lift(zt);
    if (!finite(out)) throw EvaluationError("lift produced non-finite value", 0);
    return out;
}

LiftedPoint apply_lift_inverse(const MapSpec& spec, const LiftedPoint& zt) {
    if (!spec.lift_inverse)
        throw ConstructionError("map '" + spec.name + "' has no inverse lift");
    if (!finite(zt)) throw EvaluationError("non-finite input to inverse lift", 0);
    LiftedPoint out = spec.lift_inverse(zt);
    if (!finite(out)) throw EvaluationError("inverse lift produced non-finite value", 0);
    return out;
}

AnnulusPoint apply_map(const MapSpec& spec, const AnnulusPoint& z) {
    if (spec.map_direct) {
        AnnulusPoint out = spec.map_direct(z);
        if (!std::isfinite(out.x) || !std::isfinite(out.y))
            throw EvaluationError("map produced non-finite value", 0);
        out.x = wrap_unit(out.x);
        return out;
    }
    LiftedPoint image = apply_lift(spec, embed(z));
    return project(image);
}

AnnulusPoint apply_map_inverse(const MapSpec& spec, const AnnulusPoint& z) {
    LiftedPoint image = apply_lift_inverse(spec, embed(z));
    return project(image);
}

LiftedPoint iterate_lift(const MapSpec& spec, LiftedPoint zt, long n) {
    if (n >= 0) {
        for (long i = 0; i < n; ++i) {
            zt = spec.lift(zt);
            if (!finite(zt)) throw EvaluationError("lift produced non-finite value", i);
        }
    } else {
        if (!spec.lift_inverse)
            throw ConstructionError("map '" + spec.name + "' has no inverse lift");
        for (long i = 0; i < -n; ++i) {
            zt = spec.lift_inverse(zt);
            if (!finite(zt))
                throw EvaluationError("inverse lift produced non-finite value", i);
        }
    }
    return zt;
}

std::vector<LiftedPoint> lift_orbit(const MapSpec& spec, const LiftedPoint& zt0, long n) {
    if (n < 0) throw DomainError("orbit length must be nonnegative");
    std::vector<LiftedPoint> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(zt0);
    LiftedPoint zt = zt0;
    for (long i = 0; i < n; ++i) {
        zt = spec.lift(zt);
        if (!finite(zt)) throw EvaluationError("lift produced non-finite value", i + 1);
        out.push_back(zt);
    }
    return out;
}

std::vector<AnnulusPoint> orbit(const MapSpec& spec, const AnnulusPoint& z0, long n) {
    if (n < 0) throw DomainError("orbit length must be nonnegative");
    std::vector<AnnulusPoint> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(z0);
    AnnulusPoint z = z0;
    for (long i = 0; i < n; ++i) {
        z = apply_map(spec, z);
        out.push_back(z);
    }
    return out;
}

double LiftCheckReport::worst() const {
    double w = max_deck_dev;
    if (max_proj_dev > w) w = max_proj_dev;
    if (max_inverse_dev > w) w = max_inverse_dev;
    if (max_y_overshoot > w) w = max_y_overshoot;
    return w;
}

LiftCheckReport check_lift_consistency(const MapSpec& spec, long n_samples,
                                       std::uint64_t seed) {
    if (!spec.lift) throw ConstructionError("map '" + spec.name + "' has no lift");
    Rng rng(seed);
    LiftCheckReport rep;
    rep.samples = n_samples;
    for (long i = 0; i < n_samples; ++i) {
        LiftedPoint zt;
        zt.xt = rng.uniform(-2.0, 3.0);
        zt.y = rng.uniform();
        if (i == 0) zt.y = 0.0;  // boundary circles are part of the domain,
        if (i == 1) zt.y = 1.0;  // force them into every sample set

        LiftedPoint fz = apply_lift(spec, zt);
        LiftedPoint fTz = apply_lift(spec, deck(zt, 1));
        double dev = std::max(std::abs(fTz.xt - (fz.xt + 1.0)), std::abs(fTz.y - fz.y));
        if (dev > rep.max_deck_dev) rep.max_deck_dev = dev;

        double over = std::max(0.0, -fz.y);
        over = std::max(over, fz.y - 1.0);
        if (over > rep.max_y_overshoot) rep.max_y_overshoot = over;

        // Feed the clamped image into the remaining checks so a tiny boundary
        // overshoot is reported once and doesn't abort sampling.
        LiftedPoint fz_in = fz;
        fz_in.y = std::min(1.0, std::max(0.0, fz_in.y));

        // A projection or inverse that rejects the (clamped) image is itself a
        // violation; record it as the overshoot magnitude instead of aborting
        // the whole scan.
        try {
            AnnulusPoint pz{wrap_unit(zt.xt), zt.y};
            AnnulusPoint direct = apply_map(spec, pz);
            double pdev = annulus_dist(project(fz_in), direct);
            if (pdev > rep.max_proj_dev) rep.max_proj_dev = pdev;
        } catch (const Error&) {
            rep.max_proj_dev = std::max(rep.max_proj_dev, over);
        }

        if (spec.lift_inverse) {
            try {
                LiftedPoint back = apply_lift_inverse(spec, fz_in);
                double idev =
                    std::max(std::abs(back.xt - zt.xt), std::abs(back.y - zt.y));
                if (idev > rep.max_inverse_dev) rep.max_inverse_dev = idev;
            } catch (const Error&) {
                rep.max_inverse_dev = std::max(rep.max_inverse_dev, over);
            }
        }
    }
    return rep;
}

} // namespace annulab
