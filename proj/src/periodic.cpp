#include "annulab/periodic.hpp"

#include <algorithm>
#include <cmath>

#include "annulab/parallel.hpp"

namespace annulab {

namespace {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// G(z) = f~^q(z) - T^p(z).
Vec2 eval_G(const MapSpec& map, const LiftedPoint& zt, long q, long p) {
    LiftedPoint w = zt;
    for (long i = 0; i < q; ++i) {
        w = map.lift(w);
        if (!std::isfinite(w.xt) || !std::isfinite(w.y))
            throw EvaluationError("lift produced non-finite value", i);
    }
    return {w.xt - zt.xt - static_cast<double>(p), w.y - zt.y};
}

double norm_inf(const Vec2& v) { return std::max(std::abs(v.x), std::abs(v.y)); }

struct NewtonOutcome {
    LiftedPoint root;
    double gnorm = 0.0;
    bool converged = false;
    bool degenerate = false;
};

// Frozen-x fallback for root circles: solve the x-component of G in y alone
// by damped secant steps. Handles pure twists, where the Jacobian is singular
// in the x-direction.
NewtonOutcome solve_degenerate(const MapSpec& map, LiftedPoint zt, long q, long p,
                               double gtol) {
    NewtonOutcome out;
    out.degenerate = true;
    const double h = 1e-7;
    for (int iter = 0; iter < 50; ++iter) {
        Vec2 g = eval_G(map, zt, q, p);
        double gn = norm_inf(g);
        if (gn < gtol) {
            out.root = zt;
            out.gnorm = gn;
            out.converged = true;
            return out;
        }
        Vec2 gp = eval_G(map, {zt.xt, zt.y + h}, q, p);
        double dgdy = (gp.x - g.x) / h;
        if (!std::isfinite(dgdy) || std::abs(dgdy) < 1e-14) return out;
        double step = -g.x / dgdy;
        double ny = zt.y + step;
        for (int halvings = 0; halvings < 12; ++halvings) {
            if (ny >= -0.25 && ny <= 1.25 &&
                norm_inf(eval_G(map, {zt.xt, ny}, q, p)) < gn)
                break;
            step *= 0.5;
            ny = zt.y + step;
        }
        zt.y = ny;
    }
    Vec2 g = eval_G(map, zt, q, p);
    if (norm_inf(g) < gtol) {
        out.root = zt;
        out.gnorm = norm_inf(g);
        out.converged = true;
    }
    return out;
}

NewtonOutcome newton_pq(const MapSpec& map, LiftedPoint zt, long q, long p,
                        double gtol) {
    const double h = 1e-7;
    NewtonOutcome out;
    for (int iter = 0; iter < 50; ++iter) {
        Vec2 g = eval_G(map, zt, q, p);
        double gn = norm_inf(g);
        if (gn < gtol) {
            out.root = zt;
            out.gnorm = gn;
            out.converged = true;
            return out;
        }
        Vec2 gx = eval_G(map, {zt.xt + h, zt.y}, q, p);
        Vec2 gy = eval_G(map, {zt.xt, zt.y + h}, q, p);
        double j11 = (gx.x - g.x) / h, j12 = (gy.x - g.x) / h;
        double j21 = (gx.y - g.y) / h, j22 = (gy.y - g.y) / h;
        double det = j11 * j22 - j12 * j21;
        double scale = std::max({std::abs(j11), std::abs(j12), std::abs(j21),
                                 std::abs(j22), 1e-30});
        if (!std::isfinite(det) || std::abs(det) < 1e-10 * scale * scale)
            return solve_degenerate(map, zt, q, p, gtol);

        double dx = -(g.x * j22 - g.y * j12) / det;
        double dy = -(j11 * g.y - j21 * g.x) / det;
        double lambda = 1.0;
        LiftedPoint next = zt;
        bool improved = false;
        for (int halvings = 0; halvings < 12; ++halvings) {
            next = {zt.xt + lambda * dx, zt.y + lambda * dy};
            if (next.y >= -0.25 && next.y <= 1.25) {
                double gnext = norm_inf(eval_G(map, next, q, p));
                if (gnext < gn) {
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!improved) {
            // Stuck; accept the damped move anyway once, then give up next
            // round if it still does not help.
            if (iter > 2) return out;
        }
        zt = next;
    }
    return out;
}

// Rank check at a converged root: a near-zero Jacobian determinant of G marks
// a non-isolated root circle (pure twists, rigid rotations).
bool root_is_degenerate(const MapSpec& map, const LiftedPoint& zt, long q, long p) {
    const double h = 1e-7;
    Vec2 g = eval_G(map, zt, q, p);
    Vec2 gx = eval_G(map, {zt.xt + h, zt.y}, q, p);
    Vec2 gy = eval_G(map, {zt.xt, zt.y + h}, q, p);
    double j11 = (gx.x - g.x) / h, j12 = (gy.x - g.x) / h;
    double j21 = (gx.y - g.y) / h, j22 = (gy.y - g.y) / h;
    double det = j11 * j22 - j12 * j21;
    double scale = std::max(
        {std::abs(j11), std::abs(j12), std::abs(j21), std::abs(j22), 1e-30});
    return !(std::abs(det) >= 1e-10 * scale * scale);
}

AnnulusPoint project_clamped(const LiftedPoint& zt) {
    double y = std::min(1.0, std::max(0.0, zt.y));
    return AnnulusPoint{wrap_unit(zt.xt), y};
}

// Rotate the cycle so points[0] is lexicographically smallest.
void canonicalize(OrbitRecord& rec) {
    if (rec.points.size() < 2) return;
    std::size_t best = 0;
    for (std::size_t i = 1; i < rec.points.size(); ++i) {
        const AnnulusPoint& a = rec.points[i];
        const AnnulusPoint& b = rec.points[best];
        if (a.x < b.x || (a.x == b.x && a.y < b.y)) best = i;
    }
    std::rotate(rec.points.begin(), rec.points.begin() + static_cast<long>(best),
                rec.points.end());
}

bool orbit_less(const OrbitRecord& a, const OrbitRecord& b) {
    if (a.period != b.period) return a.period < b.period;
    if (a.rotation != b.rotation) return a.rotation < b.rotation;
    if (a.points[0].x != b.points[0].x) return a.points[0].x < b.points[0].x;
    return a.points[0].y < b.points[0].y;
}

} // namespace

bool same_orbit(const OrbitRecord& a, const OrbitRecord& b, double tol) {
    if (a.period != b.period) return false;
    if (a.points.size() != b.points.size()) return false;
    std::vector<bool> used(b.points.size(), false);
    for (const AnnulusPoint& pa : a.points) {
        bool matched = false;
        for (std::size_t j = 0; j < b.points.size(); ++j) {
            if (used[j]) continue;
            if (annulus_dist(pa, b.points[j]) < tol) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

std::vector<OrbitRecord> dedup_orbits(std::vector<OrbitRecord> records, double tol) {
    std::vector<OrbitRecord> out;
    for (OrbitRecord& rec : records) {
        bool dup = false;
        for (OrbitRecord& kept : out) {
            if (same_orbit(rec, kept, tol)) {
                if (rec.residual < kept.residual) kept = rec;
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(std::move(rec));
    }
    return out;
}

long prime_period(const MapSpec& map, const AnnulusPoint& z, long k, double tol) {
    if (k < 1) throw DomainError("period must be >= 1");
    std::vector<AnnulusPoint> traj = orbit(map, z, k);
    if (annulus_dist(traj[static_cast<std::size_t>(k)], z) >= tol)
        throw NotPeriodicError("point is not " + std::to_string(k) +
                               "-periodic at the given tolerance");
    for (long l = 1; l < k; ++l) {
        if (k % l != 0) continue;
        if (annulus_dist(traj[static_cast<std::size_t>(l)], z) < tol) return l;
    }
    return k;
}

std::vector<OrbitRecord> find_pq_orbit(const MapSpec& map, const Rational& target,
                                       const GridSpec& seeds, double tol) {
    if (std::gcd(static_cast<long long>(std::llabs(target.p)), target.q) != 1)
        throw DomainError("target rotation number must be irreducible");
    std::vector<AnnulusPoint> pts = seeds.points();
    if (pts.empty()) throw DomainError("seed grid is empty");

    const long q = target.q;
    const long p = static_cast<long>(target.p);
    const double gtol = std::min(tol * 1e-2, 1e-12);

    std::vector<NewtonOutcome> outcomes(pts.size());
    parallel_for(static_cast<long>(pts.size()), [&](long i) {
        try {
            outcomes[static_cast<std::size_t>(i)] =
                newton_pq(map, embed(pts[static_cast<std::size_t>(i)]), q, p, gtol);
        } catch (const Error&) {
            outcomes[static_cast<std::size_t>(i)] = {};
        }
    });

    std::vector<OrbitRecord> found;
    for (const NewtonOutcome& oc : outcomes) {
        if (!oc.converged) continue;
        if (oc.root.y < -1e-9 || oc.root.y > 1.0 + 1e-9) continue;

        OrbitRecord rec;
        rec.period = q;
        rec.family = map.name;
        LiftedPoint zt{oc.root.xt, std::min(1.0, std::max(0.0, oc.root.y))};
        try {
            rec.non_isolated = oc.degenerate || root_is_degenerate(map, zt, q, p);
        } catch (const Error&) {
            rec.non_isolated = oc.degenerate;
        }

        // Residual over the whole orbit, not just the root point.
        std::vector<LiftedPoint> cycle = lift_orbit(map, zt, q - 1);
        double res = 0.0;
        bool ok = true;
        try {
            for (const LiftedPoint& w : cycle)
                res = std::max(res, norm_inf(eval_G(map, w, q, p)));
        } catch (const Error&) {
            ok = false;
        }
        if (!ok || res >= tol) continue;
        rec.residual = res;

        rec.points.reserve(static_cast<std::size_t>(q));
        for (const LiftedPoint& w : cycle) rec.points.push_back(project_clamped(w));

        try {
            rec.rotation = rotation_of_periodic(map, rec);
            long prime = prime_period(map, rec.points[0], q, std::max(tol, 1e-9));
            rec.prime_certified = (prime == q);
        } catch (const Error&) {
            continue;
        }
        if (rec.rotation != target) continue;
        canonicalize(rec);
        found.push_back(std::move(rec));
    }
    return dedup_orbits(std::move(found));
}

Theorem1Report theorem1_scan(const MapSpec& map, long n0, long q_max,
                             const GridSpec& seeds, double tol,
                             long n_max_rotation, double rotation_tol) {
    if (n0 < 1 || q_max < 1) throw DomainError("n0 and q_max must be >= 1");
    Theorem1Report report;
    report.n0 = n0;
    report.q_max = q_max;
    report.interval = rotation_interval(map, seeds, n_max_rotation, rotation_tol);

    if (report.interval.degenerate()) {
        report.degenerate_interval = true;
        return report;
    }

    std::vector<Rational> targets =
        farey_enumerate(report.interval.lo, report.interval.hi, q_max, n0);
    report.targets.resize(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        report.targets[i].target = targets[i];
        report.targets[i].orbits = find_pq_orbit(map, targets[i], seeds, tol);
    }

    std::vector<OrbitRecord> all;
    for (const TargetResult& tr : report.targets)
        all.insert(all.end(), tr.orbits.begin(), tr.orbits.end());
    all = dedup_orbits(std::move(all));
    std::sort(all.begin(), all.end(), orbit_less);
    report.all_orbits = std::move(all);
    return report;
}

} // namespace annulab
