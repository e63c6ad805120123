#include "annulab/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "annulab/parallel.hpp"

namespace annulab {

RotationEstimate rotation_estimate(const MapSpec& map, const AnnulusPoint& z,
                                   long n_max, double tol,
                                   double recurrence_radius) {
    if (n_max < 10) throw DomainError("rotation_estimate needs n_max >= 10");
    if (recurrence_radius <= 0.0)
        throw DomainError("recurrence radius must be positive");

    RotationEstimate est;
    est.seed = z;

    const LiftedPoint zt0 = embed(z);
    LiftedPoint zt = zt0;
    double prev_window = 0.0;
    bool have_prev = false;
    long n = 0;
    for (n = 1; n <= n_max; ++n) {
        zt = map.lift(zt);
        if (!std::isfinite(zt.xt) || !std::isfinite(zt.y))
            throw EvaluationError("lift produced non-finite value", n);
        AnnulusPoint cur{wrap_unit(zt.xt), zt.y};
        if (annulus_dist(cur, z) >= recurrence_radius) continue;

        double v = (zt.xt - zt0.xt) / static_cast<double>(n);
        if (est.recurrence_times.size() >= 64)
            est.recurrence_times.erase(est.recurrence_times.begin());
        est.recurrence_times.push_back(n);
        est.value = v;
        if (have_prev) {
            est.error_bound = std::abs(v - prev_window);
            if (est.error_bound < tol) {
                est.converged = true;
                break;
            }
        }
        prev_window = v;
        have_prev = true;
    }
    est.iterations = std::min(n, n_max);

    if (est.recurrence_times.empty()) {
        est.value = (zt.xt - zt0.xt) / static_cast<double>(n_max);
        est.error_bound = 1.0;
        est.converged = false;
    }
    if (!std::isfinite(est.value) || std::abs(est.value) > 1e9) est.diverged = true;
    return est;
}

Rational rotation_of_periodic(const MapSpec& map, const OrbitRecord& orbit) {
    if (orbit.period < 1) throw DomainError("orbit period must be >= 1");
    if (orbit.points.empty()) throw DomainError("orbit has no points");
    LiftedPoint zt = embed(orbit.points[0]);
    LiftedPoint end = iterate_lift(map, zt, orbit.period);
    double disp = end.xt - zt.xt;
    double l = std::round(disp);
    if (std::abs(disp - l) >= 0.1)
        throw NotPeriodicError("lift displacement " + std::to_string(disp) +
                               " is not close to an integer at period " +
                               std::to_string(orbit.period));
    return make_rational(static_cast<long long>(l), orbit.period);
}

RotationInterval rotation_interval(const MapSpec& map, const GridSpec& seeds,
                                   long n_max, double tol) {
    std::vector<AnnulusPoint> pts = seeds.points();
    if (pts.size() < 2) throw DomainError("rotation_interval needs >= 2 seeds");

    RotationInterval out;
    out.estimates.resize(pts.size());
    parallel_for(static_cast<long>(pts.size()), [&](long i) {
        std::size_t k = static_cast<std::size_t>(i);
        try {
            out.estimates[k] = rotation_estimate(map, pts[k], n_max, tol);
        } catch (const Error&) {
            out.estimates[k].seed = pts[k];
            out.estimates[k].converged = false;
            out.estimates[k].diverged = true;
        }
    });

    bool first = true;
    for (const RotationEstimate& e : out.estimates) {
        if (!e.converged || e.diverged) {
            ++out.excluded_seeds;
            continue;
        }
        ++out.converged_seeds;
        if (first || e.value < out.lo) {
            out.lo = e.value;
            out.witness_lo = e.seed;
        }
        if (first || e.value > out.hi) {
            out.hi = e.value;
            out.witness_hi = e.seed;
        }
        first = false;
    }
    if (out.converged_seeds < 1)
        throw IntervalUndefinedError("no seed produced a converged rotation estimate");
    return out;
}

ReturnStats return_rotation_estimate(const MapSpec& map, const WindowBox& window,
                                     long budget) {
    if (2.0 * window.x_halfwidth >= 0.5)
        throw DomainError("window x-extent must be smaller than 1/2");
    if (window.y_lo > window.y_hi) throw DomainError("window y-range is empty");
    if (budget < 1) throw DomainError("budget must be >= 1");

    ReturnStats stats;
    stats.window = window;

    AnnulusPoint seed{wrap_unit(window.x_center),
                      0.5 * (window.y_lo + window.y_hi)};
    LiftedPoint zt = embed(seed);
    double last_xt = zt.xt;
    long last_n = 0;
    double m_sum = 0.0;
    long tau_sum = 0;
    for (long n = 1; n <= budget; ++n) {
        zt = map.lift(zt);
        if (!std::isfinite(zt.xt) || !std::isfinite(zt.y))
            throw EvaluationError("lift produced non-finite value", n);
        stats.iterations = n;
        AnnulusPoint cur{wrap_unit(zt.xt), zt.y};
        if (!window.contains(cur)) continue;

        double m = zt.xt - last_xt;
        long tau = n - last_n;
        m_sum += m;
        tau_sum += tau;
        stats.m_values.push_back(m);
        stats.tau_values.push_back(tau);
        stats.m_partial.push_back(m_sum);
        stats.tau_partial.push_back(tau_sum);
        last_xt = zt.xt;
        last_n = n;
    }
    stats.recurrent = !stats.tau_values.empty();
    if (stats.recurrent) {
        stats.ratio = m_sum / static_cast<double>(tau_sum);
        stats.error_bound =
            (2.0 * window.x_halfwidth + 2.0) / static_cast<double>(tau_sum);
    } else {
        stats.error_bound = 1.0;
    }
    return stats;
}

std::vector<Rational> farey_enumerate(double lo, double hi, long q_max, long n0) {
    if (!(lo < hi)) throw DomainError("farey_enumerate needs lo < hi");
    if (q_max < 1) throw DomainError("q_max must be >= 1");
    if (n0 < 1) throw DomainError("n0 must be >= 1");

    std::vector<Rational> out;
    for (long q = 1; q <= q_max; ++q) {
        if (std::gcd(q, n0) != 1) continue;
        long p_lo = static_cast<long>(std::floor(lo * static_cast<double>(q))) - 1;
        long p_hi = static_cast<long>(std::ceil(hi * static_cast<double>(q))) + 1;
        for (long p = p_lo; p <= p_hi; ++p) {
            if (std::gcd(std::abs(p), q) != 1) continue;
            double v = static_cast<double>(p) / static_cast<double>(q);
            if (lo < v && v < hi) out.push_back(Rational{p, q});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace annulab
