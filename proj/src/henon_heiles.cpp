#include "annulab/henon_heiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "annulab/errors.hpp"
#include "annulab/geometry.hpp"
#include "annulab/rng.hpp"

namespace annulab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double sq(double v) { return v * v; }

} // namespace

double hh_energy(const HHState& s) {
    return 0.5 * (sq(s.p1) + sq(s.p2) + sq(s.q1) + sq(s.q2)) +
           sq(s.q1) * s.q2 - s.q2 * s.q2 * s.q2 / 3.0;
}

std::array<double, 4> hh_grad(const HHState& s) {
    return {s.q1 + 2.0 * s.q1 * s.q2,
            s.q2 + sq(s.q1) - sq(s.q2),
            s.p1,
            s.p2};
}

HHState apply_rho(const HHState& s) {
    return {-s.q1, s.q2, s.p1, -s.p2};
}

HHState apply_sigma(const HHState& s) {
    const double c = -0.5;
    const double sn = 0.86602540378443864676372317075294;  // sin(2 pi / 3)
    return {c * s.q1 - sn * s.q2, sn * s.q1 + c * s.q2,
            c * s.p1 - sn * s.p2, sn * s.p1 + c * s.p2};
}

namespace {

// Force -grad U; the potential is U(q) = (q1^2 + q2^2)/2 + q1^2 q2 - q2^3/3.
inline void hh_force(double q1, double q2, double& f1, double& f2) {
    f1 = -(q1 + 2.0 * q1 * q2);
    f2 = -(q2 + q1 * q1 - q2 * q2);
}

inline void kdk(HHState& s, double h) {
    double f1, f2;
    hh_force(s.q1, s.q2, f1, f2);
    s.p1 += 0.5 * h * f1;
    s.p2 += 0.5 * h * f2;
    s.q1 += h * s.p1;
    s.q2 += h * s.p2;
    hh_force(s.q1, s.q2, f1, f2);
    s.p1 += 0.5 * h * f1;
    s.p2 += 0.5 * h * f2;
}

// Triple-jump coefficients for the fourth-order composition.
constexpr double kW1 = 1.3512071919596576340476878089715;   // 1/(2 - 2^(1/3))
constexpr double kW0 = -1.7024143839193152680953756179429;  // 1 - 2 w1

inline double phase_norm2(const HHState& s) {
    return sq(s.q1) + sq(s.q2) + sq(s.p1) + sq(s.p2);
}

} // namespace

HHState hh_step(const HHState& s, double dt) {
    HHState z = s;
    kdk(z, kW1 * dt);
    kdk(z, kW0 * dt);
    kdk(z, kW1 * dt);
    return z;
}

HHState hh_flow(const HHState& s, double t, double dt) {
    if (!(dt > 0.0)) throw DomainError("hh_flow: dt must be positive");
    const double sign = t < 0.0 ? -1.0 : 1.0;
    const double span = std::abs(t);
    const long n = static_cast<long>(std::floor(span / dt));
    const double rem = span - static_cast<double>(n) * dt;
    const double r2max = kHHEscapeRadius * kHHEscapeRadius;
    HHState z = s;
    for (long i = 0; i < n; ++i) {
        z = hh_step(z, sign * dt);
        if (phase_norm2(z) > r2max)
            throw EscapeError("hh_flow: trajectory escaped",
                              sign * static_cast<double>(i + 1) * dt);
    }
    if (rem > 0.0) {
        z = hh_step(z, sign * rem);
        if (phase_norm2(z) > r2max)
            throw EscapeError("hh_flow: trajectory escaped", t);
    }
    return z;
}

std::vector<HHState> hh_trajectory(const HHState& s, double t, double dt,
                                   long stride) {
    if (!(dt > 0.0)) throw DomainError("hh_trajectory: dt must be positive");
    if (stride < 1) throw DomainError("hh_trajectory: stride must be >= 1");
    const double sign = t < 0.0 ? -1.0 : 1.0;
    const double span = std::abs(t);
    const long n = static_cast<long>(std::floor(span / dt));
    const double rem = span - static_cast<double>(n) * dt;
    const double r2max = kHHEscapeRadius * kHHEscapeRadius;
    std::vector<HHState> out;
    out.reserve(static_cast<std::size_t>(n / stride + 2));
    HHState z = s;
    out.push_back(z);
    for (long i = 0; i < n; ++i) {
        z = hh_step(z, sign * dt);
        if (phase_norm2(z) > r2max)
            throw EscapeError("hh_trajectory: trajectory escaped",
                              sign * static_cast<double>(i + 1) * dt);
        if ((i + 1) % stride == 0) out.push_back(z);
    }
    if (rem > 0.0) {
        z = hh_step(z, sign * rem);
        if (phase_norm2(z) > r2max)
            throw EscapeError("hh_trajectory: trajectory escaped", t);
        out.push_back(z);
    } else if (n % stride != 0) {
        out.push_back(z);
    }
    return out;
}

double hh_max_energy_drift(const HHState& s, double t, double dt) {
    if (!(dt > 0.0)) throw DomainError("hh_max_energy_drift: dt must be positive");
    const double e0 = hh_energy(s);
    const double sign = t < 0.0 ? -1.0 : 1.0;
    const double span = std::abs(t);
    const long n = static_cast<long>(std::floor(span / dt));
    const double rem = span - static_cast<double>(n) * dt;
    const double r2max = kHHEscapeRadius * kHHEscapeRadius;
    HHState z = s;
    double drift = 0.0;
    for (long i = 0; i < n; ++i) {
        z = hh_step(z, sign * dt);
        if (phase_norm2(z) > r2max)
            throw EscapeError("hh_max_energy_drift: trajectory escaped",
                              sign * static_cast<double>(i + 1) * dt);
        drift = std::max(drift, std::abs(hh_energy(z) - e0));
    }
    if (rem > 0.0) {
        z = hh_step(z, sign * rem);
        drift = std::max(drift, std::abs(hh_energy(z) - e0));
    }
    return drift;
}

std::vector<Equilibrium> critical_levels() {
    std::vector<Equilibrium> found;
    auto try_seed = [&](double q1, double q2) {
        for (int it = 0; it < 60; ++it) {
            const double g1 = q1 + 2.0 * q1 * q2;
            const double g2 = q2 + q1 * q1 - q2 * q2;
            if (std::abs(g1) < 1e-15 && std::abs(g2) < 1e-15) break;
            // Exact Hessian of U.
            const double a = 1.0 + 2.0 * q2;
            const double b = 2.0 * q1;
            const double d = 1.0 - 2.0 * q2;
            const double det = a * d - b * b;
            if (std::abs(det) < 1e-14) return;
            const double dq1 = (d * g1 - b * g2) / det;
            const double dq2 = (a * g2 - b * g1) / det;
            q1 -= dq1;
            q2 -= dq2;
            if (sq(q1) + sq(q2) > 25.0) return;
        }
        HHState s{q1, q2, 0.0, 0.0};
        auto g = hh_grad(s);
        const double gn = std::sqrt(sq(g[0]) + sq(g[1]) + sq(g[2]) + sq(g[3]));
        if (gn > 1e-13) return;
        for (const auto& e : found)
            if (std::abs(e.state.q1 - q1) < 1e-7 && std::abs(e.state.q2 - q2) < 1e-7)
                return;
        found.push_back({s, hh_energy(s), gn});
    };
    const int grid = 9;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double q1 = -1.5 + 3.0 * i / (grid - 1) + 1e-3;
            const double q2 = -1.5 + 3.0 * j / (grid - 1) + 1e-3;
            try_seed(q1, q2);
        }
    // Quantized keys: distinct levels differ by O(1), duplicates only by
    // Newton round-off, so ordering must not depend on last-ulp noise.
    auto key = [](double v) { return std::llround(v * 1e9); };
    std::sort(found.begin(), found.end(), [&](const Equilibrium& a, const Equilibrium& b) {
        if (key(a.value) != key(b.value)) return key(a.value) < key(b.value);
        if (key(a.state.q1) != key(b.state.q1)) return key(a.state.q1) < key(b.state.q1);
        return key(a.state.q2) < key(b.state.q2);
    });
    return found;
}

double section_p1_squared(double c, double q2, double p2) {
    return 2.0 * c - p2 * p2 - q2 * q2 + 2.0 * q2 * q2 * q2 / 3.0;
}

HHState section_state(double c, double q2, double p2) {
    const double v = section_p1_squared(c, q2, p2);
    if (v <= 0.0)
        throw DomainError("section_state: point outside the admissible disk");
    return {0.0, q2, std::sqrt(v), p2};
}

namespace {

// Refine a sign change of q1 inside one step of (signed) size dt starting at
// `base`: bisection on the partial step length until the bracket is below
// t_tol. Returns the refined state and the unsigned partial step length.
std::pair<HHState, double> refine_crossing(const HHState& base, double dt,
                                           double t_tol) {
    double lo = 0.0, hi = std::abs(dt);
    const double sgn = dt < 0.0 ? -1.0 : 1.0;
    const double s0 = base.q1;
    HHState at_hi = hh_step(base, dt);
    for (int it = 0; it < 80 && hi - lo > t_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const HHState sm = hh_step(base, sgn * mid);
        if ((sm.q1 >= 0.0) == (s0 >= 0.0)) {
            lo = mid;
        } else {
            hi = mid;
            at_hi = sm;
        }
    }
    return {at_hi, hi};
}

} // namespace

std::vector<SectionPoint> poincare_return(double c, const SectionPoint& x,
                                          long crossings, double dt,
                                          double t_budget) {
    if (crossings < 1)
        throw DomainError("poincare_return: need at least one crossing");
    HHState z = section_state(c, x.q2, x.p2);
    std::vector<SectionPoint> out;
    out.reserve(static_cast<std::size_t>(crossings));
    const double r2max = kHHEscapeRadius * kHHEscapeRadius;
    const long n_max = static_cast<long>(std::ceil(t_budget / dt));
    HHState prev = z;
    for (long i = 0; i < n_max; ++i) {
        HHState next = hh_step(prev, dt);
        if (phase_norm2(next) > r2max)
            throw EscapeError("poincare_return: trajectory escaped",
                              static_cast<double>(i + 1) * dt);
        if (prev.q1 < 0.0 && next.q1 >= 0.0) {
            auto [hit, tau] = refine_crossing(prev, dt, 1e-12);
            if (hit.p1 > 0.0) {
                SectionPoint sp;
                sp.q2 = hit.q2;
                sp.p2 = hit.p2;
                sp.time = static_cast<double>(i) * dt + tau;
                sp.energy_residual = std::abs(hh_energy(hit) - c);
                out.push_back(sp);
                if (static_cast<long>(out.size()) == crossings) return out;
            }
        }
        prev = next;
    }
    throw EvaluationError("poincare_return: crossing budget exhausted",
                          out.size());
}

std::pair<double, double> hh_admissible_segment(double c) {
    auto g = [c](double q2) { return section_p1_squared(c, q2, 0.0); };
    if (g(0.0) <= 0.0)
        throw DomainError("hh_admissible_segment: empty section at this level");
    auto hunt = [&](double dir) {
        double a = 0.0, b = dir * 0.01;
        while (g(b) > 0.0 && std::abs(b) < 10.0) {
            a = b;
            b += dir * 0.01;
        }
        if (std::abs(b) >= 10.0)
            throw DomainError("hh_admissible_segment: section is unbounded");
        for (int it = 0; it < 200 && std::abs(b - a) > 1e-14; ++it) {
            const double m = 0.5 * (a + b);
            if (g(m) > 0.0) a = m; else b = m;
        }
        return 0.5 * (a + b);
    };
    return {hunt(-1.0), hunt(1.0)};
}

namespace {

struct CrossingTable {
    std::vector<double> p2;    // p2 at the k-th crossing of q1=0, any sign of p1
    std::vector<double> time;  // refined crossing times
    bool complete = false;     // all m_max crossings found within budget
};

// One integration pass recording the first m_max crossings of q1 = 0
// (either direction, transverse).
CrossingTable crossing_table(const HHState& start, long m_max, double dt,
                             double t_budget) {
    CrossingTable tab;
    const double r2max = kHHEscapeRadius * kHHEscapeRadius;
    const long n_max = static_cast<long>(std::ceil(t_budget / dt));
    HHState prev = start;
    for (long i = 0; i < n_max; ++i) {
        HHState next = hh_step(prev, dt);
        if (phase_norm2(next) > r2max) return tab;
        if ((prev.q1 < 0.0) != (next.q1 < 0.0)) {
            auto [hit, tau] = refine_crossing(prev, dt, 1e-12);
            if (std::abs(hit.p1) > 1e-9) {
                tab.p2.push_back(hit.p2);
                tab.time.push_back(static_cast<double>(i) * dt + tau);
                if (static_cast<long>(tab.p2.size()) == m_max) {
                    tab.complete = true;
                    return tab;
                }
            }
        }
        prev = next;
    }
    return tab;
}

double inf_dist(const HHState& a, const HHState& b) {
    return std::max(std::max(std::abs(a.q1 - b.q1), std::abs(a.q2 - b.q2)),
                    std::max(std::abs(a.p1 - b.p1), std::abs(a.p2 - b.p2)));
}

// Partial flow from a stored grid: state at time j*dt' + delta given the
// closed trajectory sampled every dt'.
HHState shifted_state(const std::vector<HHState>& traj, double dtp, long j,
                      double delta) {
    const long n = static_cast<long>(traj.size()) - 1;  // traj[n] closes back
    long base = j;
    while (delta < 0.0) {
        base -= 1;
        delta += dtp;
    }
    while (delta >= dtp) {
        base += 1;
        delta -= dtp;
    }
    base = ((base % n) + n) % n;
    if (delta == 0.0) return traj[static_cast<std::size_t>(base)];
    return hh_step(traj[static_cast<std::size_t>(base)], delta);
}

} // namespace

std::vector<HHOrbitRecord> hh_symmetric_orbits(double c, long m_max,
                                               long resolution, double tol,
                                               double dt) {
    if (m_max < 1) throw DomainError("hh_symmetric_orbits: m_max must be >= 1");
    if (resolution < 8)
        throw DomainError("hh_symmetric_orbits: resolution must be >= 8");
    const auto [seg_lo, seg_hi] = hh_admissible_segment(c);
    const double inset = 1e-4 * (seg_hi - seg_lo);
    const double lo = seg_lo + inset, hi = seg_hi - inset;
    const double t_budget = 120.0;

    auto start_state = [&](double q2) { return section_state(c, q2, 0.0); };

    // Crossing tables for every sample column.
    std::vector<CrossingTable> tables(static_cast<std::size_t>(resolution) + 1);
    std::vector<double> qs(static_cast<std::size_t>(resolution) + 1);
    for (long i = 0; i <= resolution; ++i) {
        const double q2 = lo + (hi - lo) * static_cast<double>(i) /
                                   static_cast<double>(resolution);
        qs[static_cast<std::size_t>(i)] = q2;
        tables[static_cast<std::size_t>(i)] =
            crossing_table(start_state(q2), m_max, dt, t_budget);
    }

    auto p2_at = [&](double q2, long k) -> double {
        CrossingTable t = crossing_table(start_state(q2), k, dt, t_budget);
        if (static_cast<long>(t.p2.size()) < k)
            return std::numeric_limits<double>::quiet_NaN();
        return t.p2[static_cast<std::size_t>(k - 1)];
    };

    std::vector<HHOrbitRecord> records;

    auto orbit_matches = [&](const HHOrbitRecord& a, const HHOrbitRecord& b) {
        if (std::abs(a.period - b.period) > 1e-6) return false;
        // Compare the section-hit sets (q2, p2) up to ordering.
        if (a.section_hits.size() != b.section_hits.size()) return false;
        std::vector<bool> used(b.section_hits.size(), false);
        for (const auto& ha : a.section_hits) {
            bool ok = false;
            for (std::size_t j = 0; j < b.section_hits.size(); ++j) {
                if (used[j]) continue;
                const auto& hb = b.section_hits[j];
                if (std::abs(ha.q2 - hb.q2) < 1e-5 &&
                    std::abs(ha.p2 - hb.p2) < 1e-5 &&
                    std::abs(ha.p1 - hb.p1) < 1e-5) {
                    used[j] = true;
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
        }
        return true;
    };

    auto certify = [&](double q2_root, long m) {
        CrossingTable t = crossing_table(start_state(q2_root), m, dt, t_budget);
        if (static_cast<long>(t.p2.size()) < m) return;
        const double t_half = t.time[static_cast<std::size_t>(m - 1)];
        const double period = 2.0 * t_half;
        const HHState u = start_state(q2_root);

        // Closure over one full period on a uniform grid.
        long n_grid = static_cast<long>(std::ceil(period / dt));
        if (n_grid < 16) n_grid = 16;
        const double dtp = period / static_cast<double>(n_grid);
        std::vector<HHState> traj;
        traj.reserve(static_cast<std::size_t>(n_grid) + 1);
        HHState z = u;
        traj.push_back(z);
        for (long i = 0; i < n_grid; ++i) {
            z = hh_step(z, dtp);
            if (phase_norm2(z) > kHHEscapeRadius * kHHEscapeRadius) return;
            traj.push_back(z);
        }
        HHOrbitRecord rec;
        rec.q2_start = q2_root;
        rec.m = m;
        rec.half_period = t_half;
        rec.period = period;
        rec.closure_residual = inf_dist(traj.back(), u);
        if (rec.closure_residual > 1e-5) return;  // not actually periodic

        // rho-symmetry: rho(traj[i]) should equal traj[n-i].
        double rho_dev = 0.0;
        for (long i = 0; i <= n_grid; ++i) {
            const HHState r = apply_rho(traj[static_cast<std::size_t>(i)]);
            rho_dev = std::max(
                rho_dev, inf_dist(r, traj[static_cast<std::size_t>(n_grid - i)]));
        }
        rec.rho_residual = rho_dev;
        rec.rho_symmetric = rho_dev < 1e-7;

        // sigma-symmetry: sigma(u) should sit on the orbit; locate the best
        // time shift on the grid, refine it by golden-section, then compare
        // the whole sigma image of the trajectory against the shifted one.
        const HHState su = apply_sigma(u);
        long j_best = 0;
        double d_best = std::numeric_limits<double>::infinity();
        for (long j = 0; j < n_grid; ++j) {
            const double d = inf_dist(su, traj[static_cast<std::size_t>(j)]);
            if (d < d_best) {
                d_best = d;
                j_best = j;
            }
        }
        double a = -dtp, b = dtp;
        auto shift_dist = [&](double delta) {
            return inf_dist(su, shifted_state(traj, dtp, j_best, delta));
        };
        const double gr = 0.61803398874989484820;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = shift_dist(x1), f2 = shift_dist(x2);
        for (int it = 0; it < 70; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = shift_dist(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = shift_dist(x2);
            }
        }
        const double delta_best = 0.5 * (a + b);
        double sigma_dev = shift_dist(delta_best);
        if (sigma_dev < 1e-3) {
            // Full-orbit certificate: integrate from sigma(u) and compare
            // against the shifted reference trajectory index by index.
            HHState w = su;
            for (long i = 0; i <= n_grid; ++i) {
                const HHState ref =
                    shifted_state(traj, dtp, (j_best + i) % n_grid, delta_best);
                sigma_dev = std::max(sigma_dev, inf_dist(w, ref));
                if (sigma_dev > 1e-2) break;
                if (i < n_grid) w = hh_step(w, dtp);
            }
        }
        rec.sigma_residual = sigma_dev;
        rec.sigma_symmetric = sigma_dev < 1e-6;
        rec.sigma_shift = static_cast<double>(j_best) * dtp + delta_best;

        // Section hits over one period for deduplication and reporting.
        HHState prev = u;
        const long hit_steps = n_grid;
        for (long i = 0; i < hit_steps; ++i) {
            HHState next = hh_step(prev, dtp);
            if ((prev.q1 < 0.0) != (next.q1 < 0.0)) {
                auto [hitst, tau0] = refine_crossing(prev, dtp, 1e-12);
                (void)tau0;
                if (std::abs(hitst.p1) > 1e-9) rec.section_hits.push_back(hitst);
            }
            prev = next;
        }

        for (const auto& r : records)
            if (orbit_matches(rec, r)) return;
        records.push_back(std::move(rec));
    };

    for (long k = 1; k <= m_max; ++k) {
        for (long i = 0; i < resolution; ++i) {
            const auto& ta = tables[static_cast<std::size_t>(i)];
            const auto& tb = tables[static_cast<std::size_t>(i + 1)];
            if (static_cast<long>(ta.p2.size()) < k ||
                static_cast<long>(tb.p2.size()) < k)
                continue;
            const double fa = ta.p2[static_cast<std::size_t>(k - 1)];
            const double fb = tb.p2[static_cast<std::size_t>(k - 1)];
            if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
            if (std::abs(fa) < 1e-12) {
                certify(qs[static_cast<std::size_t>(i)], k);
                continue;
            }
            if (fa * fb >= 0.0) continue;
            // Guard against crossing-index slips between neighboring columns:
            // the k-th crossing time must vary continuously.
            const double dt_ab = std::abs(ta.time[static_cast<std::size_t>(k - 1)] -
                                          tb.time[static_cast<std::size_t>(k - 1)]);
            if (dt_ab > 2.0) continue;
            double qa = qs[static_cast<std::size_t>(i)];
            double qb = qs[static_cast<std::size_t>(i + 1)];
            double va = fa;
            for (int it = 0; it < 80 && std::abs(qb - qa) > tol; ++it) {
                const double qm = 0.5 * (qa + qb);
                const double vm = p2_at(qm, k);
                if (!std::isfinite(vm)) break;
                if ((vm < 0.0) == (va < 0.0)) {
                    qa = qm;
                    va = vm;
                } else {
                    qb = qm;
                }
            }
            certify(0.5 * (qa + qb), k);
        }
    }

    std::sort(records.begin(), records.end(),
              [](const HHOrbitRecord& a, const HHOrbitRecord& b) {
                  if (a.period != b.period) return a.period < b.period;
                  return a.q2_start < b.q2_start;
              });
    return records;
}

SectionAreaReport hh_return_area_check(double c, long boxes, long samples_per_box,
                                       std::uint64_t seed, double dt) {
    if (boxes < 1 || samples_per_box < 100)
        throw DomainError("hh_return_area_check: need >= 1 box and >= 100 samples");
    const auto [q2_lo, q2_hi] = hh_admissible_segment(c);
    const double p2_max = std::sqrt(2.0 * c);

    Rng base(seed);
    SectionAreaReport rep;
    rep.samples = samples_per_box;

    // One shared forward cloud: uniform points in the bounding rectangle,
    // kept when on-shell, pushed through the return map once.
    const long M = samples_per_box;
    std::vector<double> img_q2, img_p2;
    img_q2.reserve(static_cast<std::size_t>(M));
    img_p2.reserve(static_cast<std::size_t>(M));
    Rng cloud = base.fork(1);
    for (long i = 0; i < M; ++i) {
        const double q2 = cloud.uniform(q2_lo, q2_hi);
        const double p2 = cloud.uniform(-p2_max, p2_max);
        if (section_p1_squared(c, q2, p2) <= 0.0) continue;
        SectionPoint sp;
        sp.q2 = q2;
        sp.p2 = p2;
        try {
            auto ret = poincare_return(c, sp, 1, dt, 200.0);
            img_q2.push_back(ret[0].q2);
            img_p2.push_back(ret[0].p2);
        } catch (const Error&) {
            rep.no_return += 1;
        }
    }

    Rng boxer = base.fork(2);
    const double wq = q2_hi - q2_lo, wp = 2.0 * p2_max;
    for (long k = 0; k < boxes; ++k) {
        SectionAreaReport::Box bx;
        const double cw = boxer.uniform(0.05, 0.15) * wq;
        const double ch = boxer.uniform(0.05, 0.15) * wp;
        const double cx = boxer.uniform(q2_lo + cw, q2_hi - cw);
        const double cy = boxer.uniform(-p2_max + ch, p2_max - ch);
        bx.q2_lo = cx - 0.5 * cw;
        bx.q2_hi = cx + 0.5 * cw;
        bx.p2_lo = cy - 0.5 * ch;
        bx.p2_hi = cy + 0.5 * ch;
        auto inside = [&](double q2, double p2) {
            return q2 >= bx.q2_lo && q2 <= bx.q2_hi && p2 >= bx.p2_lo &&
                   p2 <= bx.p2_hi;
        };
        // Direct mass: fresh uniform stream, membership plus the shell test.
        Rng direct = base.fork(100 + static_cast<std::uint64_t>(k));
        long n_direct = 0;
        for (long i = 0; i < M; ++i) {
            const double q2 = direct.uniform(q2_lo, q2_hi);
            const double p2 = direct.uniform(-p2_max, p2_max);
            if (section_p1_squared(c, q2, p2) <= 0.0) continue;
            if (inside(q2, p2)) n_direct += 1;
        }
        long n_image = 0;
        for (std::size_t i = 0; i < img_q2.size(); ++i)
            if (inside(img_q2[i], img_p2[i])) n_image += 1;
        bx.p_box = static_cast<double>(n_direct) / static_cast<double>(M);
        bx.p_image = static_cast<double>(n_image) / static_cast<double>(M);
        const double pbar = 0.5 * (bx.p_box + bx.p_image);
        bx.sigma = std::sqrt(std::max(pbar * (1.0 - pbar), 1e-12) * 2.0 /
                             static_cast<double>(M));
        bx.pass = std::abs(bx.p_box - bx.p_image) <= 3.0 * bx.sigma + 1e-12;
        if (!bx.pass) rep.pass = false;
        rep.boxes.push_back(bx);
    }
    return rep;
}

namespace {

// Return-map evaluation used by the chart: (q2, p2) -> next up-crossing,
// along with the continuous winding of the (q2, p2) projection around the
// chart center, and the same for the backward map.
struct ChartCore {
    double c = 0.0;
    double dt = 1e-3;
    double cq = 0.0, cp = 0.0;  // center
    double r_max = 1.0;
    // Symplectic axis scale: chart radii live in (q2 - cq)/s, (p2 - cp)*s
    // coordinates, where the linearized return map is a rigid rotation, so
    // chart circles stay nearly invariant.
    double s = 1.0;

    double angle_of(double q2, double p2) const {
        return std::atan2((p2 - cp) * s, (q2 - cq) / s);
    }

    double radius_of(double q2, double p2) const {
        return std::hypot((q2 - cq) / s, (p2 - cp) * s);
    }

    // Continue a continuous angle: pick the representative of the scaled
    // atan2 closest to the previous unwrapped value.
    double angle_step(double prev, double q2, double p2) const {
        const double a = angle_of(q2, p2);
        double d = a - std::fmod(prev, kTwoPi);
        while (d > 0.5 * kTwoPi) d -= kTwoPi;
        while (d < -0.5 * kTwoPi) d += kTwoPi;
        return prev + d;
    }

    // One section return with winding. direction +1 follows the flow,
    // -1 runs it backward; in both cases the crossing has p1 > 0.
    void advance(double q2, double p2, int direction, double& q2_out,
                 double& p2_out, double& winding) const {
        HHState z = section_state(c, q2, p2);
        const double h = direction > 0 ? dt : -dt;
        const double r2max = kHHEscapeRadius * kHHEscapeRadius;
        double ang_prev = angle_of(q2, p2);
        const double ang0 = ang_prev;
        const long n_max = static_cast<long>(std::ceil(400.0 / dt));
        HHState prev = z;
        for (long i = 0; i < n_max; ++i) {
            const HHState next = hh_step(prev, h);
            if (phase_norm2(next) > r2max)
                throw EscapeError("hh chart: trajectory escaped",
                                  static_cast<double>(i + 1) * dt);
            const bool crossed = direction > 0
                                     ? (prev.q1 < 0.0 && next.q1 >= 0.0)
                                     : (prev.q1 > 0.0 && next.q1 <= 0.0);
            if (crossed) {
                auto [hit, tau] = refine_crossing(prev, h, 1e-12);
                (void)tau;
                if (hit.p1 > 0.0) {
                    const double ang_hit = angle_step(ang_prev, hit.q2, hit.p2);
                    q2_out = hit.q2;
                    p2_out = hit.p2;
                    winding = ang_hit - ang0;
                    return;
                }
            }
            prev = next;
            ang_prev = angle_step(ang_prev, next.q2, next.p2);
        }
        throw EvaluationError("hh chart: return budget exhausted", 0);
    }
};

} // namespace

HHChart hh_annulus_chart(double c, double dt, double r_fraction) {
    if (!(r_fraction > 0.0 && r_fraction <= 0.95))
        throw DomainError("hh_annulus_chart: r_fraction must lie in (0, 0.95]");
    const auto [q2_lo, q2_hi] = hh_admissible_segment(c);
    const double p2_max = std::sqrt(2.0 * c);

    auto return_once = [&](double q2, double p2, double& q2o, double& p2o) {
        SectionPoint sp;
        sp.q2 = q2;
        sp.p2 = p2;
        auto ret = poincare_return(c, sp, 1, dt, 400.0);
        q2o = ret[0].q2;
        p2o = ret[0].p2;
    };

    // Newton for fixed points of the return map from a coarse grid.
    std::optional<std::array<double, 2>> best;
    double best_p2 = std::numeric_limits<double>::infinity();
    auto try_fixed_point = [&](double q2, double p2) {
        for (int it = 0; it < 40; ++it) {
            double fq, fp;
            try {
                return_once(q2, p2, fq, fp);
            } catch (const Error&) {
                return;
            }
            const double r1 = fq - q2, r2 = fp - p2;
            const double res = std::max(std::abs(r1), std::abs(r2));
            if (res < 1e-11) break;
            const double h = 1e-6;
            double aq, ap, bq, bp;
            try {
                return_once(q2 + h, p2, aq, ap);
                return_once(q2, p2 + h, bq, bp);
            } catch (const Error&) {
                return;
            }
            const double j11 = (aq - fq) / h - 1.0, j12 = (bq - fq) / h;
            const double j21 = (ap - fp) / h, j22 = (bp - fp) / h - 1.0;
            const double det = j11 * j22 - j12 * j21;
            if (std::abs(det) < 1e-12) return;
            q2 -= (j22 * r1 - j12 * r2) / det;
            p2 -= (j11 * r2 - j21 * r1) / det;
            if (section_p1_squared(c, q2, p2) <= 0.0) return;
        }
        double fq, fp;
        try {
            return_once(q2, p2, fq, fp);
        } catch (const Error&) {
            return;
        }
        if (std::max(std::abs(fq - q2), std::abs(fp - p2)) > 1e-9) return;
        // Ellipticity from the return-map Jacobian trace.
        const double h = 1e-6;
        double aq, ap, bq, bp;
        try {
            return_once(q2 + h, p2, aq, ap);
            return_once(q2, p2 + h, bq, bp);
        } catch (const Error&) {
            return;
        }
        const double tr = (aq - fq) / h + (bp - fp) / h;
        if (std::abs(tr) >= 2.0) return;
        if (std::abs(p2) < best_p2) {
            best_p2 = std::abs(p2);
            best = std::array<double, 2>{q2, p2};
        }
    };

    for (int i = 1; i <= 5; ++i) {
        const double q2 = q2_lo + (q2_hi - q2_lo) * static_cast<double>(i) / 6.0;
        if (section_p1_squared(c, q2, 0.0) <= 0.0) continue;
        try_fixed_point(q2, 0.0);
    }
    for (int i = 1; i <= 3; ++i) {
        const double q2 = q2_lo + (q2_hi - q2_lo) * static_cast<double>(i) / 4.0;
        const double p2 = 0.3 * p2_max;
        if (section_p1_squared(c, q2, p2) > 0.0) try_fixed_point(q2, p2);
        if (section_p1_squared(c, q2, -p2) > 0.0) try_fixed_point(q2, -p2);
    }
    if (!best)
        throw ConstructionError("hh_annulus_chart: no elliptic fixed point found");

    HHChart chart;
    chart.c = c;
    chart.dt = dt;
    chart.center_q2 = (*best)[0];
    chart.center_p2 = (*best)[1];
    if (std::abs(chart.center_p2) < 1e-9) {
        chart.center_p2 = 0.0;
        chart.reversor_standard = true;
    }

    // Symplectic normalization: the linearized return map at the fixed point
    // has m11 = m22 in the reversible case, so scaling (q2, p2) by (1/s, s)
    // with s^4 = -m12/m21 turns it into a rigid rotation. Chart circles then
    // follow the invariant ellipses instead of cutting across them.
    double scale = 1.0;
    {
        const double h = 1e-6;
        double fq, fp, aq, ap, bq, bp;
        return_once(chart.center_q2, chart.center_p2, fq, fp);
        return_once(chart.center_q2 + h, chart.center_p2, aq, ap);
        return_once(chart.center_q2, chart.center_p2 + h, bq, bp);
        const double m12 = (bq - fq) / h;
        const double m21 = (ap - fp) / h;
        if (m12 * m21 < 0.0) scale = std::pow(-m12 / m21, 0.25);
    }
    chart.axis_scale = scale;

    // Chart radius: a fraction of the scaled distance from the center to the
    // edge of the admissible disk, minimized over directions.
    double r_edge = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 64; ++k) {
        const double th = kTwoPi * static_cast<double>(k) / 64.0;
        const double ux = scale * std::cos(th), uy = std::sin(th) / scale;
        double lo2 = 0.0, hi2 = 3.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo2 + hi2);
            const double q2 = chart.center_q2 + mid * ux;
            const double p2 = chart.center_p2 + mid * uy;
            if (section_p1_squared(c, q2, p2) > 0.0) lo2 = mid; else hi2 = mid;
        }
        r_edge = std::min(r_edge, lo2);
    }
    chart.r_max = r_fraction * r_edge;

    ChartCore core;
    core.c = c;
    core.dt = dt;
    core.cq = chart.center_q2;
    core.cp = chart.center_p2;
    core.r_max = chart.r_max;
    core.s = scale;
    const double r_max = chart.r_max;
    const double cq = chart.center_q2, cp = chart.center_p2;
    const double s = scale;
    const double cc = c;

    auto to_section = [cq, cp, r_max, s](const LiftedPoint& zt, double& q2,
                                         double& p2) {
        if (zt.y < -1e-9 || zt.y > 1.0 + 1e-9)
            throw EvaluationError("hh chart: y outside [0, 1]", 0);
        const double y = std::min(std::max(zt.y, 0.0), 1.0);
        const double r = r_max * std::sqrt(y);
        const double th = kTwoPi * zt.xt;
        q2 = cq + s * r * std::cos(th);
        p2 = cp + r * std::sin(th) / s;
    };
    auto from_section = [cq, cp, r_max, s](double q2, double p2, double xt_base,
                                           double winding) {
        const double r = std::hypot((q2 - cq) / s, (p2 - cp) * s);
        const double y = sq(r / r_max);
        if (y > 1.0)
            throw EvaluationError("hh chart: image left the chart", 1);
        const double xt = xt_base + winding / kTwoPi;
        return LiftedPoint{xt, y};
    };

    auto lift = [core, to_section, from_section, cc](const LiftedPoint& zt) {
        double q2, p2;
        to_section(zt, q2, p2);
        if (section_p1_squared(cc, q2, p2) <= 0.0)
            throw EvaluationError("hh chart: point off the energy shell", 0);
        double q2o, p2o, winding;
        core.advance(q2, p2, +1, q2o, p2o, winding);
        return from_section(q2o, p2o, zt.xt, winding);
    };
    auto lift_inverse = [core, to_section, from_section, cc](const LiftedPoint& zt) {
        double q2, p2;
        to_section(zt, q2, p2);
        if (section_p1_squared(cc, q2, p2) <= 0.0)
            throw EvaluationError("hh chart: point off the energy shell", 0);
        double q2o, p2o, winding;
        core.advance(q2, p2, -1, q2o, p2o, winding);
        return from_section(q2o, p2o, zt.xt, winding);
    };

    MapSpec spec;
    spec.name = "hh_chart";
    spec.family.kind = FamilyKind::custom;
    spec.area_preserving = true;
    spec.reversible = chart.reversor_standard;
    spec.lift = lift;
    spec.lift_inverse = lift_inverse;
    chart.map = std::move(spec);
    return chart;
}

} // namespace annulab
