#include "annulab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "annulab/families.hpp"
#include "annulab/henon_heiles.hpp"
#include "annulab/periodic.hpp"
#include "annulab/reversible.hpp"
#include "annulab/rng.hpp"
#include "annulab/rotation.hpp"
#include "annulab/serialize.hpp"

namespace annulab {

std::string SuiteResult::machine_output() const {
    std::ostringstream os;
    for (const CheckResult& c : checks) {
        if (c.timing) continue;
        os << "suite=" << suite << " check=" << c.name << " pass=" << (c.pass ? 1 : 0)
           << " value=" << fmt_g17(c.value) << " bound=" << fmt_g17(c.bound) << "\n";
    }
    return os.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct SuiteBuilder {
    SuiteResult result;
    Clock::time_point suite_start = Clock::now();
    Clock::time_point check_start = Clock::now();

    explicit SuiteBuilder(std::string name) { result.suite = std::move(name); }

    void add(const std::string& name, bool pass, double value, double bound,
             const std::string& note = "") {
        CheckResult c;
        c.name = name;
        c.pass = pass;
        c.value = value;
        c.bound = bound;
        c.note = note;
        c.seconds = elapsed(check_start);
        result.checks.push_back(std::move(c));
        check_start = Clock::now();
    }

    // value <= bound style check.
    void add_le(const std::string& name, double value, double bound,
                const std::string& note = "") {
        add(name, value <= bound, value, bound, note);
    }

    void add_runtime(double limit) {
        CheckResult c;
        c.name = "runtime";
        c.value = elapsed(suite_start);
        c.bound = limit;
        c.pass = c.value <= limit;
        c.seconds = c.value;
        c.timing = true;
        result.checks.push_back(std::move(c));
    }

    SuiteResult finish() {
        result.seconds = elapsed(suite_start);
        return std::move(result);
    }
};

// ---------------------------------------------------------------- lift axioms

SuiteResult suite_lift_axioms() {
    SuiteBuilder b("lift-axioms");
    for (const MapSpec& map : builtin_families()) {
        LiftCheckReport rep = check_lift_consistency(map, 1000, 12345);
        b.add_le(map.name, rep.worst(), 1e-9);
    }
    b.add_runtime(5.0);
    return b.finish();
}

// ------------------------------------------------------------ rotation oracle

SuiteResult suite_rotation_oracle() {
    SuiteBuilder b("rotation-oracle");
    for (long q = 1; q <= 7; ++q) {
        for (long p = 0; p < q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const double target = static_cast<double>(p) / static_cast<double>(q);
            MapSpec map = make_rotation(target);
            RotationEstimate est =
                rotation_estimate(map, {0.3, 0.5}, std::max(10L, 10 * q), 1e-12);
            const std::string name =
                "rigid-" + std::to_string(p) + "/" + std::to_string(q);
            const bool ok = est.converged && std::abs(est.value - target) <= 1e-9 &&
                            est.iterations <= 10 * q;
            b.add(name, ok, std::abs(est.value - target), 1e-9,
                  "iterations=" + std::to_string(est.iterations));
        }
    }
    MapSpec twist = make_twist({0.0, 1.0});
    for (int k = 1; k <= 9; ++k) {
        const double h = 0.1 * k;
        RotationEstimate est = rotation_estimate(twist, {0.2, h}, 10000, 1e-12);
        b.add_le("twist-height-0." + std::to_string(k), std::abs(est.value - h),
                 2.0 / 10000.0);
    }
    b.add_runtime(5.0);
    return b.finish();
}

// ----------------------------------------------------------------------- farey

std::vector<Rational> farey_brute(double lo, double hi, long q_max, long n0) {
    std::vector<Rational> out;
    for (long q = 1; q <= q_max; ++q) {
        if (std::gcd(q, n0) != 1) continue;
        const long p_lo = static_cast<long>(std::floor(lo * static_cast<double>(q))) - 2;
        const long p_hi = static_cast<long>(std::ceil(hi * static_cast<double>(q))) + 2;
        for (long p = p_lo; p <= p_hi; ++p) {
            if (std::gcd(std::abs(p), q) != 1) continue;
            const double v = static_cast<double>(p) / static_cast<double>(q);
            if (lo < v && v < hi) out.push_back(Rational{p, q});
        }
    }
    std::sort(out.begin(), out.end(), [](const Rational& a, const Rational& b) {
        return a.value() < b.value();
    });
    return out;
}

SuiteResult suite_farey() {
    SuiteBuilder b("farey");

    std::vector<Rational> example = farey_enumerate(0.0, 1.0, 5, 2);
    const char* expected[] = {"1/5", "1/3", "2/5", "3/5", "2/3", "4/5"};
    bool example_ok = example.size() == 6;
    for (std::size_t i = 0; example_ok && i < example.size(); ++i)
        example_ok = example[i].str() == expected[i];
    b.add("interval-0-1-qmax5-n0-2", example_ok,
          static_cast<double>(example.size()), 6.0);

    Rng rng(777);
    long matches = 0;
    for (int i = 0; i < 200; ++i) {
        const double lo = rng.uniform(-2.0, 2.0);
        const double hi = lo + rng.uniform(0.01, 2.0);
        const long q_max = 1 + static_cast<long>(rng.uniform_index(30));
        const long n0 = 1 + static_cast<long>(rng.uniform_index(10));
        std::vector<Rational> got = farey_enumerate(lo, hi, q_max, n0);
        std::vector<Rational> want = farey_brute(lo, hi, q_max, n0);
        if (got.size() == want.size() &&
            std::equal(got.begin(), got.end(), want.begin()))
            ++matches;
    }
    b.add("random-instances", matches == 200, static_cast<double>(matches), 200.0);
    b.add_runtime(1.0);
    return b.finish();
}

// ------------------------------------------------------------------ pq orbits

LiftedPoint g_iterate(const MapSpec& map, double xt, double y, long q) {
    LiftedPoint w{xt, y};
    for (long i = 0; i < q; ++i) w = map.lift(w);
    return w;
}

double g_x(const MapSpec& map, double xt, double y, long q, long p) {
    return g_iterate(map, xt, y, q).xt - xt - static_cast<double>(p);
}

// For twist-dominated maps the x-displacement grows monotonically in y on a
// fixed slice, so the resonance height y*(x) with G_x = 0 comes from plain
// bisection over the full strip.
double oracle_resonance_height(const MapSpec& map, double xt, long q, long p) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 55; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g_x(map, xt, mid, q, p) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Independent root locator: along the resonance curve y*(x), the leftover
// vertical displacement h(x) = G_y(x, y*(x)) changes sign at the true roots
// of G. A dense slice grid plus nested bisection finds them all without
// derivatives or Newton steps.
std::vector<AnnulusPoint> oracle_g_roots(const MapSpec& map, long q, long p) {
    const int slices = 400;
    auto h_at = [&](double xt) {
        const double y = oracle_resonance_height(map, xt, q, p);
        return std::pair<double, double>(g_iterate(map, xt, y, q).y - y, y);
    };
    std::vector<double> hs(slices + 1);
    std::vector<double> ys(slices + 1);
    for (int i = 0; i <= slices; ++i) {
        auto [h, y] = h_at(static_cast<double>(i) / slices);
        hs[i] = h;
        ys[i] = y;
    }
    std::vector<AnnulusPoint> roots;
    for (int i = 0; i < slices; ++i) {
        const double xa = static_cast<double>(i) / slices;
        const double xb = static_cast<double>(i + 1) / slices;
        if (std::abs(hs[i]) < 1e-12) {
            roots.push_back({wrap_unit(xa), ys[i]});
            continue;
        }
        if (std::abs(hs[i + 1]) < 1e-12) continue;  // owned by the next slice
        if ((hs[i] < 0.0) == (hs[i + 1] < 0.0)) continue;
        double a = xa, b = xb, ha = hs[i];
        double y_root = ys[i];
        for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
            const double mid = 0.5 * (a + b);
            auto [hm, ym] = h_at(mid);
            y_root = ym;
            if (hm == 0.0) {
                a = mid;
                b = mid;
                break;
            }
            if ((hm < 0.0) == (ha < 0.0)) {
                a = mid;
                ha = hm;
            } else {
                b = mid;
            }
        }
        roots.push_back({wrap_unit(0.5 * (a + b)), y_root});
    }
    return roots;
}

GridSpec scan_grid() {
    GridSpec grid;
    grid.nx = 4;
    grid.ny = 9;
    grid.y_min = 0.05;
    grid.y_max = 0.95;
    return grid;
}

SuiteResult suite_pq_orbits() {
    SuiteBuilder b("pq-orbits");
    MapSpec map = make_split_kicked_twist({0.0, 1.0}, 0.1);
    const GridSpec grid = scan_grid();
    std::vector<Rational> targets = farey_enumerate(0.05, 0.95, 7, 1);
    for (const Rational& target : targets) {
        std::vector<OrbitRecord> orbits = find_pq_orbit(map, target, grid, 1e-10);
        bool found = false;
        double best_res = 1e300;
        for (const OrbitRecord& rec : orbits) {
            if (rec.prime_certified && rec.period == target.q) {
                found = true;
                best_res = std::min(best_res, rec.residual);
            }
        }
        b.add("target-" + target.str() + "-found", found && best_res < 1e-10,
              found ? best_res : 1.0, 1e-10);

        std::vector<AnnulusPoint> stars =
            oracle_g_roots(map, target.q, static_cast<long>(target.p));
        // Soundness: every point of every found orbit is confirmed by an
        // independently located root.
        double worst = (stars.empty() || orbits.empty()) ? 1.0 : 0.0;
        for (const OrbitRecord& rec : orbits) {
            for (const AnnulusPoint& pt : rec.points) {
                double dist = 1e300;
                for (const AnnulusPoint& star : stars)
                    dist = std::min(dist, annulus_dist(star, pt));
                worst = std::max(worst, dist);
            }
        }
        b.add_le("target-" + target.str() + "-oracle", worst, 1e-4,
                 "oracle_roots=" + std::to_string(stars.size()) + " found=" +
                     std::to_string(orbits.size()));
    }
    b.add_runtime(60.0);
    return b.finish();
}

// ------------------------------------------------------------------- odd scan

SuiteResult suite_odd_scan() {
    SuiteBuilder b("odd-scan");
    MapSpec map = make_split_kicked_twist({0.0, 1.0}, 0.1);
    const GridSpec grid = scan_grid();

    Theorem1Report rep = theorem1_scan(map, 2, 9, grid, 1e-10);
    b.add("n0-2-distinct-orbits", rep.distinct_orbits() >= 6,
          static_cast<double>(rep.distinct_orbits()), 6.0);
    bool all_odd = !rep.all_orbits.empty();
    for (const OrbitRecord& rec : rep.all_orbits)
        if (rec.period % 2 == 0) all_odd = false;
    b.add("n0-2-periods-odd", all_odd, all_odd ? 1.0 : 0.0, 1.0);

    Theorem1Report rep3 = theorem1_scan(map, 3, 9, grid, 1e-10);
    bool none_div3 = true;
    for (const OrbitRecord& rec : rep3.all_orbits)
        if (rec.period % 3 == 0) none_div3 = false;
    b.add("n0-3-periods-coprime", none_div3 && !rep3.all_orbits.empty(),
          static_cast<double>(rep3.distinct_orbits()), 1.0);
    b.add_runtime(120.0);
    return b.finish();
}

// ---------------------------------------------------------------- reversibility

SuiteResult suite_reversibility() {
    SuiteBuilder b("reversibility");
    std::vector<MapSpec> good;
    good.push_back(make_twist({0.0, 1.0}));
    good.push_back(make_twist({-0.5, 1.0}));
    good.push_back(make_twist({0.1, 0.5, 0.25}));
    good.push_back(make_rotation(0.25));
    good.push_back(make_rotation(1.0 / 3.0));
    good.push_back(make_split_kicked_twist({0.0, 1.0}, 0.1));
    good.push_back(make_split_kicked_twist({-0.5, 1.0}, 0.2));
    for (const MapSpec& map : good) {
        ReversibilityReport rep = check_reversible(map, 500, 2024);
        b.add_le(map.name, std::max(rep.max_map_dev, rep.max_lift_dev), 1e-9);
    }
    MapSpec bad = make_kicked_twist({0.0, 1.0}, 0.1);
    ReversibilityReport rep = check_reversible(bad, 500, 2024);
    const double dev = std::max(rep.max_map_dev, rep.max_lift_dev);
    b.add("asymmetric-family-fails", dev > 1e-3, dev, 1e-3);
    b.add_runtime(10.0);
    return b.finish();
}

// ------------------------------------------------------------------------ kang

// Independent oracle: the same sign-scan at 10x resolution, written from the
// displacement definition directly.
std::vector<double> kang_oracle_roots(const MapSpec& map, const SymmetryLine& line,
                                      long res) {
    auto d = [&](double y) {
        LiftedPoint im = map.lift(LiftedPoint{line.x_lift(), y});
        return im.xt - line.x_lift();
    };
    std::vector<double> roots;
    double py = 0.0;
    double pv = d(0.0);
    for (long i = 1; i <= res; ++i) {
        const double y = static_cast<double>(i) / static_cast<double>(res);
        const double v = d(y);
        if (std::abs(pv) < 1e-13) {
            roots.push_back(py);
        } else if (std::abs(v) >= 1e-13 && (pv < 0.0) != (v < 0.0)) {
            double a = py, bnd = y, ga = pv;
            for (int it = 0; it < 200 && bnd - a > 1e-15; ++it) {
                const double mid = 0.5 * (a + bnd);
                const double gm = d(mid);
                if (gm == 0.0) {
                    a = mid;
                    bnd = mid;
                    break;
                }
                if ((gm < 0.0) == (ga < 0.0)) {
                    a = mid;
                    ga = gm;
                } else {
                    bnd = mid;
                }
            }
            roots.push_back(0.5 * (a + bnd));
        }
        py = y;
        pv = v;
    }
    if (std::abs(pv) < 1e-13) roots.push_back(py);
    return roots;
}

bool kang_agrees(const KangReport& rep, const std::vector<double>& oracle,
                 double tol) {
    if (rep.whole_line_fixed) return false;  // callers avoid degenerate cases
    if (rep.roots.size() != oracle.size()) return false;
    for (std::size_t i = 0; i < oracle.size(); ++i)
        if (std::abs(rep.roots[i].y - oracle[i]) > tol) return false;
    return true;
}

SuiteResult suite_kang() {
    SuiteBuilder b("kang");

    MapSpec centered = make_twist({-0.5, 1.0});
    KangReport rep = kang_fixed_points(centered, SymmetryLine{LineId::Y1}, 512, 1e-9);
    const bool one_root = rep.roots.size() == 1 && !rep.whole_line_fixed;
    const double y_err = one_root ? std::abs(rep.roots[0].y - 0.5) : 1.0;
    b.add("centered-twist-single-root",
          one_root && y_err <= 1e-10 && rep.roots[0].fixed, y_err, 1e-10);

    MapSpec half = make_rotation(0.5);
    bool both_empty = true;
    for (const SymmetryLine& line : symmetry_lines()) {
        KangReport r = kang_fixed_points(half, line, 512, 1e-9);
        if (!r.roots.empty() || r.whole_line_fixed) both_empty = false;
    }
    b.add("half-rotation-empty", both_empty, both_empty ? 0.0 : 1.0, 0.0);

    Rng rng(4242);
    long agreed = 0;
    const long families = 50;
    for (long i = 0; i < families; ++i) {
        MapSpec map;
        const std::uint64_t kind = rng.uniform_index(3);
        if (kind == 0) {
            map = make_rotation(rng.uniform(0.05, 0.95));
        } else if (kind == 1) {
            map = make_twist({rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                              rng.uniform(-1.5, 1.5)});
        } else {
            map = make_split_kicked_twist(
                {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)},
                rng.uniform(0.01, 0.15));
        }
        bool family_ok = true;
        for (const SymmetryLine& line : symmetry_lines()) {
            KangReport r = kang_fixed_points(map, line, 256, 1e-8);
            std::vector<double> oracle = kang_oracle_roots(map, line, 2560);
            if (r.whole_line_fixed || r.roots.size() != oracle.size()) {
                family_ok = r.roots.size() == oracle.size() && !r.whole_line_fixed;
                if (!family_ok) break;
                continue;
            }
            if (!kang_agrees(r, oracle, 1.5 / 256.0)) {
                family_ok = false;
                break;
            }
        }
        if (family_ok) ++agreed;
    }
    b.add("random-families-oracle", agreed == families,
          static_cast<double>(agreed), static_cast<double>(families));
    b.add_runtime(30.0);
    return b.finish();
}

// ------------------------------------------------------------- symmetric scan

SuiteResult suite_symmetric_scan() {
    SuiteBuilder b("symmetric-scan");
    MapSpec map = make_split_kicked_twist({0.0, 1.0}, 0.05);
    Corollary14Report rep = corollary14_scan(map, 2, 7, 1e-8, scan_grid(), 512);

    b.add("symmetric-orbits-found", rep.records.size() >= 4,
          static_cast<double>(rep.records.size()), 4.0);

    bool all_odd = !rep.records.empty();
    double worst_sym = 0.0;
    for (const SymmetricOrbitRecord& rec : rep.records) {
        if (rec.base.period % 2 == 0) all_odd = false;
        SymmetryCheck check = is_symmetric_orbit(rec.base, 1e-8);
        if (!check.symmetric) all_odd = false;
        worst_sym = std::max(worst_sym, check.max_dev);
    }
    b.add("periods-odd-and-symmetric", all_odd, worst_sym, 1e-8);
    b.add("targets-covered", rep.covered(),
          static_cast<double>(rep.coverage.size()), 1.0);
    b.add_runtime(180.0);
    return b.finish();
}

// ------------------------------------------------------------------- hh levels

SuiteResult suite_hh_levels() {
    SuiteBuilder b("hh-levels");
    std::vector<Equilibrium> eq = critical_levels();
    b.add("equilibrium-count", eq.size() == 4, static_cast<double>(eq.size()), 4.0);

    double worst_grad = 0.0;
    for (const Equilibrium& e : eq) worst_grad = std::max(worst_grad, e.grad_norm);
    b.add_le("gradient-residual", worst_grad, 1e-12);

    bool values_ok = eq.size() == 4;
    if (values_ok) {
        values_ok = std::abs(eq[0].value) < 1e-12;
        for (int i = 1; i < 4; ++i)
            values_ok = values_ok && std::abs(eq[i].value - 1.0 / 6.0) < 1e-12;
    }
    b.add("value-set-0-and-1/6", values_ok, values_ok ? 0.0 : 1.0, 0.0);

    const double s3 = std::sqrt(3.0) / 2.0;
    const double expect[4][2] = {{0.0, 0.0}, {-s3, -0.5}, {0.0, 1.0}, {s3, -0.5}};
    bool states_ok = eq.size() == 4;
    if (states_ok)
        for (int i = 0; i < 4; ++i)
            states_ok = states_ok &&
                        std::abs(eq[i].state.q1 - expect[i][0]) < 1e-9 &&
                        std::abs(eq[i].state.q2 - expect[i][1]) < 1e-9;
    b.add("equilibrium-states", states_ok, states_ok ? 0.0 : 1.0, 0.0);
    b.add_runtime(5.0);
    return b.finish();
}

// --------------------------------------------------------------- hh invariants

double hh_dev(const HHState& a, const HHState& b) {
    return std::max(std::max(std::abs(a.q1 - b.q1), std::abs(a.q2 - b.q2)),
                    std::max(std::abs(a.p1 - b.p1), std::abs(a.p2 - b.p2)));
}

HHState sample_on_shell(Rng& rng, double c) {
    for (int tries = 0; tries < 1000; ++tries) {
        const double q2 = rng.uniform(-0.35, 0.55);
        const double p2 = rng.uniform(-0.25, 0.25);
        if (section_p1_squared(c, q2, p2) > 1e-4) return section_state(c, q2, p2);
    }
    throw DomainError("sample_on_shell: rejection sampling failed");
}

SuiteResult suite_hh_invariants() {
    SuiteBuilder b("hh-invariants");
    const double c = 0.125, dt = 1e-3;

    HHState s0 = section_state(c, 0.1, 0.05);
    b.add_le("energy-drift", hh_max_energy_drift(s0, 1e4, dt), 1e-8);

    Rng rng(9090);
    double rho_dev = 0.0, sigma_dev = 0.0;
    for (int i = 0; i < 20; ++i) {
        HHState s = sample_on_shell(rng, c);
        const double t = rng.uniform(1.0, 100.0);
        HHState lhs = hh_flow(apply_rho(s), t, dt);
        HHState rhs = apply_rho(hh_flow(s, -t, dt));
        rho_dev = std::max(rho_dev, hh_dev(lhs, rhs));
        HHState ls = hh_flow(apply_sigma(s), t, dt);
        HHState rs = apply_sigma(hh_flow(s, t, dt));
        sigma_dev = std::max(sigma_dev, hh_dev(ls, rs));
    }
    b.add_le("rho-reversal", rho_dev, 1e-7);
    b.add_le("sigma-equivariance", sigma_dev, 1e-7);

    Rng rng2(9091);
    double conj_dev = 0.0;
    for (int i = 0; i < 1000; ++i) {
        HHState s{rng2.uniform(-1.0, 1.0), rng2.uniform(-1.0, 1.0),
                  rng2.uniform(-1.0, 1.0), rng2.uniform(-1.0, 1.0)};
        HHState lhs = apply_sigma(apply_rho(apply_sigma(s)));
        HHState rhs = apply_rho(s);
        conj_dev = std::max(conj_dev, hh_dev(lhs, rhs));
    }
    b.add_le("sigma-rho-sigma", conj_dev, 1e-14);
    b.add_runtime(60.0);
    return b.finish();
}

// --------------------------------------------------------- hh symmetric orbits

// Regression baselines: pinned from the first verified run at c = 0.125,
// m_max 6, resolution 240, tol 1e-10, dt 1e-3.
struct HHPin {
    double q2;
    long m;
    double period;
    bool sigma;
};
constexpr HHPin kHHPins[] = {
    {-0.372312784, 1, 6.075615784, true},
    {+0.302666817, 1, 6.075615784, true},
    {-0.185405087, 1, 6.900599448, false},
    {-0.372312784, 2, 12.151231568, true},
    {+0.302666817, 2, 12.151231569, true},
    {-0.185405087, 2, 13.801198895, false},
    {-0.372312784, 3, 18.226847353, true},
    {+0.302666817, 3, 18.226847353, true},
    {-0.185405087, 3, 20.701798343, false},
    {+0.672472594, 4, 22.576227275, false},
    {-0.439219419, 4, 22.576227282, false},
    {+0.302666817, 4, 24.302463137, true},
    {-0.372312784, 4, 24.302463138, true},
    {-0.405796501, 4, 25.139767281, false},
    {-0.327346717, 4, 25.139767283, false},
    {+0.512430130, 4, 25.140925758, false},
    {+0.051602381, 4, 25.140925758, false},
    {-0.185405087, 4, 27.602397790, false},
    {-0.433819300, 5, 29.194783731, false},
    {+0.656756304, 5, 29.425555938, false},
    {+0.302666817, 5, 30.378078922, true},
    {-0.372312784, 5, 30.378078922, true},
    {-0.415298060, 5, 32.040446127, true},
    {-0.017055017, 5, 32.040446128, true},
    {-0.294062537, 5, 32.377740342, true},
    {+0.572953073, 5, 32.377740342, true},
    {-0.185405087, 5, 34.502997240, false},
    {+0.644901524, 6, 36.064971679, false},
    {-0.431303756, 6, 36.064971707, false},
    {+0.302666817, 6, 36.453694706, true},
    {-0.372312784, 6, 36.453694706, true},
    {-0.419572274, 6, 39.198355802, false},
    {-0.263566841, 6, 39.198355802, false},
    {+0.600335699, 6, 39.233285492, false},
    {-0.051773882, 6, 39.233285492, false},
    {-0.185405087, 6, 41.403596683, false},
};
constexpr long kHHPinnedCount = static_cast<long>(sizeof(kHHPins) / sizeof(kHHPins[0]));

SuiteResult suite_hh_symmetric_orbits() {
    SuiteBuilder b("hh-symmetric-orbits");
    std::vector<HHOrbitRecord> recs = hh_symmetric_orbits(0.125, 6, 240, 1e-10, 1e-3);

    long rho_count = 0;
    long sigma_count = 0;
    double worst_closure = 0.0;
    for (const HHOrbitRecord& r : recs) {
        if (r.rho_symmetric && r.closure_residual < 1e-7) {
            ++rho_count;
            worst_closure = std::max(worst_closure, r.closure_residual);
        }
        if (r.sigma_symmetric && r.sigma_residual < 1e-6) ++sigma_count;
    }
    b.add("rho-symmetric-orbits", rho_count >= 2, static_cast<double>(rho_count),
          2.0, "closure<=" + fmt_g17(worst_closure));
    b.add("sigma-symmetric-orbit", sigma_count >= 1,
          static_cast<double>(sigma_count), 1.0);

    // Regression match is order-insensitive: two pins share a period to
    // within the sort's resolution, so each pin claims one distinct record.
    bool pins_ok = static_cast<long>(recs.size()) == kHHPinnedCount;
    long matched = 0;
    if (pins_ok) {
        std::vector<bool> used(recs.size(), false);
        for (const HHPin& pin : kHHPins) {
            bool hit = false;
            for (std::size_t i = 0; i < recs.size() && !hit; ++i) {
                if (used[i]) continue;
                if (recs[i].m != pin.m) continue;
                if (recs[i].sigma_symmetric != pin.sigma) continue;
                if (std::abs(recs[i].q2_start - pin.q2) > 1e-6) continue;
                if (std::abs(recs[i].period - pin.period) > 1e-6) continue;
                used[i] = true;
                hit = true;
            }
            if (!hit) pins_ok = false;
            if (hit) ++matched;
        }
    }
    b.add("regression-baseline", pins_ok, static_cast<double>(matched),
          static_cast<double>(kHHPinnedCount));
    b.add_runtime(600.0);
    return b.finish();
}

// -------------------------------------------------------------- hh return area

SuiteResult suite_hh_return_area() {
    SuiteBuilder b("hh-return-area");
    SectionAreaReport rep = hh_return_area_check(0.125, 20, 100000, 31337, 0.02);
    long passed = 0;
    double worst_pull = 0.0;  // |diff| / (3 sigma), the binding statistic
    for (const SectionAreaReport::Box& bx : rep.boxes) {
        if (bx.pass) ++passed;
        if (bx.sigma > 0.0)
            worst_pull = std::max(
                worst_pull, std::abs(bx.p_box - bx.p_image) / (3.0 * bx.sigma));
    }
    b.add("boxes-within-3-sigma", passed == 20, static_cast<double>(passed), 20.0,
          "max|diff|/3sigma=" + fmt_g17(worst_pull));
    b.add("cloud-returned", rep.no_return <= rep.samples / 1000,
          static_cast<double>(rep.no_return),
          static_cast<double>(rep.samples / 1000));
    b.add_runtime(120.0);
    return b.finish();
}

// ------------------------------------------------------------- reproducibility

SuiteResult suite_reproducibility() {
    SuiteBuilder b("reproducibility");
    const char* names[] = {"farey", "rotation-oracle", "reversibility", "hh-levels"};
    for (const char* name : names) {
        SuiteResult first = run_suite(name);
        SuiteResult second = run_suite(name);
        const bool same = first.machine_output() == second.machine_output();
        b.add(std::string(name) + "-bytes-identical", same && first.pass(),
              same ? 1.0 : 0.0, 1.0);
    }
    b.add_runtime(60.0);
    return b.finish();
}

} // namespace

std::vector<std::string> suite_names() {
    return {"lift-axioms",        "rotation-oracle",
            "farey",              "pq-orbits",
            "odd-scan",   "reversibility",
            "kang",               "symmetric-scan",
            "hh-levels",          "hh-invariants",
            "hh-symmetric-orbits","hh-return-area",
            "reproducibility"};
}

SuiteResult run_suite(const std::string& name) {
    if (name == "lift-axioms") return suite_lift_axioms();
    if (name == "rotation-oracle") return suite_rotation_oracle();
    if (name == "farey") return suite_farey();
    if (name == "pq-orbits") return suite_pq_orbits();
    if (name == "odd-scan") return suite_odd_scan();
    if (name == "reversibility") return suite_reversibility();
    if (name == "kang") return suite_kang();
    if (name == "symmetric-scan") return suite_symmetric_scan();
    if (name == "hh-levels") return suite_hh_levels();
    if (name == "hh-invariants") return suite_hh_invariants();
    if (name == "hh-symmetric-orbits") return suite_hh_symmetric_orbits();
    if (name == "hh-return-area") return suite_hh_return_area();
    if (name == "reproducibility") return suite_reproducibility();
    throw UsageError("unknown verify suite: " + name);
}

} // namespace annulab
