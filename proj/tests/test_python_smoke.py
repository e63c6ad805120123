"""End-to-end smoke tests for the Python bindings.

The heavy numerics are exercised by the C++ test binaries; these tests check
that the binding layer exposes the main operations faithfully, keeps the
argument conventions, and translates the exception hierarchy.
"""

import math

import pytest

import annulab as al


def test_version_and_suite_registry():
    assert al.__version__
    names = al.suite_names()
    assert names[0] == "lift-axioms"
    assert "farey" in names


def test_rotation_map_estimate():
    f = al.rotation(0.25)
    assert f.name.startswith("rotation")
    est = al.rotation_estimate(f, (0.0, 0.5))
    assert est.converged and not est.diverged
    assert est.value == pytest.approx(0.25, abs=1e-9)
    assert est.seed.y == 0.5


def test_map_call_orbit_and_lift():
    f = al.twist([0.25])
    z = f(0.1, 0.5)
    assert z.x == pytest.approx(0.35)
    assert z.y == 0.5
    pts = f.orbit((0.1, 0.5), 4)
    assert len(pts) == 5
    assert al.circle_dist(pts[4].x, pts[0].x) < 1e-12
    w = f.lift(1.9, 0.5)
    assert w.xt == pytest.approx(2.15)
    back = f.lift_inverse(w)
    assert al.lift_dist(back, al.LiftedPoint(1.9, 0.5)) < 1e-12
    x, y = f((0.0, 0.25))
    assert (x, y) == pytest.approx((0.25, 0.25))


def test_rational_and_farey():
    r = al.Rational(2, 6)
    assert (r.p, r.q) == (1, 3)
    assert str(al.Rational("3/9")) == "1/3"
    assert al.Rational(1, 3) < al.Rational("1/2")
    assert float(al.Rational(1, 4)) == 0.25
    with pytest.raises(al.DomainError):
        al.Rational(1, 0)
    with pytest.raises(al.UsageError):
        al.Rational("1x/2")
    fractions = al.farey_enumerate(0.0, 1.0, 5, 2)
    assert [str(r) for r in fractions] == ["1/5", "1/3", "2/5", "3/5", "2/3", "4/5"]


def test_family_round_trip():
    f = al.split_kicked_twist([0.0, 1.0], 0.1)
    g = al.make_map(f.family)
    assert g.name == f.name
    assert g.family.kind == "split_kicked_twist"
    assert g.family.eps == 0.1
    assert g.family.kick.even_in_x()


def test_lift_axioms_and_area():
    f = al.split_kicked_twist([0.0, 1.0], 0.1)
    assert f.reversible and f.area_preserving and f.has_inverse
    rep = al.check_lift_consistency(f, samples=200, seed=7)
    assert rep.ok(1e-9)
    assert rep.samples == 200
    area = al.area_check(f, boxes=3, samples_per_box=4000, seed=99)
    assert area.passed
    assert len(area.boxes) == 3


def test_reversibility_and_kang():
    f = al.split_kicked_twist([-0.5, 1.0], 0.1)
    assert al.check_reversible(f, samples=200, seed=11).ok(1e-9)
    bad = al.kicked_twist([0.0, 1.0], 0.1)
    assert not bad.reversible
    assert not al.check_reversible(bad, samples=200, seed=11).ok(1e-3)
    kang = al.kang_fixed_points(f, "Y1", resolution=256, tol=1e-9)
    assert kang.line.name == "Y1"
    assert len(kang.fixed_points) >= 1
    root = kang.roots[0]
    assert root.fixed
    assert root.y == pytest.approx(0.5, abs=0.05)
    with pytest.raises(al.UsageError):
        al.SymmetryLine("Y3")


def test_pq_orbits_and_interval_scan():
    f = al.split_kicked_twist([0.0, 1.0], 0.05)
    seeds = al.GridSpec(nx=2, ny=5)
    orbits = al.find_pq_orbit(f, al.Rational("1/3"), seeds, 1e-10)
    assert orbits
    for o in orbits:
        assert o.period == 3
        assert o.rotation == al.Rational(1, 3)
        assert o.residual < 1e-8
        assert o.prime_certified
        assert len(o.points) == 3
    rep = al.theorem1_scan(f, 2, 3, seeds, 1e-9)
    assert not rep.degenerate_interval
    assert 0.0 < rep.interval.lo < rep.interval.hi < 1.0
    assert {str(t.target) for t in rep.targets} == {"1/3", "2/3"}
    assert rep.distinct_orbits() >= 2


def test_symmetric_search_and_scan():
    f = al.split_kicked_twist([0.0, 1.0], 0.05)
    records = al.symmetric_orbit_search(f, 3, resolution=128, tol=1e-9)
    assert records
    for r in records:
        assert len(r.permutation) == r.base.period
        assert all(line in ("Y1", "Y2") for _, line in r.crossings)
        chk = al.is_symmetric_orbit(r.base, 1e-6)
        assert chk.symmetric
    rep = al.corollary14_scan(f, 2, 3, tol=1e-8,
                              seeds=al.GridSpec(nx=2, ny=5), resolution=128)
    assert rep.covered()
    assert all(math.gcd(r.base.period, 2) == 1 for r in rep.records)


def test_hh_energy_section_and_escape():
    levels = al.critical_levels()
    assert len(levels) == 4
    values = sorted(e.value for e in levels)
    assert values[0] == pytest.approx(0.0, abs=1e-10)
    assert values[-1] == pytest.approx(1.0 / 6.0, abs=1e-10)
    s = al.section_state(0.125, 0.1, 0.05)
    assert s.q1 == 0.0 and s.p1 > 0.0
    assert al.hh_energy(s) == pytest.approx(0.125, abs=1e-12)
    assert len(al.hh_grad(al.HHState(0.1, -0.2, 0.3, 0.4))) == 4
    with pytest.raises(al.DomainError):
        al.section_state(0.125, 0.9, 0.0)
    with pytest.raises(al.EscapeError):
        al.hh_flow(al.HHState(0.0, 2.5, 0.0, 1.0), 50.0, 1e-3)


def test_hh_return_and_symmetric_orbits():
    pts = al.poincare_return(0.125, (0.1, 0.05), 3)
    assert len(pts) == 3
    assert 0.0 < pts[0].time < pts[1].time < pts[2].time
    assert max(p.energy_residual for p in pts) < 1e-9
    lo, hi = al.hh_admissible_segment(0.125)
    assert lo < 0.0 < hi
    orbits = al.hh_symmetric_orbits(0.125, 1, 80, 1e-9)
    assert orbits
    assert all(o.rho_symmetric for o in orbits)
    assert all(o.closure_residual < 1e-6 for o in orbits)
    assert all(o.period == pytest.approx(2.0 * o.half_period) for o in orbits)


def test_hh_chart_map():
    chart = al.hh_annulus_chart(0.125)
    assert chart.reversor_standard
    assert chart.r_max > 0.01
    assert chart.axis_scale > 0.0
    f = chart.map
    w = f(0.25, 0.1)
    assert 0.0 <= w.y <= 1.0
    z = al.Point(0.8, 0.05)
    back = f.inverse(f(z))
    assert al.annulus_dist(back, z) < 1e-6


def test_verify_suite_deterministic():
    res = al.run_suite("farey")
    assert res.ok()
    assert res.suite == "farey"
    assert res.machine_output() == al.run_suite("farey").machine_output()
    with pytest.raises(al.UsageError):
        al.run_suite("nope")
