#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "annulab/errors.hpp"
#include "annulab/families.hpp"
#include "annulab/geometry.hpp"
#include "annulab/henon_heiles.hpp"
#include "annulab/map_spec.hpp"
#include "annulab/orbit_record.hpp"
#include "annulab/periodic.hpp"
#include "annulab/rational.hpp"
#include "annulab/reversible.hpp"
#include "annulab/rotation.hpp"
#include "annulab/serialize.hpp"
#include "annulab/verify.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace annulab;

namespace {

SymmetryLine line_from_name(const std::string& name) {
    if (name == "Y1") return SymmetryLine{LineId::Y1};
    if (name == "Y2") return SymmetryLine{LineId::Y2};
    throw UsageError("unknown symmetry line '" + name + "' (expected Y1 or Y2)");
}

py::list crossings_to_list(const std::vector<std::pair<long, LineId>>& cs) {
    py::list out;
    for (const auto& c : cs)
        out.append(py::make_tuple(c.first, SymmetryLine{c.second}.name()));
    return out;
}

double point_item(double x, double y, long i) {
    if (i == 0 || i == -2) return x;
    if (i == 1 || i == -1) return y;
    throw py::index_error("point index out of range");
}

} // namespace

PYBIND11_MODULE(_annulab, m) {
    m.doc() = "Numerical laboratory for area-preserving and reversible annulus "
              "homeomorphisms: rotation numbers, periodic orbit search, "
              "symmetry-line methods, and the Henon-Heiles return map.";

    // ----- exceptions (base first so derived translators take precedence) ---
    auto exc_base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", exc_base);
    py::register_exception<EvaluationError>(m, "EvaluationError", exc_base);
    py::register_exception<ConstructionError>(m, "ConstructionError", exc_base);
    py::register_exception<NotPeriodicError>(m, "NotPeriodicError", exc_base);
    py::register_exception<IntervalUndefinedError>(m, "IntervalUndefinedError", exc_base);
    py::register_exception<EscapeError>(m, "EscapeError", exc_base);
    py::register_exception<UsageError>(m, "UsageError", exc_base);

    // ----- geometry ---------------------------------------------------------
    py::class_<AnnulusPoint>(m, "Point",
            "Point on the annulus R/Z x [0,1]; x is the mod-1 circle coordinate.")
        .def(py::init<double, double>(), "x"_a, "y"_a)
        .def(py::init([](std::pair<double, double> t) {
                 return AnnulusPoint{t.first, t.second};
             }),
             "xy"_a)
        .def_readwrite("x", &AnnulusPoint::x)
        .def_readwrite("y", &AnnulusPoint::y)
        .def("__len__", [](const AnnulusPoint&) { return 2; })
        .def("__getitem__",
             [](const AnnulusPoint& z, long i) { return point_item(z.x, z.y, i); })
        .def("__repr__", [](const AnnulusPoint& z) {
            return "Point(" + fmt_g17(z.x) + ", " + fmt_g17(z.y) + ")";
        });
    py::implicitly_convertible<py::tuple, AnnulusPoint>();

    py::class_<LiftedPoint>(m, "LiftedPoint",
            "Point on the universal cover R x [0,1]; xt is unbounded.")
        .def(py::init<double, double>(), "xt"_a, "y"_a)
        .def(py::init([](std::pair<double, double> t) {
                 return LiftedPoint{t.first, t.second};
             }),
             "xty"_a)
        .def_readwrite("xt", &LiftedPoint::xt)
        .def_readwrite("y", &LiftedPoint::y)
        .def("__len__", [](const LiftedPoint&) { return 2; })
        .def("__getitem__",
             [](const LiftedPoint& z, long i) { return point_item(z.xt, z.y, i); })
        .def("__repr__", [](const LiftedPoint& z) {
            return "LiftedPoint(" + fmt_g17(z.xt) + ", " + fmt_g17(z.y) + ")";
        });
    py::implicitly_convertible<py::tuple, LiftedPoint>();

    m.def("wrap_unit", &wrap_unit, "x"_a, "Reduce to the representative in [0,1).");
    m.def("circle_dist", &circle_dist, "a"_a, "b"_a,
          "Distance on the circle R/Z.");
    m.def("annulus_dist", &annulus_dist, "a"_a, "b"_a,
          "Annulus metric min(|dx|, 1-|dx|) + |dy|.");
    m.def("lift_dist", &lift_dist, "a"_a, "b"_a, "Strip metric |dxt| + |dy|.");

    py::class_<GridSpec>(m, "GridSpec",
            "Rectangular seed grid, generated in row-major deterministic order.")
        .def(py::init([](int nx, int ny, double x_min, double x_max, double y_min,
                         double y_max) {
                 GridSpec g;
                 g.nx = nx;
                 g.ny = ny;
                 g.x_min = x_min;
                 g.x_max = x_max;
                 g.y_min = y_min;
                 g.y_max = y_max;
                 return g;
             }),
             "nx"_a = 4, "ny"_a = 7, "x_min"_a = 0.0, "x_max"_a = 1.0,
             "y_min"_a = 0.1, "y_max"_a = 0.9)
        .def_readwrite("nx", &GridSpec::nx)
        .def_readwrite("ny", &GridSpec::ny)
        .def_readwrite("x_min", &GridSpec::x_min)
        .def_readwrite("x_max", &GridSpec::x_max)
        .def_readwrite("y_min", &GridSpec::y_min)
        .def_readwrite("y_max", &GridSpec::y_max)
        .def("points", &GridSpec::points)
        .def("__repr__", [](const GridSpec& g) {
            return "GridSpec(nx=" + std::to_string(g.nx) +
                   ", ny=" + std::to_string(g.ny) + ", x_min=" + fmt_g17(g.x_min) +
                   ", x_max=" + fmt_g17(g.x_max) + ", y_min=" + fmt_g17(g.y_min) +
                   ", y_max=" + fmt_g17(g.y_max) + ")";
        });

    // ----- rationals --------------------------------------------------------
    py::class_<Rational>(m, "Rational",
            "Irreducible fraction p/q with q >= 1; ordered exactly.")
        .def(py::init([](long long p, long long q) { return make_rational(p, q); }),
             "p"_a, "q"_a = 1)
        .def(py::init([](const std::string& s) { return parse_rational(s); }), "text"_a)
        .def_readonly("p", &Rational::p)
        .def_readonly("q", &Rational::q)
        .def("value", &Rational::value)
        .def("__float__", &Rational::value)
        .def("__str__", &Rational::str)
        .def("__repr__",
             [](const Rational& r) {
                 return "Rational(" + std::to_string(r.p) + ", " + std::to_string(r.q) + ")";
             })
        .def("__hash__",
             [](const Rational& r) { return py::hash(py::make_tuple(r.p, r.q)); })
        .def(py::self == py::self)
        .def(py::self != py::self)
        .def(py::self < py::self);
    py::implicitly_convertible<py::str, Rational>();

    // ----- maps and families ------------------------------------------------
    py::class_<KickShape>(m, "KickShape",
            "Kick shape c(x) = sum_k cos[k] cos(2 pi k x) + sin[k] sin(2 pi k x).")
        .def(py::init<std::vector<double>, std::vector<double>>(),
             "cos_coeffs"_a, "sin_coeffs"_a = std::vector<double>{})
        .def_readwrite("cos_coeffs", &KickShape::cos_coeffs)
        .def_readwrite("sin_coeffs", &KickShape::sin_coeffs)
        .def("even_in_x", &KickShape::even_in_x);

    py::class_<FamilySpec>(m, "FamilySpec",
            "Plain-data description of a built-in family; make_map() rebuilds it.")
        .def(py::init([](const std::string& kind, double alpha,
                         std::vector<double> omega, double eps, KickShape kick,
                         int substeps) {
                 FamilySpec f;
                 f.kind = family_kind_from_name(kind);
                 f.alpha = alpha;
                 f.omega = std::move(omega);
                 f.eps = eps;
                 f.kick = std::move(kick);
                 f.substeps = substeps;
                 return f;
             }),
             "kind"_a = "rotation", "alpha"_a = 0.0,
             "omega"_a = std::vector<double>{0.0}, "eps"_a = 0.0,
             "kick"_a = default_kick_shape(), "substeps"_a = 16)
        .def_property_readonly(
            "kind", [](const FamilySpec& f) { return family_kind_name(f.kind); })
        .def_readwrite("alpha", &FamilySpec::alpha)
        .def_readwrite("omega", &FamilySpec::omega)
        .def_readwrite("eps", &FamilySpec::eps)
        .def_readwrite("kick", &FamilySpec::kick)
        .def_readwrite("substeps", &FamilySpec::substeps);

    py::class_<MapSpec>(m, "Map",
            "Annulus homeomorphism given through a lift to the strip R x [0,1].")
        .def_readonly("name", &MapSpec::name)
        .def_readonly("family", &MapSpec::family)
        .def_readonly("area_preserving", &MapSpec::area_preserving)
        .def_readonly("reversible", &MapSpec::reversible)
        .def_property_readonly("has_inverse", &MapSpec::has_inverse)
        .def("__call__",
             [](const MapSpec& s, const AnnulusPoint& z) { return apply_map(s, z); },
             "z"_a)
        .def("__call__",
             [](const MapSpec& s, double x, double y) {
                 return apply_map(s, AnnulusPoint{x, y});
             },
             "x"_a, "y"_a)
        .def("inverse",
             [](const MapSpec& s, const AnnulusPoint& z) {
                 return apply_map_inverse(s, z);
             },
             "z"_a)
        .def("inverse",
             [](const MapSpec& s, double x, double y) {
                 return apply_map_inverse(s, AnnulusPoint{x, y});
             },
             "x"_a, "y"_a)
        .def("lift",
             [](const MapSpec& s, const LiftedPoint& zt) { return apply_lift(s, zt); },
             "zt"_a)
        .def("lift",
             [](const MapSpec& s, double xt, double y) {
                 return apply_lift(s, LiftedPoint{xt, y});
             },
             "xt"_a, "y"_a)
        .def("lift_inverse",
             [](const MapSpec& s, const LiftedPoint& zt) {
                 return apply_lift_inverse(s, zt);
             },
             "zt"_a)
        .def("lift_inverse",
             [](const MapSpec& s, double xt, double y) {
                 return apply_lift_inverse(s, LiftedPoint{xt, y});
             },
             "xt"_a, "y"_a)
        .def("iterate_lift",
             [](const MapSpec& s, const LiftedPoint& zt, long n) {
                 return iterate_lift(s, zt, n);
             },
             "zt"_a, "n"_a, py::call_guard<py::gil_scoped_release>())
        .def("orbit",
             [](const MapSpec& s, const AnnulusPoint& z, long n) {
                 return orbit(s, z, n);
             },
             "z"_a, "n"_a, py::call_guard<py::gil_scoped_release>(),
             "Orbit segment (z, f z, ..., f^n z), n+1 points.")
        .def("orbit",
             [](const MapSpec& s, double x, double y, long n) {
                 return orbit(s, AnnulusPoint{x, y}, n);
             },
             "x"_a, "y"_a, "n"_a, py::call_guard<py::gil_scoped_release>())
        .def("lift_orbit",
             [](const MapSpec& s, const LiftedPoint& zt, long n) {
                 return lift_orbit(s, zt, n);
             },
             "zt"_a, "n"_a, py::call_guard<py::gil_scoped_release>())
        .def("__repr__",
             [](const MapSpec& s) { return "Map(" + s.name + ")"; });

    m.def("rotation", &make_rotation, "alpha"_a,
          "Rigid rotation (x, y) -> (x + alpha, y).");
    m.def("twist", &make_twist, "omega"_a,
          "Pure twist (x, y) -> (x + omega(y), y) with omega(y) = sum omega[k] y^k.");
    m.def("kicked_twist", &make_kicked_twist, "omega"_a, "eps"_a,
          "kick"_a = default_kick_shape(), "substeps"_a = 16,
          "Kick composed with a twist; area preserving, not reversible in general.");
    m.def("split_kicked_twist", &make_split_kicked_twist, "omega"_a, "eps"_a,
          "kick"_a = default_kick_shape(), "substeps"_a = 16,
          "Symmetric splitting of kick and twist; reversible when the kick is "
          "even in x.");
    m.def("make_map", &make_map, "family"_a,
          "Rebuild a map from its plain-data family description.");
    m.def("builtin_families", &builtin_families,
          "The standard sample set used by the verify suites.");
    m.def("twist_profile", &twist_profile, "omega"_a, "y"_a);
    m.def("twist_profile_deriv", &twist_profile_deriv, "omega"_a, "y"_a);
    m.def("kick_flow", &kick_flow, "kick"_a, "eps"_a, "substeps"_a, "zt"_a,
          "Time-eps implicit-midpoint flow of the kick Hamiltonian.");
    m.def("default_kick_shape", &default_kick_shape);

    py::class_<LiftCheckReport>(m, "LiftCheckReport")
        .def_readonly("max_deck_dev", &LiftCheckReport::max_deck_dev)
        .def_readonly("max_proj_dev", &LiftCheckReport::max_proj_dev)
        .def_readonly("max_inverse_dev", &LiftCheckReport::max_inverse_dev)
        .def_readonly("max_y_overshoot", &LiftCheckReport::max_y_overshoot)
        .def_readonly("samples", &LiftCheckReport::samples)
        .def("worst", &LiftCheckReport::worst)
        .def("ok", &LiftCheckReport::pass, "tol"_a);

    m.def("check_lift_consistency", &check_lift_consistency, "map"_a,
          "samples"_a = 300, "seed"_a = std::uint64_t{20260816},
          py::call_guard<py::gil_scoped_release>(),
          "Sample the deck, projection, and inverse axioms of the lift.");

    auto area_cls = py::class_<AreaCheckReport>(m, "AreaCheckReport");
    py::class_<AreaCheckReport::BoxStat>(area_cls, "BoxStat")
        .def_readonly("x_lo", &AreaCheckReport::BoxStat::x_lo)
        .def_readonly("x_hi", &AreaCheckReport::BoxStat::x_hi)
        .def_readonly("y_lo", &AreaCheckReport::BoxStat::y_lo)
        .def_readonly("y_hi", &AreaCheckReport::BoxStat::y_hi)
        .def_readonly("box_area", &AreaCheckReport::BoxStat::box_area)
        .def_readonly("image_mass", &AreaCheckReport::BoxStat::image_mass)
        .def_readonly("sigma", &AreaCheckReport::BoxStat::sigma)
        .def_readonly("rel_dev", &AreaCheckReport::BoxStat::rel_dev);
    area_cls.def_readonly("boxes", &AreaCheckReport::boxes)
        .def_readonly("samples", &AreaCheckReport::samples)
        .def_readonly("max_rel_dev", &AreaCheckReport::max_rel_dev)
        .def_readonly("max_abs_dev", &AreaCheckReport::max_abs_dev)
        .def_readonly("confidence_radius", &AreaCheckReport::confidence_radius)
        .def_readonly("passed", &AreaCheckReport::pass);

    m.def("area_check", &area_check, "map"_a, "boxes"_a = 5,
          "samples_per_box"_a = 20000, "seed"_a = std::uint64_t{20260816},
          py::call_guard<py::gil_scoped_release>(),
          "Monte Carlo check that random boxes keep their measure under the map.");

    // ----- rotation numbers -------------------------------------------------
    py::class_<RotationEstimate>(m, "RotationEstimate")
        .def_readonly("value", &RotationEstimate::value)
        .def_readonly("iterations", &RotationEstimate::iterations)
        .def_readonly("recurrence_times", &RotationEstimate::recurrence_times)
        .def_readonly("error_bound", &RotationEstimate::error_bound)
        .def_readonly("converged", &RotationEstimate::converged)
        .def_readonly("diverged", &RotationEstimate::diverged)
        .def_readonly("seed", &RotationEstimate::seed)
        .def("__repr__", [](const RotationEstimate& e) {
            return "RotationEstimate(value=" + fmt_g17(e.value) +
                   (e.converged ? ", converged" : ", not converged") + ")";
        });

    m.def("rotation_estimate", &rotation_estimate, "map"_a, "z"_a,
          "n_max"_a = 20000, "tol"_a = 1e-5, "recurrence_radius"_a = 0.05,
          py::call_guard<py::gil_scoped_release>(),
          "Recurrence-time rotation number of the orbit of z.");
    m.def("rotation_of_periodic", &rotation_of_periodic, "map"_a, "orbit"_a,
          "Exact rational rotation number of a certified periodic orbit.");

    py::class_<RotationInterval>(m, "RotationInterval")
        .def_readonly("lo", &RotationInterval::lo)
        .def_readonly("hi", &RotationInterval::hi)
        .def_readonly("witness_lo", &RotationInterval::witness_lo)
        .def_readonly("witness_hi", &RotationInterval::witness_hi)
        .def_readonly("converged_seeds", &RotationInterval::converged_seeds)
        .def_readonly("excluded_seeds", &RotationInterval::excluded_seeds)
        .def_readonly("estimates", &RotationInterval::estimates)
        .def("degenerate", &RotationInterval::degenerate, "tol"_a = 1e-9)
        .def("__repr__", [](const RotationInterval& iv) {
            return "RotationInterval(" + fmt_g17(iv.lo) + ", " + fmt_g17(iv.hi) + ")";
        });

    m.def("rotation_interval", &rotation_interval, "map"_a,
          "seeds"_a = GridSpec{}, "n_max"_a = 20000, "tol"_a = 1e-5,
          py::call_guard<py::gil_scoped_release>(),
          "Hull of converged rotation estimates over the seed grid.");

    py::class_<WindowBox>(m, "WindowBox",
            "Window on the annulus; x-extent below 1/2 keeps return "
            "displacements unambiguous.")
        .def(py::init([](double x_center, double x_halfwidth, double y_lo,
                         double y_hi) {
                 return WindowBox{x_center, x_halfwidth, y_lo, y_hi};
             }),
             "x_center"_a = 0.0, "x_halfwidth"_a = 0.05, "y_lo"_a = 0.4,
             "y_hi"_a = 0.6)
        .def_readwrite("x_center", &WindowBox::x_center)
        .def_readwrite("x_halfwidth", &WindowBox::x_halfwidth)
        .def_readwrite("y_lo", &WindowBox::y_lo)
        .def_readwrite("y_hi", &WindowBox::y_hi)
        .def("contains", &WindowBox::contains, "z"_a);

    py::class_<ReturnStats>(m, "ReturnStats")
        .def_readonly("window", &ReturnStats::window)
        .def_readonly("m_values", &ReturnStats::m_values)
        .def_readonly("tau_values", &ReturnStats::tau_values)
        .def_readonly("m_partial", &ReturnStats::m_partial)
        .def_readonly("tau_partial", &ReturnStats::tau_partial)
        .def_readonly("ratio", &ReturnStats::ratio)
        .def_readonly("error_bound", &ReturnStats::error_bound)
        .def_readonly("iterations", &ReturnStats::iterations)
        .def_readonly("recurrent", &ReturnStats::recurrent);

    m.def("return_rotation_estimate", &return_rotation_estimate, "map"_a,
          "window"_a, "budget"_a, py::call_guard<py::gil_scoped_release>(),
          "First-return (m, tau) accounting for the window's center seed.");

    m.def("farey_enumerate", &farey_enumerate, "lo"_a, "hi"_a, "q_max"_a,
          "n0"_a = 1,
          "All irreducible p/q in (lo, hi) with q <= q_max and gcd(q, n0) = 1.");

    // ----- periodic orbits --------------------------------------------------
    py::class_<OrbitRecord>(m, "OrbitRecord",
            "Certified periodic orbit; points[j] is the j-th iterate of points[0].")
        .def_readonly("points", &OrbitRecord::points)
        .def_readonly("period", &OrbitRecord::period)
        .def_readonly("rotation", &OrbitRecord::rotation)
        .def_readonly("residual", &OrbitRecord::residual)
        .def_readonly("prime_certified", &OrbitRecord::prime_certified)
        .def_readonly("symmetric", &OrbitRecord::symmetric)
        .def_readonly("non_isolated", &OrbitRecord::non_isolated)
        .def_readonly("family", &OrbitRecord::family)
        .def("__repr__", [](const OrbitRecord& r) {
            return "OrbitRecord(period=" + std::to_string(r.period) +
                   ", rotation=" + r.rotation.str() +
                   ", residual=" + fmt_g17(r.residual) + ")";
        });

    m.def("find_pq_orbit", &find_pq_orbit, "map"_a, "target"_a,
          "seeds"_a = GridSpec{}, "tol"_a = 1e-10,
          py::call_guard<py::gil_scoped_release>(),
          "Newton search for orbits with lift rotation p/q from every grid seed.");
    m.def("prime_period", &prime_period, "map"_a, "z"_a, "k"_a, "tol"_a,
          py::call_guard<py::gil_scoped_release>(),
          "Smallest divisor l of k with f^l(z) within tol of z.");
    m.def("same_orbit", &same_orbit, "a"_a, "b"_a, "tol"_a = kOrbitDedupTol);
    m.def("dedup_orbits", &dedup_orbits, "records"_a, "tol"_a = kOrbitDedupTol);

    py::class_<TargetResult>(m, "TargetResult")
        .def_readonly("target", &TargetResult::target)
        .def_readonly("orbits", &TargetResult::orbits)
        .def_readonly("failed_seeds", &TargetResult::failed_seeds);

    py::class_<Theorem1Report>(m, "Theorem1Report")
        .def_readonly("n0", &Theorem1Report::n0)
        .def_readonly("q_max", &Theorem1Report::q_max)
        .def_readonly("interval", &Theorem1Report::interval)
        .def_readonly("degenerate_interval", &Theorem1Report::degenerate_interval)
        .def_readonly("targets", &Theorem1Report::targets)
        .def_readonly("all_orbits", &Theorem1Report::all_orbits)
        .def("distinct_orbits", &Theorem1Report::distinct_orbits);

    m.def("theorem1_scan", &theorem1_scan, "map"_a, "n0"_a, "q_max"_a,
          "seeds"_a = GridSpec{}, "tol"_a = 1e-10, "n_max_rotation"_a = 20000,
          "rotation_tol"_a = 1e-5, py::call_guard<py::gil_scoped_release>(),
          "Measure the rotation interval, enumerate targets with gcd(q, n0) = 1, "
          "and search each one.");

    // ----- reversible structure ---------------------------------------------
    m.def("apply_R",
          [](const AnnulusPoint& z) { return apply_R(z); }, "z"_a,
          "The reflection R(x, y) = (-x, y) on the annulus.");
    m.def("apply_R",
          [](double x, double y) { return apply_R(AnnulusPoint{x, y}); },
          "x"_a, "y"_a);
    m.def("apply_R_lift",
          [](const LiftedPoint& zt) { return apply_R_lift(zt); }, "zt"_a);
    m.def("apply_R_lift",
          [](double xt, double y) { return apply_R_lift(LiftedPoint{xt, y}); },
          "xt"_a, "y"_a);

    py::class_<SymmetryLine>(m, "SymmetryLine",
            "One of the two fixed circles of R: Y1 at x = 0, Y2 at x = 1/2.")
        .def(py::init(&line_from_name), "name"_a)
        .def_property_readonly("name",
                               [](const SymmetryLine& l) { return std::string(l.name()); })
        .def_property_readonly("x", &SymmetryLine::x_lift)
        .def("point", &SymmetryLine::point, "y"_a)
        .def("__repr__", [](const SymmetryLine& l) {
            return "SymmetryLine(" + std::string(l.name()) + ")";
        });
    py::implicitly_convertible<py::str, SymmetryLine>();

    m.def("symmetry_lines", &symmetry_lines);

    py::class_<ReversibilityReport>(m, "ReversibilityReport")
        .def_readonly("max_map_dev", &ReversibilityReport::max_map_dev)
        .def_readonly("max_lift_dev", &ReversibilityReport::max_lift_dev)
        .def_readonly("samples", &ReversibilityReport::samples)
        .def("ok", &ReversibilityReport::pass, "tol"_a);

    m.def("check_reversible", &check_reversible, "map"_a, "samples"_a = 500,
          "seed"_a = std::uint64_t{20260816},
          py::call_guard<py::gil_scoped_release>(),
          "Sample the identity f o R = R o f^{-1} on the annulus and its lift.");

    py::class_<KangRoot>(m, "KangRoot")
        .def_readonly("y", &KangRoot::y)
        .def_readonly("point", &KangRoot::point)
        .def_readonly("image", &KangRoot::image)
        .def_readonly("displacement", &KangRoot::displacement)
        .def_readonly("fixed", &KangRoot::fixed)
        .def("__repr__", [](const KangRoot& r) {
            return "KangRoot(y=" + fmt_g17(r.y) +
                   (r.fixed ? ", fixed" : ", 2-cycle") + ")";
        });

    py::class_<KangReport>(m, "KangReport")
        .def_readonly("line", &KangReport::line)
        .def_readonly("roots", &KangReport::roots)
        .def_readonly("fixed_points", &KangReport::fixed_points)
        .def_readonly("whole_line_fixed", &KangReport::whole_line_fixed)
        .def_readonly("resolution", &KangReport::resolution);

    m.def("kang_fixed_points", &kang_fixed_points, "map"_a, "line"_a,
          "resolution"_a = 512, "tol"_a = 1e-9,
          py::call_guard<py::gil_scoped_release>(),
          "Roots of the line displacement; fixed roots are symmetric fixed points.");

    py::class_<SymmetryCheck>(m, "SymmetryCheck")
        .def_readonly("symmetric", &SymmetryCheck::symmetric)
        .def_readonly("permutation", &SymmetryCheck::permutation)
        .def_readonly("max_dev", &SymmetryCheck::max_dev);

    m.def("is_symmetric_orbit", &is_symmetric_orbit, "orbit"_a, "tol"_a = 1e-8,
          "Whether R maps the orbit's point set onto itself within tol.");

    py::class_<SymmetricOrbitRecord>(m, "SymmetricOrbitRecord")
        .def_readonly("base", &SymmetricOrbitRecord::base)
        .def_property_readonly("crossings",
                               [](const SymmetricOrbitRecord& r) {
                                   return crossings_to_list(r.crossings);
                               })
        .def_readonly("permutation", &SymmetricOrbitRecord::permutation)
        .def_readonly("degenerate", &SymmetricOrbitRecord::degenerate)
        .def("__repr__", [](const SymmetricOrbitRecord& r) {
            return "SymmetricOrbitRecord(period=" + std::to_string(r.base.period) +
                   ", rotation=" + r.base.rotation.str() + ")";
        });

    m.def("symmetric_orbit_search", &symmetric_orbit_search, "map"_a, "m_max"_a,
          "resolution"_a = 512, "tol"_a = 1e-9,
          py::call_guard<py::gil_scoped_release>(),
          "Symmetry-line search: line-to-line landings of f^m generate symmetric "
          "orbits of period dividing 2m.");

    py::class_<TargetCoverage>(m, "TargetCoverage")
        .def_readonly("target", &TargetCoverage::target)
        .def_readonly("generic_found", &TargetCoverage::generic_found)
        .def_readonly("symmetric_found", &TargetCoverage::symmetric_found);

    py::class_<Corollary14Report>(m, "Corollary14Report")
        .def_readonly("n0", &Corollary14Report::n0)
        .def_readonly("q_max", &Corollary14Report::q_max)
        .def_readonly("interval", &Corollary14Report::interval)
        .def_readonly("records", &Corollary14Report::records)
        .def_readonly("coverage", &Corollary14Report::coverage)
        .def_readonly("dropped_by_gcd", &Corollary14Report::dropped_by_gcd)
        .def("covered", &Corollary14Report::covered);

    m.def("corollary14_scan", &corollary14_scan, "map"_a, "n0"_a, "q_max"_a,
          "tol"_a = 1e-8, "seeds"_a = GridSpec{}, "resolution"_a = 512,
          py::call_guard<py::gil_scoped_release>(),
          "Symmetry-line scan filtered by gcd(period, n0) = 1, cross-checked "
          "against the generic scan.");

    // ----- Henon-Heiles -----------------------------------------------------
    py::class_<HHState>(m, "HHState")
        .def(py::init([](double q1, double q2, double p1, double p2) {
                 return HHState{q1, q2, p1, p2};
             }),
             "q1"_a = 0.0, "q2"_a = 0.0, "p1"_a = 0.0, "p2"_a = 0.0)
        .def(py::init([](std::tuple<double, double, double, double> t) {
                 return HHState{std::get<0>(t), std::get<1>(t), std::get<2>(t),
                                std::get<3>(t)};
             }),
             "qp"_a)
        .def_readwrite("q1", &HHState::q1)
        .def_readwrite("q2", &HHState::q2)
        .def_readwrite("p1", &HHState::p1)
        .def_readwrite("p2", &HHState::p2)
        .def("__repr__", [](const HHState& s) {
            return "HHState(" + fmt_g17(s.q1) + ", " + fmt_g17(s.q2) + ", " +
                   fmt_g17(s.p1) + ", " + fmt_g17(s.p2) + ")";
        });
    py::implicitly_convertible<py::tuple, HHState>();

    m.def("hh_energy", &hh_energy, "s"_a,
          "H = (p1^2 + p2^2 + q1^2 + q2^2)/2 + q1^2 q2 - q2^3/3.");
    m.def("hh_grad", &hh_grad, "s"_a, "Gradient of H in (q1, q2, p1, p2) order.");
    m.def("apply_rho", &apply_rho, "s"_a,
          "Anti-symplectic time reversal (-q1, q2, p1, -p2).");
    m.def("apply_sigma", &apply_sigma, "s"_a,
          "Simultaneous 2 pi / 3 rotation of (q1, q2) and (p1, p2).");
    m.def("hh_step", &hh_step, "s"_a, "dt"_a,
          "One step of the fourth-order symmetric composition.");
    m.def("hh_flow", &hh_flow, "s"_a, "t"_a, "dt"_a = 1e-3,
          py::call_guard<py::gil_scoped_release>(),
          "Fixed-step flow for time t; raises EscapeError past the trapping radius.");
    m.def("hh_trajectory", &hh_trajectory, "s"_a, "t"_a, "dt"_a = 1e-3,
          "stride"_a = 1, py::call_guard<py::gil_scoped_release>(),
          "States every `stride` steps, endpoints included.");
    m.def("hh_max_energy_drift", &hh_max_energy_drift, "s"_a, "t"_a, "dt"_a = 1e-3,
          py::call_guard<py::gil_scoped_release>(),
          "Max |H(s_t) - H(s_0)| along the flow.");

    py::class_<Equilibrium>(m, "Equilibrium")
        .def_readonly("state", &Equilibrium::state)
        .def_readonly("value", &Equilibrium::value)
        .def_readonly("grad_norm", &Equilibrium::grad_norm)
        .def("__repr__", [](const Equilibrium& e) {
            return "Equilibrium(value=" + fmt_g17(e.value) + ")";
        });

    m.def("critical_levels", &critical_levels,
          py::call_guard<py::gil_scoped_release>(),
          "All equilibria of the flow, sorted by energy value then coordinates.");

    py::class_<SectionPoint>(m, "SectionPoint",
            "Crossing of the section q1 = 0 with p1 > 0.")
        .def(py::init([](double q2, double p2, double time, double energy_residual) {
                 return SectionPoint{q2, p2, time, energy_residual};
             }),
             "q2"_a, "p2"_a, "time"_a = 0.0, "energy_residual"_a = 0.0)
        .def(py::init([](std::pair<double, double> t) {
                 return SectionPoint{t.first, t.second, 0.0, 0.0};
             }),
             "q2p2"_a)
        .def_readwrite("q2", &SectionPoint::q2)
        .def_readwrite("p2", &SectionPoint::p2)
        .def_readonly("time", &SectionPoint::time)
        .def_readonly("energy_residual", &SectionPoint::energy_residual)
        .def("__repr__", [](const SectionPoint& x) {
            return "SectionPoint(" + fmt_g17(x.q2) + ", " + fmt_g17(x.p2) +
                   ", time=" + fmt_g17(x.time) + ")";
        });
    py::implicitly_convertible<py::tuple, SectionPoint>();

    m.def("section_p1_squared", &section_p1_squared, "c"_a, "q2"_a, "p2"_a,
          "p1^2 recovered from the energy constraint on the section.");
    m.def("section_state", &section_state, "c"_a, "q2"_a, "p2"_a,
          "On-shell state on the section; raises DomainError outside the "
          "admissible disk.");
    m.def("poincare_return", &poincare_return, "c"_a, "x"_a, "crossings"_a,
          "dt"_a = 1e-3, "t_budget"_a = 1e4,
          py::call_guard<py::gil_scoped_release>(),
          "Successive section crossings, each refined by time bisection.");
    m.def("hh_admissible_segment", &hh_admissible_segment, "c"_a,
          "q2-extent of the symmetry segment p2 = 0 on the section.");

    py::class_<HHOrbitRecord>(m, "HHOrbitRecord")
        .def_readonly("q2_start", &HHOrbitRecord::q2_start)
        .def_readonly("m", &HHOrbitRecord::m)
        .def_readonly("half_period", &HHOrbitRecord::half_period)
        .def_readonly("period", &HHOrbitRecord::period)
        .def_readonly("closure_residual", &HHOrbitRecord::closure_residual)
        .def_readonly("rho_symmetric", &HHOrbitRecord::rho_symmetric)
        .def_readonly("rho_residual", &HHOrbitRecord::rho_residual)
        .def_readonly("sigma_symmetric", &HHOrbitRecord::sigma_symmetric)
        .def_readonly("sigma_residual", &HHOrbitRecord::sigma_residual)
        .def_readonly("sigma_shift", &HHOrbitRecord::sigma_shift)
        .def_readonly("section_hits", &HHOrbitRecord::section_hits)
        .def("__repr__", [](const HHOrbitRecord& r) {
            return "HHOrbitRecord(q2_start=" + fmt_g17(r.q2_start) +
                   ", period=" + fmt_g17(r.period) + ")";
        });

    m.def("hh_symmetric_orbits", &hh_symmetric_orbits, "c"_a, "m_max"_a,
          "resolution"_a, "tol"_a = 1e-10, "dt"_a = 1e-3,
          py::call_guard<py::gil_scoped_release>(),
          "Root search over the symmetry segment for periodic orbits through "
          "Fix(rho).");

    auto sarea_cls = py::class_<SectionAreaReport>(m, "SectionAreaReport");
    py::class_<SectionAreaReport::Box>(sarea_cls, "Box")
        .def_readonly("q2_lo", &SectionAreaReport::Box::q2_lo)
        .def_readonly("q2_hi", &SectionAreaReport::Box::q2_hi)
        .def_readonly("p2_lo", &SectionAreaReport::Box::p2_lo)
        .def_readonly("p2_hi", &SectionAreaReport::Box::p2_hi)
        .def_readonly("p_box", &SectionAreaReport::Box::p_box)
        .def_readonly("p_image", &SectionAreaReport::Box::p_image)
        .def_readonly("sigma", &SectionAreaReport::Box::sigma)
        .def_readonly("passed", &SectionAreaReport::Box::pass);
    sarea_cls.def_readonly("boxes", &SectionAreaReport::boxes)
        .def_readonly("samples", &SectionAreaReport::samples)
        .def_readonly("no_return", &SectionAreaReport::no_return)
        .def_readonly("passed", &SectionAreaReport::pass);

    m.def("hh_return_area_check", &hh_return_area_check, "c"_a, "boxes"_a,
          "samples_per_box"_a, "seed"_a, "dt"_a = 0.02,
          py::call_guard<py::gil_scoped_release>(),
          "Monte Carlo check that the section return map preserves dq2 ^ dp2.");

    py::class_<HHChart>(m, "HHChart",
            "Annulus chart of the section return map around an elliptic fixed "
            "point; x is the angle, y the radius fraction.")
        .def_readonly("c", &HHChart::c)
        .def_readonly("dt", &HHChart::dt)
        .def_readonly("center_q2", &HHChart::center_q2)
        .def_readonly("center_p2", &HHChart::center_p2)
        .def_readonly("r_max", &HHChart::r_max)
        .def_readonly("axis_scale", &HHChart::axis_scale)
        .def_readonly("reversor_standard", &HHChart::reversor_standard)
        .def_readonly("map", &HHChart::map)
        .def("__repr__", [](const HHChart& ch) {
            return "HHChart(c=" + fmt_g17(ch.c) + ", r_max=" + fmt_g17(ch.r_max) + ")";
        });

    m.def("hh_annulus_chart", &hh_annulus_chart, "c"_a, "dt"_a = 1e-3,
          "r_fraction"_a = 0.8, py::call_guard<py::gil_scoped_release>(),
          "Build the annulus chart of the return map at energy c.");

    // ----- verify suites ----------------------------------------------------
    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("passed", &CheckResult::pass)
        .def_readonly("value", &CheckResult::value)
        .def_readonly("bound", &CheckResult::bound)
        .def_readonly("note", &CheckResult::note)
        .def_readonly("seconds", &CheckResult::seconds)
        .def_readonly("timing", &CheckResult::timing)
        .def("__repr__", [](const CheckResult& c) {
            return "CheckResult(" + c.name + (c.pass ? ", pass" : ", FAIL") + ")";
        });

    py::class_<SuiteResult>(m, "SuiteResult")
        .def_readonly("suite", &SuiteResult::suite)
        .def_readonly("checks", &SuiteResult::checks)
        .def_readonly("seconds", &SuiteResult::seconds)
        .def("ok", &SuiteResult::pass)
        .def("machine_output", &SuiteResult::machine_output);

    m.def("suite_names", &suite_names, "Registry order of the verify suites.");
    m.def("run_suite", &run_suite, "name"_a,
          py::call_guard<py::gil_scoped_release>(),
          "Run one verify suite and return its checks.");

    m.attr("ORBIT_DEDUP_TOL") = kOrbitDedupTol;
    m.attr("HH_ESCAPE_RADIUS") = kHHEscapeRadius;
    m.attr("__version__") = "0.1.0";
}
