#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "annulab/families.hpp"
#include "annulab/henon_heiles.hpp"
#include "annulab/orbit_db.hpp"
#include "annulab/periodic.hpp"
#include "annulab/reversible.hpp"
#include "annulab/rotation.hpp"
#include "annulab/serialize.hpp"
#include "annulab/verify.hpp"

namespace {

using namespace annulab;

// ------------------------------------------------------------------- helpers

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("not a number list entry: '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("empty number list");
    return out;
}

// The --config file has to be applied before the flag values, so it is pulled
// out of argv ahead of the regular parse.
std::string prescan_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--") break;
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return "";
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    for (const std::string& line : lines) out << line << "\n";
}

void write_jsonl(const std::string& path, const std::vector<Json>& rows) {
    std::vector<std::string> lines;
    lines.reserve(rows.size());
    for (const Json& row : rows) lines.push_back(row.dump());
    write_lines(path, lines);
}

std::string csv_row(const std::vector<double>& vals) {
    std::string line;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) line += ",";
        line += fmt_g17(vals[i]);
    }
    return line;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::vector<std::string> lines;
    lines.reserve(rows.size() + 1);
    lines.push_back(header);
    for (const auto& row : rows) lines.push_back(csv_row(row));
    write_lines(path, lines);
}

MapSpec build_map(const ExperimentConfig& cfg) {
    if (cfg.hh_chart) return hh_annulus_chart(cfg.c, cfg.dt).map;
    return make_map(cfg.family);
}

void emit_artifacts(const ExperimentConfig& cfg, const std::vector<Json>& records,
                    const std::string& csv_header,
                    const std::vector<std::vector<double>>& csv_rows,
                    bool db_eligible = false) {
    if (!cfg.out_records.empty()) {
        write_jsonl(cfg.out_records, records);
        std::cout << "records: " << cfg.out_records << " (" << records.size()
                  << " rows)\n";
    }
    if (!cfg.out_csv.empty()) {
        write_csv(cfg.out_csv, csv_header, csv_rows);
        std::cout << "csv: " << cfg.out_csv << " (" << csv_rows.size() << " rows)\n";
    }
    if (db_eligible && !cfg.db_path.empty()) {
        OrbitDatabase db(cfg.db_path);
        const long written = db.append(records);
        std::cout << "db: " << cfg.db_path << " (+" << written << " of "
                  << records.size() << " rows)\n";
    }
}

std::string orbit_summary_line(const OrbitRecord& rec) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "  period %3ld  rotation %-6s  residual %.3e  prime %d  x0 %.6f  y0 %.6f%s",
                  rec.period, rec.rotation.str().c_str(), rec.residual,
                  rec.prime_certified ? 1 : 0,
                  rec.points.empty() ? 0.0 : rec.points[0].x,
                  rec.points.empty() ? 0.0 : rec.points[0].y,
                  rec.non_isolated ? "  (non-isolated)" : "");
    return buf;
}

// ----------------------------------------------------------------- operations

int run_rotation(const ExperimentConfig& cfg) {
    MapSpec map = build_map(cfg);
    RotationEstimate est =
        rotation_estimate(map, {cfg.x, cfg.y}, cfg.n_max, cfg.rotation_tol);
    std::cout << "rotation number estimate\n"
              << "  family: " << map.name << "\n"
              << "  seed: (" << fmt_g17(cfg.x) << ", " << fmt_g17(cfg.y) << ")\n"
              << "  value: " << fmt_g17(est.value) << "\n"
              << "  iterations: " << est.iterations
              << "  converged: " << (est.converged ? "yes" : "no")
              << "  diverged: " << (est.diverged ? "yes" : "no") << "\n"
              << "  error bound: " << fmt_g17(est.error_bound) << "\n";

    Json row;
    row["kind"] = "rotation_estimate";
    row["family"] = map.name;
    row["x"] = cfg.x;
    row["y"] = cfg.y;
    row["value"] = est.value;
    row["iterations"] = est.iterations;
    row["error_bound"] = est.error_bound;
    row["converged"] = est.converged;
    row["diverged"] = est.diverged;

    std::vector<std::vector<double>> csv;
    for (std::size_t i = 0; i < est.recurrence_times.size(); ++i)
        csv.push_back({static_cast<double>(i),
                       static_cast<double>(est.recurrence_times[i])});
    emit_artifacts(cfg, {row}, "index,recurrence_time", csv);
    return 0;
}

int run_farey(const ExperimentConfig& cfg) {
    std::vector<Rational> list = farey_enumerate(cfg.lo, cfg.hi, cfg.q_max, cfg.n0);
    std::cout << "farey enumeration in (" << fmt_g17(cfg.lo) << ", " << fmt_g17(cfg.hi)
              << "), q_max " << cfg.q_max << ", n0 " << cfg.n0 << ": " << list.size()
              << " rationals\n";
    for (const Rational& r : list)
        std::cout << "  " << r.str() << "  =  " << fmt_g17(r.value()) << "\n";

    std::vector<Json> rows;
    std::vector<std::vector<double>> csv;
    for (const Rational& r : list) {
        Json row;
        row["kind"] = "rational";
        row["p"] = r.p;
        row["q"] = r.q;
        row["value"] = r.value();
        rows.push_back(std::move(row));
        csv.push_back({static_cast<double>(r.p), static_cast<double>(r.q), r.value()});
    }
    emit_artifacts(cfg, rows, "p,q,value", csv);
    return 0;
}

int run_orbits(const ExperimentConfig& cfg) {
    MapSpec map = build_map(cfg);
    Rational target = parse_rational(cfg.target);
    std::vector<OrbitRecord> orbits = find_pq_orbit(map, target, cfg.grid, cfg.tol);
    std::cout << "periodic orbits of " << map.name << " with rotation "
              << target.str() << ": " << orbits.size() << " found\n";
    for (const OrbitRecord& rec : orbits)
        std::cout << orbit_summary_line(rec) << "\n";

    std::vector<Json> rows;
    std::vector<std::vector<double>> csv;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        rows.push_back(orbit_to_json(orbits[i]));
        for (std::size_t j = 0; j < orbits[i].points.size(); ++j)
            csv.push_back({static_cast<double>(i), static_cast<double>(j),
                           orbits[i].points[j].x, orbits[i].points[j].y});
    }
    emit_artifacts(cfg, rows, "orbit,point,x,y", csv, true);
    return 0;
}

int run_symmetric(const ExperimentConfig& cfg) {
    MapSpec map = build_map(cfg);
    std::vector<SymmetricOrbitRecord> recs =
        symmetric_orbit_search(map, cfg.m_max, cfg.resolution, cfg.tol);
    std::cout << "symmetric periodic orbits of " << map.name << " up to m_max "
              << cfg.m_max << ": " << recs.size() << " found\n";
    for (const SymmetricOrbitRecord& rec : recs) {
        std::cout << orbit_summary_line(rec.base);
        std::cout << "  lines:";
        for (const auto& [idx, line] : rec.crossings)
            std::cout << " " << idx << ":" << SymmetryLine{line}.name();
        if (rec.degenerate) std::cout << "  (degenerate)";
        std::cout << "\n";
    }

    std::vector<Json> rows;
    std::vector<std::vector<double>> csv;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        rows.push_back(symmetric_orbit_to_json(recs[i]));
        for (std::size_t j = 0; j < recs[i].base.points.size(); ++j)
            csv.push_back({static_cast<double>(i), static_cast<double>(j),
                           recs[i].base.points[j].x, recs[i].base.points[j].y});
    }
    emit_artifacts(cfg, rows, "orbit,point,x,y", csv, true);
    return 0;
}

int run_scan_t11(const ExperimentConfig& cfg) {
    MapSpec map = build_map(cfg);
    Theorem1Report rep = theorem1_scan(map, cfg.n0, cfg.q_max, cfg.grid, cfg.tol,
                                       cfg.n_max, cfg.rotation_tol);
    std::cout << "gcd-filtered periodic orbit scan of " << map.name << " (n0 "
              << cfg.n0 << ", q_max " << cfg.q_max << ")\n"
              << "  rotation interval: [" << fmt_g17(rep.interval.lo) << ", "
              << fmt_g17(rep.interval.hi) << "]"
              << (rep.degenerate_interval ? "  (degenerate)" : "") << "\n"
              << "  targets: " << rep.targets.size()
              << "  distinct orbits: " << rep.distinct_orbits() << "\n";
    for (const TargetResult& tr : rep.targets)
        std::cout << "  target " << tr.target.str() << ": " << tr.orbits.size()
                  << " orbits (" << tr.failed_seeds << " failed seeds)\n";
    for (const OrbitRecord& rec : rep.all_orbits)
        std::cout << orbit_summary_line(rec) << "\n";

    std::vector<Json> rows;
    std::vector<std::vector<double>> csv;
    for (const OrbitRecord& rec : rep.all_orbits) {
        rows.push_back(orbit_to_json(rec));
        csv.push_back({static_cast<double>(rec.rotation.p),
                       static_cast<double>(rec.rotation.q),
                       rec.rotation.value(), static_cast<double>(rec.period),
                       rec.points.empty() ? 0.0 : rec.points[0].x,
                       rec.points.empty() ? 0.0 : rec.points[0].y});
    }
    emit_artifacts(cfg, rows, "p,q,rotation,period,x0,y0", csv, true);
    return 0;
}

int run_scan_c14(const ExperimentConfig& cfg) {
    MapSpec map = build_map(cfg);
    Corollary14Report rep = corollary14_scan(map, cfg.n0, cfg.q_max, cfg.tol,
                                             cfg.grid, cfg.resolution);
    std::cout << "symmetric gcd-filtered scan of " << map.name << " (n0 " << cfg.n0
              << ", q_max " << cfg.q_max << ")\n"
              << "  rotation interval: [" << fmt_g17(rep.interval.lo) << ", "
              << fmt_g17(rep.interval.hi) << "]\n"
              << "  symmetric orbits kept: " << rep.records.size()
              << "  dropped by gcd filter: " << rep.dropped_by_gcd << "\n";
    for (const SymmetricOrbitRecord& rec : rep.records)
        std::cout << orbit_summary_line(rec.base) << "\n";
    std::cout << "  coverage:\n";
    for (const TargetCoverage& tc : rep.coverage)
        std::cout << "    " << tc.target.str() << "  generic "
                  << (tc.generic_found ? "yes" : "no ") << "  symmetric "
                  << (tc.symmetric_found ? "yes" : "no") << "\n";
    std::cout << "  all generic targets covered: " << (rep.covered() ? "yes" : "no")
              << "\n";

    std::vector<Json> rows;
    std::vector<std::vector<double>> csv;
    for (const SymmetricOrbitRecord& rec : rep.records) {
        rows.push_back(symmetric_orbit_to_json(rec));
        csv.push_back({static_cast<double>(rec.base.rotation.p),
                       static_cast<double>(rec.base.rotation.q),
                       static_cast<double>(rec.base.period),
                       rec.base.points.empty() ? 0.0 : rec.base.points[0].x,
                       rec.base.points.empty() ? 0.0 : rec.base.points[0].y,
                       rec.degenerate ? 1.0 : 0.0});
    }
    emit_artifacts(cfg, rows, "p,q,period,x0,y0,degenerate", csv, true);
    return 0;
}

int run_hh_levels(const ExperimentConfig& cfg) {
    std::vector<Equilibrium> eq = critical_levels();
    std::cout << "critical energy levels: " << eq.size() << " equilibria\n";
    for (const Equilibrium& e : eq)
        std::cout << "  value " << fmt_g17(e.value) << "  at (q1, q2) = ("
                  << fmt_g17(e.state.q1) << ", " << fmt_g17(e.state.q2)
                  << ")  |grad| " << fmt_g17(e.grad_norm) << "\n";

    std::vector<Json> rows;
    std::vector<std::vector<double>> csv;
    for (const Equilibrium& e : eq) {
        Json row;
        row["kind"] = "hh_equilibrium";
        row["q1"] = e.state.q1;
        row["q2"] = e.state.q2;
        row["value"] = e.value;
        row["grad_norm"] = e.grad_norm;
        rows.push_back(std::move(row));
        csv.push_back({e.state.q1, e.state.q2, e.value, e.grad_norm});
    }
    emit_artifacts(cfg, rows, "q1,q2,value,grad_norm", csv);
    return 0;
}

int run_hh_section(const ExperimentConfig& cfg) {
    SectionPoint start{cfg.q2, cfg.p2, 0.0, 0.0};
    std::vector<SectionPoint> pts =
        poincare_return(cfg.c, start, cfg.crossings, cfg.dt);
    std::cout << "section q1 = 0, p1 > 0 at c = " << fmt_g17(cfg.c) << " from (q2, p2) = ("
              << fmt_g17(cfg.q2) << ", " << fmt_g17(cfg.p2) << "): " << pts.size()
              << " crossings\n";
    const std::size_t shown = std::min<std::size_t>(pts.size(), 10);
    for (std::size_t i = 0; i < shown; ++i)
        std::cout << "  t " << fmt_g17(pts[i].time) << "  q2 " << fmt_g17(pts[i].q2)
                  << "  p2 " << fmt_g17(pts[i].p2) << "\n";
    if (pts.size() > shown)
        std::cout << "  ... " << (pts.size() - shown) << " more\n";

    std::vector<Json> rows;
    std::vector<std::vector<double>> csv;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Json row;
        row["kind"] = "hh_section_point";
        row["index"] = i;
        row["q2"] = pts[i].q2;
        row["p2"] = pts[i].p2;
        row["time"] = pts[i].time;
        row["energy_residual"] = pts[i].energy_residual;
        rows.push_back(std::move(row));
        csv.push_back({static_cast<double>(i), pts[i].q2, pts[i].p2, pts[i].time});
    }
    emit_artifacts(cfg, rows, "index,q2,p2,time", csv);
    return 0;
}

int run_hh_orbits(const ExperimentConfig& cfg) {
    std::vector<HHOrbitRecord> recs =
        hh_symmetric_orbits(cfg.c, cfg.m_max, cfg.resolution, cfg.tol, cfg.dt);
    std::cout << "symmetric periodic orbits on the c = " << fmt_g17(cfg.c)
              << " shell: " << recs.size() << " found\n";
    for (const HHOrbitRecord& r : recs) {
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "  q2 %+.9f  m %2ld  period %12.9f  closure %.3e  rho %d  sigma %d",
                      r.q2_start, r.m, r.period, r.closure_residual,
                      r.rho_symmetric ? 1 : 0, r.sigma_symmetric ? 1 : 0);
        std::cout << buf << "\n";
    }

    std::vector<Json> rows;
    std::vector<std::vector<double>> csv;
    for (const HHOrbitRecord& r : recs) {
        Json row;
        row["kind"] = "hh_orbit";
        row["c"] = cfg.c;
        row["q2_start"] = r.q2_start;
        row["m"] = r.m;
        row["half_period"] = r.half_period;
        row["period"] = r.period;
        row["closure_residual"] = r.closure_residual;
        row["rho_symmetric"] = r.rho_symmetric;
        row["rho_residual"] = r.rho_residual;
        row["sigma_symmetric"] = r.sigma_symmetric;
        row["sigma_residual"] = r.sigma_residual;
        row["sigma_shift"] = r.sigma_shift;
        Json hits = Json::array();
        for (const HHState& s : r.section_hits)
            hits.push_back(Json::array({s.q1, s.q2, s.p1, s.p2}));
        row["section_hits"] = std::move(hits);
        rows.push_back(std::move(row));
        csv.push_back({r.q2_start, static_cast<double>(r.m), r.period,
                       r.closure_residual, r.rho_symmetric ? 1.0 : 0.0,
                       r.sigma_symmetric ? 1.0 : 0.0});
    }
    emit_artifacts(cfg, rows, "q2_start,m,period,closure,rho,sigma", csv);
    return 0;
}

int run_verify(const ExperimentConfig& cfg) {
    std::vector<std::string> names;
    if (cfg.suite == "all") {
        names = suite_names();
    } else {
        names.push_back(cfg.suite);
    }
    bool all_pass = true;
    bool repeat_stable = true;
    std::vector<std::string> machine_lines;
    for (const std::string& name : names) {
        std::string first_output;
        for (long r = 0; r < std::max(1L, cfg.repeat); ++r) {
            SuiteResult res = run_suite(name);
            if (r == 0) {
                first_output = res.machine_output();
                if (!res.pass()) all_pass = false;
                std::cout << res.machine_output();
                std::ostringstream note;
                note << "suite " << name << ": " << (res.pass() ? "pass" : "FAIL")
                     << " (" << res.checks.size() << " checks, "
                     << static_cast<long>(res.seconds * 1000) << " ms)";
                for (const CheckResult& c : res.checks)
                    if (!c.pass)
                        note << "\n  FAIL " << c.name << " value " << fmt_g17(c.value)
                             << " bound " << fmt_g17(c.bound)
                             << (c.note.empty() ? "" : "  " + c.note);
                std::cerr << note.str() << "\n";
            } else if (res.machine_output() != first_output) {
                repeat_stable = false;
                std::cerr << "suite " << name << ": repeat " << r
                          << " produced different machine output\n";
            }
        }
        std::istringstream lines(first_output);
        std::string line;
        while (std::getline(lines, line)) machine_lines.push_back(line);
    }
    if (!cfg.out_records.empty()) write_lines(cfg.out_records, machine_lines);
    if (!repeat_stable) all_pass = false;
    std::cerr << "verify: " << (all_pass ? "all suites passed" : "FAILURES") << "\n";
    return all_pass ? 0 : 3;
}

// -------------------------------------------------------------------- wiring

struct FlagText {
    std::string family;
    std::string omega;
    std::string cos_coeffs;
    std::string sin_coeffs;
    std::string emit_config;
    std::string config;  // consumed by the prescan; registered for help only
};

void add_family_options(CLI::App* sub, ExperimentConfig& cfg, FlagText& text) {
    sub->add_option("--family", text.family,
                    "family kind: rotation, twist, kicked_twist, split_kicked_twist");
    sub->add_option("--alpha", cfg.family.alpha, "rotation angle");
    sub->add_option("--omega", text.omega, "twist profile coefficients, comma separated");
    sub->add_option("--eps", cfg.family.eps, "kick strength");
    sub->add_option("--cos", text.cos_coeffs, "kick cosine coefficients, comma separated");
    sub->add_option("--sin", text.sin_coeffs, "kick sine coefficients, comma separated");
    sub->add_option("--substeps", cfg.family.substeps, "kick flow substeps");
    sub->add_flag("--hh-chart", cfg.hh_chart,
                  "study the section return map chart instead of a family");
    sub->add_option("--c", cfg.c, "energy level of the chart");
    sub->add_option("--dt", cfg.dt, "integrator step of the chart");
}

void add_grid_options(CLI::App* sub, ExperimentConfig& cfg) {
    sub->add_option("--nx", cfg.grid.nx, "seed grid columns");
    sub->add_option("--ny", cfg.grid.ny, "seed grid rows");
    sub->add_option("--x-min", cfg.grid.x_min, "seed grid x lower bound");
    sub->add_option("--x-max", cfg.grid.x_max, "seed grid x upper bound");
    sub->add_option("--y-min", cfg.grid.y_min, "seed grid y lower bound");
    sub->add_option("--y-max", cfg.grid.y_max, "seed grid y upper bound");
}

void add_output_options(CLI::App* sub, ExperimentConfig& cfg, FlagText& text) {
    sub->add_option("--config", text.config, "experiment config file to load first");
    sub->add_option("--emit-config", text.emit_config,
                    "write the effective config to this file and exit");
    sub->add_option("--out-records", cfg.out_records, "line-delimited record output");
    sub->add_option("--out-csv", cfg.out_csv, "plot data output, one-line header");
    sub->add_option("--db", cfg.db_path, "orbit database to append to");
    sub->add_option("--seed", cfg.seed, "Monte Carlo seed");
}

void apply_text_flags(CLI::App* sub, ExperimentConfig& cfg, const FlagText& text) {
    if (sub->count("--family")) {
        FamilyKind kind = family_kind_from_name(text.family);
        if (kind == FamilyKind::custom)
            throw UsageError("--family must name a built-in kind");
        cfg.family.kind = kind;
    }
    if (sub->count("--omega")) cfg.family.omega = parse_double_list(text.omega);
    if (sub->count("--cos"))
        cfg.family.kick.cos_coeffs = parse_double_list(text.cos_coeffs);
    if (sub->count("--sin"))
        cfg.family.kick.sin_coeffs = parse_double_list(text.sin_coeffs);
}

int run_cli(int argc, char** argv) {
    CLI::App app{"annulab: rotation numbers, periodic orbits, and symmetric orbits\n"
                 "of annulus maps, with a Poincare section laboratory"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    const std::string config_path = prescan_config_path(argc, argv);
    bool config_loaded = false;
    if (!config_path.empty()) {
        cfg = load_config(config_path);
        config_loaded = true;
    }
    FlagText text;

    struct SubDef {
        const char* name;
        const char* help;
        int (*run)(const ExperimentConfig&);
        bool family, grid;
    };
    const SubDef defs[] = {
        {"rotation", "estimate a rotation number from one seed", run_rotation, true, false},
        {"farey", "enumerate gcd-filtered rationals in an interval", run_farey, false, false},
        {"orbits", "find periodic orbits with a fixed rotation number", run_orbits, true, true},
        {"symmetric", "symmetry-line search for symmetric periodic orbits", run_symmetric, true, false},
        {"scan-t11", "rotation interval scan with gcd-filtered targets", run_scan_t11, true, true},
        {"scan-c14", "symmetric scan with gcd filter and coverage check", run_scan_c14, true, true},
        {"hh-levels", "critical energy levels of the two-well potential", run_hh_levels, false, false},
        {"hh-section", "iterate the Poincare section return map", run_hh_section, false, false},
        {"hh-orbits", "symmetric periodic orbits on one energy shell", run_hh_orbits, false, false},
        {"verify", "run the verification suites", run_verify, false, false},
        {"db", "query an orbit database", nullptr, false, false},
    };

    std::map<std::string, CLI::App*> subs;
    for (const SubDef& def : defs) {
        CLI::App* sub = app.add_subcommand(def.name, def.help);
        subs[def.name] = sub;
        if (def.family) add_family_options(sub, cfg, text);
        if (def.grid) add_grid_options(sub, cfg);
        add_output_options(sub, cfg, text);
    }

    subs["rotation"]->add_option("--x", cfg.x, "seed x");
    subs["rotation"]->add_option("--y", cfg.y, "seed y");
    subs["rotation"]->add_option("--n-max", cfg.n_max, "iteration budget");
    subs["rotation"]->add_option("--rotation-tol", cfg.rotation_tol,
                                 "recurrence convergence tolerance");

    subs["farey"]->add_option("--lo", cfg.lo, "interval lower end, open");
    subs["farey"]->add_option("--hi", cfg.hi, "interval upper end, open");
    subs["farey"]->add_option("--q-max", cfg.q_max, "denominator bound");
    subs["farey"]->add_option("--n0", cfg.n0, "gcd filter modulus");

    subs["orbits"]->add_option("--target", cfg.target, "rotation number p/q");
    subs["orbits"]->add_option("--tol", cfg.tol, "orbit residual tolerance");

    subs["symmetric"]->add_option("--m-max", cfg.m_max, "line-to-line iterate bound");
    subs["symmetric"]->add_option("--resolution", cfg.resolution,
                                  "symmetry line sampling resolution");
    subs["symmetric"]->add_option("--tol", cfg.tol, "certification tolerance");

    for (const char* scan : {"scan-t11", "scan-c14"}) {
        subs[scan]->add_option("--n0", cfg.n0, "gcd filter modulus");
        subs[scan]->add_option("--q-max", cfg.q_max, "denominator bound");
        subs[scan]->add_option("--tol", cfg.tol, "orbit residual tolerance");
    }
    subs["scan-t11"]->add_option("--n-max", cfg.n_max, "rotation iteration budget");
    subs["scan-t11"]->add_option("--rotation-tol", cfg.rotation_tol,
                                 "rotation convergence tolerance");
    subs["scan-c14"]->add_option("--resolution", cfg.resolution,
                                 "symmetry line sampling resolution");

    for (const char* hh : {"hh-section", "hh-orbits"}) {
        subs[hh]->add_option("--c", cfg.c, "energy level");
        subs[hh]->add_option("--dt", cfg.dt, "integrator step");
    }
    subs["hh-section"]->add_option("--q2", cfg.q2, "section start q2");
    subs["hh-section"]->add_option("--p2", cfg.p2, "section start p2");
    subs["hh-section"]->add_option("--crossings", cfg.crossings,
                                   "number of crossings to collect");
    subs["hh-orbits"]->add_option("--m-max", cfg.m_max, "crossing index bound");
    subs["hh-orbits"]->add_option("--resolution", cfg.resolution,
                                  "symmetry segment sampling resolution");
    subs["hh-orbits"]->add_option("--tol", cfg.tol, "root refinement tolerance");

    subs["verify"]->add_option("--suite", cfg.suite, "suite name, or 'all'");
    subs["verify"]->add_option("--repeat", cfg.repeat,
                               "run each suite this many times and compare output");

    // db query flags live outside the experiment config
    std::optional<long> q_period;
    std::string q_rotation, q_family;
    long period_flag = 0;
    subs["db"]->add_option("--period", period_flag, "match this period");
    subs["db"]->add_option("--rotation", q_rotation, "match this rotation p/q");
    subs["db"]->add_option("--family", q_family, "match family name substring");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    for (const SubDef& def : defs) {
        CLI::App* sub = subs[def.name];
        if (!sub->parsed()) continue;
        if (config_loaded && cfg.operation != def.name)
            throw UsageError("config operation '" + cfg.operation +
                             "' does not match subcommand '" + std::string(def.name) + "'");
        cfg.operation = def.name;
        if (def.family) apply_text_flags(sub, cfg, text);
        if (sub->count("--emit-config")) {
            save_config(cfg, text.emit_config);
            std::cout << "config: " << text.emit_config << "\n";
            return 0;
        }
        if (std::string(def.name) == "db") {
            if (cfg.db_path.empty())
                throw UsageError("db requires --db PATH (or db_path in the config)");
            if (sub->count("--period")) q_period = period_flag;
            OrbitDatabase db(cfg.db_path);
            OrbitDatabase::Query query;
            query.period = q_period;
            if (!q_rotation.empty()) query.rotation = q_rotation;
            query.family_substring = q_family;
            std::vector<Json> rows = db.select(query);
            for (const Json& row : rows) std::cout << row.dump() << "\n";
            std::cerr << "db: " << rows.size() << " of " << db.read_all().size()
                      << " rows matched\n";
            return 0;
        }
        return def.run(cfg);
    }
    throw UsageError("no subcommand selected");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const annulab::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const annulab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
