// Acceptance battery: thirteen criteria, one line each, nonzero exit on any
// failure. Every tolerance is pinned inside the corresponding verify suite.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "annulab/verify.hpp"

namespace {

struct Criterion {
    const char* suite;
    const char* summary;
};

const std::vector<Criterion> kCriteria = {
    {"lift-axioms",
     "built-in lifts commute with the deck map and preserve the annulus"},
    {"rotation-oracle",
     "rotation numbers recover rigid rotations exactly and twist heights closely"},
    {"farey", "rational enumeration matches the brute-force oracle on random intervals"},
    {"pq-orbits",
     "every low-order resonance of the kicked twist yields a certified orbit"},
    {"odd-scan", "the gcd filter leaves only periods coprime to the modulus"},
    {"reversibility",
     "symmetric splittings pass the reversibility identity, the asymmetric kick fails"},
    {"kang", "symmetry-line roots match the closed form and the dense sign-scan oracle"},
    {"symmetric-scan",
     "every covered resonance also carries a symmetric representative"},
    {"hh-levels", "the oscillator equilibria sit at the two critical values"},
    {"hh-invariants",
     "energy, time reversal, and the threefold rotation survive long integration"},
    {"hh-symmetric-orbits",
     "section root search reproduces the pinned symmetric orbit table"},
    {"hh-return-area", "the return map preserves section area within Monte Carlo error"},
    {"reproducibility", "suite reruns emit byte-identical machine output"},
};

} // namespace

int main() {
    int failures = 0;
    for (std::size_t i = 0; i < kCriteria.size(); ++i) {
        const Criterion& cr = kCriteria[i];
        bool pass = false;
        std::string detail;
        try {
            annulab::SuiteResult res = annulab::run_suite(cr.suite);
            pass = res.pass();
            long n_checks = static_cast<long>(res.checks.size());
            detail = std::to_string(n_checks) + " checks, " +
                     std::to_string(res.seconds).substr(0, 5) + " s";
            if (!pass) {
                for (const annulab::CheckResult& c : res.checks) {
                    if (c.pass) continue;
                    detail += "\n    failed: " + c.name + " value=" +
                              std::to_string(c.value) + " bound=" +
                              std::to_string(c.bound);
                    if (!c.note.empty()) detail += " (" + c.note + ")";
                }
            }
        } catch (const std::exception& e) {
            pass = false;
            detail = std::string("exception: ") + e.what();
        }
        if (!pass) ++failures;
        std::printf("criterion %2zu %-10s %s: %s (%s)\n", i + 1, cr.suite,
                    cr.summary, pass ? "PASS" : "FAIL", detail.c_str());
        std::fflush(stdout);
    }
    if (failures > 0) {
        std::printf("%d of %zu criteria failed\n", failures, kCriteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", kCriteria.size());
    return 0;
}
