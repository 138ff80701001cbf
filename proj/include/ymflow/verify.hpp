#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ymflow {

struct CheckLine {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckLine> lines;
    bool pass() const {
        for (auto& l : lines)
            if (!l.pass) return false;
        return true;
    }
};

// One suite per verification theme; tolerances are fixed in the
// implementations. Each doubles as the matching acceptance criterion.
SuiteResult verify_adjointness();  // exact complex structure, all bcs/groups
SuiteResult verify_energy();       // abelian Fourier oracle + energy identity
SuiteResult verify_energy_oracle();
SuiteResult verify_energy_identity();
SuiteResult verify_recursion();    // coefficient tables, time-FD cross-check,
                                   // consequence-identity refinement
SuiteResult verify_recursion_tables();
SuiteResult verify_recursion_fd();
SuiteResult verify_recursion_refine();
SuiteResult verify_gauge();        // observable invariance under gauge moves
SuiteResult verify_gronwall();     // weighted integral inequalities on a run
SuiteResult verify_bounds();       // lower-order Hölder bounds on random stacks
SuiteResult verify_scaling();      // small-time exponents on rough data

SuiteResult run_suite(const std::string& name);
std::vector<std::string> suite_names();

void print_suite(std::ostream& os, const SuiteResult& r);
std::string suite_csv(const SuiteResult& r);

}  // namespace ymflow
