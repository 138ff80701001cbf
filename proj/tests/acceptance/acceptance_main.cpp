// Acceptance harness: one numbered criterion per suite section, each printed
// as a single pass/fail line (plus the underlying check lines). Exit 0 iff
// every requested criterion passes.

#include <cstring>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ymflow/verify.hpp"

using namespace ymflow;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::string suite;
    // which check-line name prefixes belong to this criterion; empty = all
    std::vector<std::string> prefixes;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> c{
        {1, "exact adjointness and complex structure", "adjointness", {}},
        {2, "abelian Fourier decay oracle", "energy.oracle", {}},
        {3, "energy identity along a smooth run", "energy.identity", {}},
        {4, "derivative coefficient tables", "recursion.tables", {}},
        {5, "recursion versus central time differences", "recursion.fd", {}},
        {6, "consequence identity residuals under refinement", "recursion.refine", {}},
        {7, "gauge invariance of recorded observables", "gauge", {}},
        {8, "weighted integral inequalities along a rough run", "gronwall", {}},
        {9, "small-time scaling exponents", "scaling", {}},
        {10, "lower-order bounds on random stacks", "bounds", {}},
    };
    return c;
}

bool line_matches(const CheckLine& l, const Criterion& c) {
    if (c.prefixes.empty()) return true;
    for (auto& p : c.prefixes)
        if (l.name.rfind(p, 0) == 0) return true;
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            wanted.insert(std::atoi(argv[++i]));
        } else if (std::strcmp(argv[i], "--list") == 0) {
            for (auto& c : criteria()) std::cout << c.id << ": " << c.title << "\n";
            return 0;
        } else {
            std::cerr << "usage: acceptance_tests [--criterion N]... [--list]\n";
            return 2;
        }
    }
    if (wanted.empty())
        for (auto& c : criteria()) wanted.insert(c.id);

    std::map<std::string, SuiteResult> cache;
    bool all_pass = true;
    for (auto& c : criteria()) {
        if (!wanted.count(c.id)) continue;
        auto it = cache.find(c.suite);
        if (it == cache.end()) it = cache.emplace(c.suite, run_suite(c.suite)).first;
        const SuiteResult& r = it->second;

        bool pass = true;
        int matched = 0;
        for (auto& l : r.lines) {
            if (!line_matches(l, c)) continue;
            ++matched;
            pass = pass && l.pass;
            std::cout << "    " << (l.pass ? "[ok]   " : "[FAIL] ") << l.name
                      << "  value=" << l.value << " threshold=" << l.threshold
                      << (l.detail.empty() ? "" : "  (" + l.detail + ")") << "\n";
        }
        pass = pass && matched > 0;
        all_pass = all_pass && pass;
        std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.title
                  << "\n";
    }
    return all_pass ? 0 : 1;
}
