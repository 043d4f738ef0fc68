// Prints one PASS/FAIL line per acceptance criterion. Exits nonzero only on
// an internal error, or on any FAIL when run with --strict.
#include <coupledflow/verification.hpp>

#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
    bool strict = false;
    bool verbose = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0) strict = true;
        else if (std::strcmp(argv[i], "--verbose") == 0) verbose = true;
        else {
            std::cerr << "usage: acceptance [--strict] [--verbose]\n";
            return 2;
        }
    }
    cflow::verification::RunCache cache;
    int failed = 0;
    try {
        for (int id = 1; id <= 10; ++id) {
            const auto r = cflow::verification::run_criterion(id, cache, verbose ? &std::cout : nullptr);
            cflow::verification::print(std::cout, r);
            std::cout.flush();
            failed += r.passed ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "acceptance: " << e.what() << '\n';
        return 3;
    }
    std::cout << (10 - failed) << "/10 criteria passed\n";
    return strict && failed > 0 ? 1 : 0;
}
