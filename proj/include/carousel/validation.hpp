#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace carousel {

/// Outcome of one cross-check: a measured quantity against a limit.
struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double limit = 0.0;
    std::string detail;
};

struct ValidationOptions {
    std::uint64_t seed = 7;
    std::int64_t orders = 100000;   ///< per replication
    int replications = 10;
    std::size_t grid_points = 1025;
};

/// Cross-checks between the solver, the simulator and closed forms:
/// solver residuals, solver vs simulated CDF and throughput, the one-item
/// closed form, the variable-order boundary identities and the n = 2 bound.
std::vector<CheckResult> run_validation(const ValidationOptions& opts = {});

}  // namespace carousel
