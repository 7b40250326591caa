#pragma once

#include <maglab/l1_geometry.hpp>
#include <maglab/random.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace maglab {

/// Random polytope: N uniform in [1, max_dim], m uniform in [1, max_vertices],
/// coordinates uniform in [0, s) with s uniform in [0.2, 3).
Polytope random_polytope(Rng& rng, int max_vertices = 8, int max_dim = 6);

struct SuiteOptions {
    long polytopes = 1000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double tolerance = 1e-8;
    int max_vertices = 8;
    int max_dim = 6;
    /// Random interior points added to the vertices for the sample-vs-formula check.
    Eigen::Index interior_samples = 8;
};

struct SuiteReport {
    long polytopes = 0;
    long checks = 0;
    long violations = 0;
    /// Per inequality: (checks, violations).
    std::map<std::string, std::pair<long, long>> by_check;
    std::vector<std::string> messages;

    bool passed() const noexcept { return violations == 0; }
};

/// Runs, on each random polytope: the V'_{j+k} concavity inequality for every
/// j + k <= N, V'_k <= V'_1^k / k!, formula <= exp(V'_1 / 2),
/// V'_1 <= 2 (m - 1) diam, formula <= exp((m - 1) diam), agreement of the
/// enumerated V'_1 with the coordinate widths, and finite-sample magnitude <=
/// formula. A check fails when lhs > rhs + tolerance * max(1, |rhs|).
SuiteReport run_inequality_suite(const SuiteOptions& opts);

} // namespace maglab
