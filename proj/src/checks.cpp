#include <maglab/checks.hpp>

#include <maglab/approximation.hpp>
#include <maglab/parallel.hpp>

#include <cmath>
#include <sstream>

namespace maglab {
namespace {

struct Outcome {
    std::string name;
    bool ok;
    std::string detail;
};

} // namespace

Polytope random_polytope(Rng& rng, int max_vertices, int max_dim) {
    const auto n = static_cast<Eigen::Index>(rng.integer(1, max_dim));
    const auto m = static_cast<Eigen::Index>(rng.integer(1, max_vertices));
    const double scale = rng.uniform(0.2, 3.0);
    Eigen::MatrixXd v(n, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < n; ++i) v(i, j) = rng.uniform(0.0, scale);
    return Polytope(std::move(v));
}

SuiteReport run_inequality_suite(const SuiteOptions& opts) {
    // Polytopes are drawn sequentially so the set does not depend on threads.
    std::vector<Polytope> polys;
    polys.reserve(static_cast<std::size_t>(opts.polytopes));
    Rng rng(opts.seed);
    for (long i = 0; i < opts.polytopes; ++i) polys.push_back(random_polytope(rng, opts.max_vertices, opts.max_dim));

    std::vector<std::vector<Outcome>> results(polys.size());
    parallel_for(polys.size(), opts.threads, [&](std::size_t idx) {
        const Polytope& p = polys[idx];
        auto& out = results[idx];
        auto check = [&](const std::string& name, double lhs, double rhs) {
            const bool ok = lhs <= rhs + opts.tolerance * std::max(1.0, std::abs(rhs));
            std::ostringstream os;
            os.precision(17);
            os << "polytope " << idx << ": " << name << " lhs=" << lhs << " rhs=" << rhs;
            out.push_back({name, ok, os.str()});
        };

        IvolOptions iv;
        iv.force_enumeration = true;
        const IntrinsicVolumes v = intrinsic_volumes(p, iv);
        const int n = static_cast<int>(p.dimension());
        for (int j = 0; j <= n; ++j)
            for (int k = 0; j + k <= n; ++k) {
                const auto [lhs, rhs] = v1_concavity_check(v, j, k);
                check("concavity", lhs, rhs);
            }
        for (const auto& [vk, bound] : mcmullen_bound_check(v)) check("power_bound", vk, bound);

        const ConvexMagnitudeResult formula = convex_magnitude_from(v, v[n] > 0.0);
        check("exp_v1_bound", formula.value, exp_magnitude_bound(v));

        const double width = l1_width_sum(p);
        const double v1 = n >= 1 ? v[1] : 0.0;
        check("v1_matches_widths", std::abs(v1 - width), 0.0);
        const auto [v1_direct, v1_bound] = polytope_v1_diam_bound(p);
        check("v1_diameter_bound", v1_direct, v1_bound);
        check("diameter_magnitude_bound", formula.value, magnitude_diam_bound(p));

        // Vertices plus Dirichlet interior points; duplicates are impossible
        // almost surely, near-duplicates are skipped by the chain.
        const Eigen::Index extra = p.size() > 1 ? opts.interior_samples : 0;
        Eigen::MatrixXd pts(p.dimension(), p.size() + extra);
        pts.leftCols(p.size()) = p.vertices();
        if (extra > 0)
            pts.rightCols(extra) = sample_polytope(p, SampleScheme::RandomHull, extra, opts.seed + idx).points();
        const LowerSequence chain = magnitude_chain(PointCloud<double>(std::move(pts), Metric::L1));
        check("sample_below_formula", chain.magnitudes.back(), formula.value);
    });

    SuiteReport report;
    report.polytopes = opts.polytopes;
    for (const auto& outcomes : results)
        for (const auto& o : outcomes) {
            auto& [count, bad] = report.by_check[o.name];
            ++count;
            ++report.checks;
            if (!o.ok) {
                ++bad;
                ++report.violations;
                report.messages.push_back(o.detail);
            }
        }
    return report;
}

} // namespace maglab
