#include <maglab/approximation.hpp>
#include <maglab/errors.hpp>
#include <maglab/random.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace maglab;

namespace {

double harmonic(long n) {
    long double s = 0.0L;
    for (long i = 1; i <= n; ++i) s += 1.0L / static_cast<long double>(i);
    return static_cast<double>(s);
}

/// Straightforward greedy max-min selection over pool columns, first column first.
std::vector<Eigen::Index> greedy_oracle(const Eigen::MatrixXd& pool, Eigen::Index n) {
    std::vector<Eigen::Index> chosen{0};
    while (static_cast<Eigen::Index>(chosen.size()) < n) {
        Eigen::Index best = -1;
        double best_d = -1.0;
        for (Eigen::Index j = 0; j < pool.cols(); ++j) {
            double d = std::numeric_limits<double>::infinity();
            for (Eigen::Index c : chosen) d = std::min(d, (pool.col(j) - pool.col(c)).lpNorm<1>());
            if (d > best_d) {
                best_d = d;
                best = j;
            }
        }
        chosen.push_back(best);
    }
    return chosen;
}

Polytope unit_square() { return Polytope::box(Eigen::Vector2d::Zero(), Eigen::Vector2d::Ones()); }

Polytope triangle(double a, double b) {
    Eigen::MatrixXd v(2, 3);
    v << 0, a, 0, 0, 0, b;
    return Polytope(v);
}

} // namespace

TEST(SequenceSpec, Terms) {
    EXPECT_DOUBLE_EQ(SequenceSpec::harmonic().term(4), 0.25);
    EXPECT_DOUBLE_EQ(SequenceSpec::power(2.0).term(3), 1.0 / 9.0);
    EXPECT_DOUBLE_EQ(SequenceSpec::geometric(0.5).term(3), 0.125);
    EXPECT_TRUE(SequenceSpec::harmonic().divergent());
    EXPECT_TRUE(SequenceSpec::power(1.0).divergent());
    EXPECT_FALSE(SequenceSpec::power(1.5).divergent());
    EXPECT_FALSE(SequenceSpec::geometric(0.5).divergent());
    EXPECT_EQ(SequenceSpec::parse("power:0.5").kind(), SequenceSpec::Kind::Power);
    EXPECT_DOUBLE_EQ(SequenceSpec::parse("geometric:0.25").parameter(), 0.25);
    EXPECT_THROW(SequenceSpec::parse("cubic"), ValidationError);
    EXPECT_THROW(SequenceSpec::geometric(1.0), ValidationError);
    EXPECT_THROW(SequenceSpec::power(0.0), ValidationError);
    EXPECT_THROW(SequenceSpec::explicit_values({1.0, -1.0}), ValidationError);
    EXPECT_THROW(SequenceSpec::harmonic().term(0), ValidationError);
    const auto e = SequenceSpec::explicit_values({3.0, 2.0});
    EXPECT_EQ(e.terms(2), (std::vector<double>{3.0, 2.0}));
    EXPECT_THROW(e.term(3), ValidationError);
}

TEST(SampleScheme, Parse) {
    EXPECT_EQ(parse_scheme("farthest_point"), SampleScheme::FarthestPoint);
    EXPECT_EQ(parse_scheme("vertex_grid"), SampleScheme::VertexGrid);
    EXPECT_EQ(parse_scheme("random_hull"), SampleScheme::RandomHull);
    EXPECT_THROW(parse_scheme("sobol"), ValidationError);
}

TEST(SamplePolytope, FarthestPointOnSimplexReturnsVertices) {
    const Polytope p = triangle(1.0, 1.0);
    const auto cloud = sample_polytope(p, SampleScheme::FarthestPoint, 3, 0);
    ASSERT_EQ(cloud.size(), 3);
    for (Eigen::Index j = 0; j < 3; ++j) {
        double nearest = std::numeric_limits<double>::infinity();
        for (Eigen::Index v = 0; v < 3; ++v)
            nearest = std::min(nearest, (cloud.points().col(j) - p.vertices().col(v)).lpNorm<1>());
        EXPECT_EQ(nearest, 0.0);
    }
    const Polytope s4 = Polytope::coordinate_simplex(Eigen::VectorXd::Ones(4));
    const auto picked = sample_polytope(s4, SampleScheme::FarthestPoint, 5, 0).points();
    for (Eigen::Index v = 0; v < 5; ++v) {
        int hits = 0;
        for (Eigen::Index j = 0; j < 5; ++j) hits += picked.col(j) == s4.vertices().col(v);
        EXPECT_EQ(hits, 1);
    }
}

TEST(SamplePolytope, FarthestPointMatchesGreedyOracle) {
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd v(2, 4);
        for (Eigen::Index j = 0; j < 4; ++j) v.col(j) << rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0);
        const Polytope p(v);
        const Eigen::Index n = 12;
        const Eigen::MatrixXd pool = barycentric_pool(p, 4 * n);
        const auto chosen = greedy_oracle(pool, n);
        const auto cloud = sample_polytope(p, SampleScheme::FarthestPoint, n, 0);
        for (Eigen::Index k = 0; k < n; ++k) EXPECT_EQ(cloud.points().col(k), pool.col(chosen[static_cast<std::size_t>(k)]));
    }
}

TEST(SamplePolytope, SinglePointAndMembership) {
    const Polytope p = unit_square();
    for (auto scheme : {SampleScheme::VertexGrid, SampleScheme::FarthestPoint, SampleScheme::RandomHull}) {
        const auto one = sample_polytope(p, scheme, 1, 3);
        EXPECT_EQ(one.size(), 1);
        EXPECT_EQ(magnitude_finite(subspace_from_cloud(one)).magnitude, 1.0);
        const auto many = sample_polytope(p, scheme, 50, 3);
        EXPECT_EQ(many.size(), 50);
        const ConvexHull hull = p.hull();
        for (Eigen::Index j = 0; j < many.size(); ++j) EXPECT_TRUE(hull.contains(many.points().col(j)));
    }
    EXPECT_THROW(sample_polytope(p, SampleScheme::VertexGrid, 0, 0), ValidationError);
}

TEST(SamplePolytope, SeedReproducibility) {
    const Polytope p = triangle(1.0, 2.0);
    EXPECT_EQ(sample_polytope(p, SampleScheme::RandomHull, 20, 9).points(),
              sample_polytope(p, SampleScheme::RandomHull, 20, 9).points());
    EXPECT_NE(sample_polytope(p, SampleScheme::RandomHull, 20, 9).points(),
              sample_polytope(p, SampleScheme::RandomHull, 20, 10).points());
}

TEST(LowerSequence, IntervalApproachesOneAndAHalf) {
    Eigen::MatrixXd v(1, 2);
    v << 0, 1;
    const auto seq = magnitude_lower_sequence(Polytope(v), 64);
    ASSERT_EQ(seq.magnitudes.size(), 64u);
    for (std::size_t i = 1; i < seq.magnitudes.size(); ++i) EXPECT_GE(seq.magnitudes[i], seq.magnitudes[i - 1]);
    EXPECT_NEAR(seq.magnitudes.back(), 1.5, 1e-2);
    EXPECT_LE(seq.magnitudes.back(), 1.5 + 1e-8);
}

TEST(LowerSequence, IntervalMatchesDenseGridOracle) {
    // n equally spaced points on [0,1] form a path whose weighting has the
    // closed form |A| = 1 + (n - 1) tanh(h/2), h = 1/(n-1).
    for (long n : {2L, 5L, 17L, 64L}) {
        Eigen::MatrixXd pts(1, n);
        for (long j = 0; j < n; ++j) pts(0, j) = static_cast<double>(j) / static_cast<double>(n - 1);
        const double h = 1.0 / static_cast<double>(n - 1);
        const double oracle = 1.0 + static_cast<double>(n - 1) * std::tanh(h / 2.0);
        EXPECT_NEAR(magnitude_finite(subspace_from_cloud(PointCloud<double>(pts, Metric::L1))).magnitude, oracle, 1e-10);
    }
}

TEST(LowerSequence, SquareApproachesTwoAndAQuarter) {
    const auto seq = magnitude_lower_sequence(unit_square(), 256);
    for (std::size_t i = 1; i < seq.magnitudes.size(); ++i) EXPECT_GE(seq.magnitudes[i], seq.magnitudes[i - 1]);
    EXPECT_LE(seq.magnitudes.back(), 2.25 + 1e-8);
    EXPECT_NEAR(seq.magnitudes.back(), 2.25, 5e-2);
}

TEST(LowerSequence, BudgetOne) {
    const auto seq = magnitude_lower_sequence(unit_square(), 1);
    EXPECT_EQ(seq.magnitudes, std::vector<double>{1.0});
}

TEST(LowerSequence, EveryEntryBelowFormula) {
    Rng rng(2);
    for (int trial = 0; trial < 6; ++trial) {
        Eigen::MatrixXd v(2, 5);
        for (Eigen::Index j = 0; j < 5; ++j) v.col(j) << rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0);
        const Polytope p(v);
        const double formula = convex_magnitude_l1(p).value;
        for (auto scheme : {SampleScheme::VertexGrid, SampleScheme::FarthestPoint, SampleScheme::RandomHull})
            for (double m : magnitude_lower_sequence(p, 40, scheme, 5).magnitudes) EXPECT_LE(m, formula + 1e-8);
    }
}

TEST(Divergence, HarmonicValues) {
    const std::vector<long> ns{2, 10, 100};
    const auto table = divergence_experiment(SequenceSpec::harmonic(), ns);
    ASSERT_EQ(table.rows.size(), 3u);
    EXPECT_NEAR(table.rows[0].formula_value, 1.8125, 1e-14);
    EXPECT_NEAR(*table.rows[1].lower_bound, 1.4645, 1e-4);
    EXPECT_NEAR(*table.rows[1].lower_bound, harmonic(10) / 2.0, 1e-14);
    EXPECT_NEAR(*table.rows[2].lower_bound, 2.5937, 1e-3);
    EXPECT_NEAR(*table.rows[2].lower_bound, harmonic(100) / 2.0, 1e-12);
    for (const auto& row : table.rows) {
        EXPECT_GE(row.formula_value, *row.lower_bound);
        EXPECT_LE(row.sample_magnitude, row.formula_value + 1e-8);
        EXPECT_LE(row.formula_value, row.upper_bound + 1e-8);
        EXPECT_EQ(row.n_points, row.param + 1);
    }
}

TEST(Divergence, ClosedFormMatchesFiniteDefinitionForTwoPoints) {
    // X_1 = [0, a]: |X_1| = 1 + a/2.
    const std::vector<double> a{0.8};
    EXPECT_DOUBLE_EQ(coordinate_simplex_magnitude(a), 1.4);
}

TEST(Divergence, HarmonicStrictlyIncreasing) {
    std::vector<long> ns;
    for (long n = 1; n <= 400; n += 7) ns.push_back(n);
    const auto table = divergence_experiment(SequenceSpec::harmonic(), ns);
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        EXPECT_GT(table.rows[i].formula_value, table.rows[i - 1].formula_value);
}

TEST(Divergence, CrossingAgreesWithHarmonicOracle) {
    long oracle = 0;
    for (long n = 1;; ++n)
        if (harmonic(n) >= 6.0) {
            oracle = n;
            break;
        }
    EXPECT_EQ(oracle, 227);
    EXPECT_EQ(crossing_index(SequenceSpec::harmonic(), 3.0, 1'000'000), oracle);
    const std::vector<long> ns{10};
    const auto table = divergence_experiment(SequenceSpec::harmonic(), ns);
    ASSERT_EQ(table.crossings.size(), 3u);
    EXPECT_EQ(table.crossings[1].threshold, 3.0);
    EXPECT_EQ(table.crossings[1].first_n, 227);
    EXPECT_EQ(table.crossings[0].first_n, crossing_index(SequenceSpec::harmonic(), 2.0, 1'000'000));
}

TEST(Divergence, ConvergentSpecsNeverCross) {
    EXPECT_FALSE(crossing_index(SequenceSpec::geometric(0.5), 2.0, 1'000'000));
    EXPECT_FALSE(crossing_index(SequenceSpec::power(2.0), 2.0, 1'000'000));
}

TEST(Divergence, GeometricBounded) {
    std::vector<long> ns;
    for (long n = 1; n <= 30; ++n) ns.push_back(n);
    const auto table = divergence_experiment(SequenceSpec::geometric(0.5), ns);
    for (const auto& row : table.rows) {
        EXPECT_LE(row.formula_value, std::exp(0.5) + 1e-9);
        EXPECT_LE(row.formula_value, row.upper_bound + 1e-9);
    }
}

TEST(Sweep, SquareFormulaAndBounds) {
    const std::vector<double> ts{1.0, 0.1, 0.01};
    const auto table = one_point_sweep(unit_square(), ts);
    ASSERT_EQ(table.rows.size(), 3u);
    EXPECT_NEAR(table.rows[0].formula_value, 2.25, 1e-12);
    EXPECT_NEAR(table.rows[1].formula_value, 1.05 * 1.05, 1e-12);
    EXPECT_NEAR(table.rows[2].formula_value, 1.010025, 1e-12);
    EXPECT_NEAR(table.rows[2].upper_bound, std::exp(3 * 0.01 * 2), 1e-12);
    for (const auto& row : table.rows) {
        EXPECT_GE(row.sample_magnitude, 1.0);
        EXPECT_LE(row.sample_magnitude, row.formula_value + 1e-8);
        EXPECT_LE(row.formula_value, row.upper_bound + 1e-8);
    }
}

TEST(Sweep, SandwichAtSmallScales) {
    Rng rng(3);
    const std::vector<double> ts{1.0, 1e-1, 1e-2, 1e-3};
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::MatrixXd v(2, 4);
        for (Eigen::Index j = 0; j < 4; ++j) v.col(j) << rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0);
        const Polytope p(v);
        SweepOptions opts;
        opts.budget = 32;
        for (const auto& row : one_point_sweep(p, ts, opts).rows) {
            EXPECT_GE(row.sample_magnitude, 1.0 - 1e-12);
            EXPECT_LE(row.sample_magnitude, row.formula_value + 1e-8) << row.param;
            EXPECT_LE(row.formula_value, row.upper_bound + 1e-8);
            EXPECT_LE(row.formula_value - 1.0, row.upper_bound - 1.0 + 1e-12);
        }
    }
}

TEST(Sweep, PointPolytopeIsAllOnes) {
    Eigen::MatrixXd v(2, 1);
    v << 0.5, 0.5;
    const std::vector<double> ts{1.0, 0.01};
    for (const auto& row : one_point_sweep(Polytope(v), ts).rows) {
        EXPECT_EQ(row.sample_magnitude, 1.0);
        EXPECT_EQ(row.formula_value, 1.0);
        EXPECT_EQ(row.upper_bound, 1.0);
    }
}

TEST(Sweep, GrowsWithT) {
    const std::vector<double> ts{0.5, 1.0, 2.0, 4.0, 8.0};
    const auto table = one_point_sweep(triangle(1.0, 1.0), ts);
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        EXPECT_GT(table.rows[i].formula_value, table.rows[i - 1].formula_value);
}

TEST(Sweep, ReproducibleAcrossRunsAndThreads) {
    const std::vector<double> ts{1.0, 0.1, 0.01, 0.001};
    SweepOptions one;
    one.scheme = SampleScheme::RandomHull;
    one.seed = 42;
    SweepOptions four = one;
    four.threads = 4;
    const auto a = one_point_sweep(triangle(1.0, 2.0), ts, one);
    const auto b = one_point_sweep(triangle(1.0, 2.0), ts, one);
    const auto c = one_point_sweep(triangle(1.0, 2.0), ts, four);
    ASSERT_EQ(a.rows.size(), c.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].sample_magnitude, b.rows[i].sample_magnitude);
        EXPECT_EQ(a.rows[i].sample_magnitude, c.rows[i].sample_magnitude);
        EXPECT_EQ(a.rows[i].formula_value, c.rows[i].formula_value);
        EXPECT_EQ(a.rows[i].flag, c.rows[i].flag);
    }
}
