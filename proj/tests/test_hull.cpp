#include <maglab/hull.hpp>
#include <maglab/random.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using maglab::ConvexHull;
using maglab::Rng;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

Eigen::MatrixXd cube_vertices(int n, double side = 1.0) {
    Eigen::MatrixXd v(n, 1 << n);
    for (int mask = 0; mask < (1 << n); ++mask)
        for (int i = 0; i < n; ++i) v(i, mask) = (mask >> i & 1) ? side : 0.0;
    return v;
}

/// Planar hull area by Andrew's monotone chain and the shoelace formula.
double monotone_chain_area(const Eigen::MatrixXd& pts) {
    std::vector<std::pair<double, double>> p;
    for (Eigen::Index j = 0; j < pts.cols(); ++j) p.emplace_back(pts(0, j), pts(1, j));
    std::sort(p.begin(), p.end());
    auto cross = [](auto o, auto a, auto b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<double, double>> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    double area = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const auto& a = h[i];
        const auto& b = h[(i + 1) % h.size()];
        area += a.first * b.second - a.second * b.first;
    }
    return std::abs(area) / 2.0;
}

Eigen::MatrixXd random_rotation(Rng& rng, int n) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    return Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
}

} // namespace

TEST(ConvexHull, UnitSquare) {
    const ConvexHull h(cube_vertices(2));
    EXPECT_EQ(h.dimension(), 2);
    EXPECT_NEAR(h.volume(), 1.0, 1e-14);
    EXPECT_EQ(h.extreme_points().size(), 4u);
}

TEST(ConvexHull, RightTriangle) {
    Eigen::MatrixXd t(2, 3);
    t << 0, 1, 0, 0, 0, 1;
    EXPECT_NEAR(ConvexHull(t).volume(), 0.5, 1e-15);
}

TEST(ConvexHull, DegenerateSets) {
    Eigen::MatrixXd line(2, 3);
    line << 0, 1, 2, 0, 1, 2;
    const ConvexHull seg(line);
    EXPECT_EQ(seg.dimension(), 1);
    EXPECT_EQ(seg.volume(), 0.0);
    EXPECT_NEAR(seg.affine_volume(), 2.0 * std::sqrt(2.0), 1e-14);
    EXPECT_EQ(seg.extreme_points(), (std::vector<Eigen::Index>{0, 2}));
    EXPECT_TRUE(seg.contains(Eigen::Vector2d(0.5, 0.5)));
    EXPECT_FALSE(seg.contains(Eigen::Vector2d(0.5, 0.6)));

    const ConvexHull point(Eigen::MatrixXd::Constant(3, 1, 2.0));
    EXPECT_EQ(point.dimension(), 0);
    EXPECT_EQ(point.affine_volume(), 1.0);
    EXPECT_EQ(point.volume(), 0.0);
    EXPECT_TRUE(point.contains(Eigen::Vector3d::Constant(2.0)));

    Eigen::MatrixXd flat(3, 4);
    flat << 0, 1, 0, 1, 0, 0, 1, 1, 5, 5, 5, 5;
    const ConvexHull square_in_space(flat);
    EXPECT_EQ(square_in_space.dimension(), 2);
    EXPECT_EQ(square_in_space.volume(), 0.0);
    EXPECT_NEAR(square_in_space.affine_volume(), 1.0, 1e-14);
}

TEST(ConvexHull, CubesAndCrossPolytopes) {
    for (int n = 1; n <= 6; ++n) {
        EXPECT_NEAR(ConvexHull(cube_vertices(n, 1.5)).volume(), std::pow(1.5, n), 1e-10) << n;
        Eigen::MatrixXd cross(n, 2 * n);
        cross << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
        EXPECT_NEAR(ConvexHull(cross).volume(), std::pow(2.0, n) / factorial(n), 1e-12) << n;
    }
}

TEST(ConvexHull, SimplexDeterminantOracle) {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = static_cast<int>(rng.integer(1, 6));
        Eigen::MatrixXd s(n, n + 1);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i < n; ++i) s(i, j) = rng.uniform(-1.0, 1.0);
        Eigen::MatrixXd edges(n, n);
        for (int j = 0; j < n; ++j) edges.col(j) = s.col(j + 1) - s.col(0);
        const double oracle = std::abs(edges.determinant()) / factorial(n);
        EXPECT_NEAR(ConvexHull(s).volume(), oracle, 1e-12 * std::max(1.0, oracle));
    }
}

TEST(ConvexHull, PlanarMatchesMonotoneChain) {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = static_cast<Eigen::Index>(rng.integer(3, 40));
        Eigen::MatrixXd pts(2, m);
        for (Eigen::Index j = 0; j < m; ++j) pts.col(j) << rng.uniform(), rng.uniform();
        EXPECT_NEAR(ConvexHull(pts).volume(), monotone_chain_area(pts), 1e-12);
    }
}

TEST(ConvexHull, RotationInvariance) {
    Rng rng(12);
    for (int n = 2; n <= 5; ++n) {
        Eigen::MatrixXd pts(n, 30);
        for (Eigen::Index j = 0; j < pts.cols(); ++j)
            for (int i = 0; i < n; ++i) pts(i, j) = rng.uniform(-1.0, 1.0);
        const Eigen::MatrixXd rotated = random_rotation(rng, n) * pts;
        EXPECT_NEAR(ConvexHull(pts).volume(), ConvexHull(rotated).volume(), 1e-10);
    }
}

TEST(ConvexHull, InteriorPointsDoNotChangeVolume) {
    Rng rng(15);
    Eigen::MatrixXd pts(3, 8 + 50);
    pts.leftCols(8) = cube_vertices(3);
    for (Eigen::Index j = 8; j < pts.cols(); ++j) pts.col(j) << rng.uniform(), rng.uniform(), rng.uniform();
    const ConvexHull h(pts);
    EXPECT_NEAR(h.volume(), 1.0, 1e-12);
    auto ext = h.extreme_points();
    EXPECT_EQ(ext, (std::vector<Eigen::Index>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(ConvexHull, Membership) {
    const ConvexHull h(cube_vertices(3));
    EXPECT_TRUE(h.contains(Eigen::Vector3d(0.5, 0.5, 0.5)));
    EXPECT_TRUE(h.contains(Eigen::Vector3d(1.0, 0.0, 0.3)));
    EXPECT_FALSE(h.contains(Eigen::Vector3d(1.01, 0.5, 0.5)));
    EXPECT_FALSE(h.contains(Eigen::Vector3d(-0.01, 0.5, 0.5)));

    Eigen::MatrixXd batch(3, 4);
    batch << 0.5, 2.0, 0.1, 1.0, 0.5, 0.0, 0.9, 1.0, 0.5, 0.0, 0.1, 1.0;
    EXPECT_EQ(h.count_contained(batch), 3);
}

TEST(ConvexHull, MembershipAgreesWithSimplexOracle) {
    // Barycentric coordinates decide membership in a simplex directly.
    Rng rng(33);
    Eigen::MatrixXd s(3, 4);
    for (int j = 0; j < 4; ++j) s.col(j) << rng.uniform(), rng.uniform(), rng.uniform();
    const ConvexHull h(s);
    Eigen::Matrix4d lift;
    lift << s, Eigen::RowVector4d::Ones();
    for (int trial = 0; trial < 2000; ++trial) {
        const Eigen::Vector3d x(rng.uniform(), rng.uniform(), rng.uniform());
        const Eigen::Vector4d bary = lift.fullPivLu().solve((Eigen::Vector4d() << x, 1.0).finished());
        if (std::abs(bary.minCoeff()) < 1e-6) continue;
        EXPECT_EQ(h.contains(x), bary.minCoeff() > 0.0);
    }
}
