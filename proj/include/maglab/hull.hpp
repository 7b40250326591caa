#pragma once

#include <Eigen/Dense>

#include <vector>

namespace maglab {

/// Convex hull of a finite point set in R^N (points are columns).
///
/// The points are first expressed in an orthonormal basis of their affine
/// hull (rank decided by singular values relative to the largest one), then
/// triangulated by placing them one at a time: each point strictly beyond
/// some boundary facet is coned over every facet it sees. The result is a
/// triangulation of the hull whose boundary facets double as an H-description
/// for membership tests.
class ConvexHull {
public:
    explicit ConvexHull(const Eigen::MatrixXd& points, double rank_tolerance = 1e-10);

    Eigen::Index ambient_dimension() const noexcept { return ambient_; }
    /// Dimension of the affine hull.
    Eigen::Index dimension() const noexcept { return rank_; }
    Eigen::Index size() const noexcept { return points_.cols(); }

    /// Volume in the hull's own affine dimension (1 for a single point).
    double affine_volume() const noexcept { return affine_volume_; }
    /// N-dimensional volume: zero unless the hull is full-dimensional.
    double volume() const noexcept;

    /// Whether x lies in the hull, up to tol times the point-set scale.
    bool contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol = 1e-9) const;

    /// Number of columns of `points` inside the hull; batched form of contains().
    Eigen::Index count_contained(const Eigen::MatrixXd& points, double tol = 1e-9) const;

    /// Indices of the input points that are vertices of the hull.
    std::vector<Eigen::Index> extreme_points() const;

    std::size_t simplex_count() const noexcept { return simplex_count_; }
    std::size_t facet_count() const noexcept { return facets_.size(); }

    struct Facet {
        std::vector<int> vertices;
        Eigen::VectorXd normal;
        double offset = 0.0;
    };

private:
    void triangulate();

    Eigen::MatrixXd points_;
    Eigen::Index ambient_ = 0;
    Eigen::Index rank_ = 0;
    double scale_ = 0.0;
    double rank_tolerance_ = 1e-10;
    Eigen::VectorXd center_;
    Eigen::MatrixXd basis_;  // N x rank, orthonormal columns
    Eigen::MatrixXd local_;  // rank x m
    std::vector<Facet> facets_;
    std::size_t simplex_count_ = 0;
    double affine_volume_ = 0.0;
};

} // namespace maglab
