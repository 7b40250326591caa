#pragma once

// Finite metric spaces, their similarity matrices exp(-d), and magnitude.
//
// Everything here is templated on the scalar type so that badly conditioned
// samples can be re-run in extended precision; `double` is the default.

#include <maglab/errors.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace maglab {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Pivot threshold of the positive-definiteness test.
inline constexpr double kPivotTolerance = 1e-12;
/// Pivot ratio (min / max) below which a solve is flagged as ill conditioned.
inline constexpr double kConditionRatio = 1e-10;
/// Two points closer than this are considered duplicates.
inline constexpr double kDuplicateTolerance = 1e-12;

struct MetricValidation {
    bool check_triangle = false;
    double tolerance = 1e-12;
};

/// A finite metric space given by its distance matrix.
template <typename Scalar = double>
class FiniteMetricSpace {
public:
    using MatrixType = Matrix<Scalar>;

    explicit FiniteMetricSpace(MatrixType distances, MetricValidation validation = {})
        : d_(std::move(distances)) {
        validate(validation);
    }

    Eigen::Index size() const noexcept { return d_.rows(); }
    const MatrixType& distances() const noexcept { return d_; }
    Scalar operator()(Eigen::Index i, Eigen::Index j) const { return d_(i, j); }

    /// Largest violation d(i,k) - d(i,j) - d(j,k); zero or negative for a metric.
    Scalar triangle_defect() const {
        Scalar worst = -std::numeric_limits<Scalar>::infinity();
        const Eigen::Index n = size();
        if (n < 3) return Scalar(0);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index k = 0; k < n; ++k)
                    worst = std::max(worst, d_(i, k) - d_(i, j) - d_(j, k));
        return worst;
    }

private:
    void validate(const MetricValidation& validation) {
        using std::abs;
        if (d_.rows() == 0) throw ValidationError("metric space must have at least one point");
        if (d_.rows() != d_.cols()) throw ValidationError("distance matrix must be square");
        const Eigen::Index n = d_.rows();
        const Scalar tol(validation.tolerance);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (d_(i, i) != Scalar(0))
                throw ValidationError("distance matrix must have a zero diagonal");
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const Scalar a = d_(i, j), b = d_(j, i);
                if (!std::isfinite(static_cast<double>(a)) || !std::isfinite(static_cast<double>(b)))
                    throw ValidationError("distances must be finite");
                if (abs(a - b) > tol * std::max(Scalar(1), abs(a)))
                    throw ValidationError("distance matrix is not symmetric at (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
                if (a == Scalar(0) || b == Scalar(0))
                    throw DuplicatePoints("points " + std::to_string(i) + " and " + std::to_string(j) +
                                          " coincide (distance 0)");
                if (a < Scalar(0) || b < Scalar(0))
                    throw ValidationError("distinct points must be at positive distance (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
                const Scalar mean = (a + b) / Scalar(2);
                d_(i, j) = d_(j, i) = mean;
            }
        }
        if (validation.check_triangle && triangle_defect() > tol * std::max(Scalar(1), d_.maxCoeff()))
            throw ValidationError("distance matrix violates the triangle inequality");
    }

    MatrixType d_;
};

/// Z(i,j) = exp(-d(i,j)). The diagonal is exactly one.
template <typename Scalar>
Matrix<Scalar> similarity_matrix(const FiniteMetricSpace<Scalar>& space) {
    Matrix<Scalar> z = (-space.distances().array()).exp().matrix();
    z.diagonal().setOnes();
    return z;
}

/// Outcome of the Cholesky pivot test.
template <typename Scalar = double>
struct PdReport {
    bool positive_definite = false;
    Scalar min_pivot = std::numeric_limits<Scalar>::infinity();
    Scalar max_pivot = Scalar(0);
    /// First row whose pivot fell to or below tolerance, -1 if none.
    Eigen::Index failed_index = -1;

    Scalar pivot_ratio() const { return max_pivot > Scalar(0) ? min_pivot / max_pivot : Scalar(0); }
    bool ill_conditioned() const { return pivot_ratio() < Scalar(kConditionRatio); }
};

/// Unpivoted Cholesky factorization Z = L L^T that records every pivot
/// Z(j,j) - sum_k L(j,k)^2 and stops at the first one <= tol.
template <typename Scalar>
class CholeskyFactor {
public:
    template <typename Derived>
    explicit CholeskyFactor(const Eigen::MatrixBase<Derived>& z, Scalar tol = Scalar(kPivotTolerance)) {
        using std::sqrt;
        if (z.rows() != z.cols()) throw ValidationError("matrix must be square");
        const Eigen::Index n = z.rows();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                if (z(i, j) != z(j, i))
                    throw ValidationError("matrix is not symmetric at (" + std::to_string(i) + "," +
                                          std::to_string(j) + ")");
        l_ = Matrix<Scalar>::Zero(n, n);
        report_.positive_definite = true;
        for (Eigen::Index j = 0; j < n; ++j) {
            const Scalar pivot = z(j, j) - l_.row(j).head(j).squaredNorm();
            report_.min_pivot = std::min(report_.min_pivot, pivot);
            report_.max_pivot = std::max(report_.max_pivot, pivot);
            if (!(pivot > tol)) {
                report_.positive_definite = false;
                report_.failed_index = j;
                return;
            }
            const Scalar root = sqrt(pivot);
            l_(j, j) = root;
            for (Eigen::Index i = j + 1; i < n; ++i)
                l_(i, j) = (z(i, j) - l_.row(i).head(j).dot(l_.row(j).head(j))) / root;
        }
    }

    const PdReport<Scalar>& report() const noexcept { return report_; }
    bool ok() const noexcept { return report_.positive_definite; }
    const Matrix<Scalar>& matrix_l() const noexcept { return l_; }

    template <typename Rhs>
    Vector<Scalar> solve(const Eigen::MatrixBase<Rhs>& b) const {
        Vector<Scalar> y = l_.template triangularView<Eigen::Lower>().solve(b);
        return l_.transpose().template triangularView<Eigen::Upper>().solve(y);
    }

private:
    Matrix<Scalar> l_;
    PdReport<Scalar> report_;
};

/// True iff the pivoted factorization of a symmetric matrix succeeds with every pivot above tol.
template <typename Derived>
PdReport<typename Derived::Scalar> is_positive_definite(
    const Eigen::MatrixBase<Derived>& z,
    typename Derived::Scalar tol = typename Derived::Scalar(kPivotTolerance)) {
    return CholeskyFactor<typename Derived::Scalar>(z, tol).report();
}

/// w solving Z w = 1, its sum (the magnitude), and diagnostics of the solve.
template <typename Scalar = double>
struct Weighting {
    Vector<Scalar> w;
    Scalar magnitude = Scalar(0);
    Scalar min_pivot = Scalar(0);
    Scalar pivot_ratio = Scalar(0);
    /// max |Z w - 1|.
    Scalar residual = Scalar(0);
    bool condition_warning = false;
};

template <typename Scalar>
Weighting<Scalar> magnitude_finite(const FiniteMetricSpace<Scalar>& space,
                                   Scalar tol = Scalar(kPivotTolerance)) {
    const Matrix<Scalar> z = similarity_matrix(space);
    const CholeskyFactor<Scalar> chol(z, tol);
    if (!chol.ok()) {
        std::ostringstream msg;
        msg << "similarity matrix is not positive definite: pivot "
            << static_cast<double>(chol.report().min_pivot) << " at row " << chol.report().failed_index;
        throw NotPositiveDefinite(msg.str(), static_cast<double>(chol.report().min_pivot),
                                  static_cast<long>(chol.report().failed_index));
    }
    Weighting<Scalar> out;
    const Vector<Scalar> ones = Vector<Scalar>::Ones(space.size());
    out.w = chol.solve(ones);
    out.magnitude = out.w.sum();
    out.min_pivot = chol.report().min_pivot;
    out.pivot_ratio = chol.report().pivot_ratio();
    out.residual = (z * out.w - ones).template lpNorm<Eigen::Infinity>();
    out.condition_warning = chol.report().ill_conditioned();
    return out;
}

/// The space tX: every distance multiplied by t > 0.
template <typename Scalar>
FiniteMetricSpace<Scalar> scale_space(const FiniteMetricSpace<Scalar>& space, Scalar t) {
    if (!(t > Scalar(0))) throw ValidationError("scale factor must be positive");
    return FiniteMetricSpace<Scalar>(space.distances() * t);
}

/// Cartesian product with the l1-sum metric. Point (i, j) has index i * |B| + j.
template <typename Scalar>
FiniteMetricSpace<Scalar> l1_product(const FiniteMetricSpace<Scalar>& a, const FiniteMetricSpace<Scalar>& b) {
    const Eigen::Index na = a.size(), nb = b.size();
    Matrix<Scalar> d(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index j = 0; j < nb; ++j)
            for (Eigen::Index k = 0; k < na; ++k)
                for (Eigen::Index l = 0; l < nb; ++l)
                    d(i * nb + j, k * nb + l) = a(i, k) + b(j, l);
    return FiniteMetricSpace<Scalar>(std::move(d));
}

/// nA, i.e. the image of x -> (x, ..., x) in the n-fold l1 product A^n.
template <typename Scalar>
FiniteMetricSpace<Scalar> diagonal_embedding(const FiniteMetricSpace<Scalar>& a, int n) {
    if (n < 1) throw ValidationError("diagonal embedding needs n >= 1");
    return FiniteMetricSpace<Scalar>(a.distances() * Scalar(n));
}

template <typename Scalar = double>
struct ScaleReport {
    Scalar t;
    PdReport<Scalar> report;
};

/// Runs the PD test on tX for each t. One failure shows X is not of negative
/// type; passing every scale is only evidence that it is.
template <typename Scalar>
std::vector<ScaleReport<Scalar>> negative_type_probe(const FiniteMetricSpace<Scalar>& space,
                                                     std::span<const Scalar> scales,
                                                     Scalar tol = Scalar(kPivotTolerance)) {
    if (scales.empty()) throw ValidationError("negative type probe needs at least one scale");
    std::vector<ScaleReport<Scalar>> out;
    out.reserve(scales.size());
    for (Scalar t : scales) {
        const auto scaled = scale_space(space, t);
        out.push_back({t, is_positive_definite(similarity_matrix(scaled), tol)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Point clouds

enum class Metric { L1, L2 };

template <typename Derived1, typename Derived2>
typename Derived1::Scalar distance(const Eigen::MatrixBase<Derived1>& x, const Eigen::MatrixBase<Derived2>& y,
                                   Metric metric) {
    return metric == Metric::L1 ? (x - y).template lpNorm<1>() : (x - y).norm();
}

/// Points of R^N stored column-wise, with the metric used to measure them.
template <typename Scalar = double>
class PointCloud {
public:
    PointCloud(Matrix<Scalar> points, Metric metric) : points_(std::move(points)), metric_(metric) {
        for (Eigen::Index i = 0; i < points_.cols(); ++i) {
            if (!points_.col(i).allFinite()) throw ValidationError("point coordinates must be finite");
            for (Eigen::Index j = 0; j < i; ++j)
                if (distance(points_.col(i), points_.col(j), metric_) <= Scalar(kDuplicateTolerance))
                    throw DuplicatePoints("duplicate points " + std::to_string(j) + " and " + std::to_string(i));
        }
    }

    Eigen::Index dimension() const noexcept { return points_.rows(); }
    Eigen::Index size() const noexcept { return points_.cols(); }
    Metric metric() const noexcept { return metric_; }
    const Matrix<Scalar>& points() const noexcept { return points_; }

private:
    Matrix<Scalar> points_;
    Metric metric_;
};

template <typename Scalar>
FiniteMetricSpace<Scalar> subspace_from_cloud(const PointCloud<Scalar>& cloud, std::span<const Eigen::Index> indices) {
    const auto n = static_cast<Eigen::Index>(indices.size());
    for (Eigen::Index idx : indices)
        if (idx < 0 || idx >= cloud.size()) throw ValidationError("point index out of range");
    Matrix<Scalar> d = Matrix<Scalar>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            d(i, j) = d(j, i) = distance(cloud.points().col(indices[i]), cloud.points().col(indices[j]), cloud.metric());
    return FiniteMetricSpace<Scalar>(std::move(d));
}

/// The whole cloud as a metric space.
template <typename Scalar>
FiniteMetricSpace<Scalar> subspace_from_cloud(const PointCloud<Scalar>& cloud) {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(cloud.size()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Eigen::Index>(i);
    return subspace_from_cloud(cloud, std::span<const Eigen::Index>(all));
}

/// Magnitudes of a growing chain A_1 ⊆ A_2 ⊆ ..., maintained through a
/// row-by-row Cholesky factor. With y = L^{-1} 1 the magnitude is |y|^2, so
/// every accepted point adds a nonnegative term and the chain is exactly
/// nondecreasing in floating point.
template <typename Scalar = double>
class IncrementalMagnitude {
public:
    explicit IncrementalMagnitude(Scalar tol = Scalar(kPivotTolerance)) : tol_(tol) {}

    Eigen::Index size() const noexcept { return n_; }
    Scalar magnitude() const noexcept { return magnitude_; }
    Scalar min_pivot() const noexcept { return min_pivot_; }
    Scalar pivot_ratio() const noexcept { return n_ ? min_pivot_ / max_pivot_ : Scalar(0); }

    /// Tries to append a point given its distances to the current points, in
    /// insertion order. Returns false (and leaves the state untouched) when the
    /// pivot is at or below tolerance.
    template <typename Derived>
    bool try_add(const Eigen::MatrixBase<Derived>& distances_to_existing) {
        using std::sqrt;
        if (distances_to_existing.size() != n_) throw ValidationError("distance row has wrong length");
        Vector<Scalar> row = Vector<Scalar>::Zero(n_);
        for (Eigen::Index i = 0; i < n_; ++i) {
            const Scalar z = std::exp(-distances_to_existing(i));
            row(i) = (z - l_.row(i).head(i).dot(row.head(i))) / l_(i, i);
        }
        const Scalar pivot = Scalar(1) - row.squaredNorm();
        if (!(pivot > tol_)) return false;
        if (n_ == l_.rows()) {
            const Eigen::Index cap = std::max<Eigen::Index>(16, 2 * n_);
            Matrix<Scalar> grown = Matrix<Scalar>::Zero(cap, cap);
            grown.topLeftCorner(n_, n_) = l_.topLeftCorner(n_, n_);
            l_.swap(grown);
            y_.conservativeResize(cap);
        }
        const Scalar root = sqrt(pivot);
        l_.row(n_).head(n_) = row.transpose();
        l_(n_, n_) = root;
        const Scalar yn = (Scalar(1) - row.dot(y_.head(n_))) / root;
        y_(n_) = yn;
        magnitude_ += yn * yn;
        min_pivot_ = std::min(min_pivot_, pivot);
        max_pivot_ = std::max(max_pivot_, pivot);
        ++n_;
        return true;
    }

private:
    Scalar tol_;
    Matrix<Scalar> l_;
    Vector<Scalar> y_;
    Eigen::Index n_ = 0;
    Scalar magnitude_ = Scalar(0);
    Scalar min_pivot_ = std::numeric_limits<Scalar>::infinity();
    Scalar max_pivot_ = Scalar(0);
};

} // namespace maglab
