#include <maglab/hull.hpp>

#include <maglab/errors.hpp>
#include <maglab/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace maglab {
namespace {

struct IndexSetHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::size_t h = v.size();
        for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

double factorial(Eigen::Index k) {
    double f = 1.0;
    for (Eigen::Index i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f;
}

} // namespace

ConvexHull::ConvexHull(const Eigen::MatrixXd& points, double rank_tolerance)
    : points_(points), ambient_(points.rows()), rank_tolerance_(rank_tolerance) {
    if (points_.cols() == 0) throw ValidationError("convex hull of an empty point set");
    if (!points_.allFinite()) throw ValidationError("point coordinates must be finite");
    center_ = points_.rowwise().mean();
    const Eigen::MatrixXd centered = points_.colwise() - center_;
    scale_ = centered.size() ? centered.cwiseAbs().maxCoeff() : 0.0;

    if (ambient_ > 0 && points_.cols() > 1 && scale_ > 0.0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU);
        const Eigen::VectorXd& s = svd.singularValues();
        const double cutoff = rank_tolerance_ * s(0);
        rank_ = (s.array() > cutoff).count();
        basis_ = svd.matrixU().leftCols(rank_);
    } else {
        basis_ = Eigen::MatrixXd::Zero(ambient_, 0);
    }
    local_ = basis_.transpose() * centered;
    triangulate();
}

double ConvexHull::volume() const noexcept { return rank_ == ambient_ ? affine_volume_ : 0.0; }

void ConvexHull::triangulate() {
    const Eigen::Index m = local_.cols();
    const Eigen::Index r = rank_;
    if (r == 0) {
        affine_volume_ = 1.0;
        simplex_count_ = 1;
        return;
    }
    if (r == 1) {
        Eigen::Index lo = 0, hi = 0;
        local_.row(0).minCoeff(&lo);
        local_.row(0).maxCoeff(&hi);
        affine_volume_ = local_(0, hi) - local_(0, lo);
        facets_.push_back({{static_cast<int>(lo)}, Eigen::VectorXd::Constant(1, -1.0), -local_(0, lo)});
        facets_.push_back({{static_cast<int>(hi)}, Eigen::VectorXd::Constant(1, 1.0), local_(0, hi)});
        simplex_count_ = 1;
        return;
    }

    // Greedy initial simplex: each new vertex is the point farthest from the
    // affine span of those already chosen.
    std::vector<int> chosen;
    {
        Eigen::Index first = 0;
        local_.colwise().squaredNorm().maxCoeff(&first);
        chosen.push_back(static_cast<int>(first));
        Eigen::MatrixXd q(r, 0);
        while (static_cast<Eigen::Index>(chosen.size()) < r + 1) {
            Eigen::MatrixXd diff = local_.colwise() - local_.col(chosen.front());
            if (q.cols() > 0) diff -= q * (q.transpose() * diff);
            Eigen::Index next = 0;
            diff.colwise().squaredNorm().maxCoeff(&next);
            Eigen::VectorXd dir = diff.col(next);
            dir.normalize();
            q.conservativeResize(Eigen::NoChange, q.cols() + 1);
            q.col(q.cols() - 1) = dir;
            chosen.push_back(static_cast<int>(next));
        }
    }
    Eigen::VectorXd interior = Eigen::VectorXd::Zero(r);
    for (int idx : chosen) interior += local_.col(idx);
    interior /= static_cast<double>(r + 1);

    const double eps = 1e-11 * scale_;
    const double inv_fact = 1.0 / factorial(r);

    auto make_facet = [&](std::vector<int> verts) {
        std::sort(verts.begin(), verts.end());
        Eigen::MatrixXd edges(r, r - 1);
        for (Eigen::Index i = 1; i < r; ++i) edges.col(i - 1) = local_.col(verts[i]) - local_.col(verts[0]);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(edges);
        Eigen::VectorXd normal = qr.householderQ() * Eigen::VectorXd::Unit(r, r - 1);
        double offset = normal.dot(local_.col(verts[0]));
        if (normal.dot(interior) - offset > 0.0) {
            normal = -normal;
            offset = -offset;
        }
        return Facet{std::move(verts), std::move(normal), offset};
    };
    auto simplex_volume = [&](const std::vector<int>& base, const Eigen::VectorXd& apex) {
        Eigen::MatrixXd edges(r, r);
        for (Eigen::Index i = 0; i < r; ++i) edges.col(i) = local_.col(base[i]) - apex;
        return std::abs(edges.partialPivLu().determinant()) * inv_fact;
    };

    std::vector<double> volumes;
    {
        std::vector<int> base(chosen.begin() + 1, chosen.end());
        volumes.push_back(simplex_volume(base, local_.col(chosen.front())));
    }
    for (std::size_t omit = 0; omit < chosen.size(); ++omit) {
        std::vector<int> verts;
        for (std::size_t i = 0; i < chosen.size(); ++i)
            if (i != omit) verts.push_back(chosen[i]);
        facets_.push_back(make_facet(std::move(verts)));
    }

    std::vector<char> placed(static_cast<std::size_t>(m), 0);
    for (int idx : chosen) placed[static_cast<std::size_t>(idx)] = 1;

    std::vector<char> visible;
    std::unordered_map<std::vector<int>, int, IndexSetHash> ridges;
    for (Eigen::Index idx = 0; idx < m; ++idx) {
        if (placed[static_cast<std::size_t>(idx)]) continue;
        const auto p = local_.col(idx);
        visible.assign(facets_.size(), 0);
        bool any = false;
        for (std::size_t f = 0; f < facets_.size(); ++f) {
            if (facets_[f].normal.dot(p) - facets_[f].offset > eps) {
                visible[f] = 1;
                any = true;
            }
        }
        if (!any) continue;

        ridges.clear();
        std::vector<Facet> kept;
        kept.reserve(facets_.size());
        for (std::size_t f = 0; f < facets_.size(); ++f) {
            if (!visible[f]) {
                kept.push_back(std::move(facets_[f]));
                continue;
            }
            const auto& verts = facets_[f].vertices;
            volumes.push_back(simplex_volume(verts, p));
            for (std::size_t omit = 0; omit < verts.size(); ++omit) {
                std::vector<int> ridge;
                ridge.reserve(verts.size() - 1);
                for (std::size_t i = 0; i < verts.size(); ++i)
                    if (i != omit) ridge.push_back(verts[i]);
                ++ridges[std::move(ridge)];
            }
        }
        // Horizon ridges appear in exactly one visible facet; iterate them in
        // a fixed order so the facet list is reproducible.
        std::vector<std::vector<int>> horizon;
        for (auto& [ridge, count] : ridges)
            if (count == 1) horizon.push_back(ridge);
        std::sort(horizon.begin(), horizon.end());
        for (auto& ridge : horizon) {
            ridge.push_back(static_cast<int>(idx));
            kept.push_back(make_facet(std::move(ridge)));
        }
        facets_ = std::move(kept);
        placed[static_cast<std::size_t>(idx)] = 2;
    }
    simplex_count_ = volumes.size();
    affine_volume_ = pairwise_sum(std::span<const double>(volumes));
}

bool ConvexHull::contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol) const {
    if (x.size() != ambient_) throw ValidationError("point has wrong dimension for hull");
    const double slack = tol * (scale_ > 0.0 ? scale_ : std::max(1.0, center_.size() ? center_.cwiseAbs().maxCoeff() : 1.0));
    const Eigen::VectorXd d = x - center_;
    const Eigen::VectorXd y = basis_.transpose() * d;
    if ((d - basis_ * y).norm() > slack) return false;
    for (const auto& facet : facets_)
        if (facet.normal.dot(y) - facet.offset > slack) return false;
    return true;
}

Eigen::Index ConvexHull::count_contained(const Eigen::MatrixXd& points, double tol) const {
    if (points.rows() != ambient_) throw ValidationError("points have wrong dimension for hull");
    const double slack = tol * (scale_ > 0.0 ? scale_ : std::max(1.0, center_.size() ? center_.cwiseAbs().maxCoeff() : 1.0));
    const Eigen::MatrixXd d = points.colwise() - center_;
    const Eigen::MatrixXd y = basis_.transpose() * d;
    Eigen::ArrayXd worst = (d - basis_ * y).colwise().norm().transpose().array();
    if (!facets_.empty()) {
        Eigen::MatrixXd normals(static_cast<Eigen::Index>(facets_.size()), rank_);
        Eigen::VectorXd offsets(static_cast<Eigen::Index>(facets_.size()));
        for (std::size_t f = 0; f < facets_.size(); ++f) {
            normals.row(static_cast<Eigen::Index>(f)) = facets_[f].normal.transpose();
            offsets(static_cast<Eigen::Index>(f)) = facets_[f].offset;
        }
        const Eigen::MatrixXd excess = (normals * y).colwise() - offsets;
        worst = worst.max(excess.colwise().maxCoeff().transpose().array());
    }
    return (worst <= slack).count();
}

std::vector<Eigen::Index> ConvexHull::extreme_points() const {
    const Eigen::Index m = points_.cols();
    if (m == 1) return {0};
    std::vector<Eigen::Index> out;
    Eigen::MatrixXd others(ambient_, m - 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0, c = 0; j < m; ++j)
            if (j != i) others.col(c++) = points_.col(j);
        const ConvexHull rest(others, rank_tolerance_);
        if (!rest.contains(points_.col(i), 1e-9)) out.push_back(i);
    }
    return out;
}

} // namespace maglab
