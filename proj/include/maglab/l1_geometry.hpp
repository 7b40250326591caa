#pragma once

// Convex polytopes in l1^N: coordinate projections, exact volumes, the l1
// intrinsic volumes V'_k, the convex-body magnitude formula
//     |A| <= sum_k V'_k(A) / 2^k   (equality for full-dimensional A)
// and the chain of inequalities that bound it by V'_1 and the diameter.

#include <maglab/hull.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace maglab {

/// Default largest N for which all 2^N coordinate subsets are enumerated.
inline constexpr int kDefaultEnumerationCap = 12;

/// A V-polytope: the convex hull of its vertex columns. Non-extreme points are
/// allowed in the list; extreme_indices() tells them apart.
class Polytope {
public:
    explicit Polytope(Eigen::MatrixXd vertices);

    Eigen::Index dimension() const noexcept { return vertices_.rows(); }
    Eigen::Index size() const noexcept { return vertices_.cols(); }
    const Eigen::MatrixXd& vertices() const noexcept { return vertices_; }

    /// Dimension of the affine hull.
    Eigen::Index affine_dimension() const;
    std::vector<Eigen::Index> extreme_indices() const;
    /// Number of hull vertices (the m used by the diameter bounds).
    Eigen::Index hull_vertex_count() const;
    /// Diameter in the l1 metric, attained at a pair of vertices.
    double l1_diameter() const;
    bool contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol = 1e-9) const;
    /// Builds the hull triangulation; reuse it for repeated membership tests.
    ConvexHull hull() const;

    Polytope scaled(double t) const;

    static Polytope box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);
    /// conv{0, a_1 e_1, ..., a_N e_N}.
    static Polytope coordinate_simplex(const Eigen::VectorXd& a);

private:
    Eigen::MatrixXd vertices_;
};

/// Image under the coordinate projection onto `coords` (strictly increasing,
/// zero-based). Vertices that collapse onto each other are merged.
Polytope project(const Polytope& p, std::span<const int> coords);

/// Lebesgue volume in R^N of the hull; zero when not full-dimensional, one when N = 0.
double volume(const Polytope& p);

enum class IvolMethod { Enumeration, FastPath, MonteCarlo };
std::string to_string(IvolMethod method);

struct IntrinsicVolumes {
    /// V'_0 .. V'_N.
    Eigen::VectorXd values;
    IvolMethod method = IvolMethod::Enumeration;
    /// Per-k standard errors; present only for Monte Carlo estimates.
    std::optional<Eigen::VectorXd> stderr_values;

    bool exact() const noexcept { return method != IvolMethod::MonteCarlo; }
    double operator[](Eigen::Index k) const { return values(k); }
    Eigen::Index size() const noexcept { return values.size(); }
};

struct IvolOptions {
    /// Prefer the closed forms when the polytope is recognised as a box or a
    /// coordinate simplex.
    bool allow_fast_path = true;
    /// Always enumerate (within the cap), even if a closed form applies.
    bool force_enumeration = false;
    int cap = kDefaultEnumerationCap;
    unsigned threads = 1;
    /// Above the cap, estimate each V'_k from random coordinate subsets
    /// instead of failing.
    bool monte_carlo = false;
    long monte_carlo_subsets = 2000;
    std::uint64_t seed = 0;
};

/// V'_k = sum over k-subsets S of Vol_k(project(p, S)).
/// Throws CapExceeded above opts.cap when no fast path applies and Monte Carlo is off.
IntrinsicVolumes intrinsic_volumes(const Polytope& p, const IvolOptions& opts = {});

/// Closed form for conv{0, a_i e_i}: V'_k = e_k(a) / k!.
IntrinsicVolumes coordinate_simplex_intrinsic_volumes(std::span<const double> a);
/// Closed form for a box with side lengths a: V'_k = e_k(a).
IntrinsicVolumes box_intrinsic_volumes(std::span<const double> sides);

/// Side lengths if p is an axis-parallel box listed by all its corners.
std::optional<Eigen::VectorXd> detect_box(const Polytope& p);
/// |a_i| if p is a translate of conv{0, a_i e_i} over distinct axes.
std::optional<Eigen::VectorXd> detect_coordinate_simplex(const Polytope& p);

struct ConvexMagnitudeResult {
    double value = 1.0;
    /// True iff the polytope has nonempty interior, where the formula is equality.
    bool exact = false;
    /// V'_i / 2^i.
    Eigen::VectorXd terms;
    IvolMethod method = IvolMethod::Enumeration;
};

ConvexMagnitudeResult convex_magnitude_l1(const Polytope& p, const IvolOptions& opts = {});
ConvexMagnitudeResult convex_magnitude_from(const IntrinsicVolumes& v, bool full_dimensional);

/// prod (1 + a_i / 2).
double box_magnitude(std::span<const double> sides);

/// ((j+k)! V'_{j+k}, j! V'_j * k! V'_k).
std::pair<double, double> v1_concavity_check(const IntrinsicVolumes& v, int j, int k);
std::pair<double, double> v1_concavity_check(const Polytope& p, int j, int k, const IvolOptions& opts = {});

/// (V'_k, V'_1^k / k!) for k = 0..N.
std::vector<std::pair<double, double>> mcmullen_bound_check(const IntrinsicVolumes& v);
std::vector<std::pair<double, double>> mcmullen_bound_check(const Polytope& p, const IvolOptions& opts = {});

/// V'_1 directly: the sum of the coordinate widths max_i - min_i.
double l1_width_sum(const Polytope& p);

/// exp(V'_1(A/2)) = exp(V'_1(A) / 2).
double exp_magnitude_bound(const IntrinsicVolumes& v);
double exp_magnitude_bound(const Polytope& p);

/// (V'_1, 2 (m - 1) diam), m the hull vertex count.
std::pair<double, double> polytope_v1_diam_bound(const Polytope& p);

/// exp((m - 1) diam).
double magnitude_diam_bound(const Polytope& p);

struct WillsResult {
    /// Vol_N(p + [0,1]^N).
    double dilated_volume = 0.0;
    /// Zero unless the volume was estimated.
    double dilated_stderr = 0.0;
    /// sum_k V'_k(p).
    double intrinsic_sum = 0.0;
    std::string method;
};

struct WillsOptions {
    long samples = 1'000'000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Both sides of Vol_N(p + [0,1]^N) = sum_k V'_k(p). The left side is exact for
/// boxes, computed from a hull triangulation of the Minkowski sum for
/// coordinate simplices with N <= 8, and estimated by Monte Carlo otherwise.
WillsResult wills_identity_check(const Polytope& p, const WillsOptions& opts = {});

} // namespace maglab
