#include <maglab/l1_geometry.hpp>

#include <maglab/errors.hpp>
#include <maglab/metric_core.hpp>
#include <maglab/parallel.hpp>
#include <maglab/random.hpp>
#include <maglab/symmetric_polynomials.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace maglab {
namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return std::round(b);
}

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> c(static_cast<std::size_t>(k));
    std::iota(c.begin(), c.end(), 0);
    if (k > n) return out;
    while (true) {
        out.push_back(c);
        int i = k - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++c[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

/// Uniform random k-subset (Floyd's algorithm), sorted.
std::vector<int> random_subset(Rng& rng, int n, int k) {
    std::vector<int> s;
    for (int j = n - k; j < n; ++j) {
        const int t = static_cast<int>(rng.integer(0, j));
        if (std::find(s.begin(), s.end(), t) == s.end())
            s.push_back(t);
        else
            s.push_back(j);
    }
    std::sort(s.begin(), s.end());
    return s;
}

Eigen::MatrixXd dedupe_columns(const Eigen::MatrixXd& pts) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
        bool dup = false;
        for (Eigen::Index j : keep)
            if ((pts.col(i) - pts.col(j)).lpNorm<1>() <= kDuplicateTolerance) {
                dup = true;
                break;
            }
        if (!dup) keep.push_back(i);
    }
    Eigen::MatrixXd out(pts.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = pts.col(keep[c]);
    return out;
}

IntrinsicVolumes simplex_from_sides(const Eigen::VectorXd& a) {
    IntrinsicVolumes out;
    out.values = elementary_symmetric_over_factorial(a.cwiseAbs());
    out.method = IvolMethod::FastPath;
    return out;
}

IntrinsicVolumes box_from_sides(const Eigen::VectorXd& a) {
    IntrinsicVolumes out;
    out.values = elementary_symmetric(a.cwiseAbs());
    out.method = IvolMethod::FastPath;
    return out;
}

double subset_volume(const Polytope& p, const std::vector<int>& subset) {
    return volume(project(p, subset));
}

IntrinsicVolumes enumerate(const Polytope& p, const IvolOptions& opts) {
    const int n = static_cast<int>(p.dimension());
    const Eigen::Index affine = p.affine_dimension();
    IntrinsicVolumes out;
    out.values = Eigen::VectorXd::Zero(n + 1);
    out.values(0) = 1.0;
    out.method = IvolMethod::Enumeration;
    for (int k = 1; k <= std::min<Eigen::Index>(n, affine); ++k) {
        const auto subsets = combinations(n, k);
        std::vector<double> vols(subsets.size());
        parallel_for(subsets.size(), opts.threads, [&](std::size_t i) { vols[i] = subset_volume(p, subsets[i]); });
        out.values(k) = pairwise_sum(std::span<const double>(vols));
    }
    return out;
}

IntrinsicVolumes sample_subsets(const Polytope& p, const IvolOptions& opts) {
    const int n = static_cast<int>(p.dimension());
    const Eigen::Index affine = p.affine_dimension();
    IntrinsicVolumes out;
    out.values = Eigen::VectorXd::Zero(n + 1);
    Eigen::VectorXd errors = Eigen::VectorXd::Zero(n + 1);
    out.values(0) = 1.0;
    out.method = IvolMethod::MonteCarlo;
    Rng rng(opts.seed);
    for (int k = 1; k <= std::min<Eigen::Index>(n, affine); ++k) {
        const double total = binomial(n, k);
        std::vector<std::vector<int>> subsets;
        const bool exhaustive = total <= static_cast<double>(opts.monte_carlo_subsets);
        if (exhaustive) {
            subsets = combinations(n, k);
        } else {
            subsets.reserve(static_cast<std::size_t>(opts.monte_carlo_subsets));
            for (long s = 0; s < opts.monte_carlo_subsets; ++s) subsets.push_back(random_subset(rng, n, k));
        }
        std::vector<double> vols(subsets.size());
        parallel_for(subsets.size(), opts.threads, [&](std::size_t i) { vols[i] = subset_volume(p, subsets[i]); });
        const double sum = pairwise_sum(std::span<const double>(vols));
        if (exhaustive) {
            out.values(k) = sum;
            continue;
        }
        const double count = static_cast<double>(vols.size());
        const double mean = sum / count;
        double ss = 0.0;
        for (double v : vols) ss += (v - mean) * (v - mean);
        const double sd = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
        out.values(k) = total * mean;
        errors(k) = total * sd / std::sqrt(count);
    }
    out.stderr_values = errors;
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Polytope

Polytope::Polytope(Eigen::MatrixXd vertices) : vertices_(std::move(vertices)) {
    if (vertices_.cols() < 1) throw ValidationError("polytope needs at least one vertex");
    if (!vertices_.allFinite()) throw ValidationError("vertex coordinates must be finite");
    for (Eigen::Index i = 0; i < vertices_.cols(); ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            if ((vertices_.col(i) - vertices_.col(j)).lpNorm<1>() <= kDuplicateTolerance)
                throw ValidationError("duplicate vertices " + std::to_string(j) + " and " + std::to_string(i));
}

ConvexHull Polytope::hull() const { return ConvexHull(vertices_); }

Eigen::Index Polytope::affine_dimension() const { return hull().dimension(); }

std::vector<Eigen::Index> Polytope::extreme_indices() const { return hull().extreme_points(); }

Eigen::Index Polytope::hull_vertex_count() const { return static_cast<Eigen::Index>(extreme_indices().size()); }

double Polytope::l1_diameter() const {
    double diam = 0.0;
    for (Eigen::Index i = 0; i < vertices_.cols(); ++i)
        for (Eigen::Index j = i + 1; j < vertices_.cols(); ++j)
            diam = std::max(diam, (vertices_.col(i) - vertices_.col(j)).lpNorm<1>());
    return diam;
}

bool Polytope::contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol) const { return hull().contains(x, tol); }

Polytope Polytope::scaled(double t) const {
    if (!(t > 0.0)) throw ValidationError("scale factor must be positive");
    return Polytope(vertices_ * t);
}

Polytope Polytope::box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    if (lower.size() != upper.size()) throw ValidationError("box bounds differ in dimension");
    if ((upper - lower).minCoeff() < 0.0) throw ValidationError("box upper bound below lower bound");
    std::vector<Eigen::Index> free_axes;
    for (Eigen::Index i = 0; i < lower.size(); ++i)
        if (upper(i) > lower(i)) free_axes.push_back(i);
    if (free_axes.size() > 24) throw CapExceeded("box has too many corners to list");
    const Eigen::Index corners = Eigen::Index(1) << free_axes.size();
    Eigen::MatrixXd v(lower.size(), corners);
    for (Eigen::Index c = 0; c < corners; ++c) {
        v.col(c) = lower;
        for (std::size_t b = 0; b < free_axes.size(); ++b)
            if ((c >> b) & 1) v(free_axes[b], c) = upper(free_axes[b]);
    }
    return Polytope(std::move(v));
}

Polytope Polytope::coordinate_simplex(const Eigen::VectorXd& a) {
    const Eigen::Index n = a.size();
    std::vector<Eigen::Index> axes;
    for (Eigen::Index i = 0; i < n; ++i)
        if (a(i) != 0.0) axes.push_back(i);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(axes.size()) + 1);
    for (std::size_t c = 0; c < axes.size(); ++c) v(axes[c], static_cast<Eigen::Index>(c) + 1) = a(axes[c]);
    return Polytope(std::move(v));
}

// ---------------------------------------------------------------------------
// Projection and volume

Polytope project(const Polytope& p, std::span<const int> coords) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] < 0 || coords[i] >= p.dimension())
            throw ValidationError("projection coordinate " + std::to_string(coords[i]) + " out of range");
        if (i > 0 && coords[i] <= coords[i - 1])
            throw ValidationError("projection coordinates must be strictly increasing");
    }
    Eigen::MatrixXd img(static_cast<Eigen::Index>(coords.size()), p.size());
    for (std::size_t i = 0; i < coords.size(); ++i) img.row(static_cast<Eigen::Index>(i)) = p.vertices().row(coords[i]);
    return Polytope(dedupe_columns(img));
}

double volume(const Polytope& p) { return p.hull().volume(); }

std::string to_string(IvolMethod method) {
    switch (method) {
    case IvolMethod::Enumeration: return "enumeration";
    case IvolMethod::FastPath: return "fast_path";
    case IvolMethod::MonteCarlo: return "monte_carlo";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Intrinsic volumes

std::optional<Eigen::VectorXd> detect_box(const Polytope& p) {
    const Eigen::MatrixXd& v = p.vertices();
    if (p.dimension() == 0) return Eigen::VectorXd(0);
    const Eigen::VectorXd lo = v.rowwise().minCoeff();
    const Eigen::VectorXd hi = v.rowwise().maxCoeff();
    const double tol = kDuplicateTolerance * std::max(1.0, v.cwiseAbs().maxCoeff());
    Eigen::Index free_axes = 0;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        if (hi(i) - lo(i) > tol) ++free_axes;
        for (Eigen::Index j = 0; j < v.cols(); ++j)
            if (std::abs(v(i, j) - lo(i)) > tol && std::abs(v(i, j) - hi(i)) > tol) return std::nullopt;
    }
    if (free_axes > 40 || v.cols() != (Eigen::Index(1) << free_axes)) return std::nullopt;
    // m distinct points drawn from the 2^d corners, with m = 2^d: all of them.
    return Eigen::VectorXd(hi - lo);
}

std::optional<Eigen::VectorXd> detect_coordinate_simplex(const Polytope& p) {
    const Eigen::MatrixXd& v = p.vertices();
    const Eigen::Index n = p.dimension(), m = p.size();
    if (m > n + 1) return std::nullopt;
    const double tol = kDuplicateTolerance * std::max(1.0, v.cwiseAbs().maxCoeff());
    for (Eigen::Index apex = 0; apex < m; ++apex) {
        Eigen::VectorXd sides = Eigen::VectorXd::Zero(n);
        bool ok = true;
        for (Eigen::Index j = 0; j < m && ok; ++j) {
            if (j == apex) continue;
            const Eigen::VectorXd diff = v.col(j) - v.col(apex);
            Eigen::Index axis = -1;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (std::abs(diff(i)) <= tol) continue;
                if (axis >= 0) {
                    ok = false;
                    break;
                }
                axis = i;
            }
            if (!ok || axis < 0 || sides(axis) != 0.0) {
                ok = false;
                break;
            }
            sides(axis) = std::abs(diff(axis));
        }
        if (ok) return sides;
    }
    return std::nullopt;
}

IntrinsicVolumes coordinate_simplex_intrinsic_volumes(std::span<const double> a) {
    const Eigen::Map<const Eigen::VectorXd> sides(a.data(), static_cast<Eigen::Index>(a.size()));
    if (a.size() > 0 && !(sides.minCoeff() > 0.0)) throw ValidationError("coordinate simplex sides must be positive");
    return simplex_from_sides(sides);
}

IntrinsicVolumes box_intrinsic_volumes(std::span<const double> sides) {
    const Eigen::Map<const Eigen::VectorXd> a(sides.data(), static_cast<Eigen::Index>(sides.size()));
    if (sides.size() > 0 && a.minCoeff() < 0.0) throw ValidationError("box sides must be nonnegative");
    return box_from_sides(a);
}

IntrinsicVolumes intrinsic_volumes(const Polytope& p, const IvolOptions& opts) {
    const Eigen::Index n = p.dimension();
    if (opts.allow_fast_path && !opts.force_enumeration) {
        if (auto sides = detect_box(p)) return box_from_sides(*sides);
        if (auto sides = detect_coordinate_simplex(p)) return simplex_from_sides(*sides);
    }
    if (n <= opts.cap) return enumerate(p, opts);
    if (opts.monte_carlo && !opts.force_enumeration) return sample_subsets(p, opts);
    throw CapExceeded("dimension " + std::to_string(n) + " exceeds the enumeration cap " + std::to_string(opts.cap) +
                      "; use a box or coordinate simplex (closed forms) or enable Monte Carlo subset sampling");
}

// ---------------------------------------------------------------------------
// Magnitude formula and inequalities

ConvexMagnitudeResult convex_magnitude_from(const IntrinsicVolumes& v, bool full_dimensional) {
    ConvexMagnitudeResult out;
    out.terms.resize(v.size());
    double weight = 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i, weight *= 0.5) out.terms(i) = v[i] * weight;
    out.value = pairwise_sum(std::span<const double>(out.terms.data(), static_cast<std::size_t>(out.terms.size())));
    out.exact = full_dimensional;
    out.method = v.method;
    return out;
}

ConvexMagnitudeResult convex_magnitude_l1(const Polytope& p, const IvolOptions& opts) {
    const IntrinsicVolumes v = intrinsic_volumes(p, opts);
    // V'_N is the N-volume itself, so it is positive exactly when the interior is nonempty.
    return convex_magnitude_from(v, v[v.size() - 1] > 0.0);
}

double box_magnitude(std::span<const double> sides) {
    double prod = 1.0;
    for (double a : sides) {
        if (a < 0.0) throw ValidationError("box sides must be nonnegative");
        prod *= 1.0 + a / 2.0;
    }
    return prod;
}

std::pair<double, double> v1_concavity_check(const IntrinsicVolumes& v, int j, int k) {
    const Eigen::Index n = v.size() - 1;
    if (j < 0 || k < 0 || j + k > n) throw ValidationError("concavity check needs j, k >= 0 and j + k <= N");
    return {factorial(j + k) * v[j + k], factorial(j) * v[j] * factorial(k) * v[k]};
}

std::pair<double, double> v1_concavity_check(const Polytope& p, int j, int k, const IvolOptions& opts) {
    return v1_concavity_check(intrinsic_volumes(p, opts), j, k);
}

std::vector<std::pair<double, double>> mcmullen_bound_check(const IntrinsicVolumes& v) {
    std::vector<std::pair<double, double>> out;
    const double v1 = v.size() > 1 ? v[1] : 0.0;
    double bound = 1.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (k > 0) bound *= v1 / static_cast<double>(k);
        out.emplace_back(v[k], bound);
    }
    return out;
}

std::vector<std::pair<double, double>> mcmullen_bound_check(const Polytope& p, const IvolOptions& opts) {
    return mcmullen_bound_check(intrinsic_volumes(p, opts));
}

double l1_width_sum(const Polytope& p) {
    if (p.dimension() == 0) return 0.0;
    return (p.vertices().rowwise().maxCoeff() - p.vertices().rowwise().minCoeff()).sum();
}

double exp_magnitude_bound(const IntrinsicVolumes& v) { return std::exp(v.size() > 1 ? v[1] / 2.0 : 0.0); }

double exp_magnitude_bound(const Polytope& p) { return std::exp(l1_width_sum(p) / 2.0); }

std::pair<double, double> polytope_v1_diam_bound(const Polytope& p) {
    const auto m = static_cast<double>(p.hull_vertex_count());
    return {l1_width_sum(p), 2.0 * (m - 1.0) * p.l1_diameter()};
}

double magnitude_diam_bound(const Polytope& p) {
    const auto m = static_cast<double>(p.hull_vertex_count());
    return std::exp((m - 1.0) * p.l1_diameter());
}

// ---------------------------------------------------------------------------
// Wills functional

WillsResult wills_identity_check(const Polytope& p, const WillsOptions& opts) {
    const Eigen::Index n = p.dimension();
    WillsResult out;
    IvolOptions iv;
    iv.threads = opts.threads;
    const IntrinsicVolumes v = intrinsic_volumes(p, iv);
    out.intrinsic_sum = pairwise_sum(std::span<const double>(v.values.data(), static_cast<std::size_t>(v.size())));

    if (auto sides = detect_box(p)) {
        out.dilated_volume = (sides->array() + 1.0).prod();
        out.method = "exact_box";
        return out;
    }

    // p + [0,1]^N is the hull of all vertex + corner sums.
    if (n > 20) throw CapExceeded("Minkowski sum with the unit cube is too large to list");
    const Eigen::Index corners = Eigen::Index(1) << n;
    Eigen::MatrixXd sums(n, p.size() * corners);
    for (Eigen::Index j = 0; j < p.size(); ++j)
        for (Eigen::Index c = 0; c < corners; ++c) {
            Eigen::VectorXd pt = p.vertices().col(j);
            for (Eigen::Index b = 0; b < n; ++b)
                if ((c >> b) & 1) pt(b) += 1.0;
            sums.col(j * corners + c) = pt;
        }
    const ConvexHull dilated(sums);

    if (detect_coordinate_simplex(p) && n <= 8) {
        out.dilated_volume = dilated.volume();
        out.method = "exact_hull";
        return out;
    }

    // Monte Carlo over the bounding box, in fixed blocks with per-block seeds
    // so the estimate does not depend on the thread count.
    const Eigen::VectorXd lo = sums.rowwise().minCoeff();
    const Eigen::VectorXd hi = sums.rowwise().maxCoeff();
    const double box_volume = (hi - lo).prod();
    constexpr std::size_t kBlocks = 64;
    const long per_block = (opts.samples + static_cast<long>(kBlocks) - 1) / static_cast<long>(kBlocks);
    std::vector<Eigen::Index> hits(kBlocks, 0);
    parallel_for(kBlocks, opts.threads, [&](std::size_t b) {
        Rng rng(opts.seed * 0x9E3779B97F4A7C15ULL + b + 1);
        Eigen::MatrixXd pts(n, per_block);
        for (long s = 0; s < per_block; ++s)
            for (Eigen::Index i = 0; i < n; ++i) pts(i, s) = rng.uniform(lo(i), hi(i));
        hits[b] = dilated.count_contained(pts, 1e-12);
    });
    const double total = static_cast<double>(per_block) * kBlocks;
    const double frac = static_cast<double>(std::accumulate(hits.begin(), hits.end(), Eigen::Index(0))) / total;
    out.dilated_volume = box_volume * frac;
    out.dilated_stderr = box_volume * std::sqrt(frac * (1.0 - frac) / total);
    out.method = "monte_carlo";
    return out;
}

} // namespace maglab
