#pragma once

// Finite-sample lower bounds for the magnitude of convex bodies, and the two
// experiment drivers built on them: growth of |X_N| for coordinate simplices
// conv{0, a_1 e_1, ..., a_N e_N}, and the sandwich
//     1 <= |finite sample of tP| <= formula(tP) <= exp((m - 1) t diam P)
// as t shrinks to zero.

#include <maglab/l1_geometry.hpp>
#include <maglab/metric_core.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace maglab {

/// The sequence (a_i), i >= 1, defining a coordinate simplex family.
class SequenceSpec {
public:
    enum class Kind { Harmonic, Power, Geometric, Explicit };

    static SequenceSpec harmonic();
    /// a_i = i^{-p}, p > 0.
    static SequenceSpec power(double p);
    /// a_i = r^i, 0 < r < 1.
    static SequenceSpec geometric(double r);
    static SequenceSpec explicit_values(std::vector<double> values);
    /// "harmonic", "power:<p>", "geometric:<r>".
    static SequenceSpec parse(const std::string& text);

    Kind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return parameter_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// a_i for i >= 1.
    double term(long i) const;
    std::vector<double> terms(long n) const;
    /// Whether sum a_i = infinity. Explicit lists are finite, hence convergent.
    bool divergent() const noexcept;
    std::string name() const;

private:
    SequenceSpec(Kind kind, double parameter, std::vector<double> values);

    Kind kind_;
    double parameter_;
    std::vector<double> values_;
};

enum class SampleScheme { VertexGrid, FarthestPoint, RandomHull };
std::string to_string(SampleScheme scheme);
SampleScheme parse_scheme(const std::string& text);

/// Candidate pool: the vertices in order, then the barycentric lattice
/// {sum_j (k_j / R) v_j : sum_j k_j = R} at the smallest resolution R with at
/// least `target` distinct points (or the largest resolution under an
/// enumeration limit), duplicates removed.
Eigen::MatrixXd barycentric_pool(const Polytope& p, Eigen::Index target);

/// n points in the hull of p, as an l1 point cloud.
///   vertex_grid:    first n points of the barycentric pool.
///   farthest_point: greedy max-min l1 insertion from the first vertex over a
///                   pool of at least 4n points, ties to the lowest index.
///   random_hull:    Dirichlet(1) convex combinations of the vertices.
PointCloud<double> sample_polytope(const Polytope& p, SampleScheme scheme, Eigen::Index n, std::uint64_t seed);

struct LowerSequence {
    /// |A_1| <= |A_2| <= ... for the accepted prefix chain.
    std::vector<double> magnitudes;
    /// Sample indices dropped because their pivot fell below tolerance.
    std::vector<Eigen::Index> skipped;
    double min_pivot = 0.0;
    double pivot_ratio = 0.0;
};

/// Magnitudes of the nested chain of l1 sample prefixes.
LowerSequence magnitude_chain(const PointCloud<double>& cloud);
LowerSequence magnitude_lower_sequence(const Polytope& p, Eigen::Index budget,
                                       SampleScheme scheme = SampleScheme::FarthestPoint, std::uint64_t seed = 0);

struct SweepRow {
    double param = 0.0;
    long n_points = 0;
    double sample_magnitude = 0.0;
    double formula_value = 0.0;
    double upper_bound = 0.0;
    std::string flag = "ok";
    /// Analytic lower bound, where the experiment has one.
    std::optional<double> lower_bound;
};

struct Crossing {
    double threshold = 0.0;
    /// First N at which the analytic lower bound reaches the threshold.
    std::optional<long> first_n;
};

struct SweepTable {
    std::string experiment;
    std::vector<SweepRow> rows;
    std::vector<Crossing> crossings;
};

struct DivergenceOptions {
    /// Extra Dirichlet samples of X_N added to its vertex set.
    Eigen::Index interior_samples = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::vector<double> thresholds{2.0, 3.0, 5.0};
    /// Give up looking for a crossing beyond this N.
    long crossing_search_limit = 100'000'000;
};

/// Closed-form |X_N| = sum_k e_k(a) / (k! 2^k) = sum_k e_k(a/2) / k!.
double coordinate_simplex_magnitude(std::span<const double> a);

/// One row per N: half_sum = sum a_i / 2 (lower bound), the closed form for
/// |X_N|, the magnitude of the vertex set {0, a_i e_i} (plus optional interior
/// samples), and exp(sum a_i / 2) as upper bound.
SweepTable divergence_experiment(const SequenceSpec& spec, std::span<const long> n_list,
                                 const DivergenceOptions& opts = {});

/// First N with sum_{i<=N} a_i / 2 >= threshold, if found before `limit`.
std::optional<long> crossing_index(const SequenceSpec& spec, double threshold, long limit);

struct SweepOptions {
    Eigen::Index budget = 64;
    SampleScheme scheme = SampleScheme::FarthestPoint;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    IvolOptions ivol;
};

/// One row per t: finite-sample magnitude of tP, the convex formula for tP, and
/// exp((m - 1) t diam P). Rows follow the order of t_list.
SweepTable one_point_sweep(const Polytope& p, std::span<const double> t_list, const SweepOptions& opts = {});

} // namespace maglab
