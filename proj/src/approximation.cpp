#include <maglab/approximation.hpp>

#include <maglab/errors.hpp>
#include <maglab/parallel.hpp>
#include <maglab/random.hpp>
#include <maglab/symmetric_polynomials.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace maglab {
namespace {

constexpr double kCompositionLimit = 200'000;

double compositions_count(Eigen::Index resolution, Eigen::Index parts) {
    // C(R + m - 1, m - 1)
    double c = 1.0;
    for (Eigen::Index i = 1; i < parts; ++i) c = c * static_cast<double>(resolution + i) / static_cast<double>(i);
    return c;
}

/// Calls visit(k) for every k in N^m with sum R, in lexicographic order of k.
void for_each_composition(Eigen::Index resolution, Eigen::Index parts,
                          const std::function<void(const std::vector<Eigen::Index>&)>& visit) {
    std::vector<Eigen::Index> k(static_cast<std::size_t>(parts), 0);
    std::function<void(Eigen::Index, Eigen::Index)> rec = [&](Eigen::Index pos, Eigen::Index left) {
        if (pos == parts - 1) {
            k[static_cast<std::size_t>(pos)] = left;
            visit(k);
            return;
        }
        for (Eigen::Index v = 0; v <= left; ++v) {
            k[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, resolution);
}

double half_sum(std::span<const double> a) {
    return pairwise_sum(a) / 2.0;
}

std::string flag_for(const LowerSequence& seq, bool exact_formula) {
    if (!seq.skipped.empty()) return "skipped:" + std::to_string(seq.skipped.size());
    if (seq.pivot_ratio < kConditionRatio) return "ill_conditioned";
    if (!exact_formula) return "bound";
    return "ok";
}

} // namespace

// ---------------------------------------------------------------------------
// SequenceSpec

SequenceSpec::SequenceSpec(Kind kind, double parameter, std::vector<double> values)
    : kind_(kind), parameter_(parameter), values_(std::move(values)) {}

SequenceSpec SequenceSpec::harmonic() { return {Kind::Harmonic, 1.0, {}}; }

SequenceSpec SequenceSpec::power(double p) {
    if (!(p > 0.0)) throw ValidationError("power sequence needs p > 0 so that a_i -> 0");
    return {Kind::Power, p, {}};
}

SequenceSpec SequenceSpec::geometric(double r) {
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("geometric sequence needs 0 < r < 1");
    return {Kind::Geometric, r, {}};
}

SequenceSpec SequenceSpec::explicit_values(std::vector<double> values) {
    if (values.empty()) throw ValidationError("explicit sequence is empty");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("sequence terms must be positive and finite");
    return {Kind::Explicit, 0.0, std::move(values)};
}

SequenceSpec SequenceSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    auto param = [&]() {
        if (colon == std::string::npos) throw ValidationError("sequence '" + head + "' needs a parameter");
        try {
            std::size_t used = 0;
            const double v = std::stod(text.substr(colon + 1), &used);
            if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::logic_error&) {
            throw ValidationError("bad sequence parameter in '" + text + "'");
        }
    };
    if (head == "harmonic" && colon == std::string::npos) return harmonic();
    if (head == "power") return power(param());
    if (head == "geometric") return geometric(param());
    throw ValidationError("unknown sequence '" + text + "' (expected harmonic, power:p or geometric:r)");
}

double SequenceSpec::term(long i) const {
    if (i < 1) throw ValidationError("sequence index starts at 1");
    switch (kind_) {
    case Kind::Harmonic: return 1.0 / static_cast<double>(i);
    case Kind::Power: return std::pow(static_cast<double>(i), -parameter_);
    case Kind::Geometric: return std::pow(parameter_, static_cast<double>(i));
    case Kind::Explicit:
        if (static_cast<std::size_t>(i) > values_.size())
            throw ValidationError("explicit sequence has only " + std::to_string(values_.size()) + " terms");
        return values_[static_cast<std::size_t>(i - 1)];
    }
    return 0.0;
}

std::vector<double> SequenceSpec::terms(long n) const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(0L, n)));
    for (long i = 1; i <= n; ++i) out.push_back(term(i));
    return out;
}

bool SequenceSpec::divergent() const noexcept {
    switch (kind_) {
    case Kind::Harmonic: return true;
    case Kind::Power: return parameter_ <= 1.0;
    default: return false;
    }
}

std::string SequenceSpec::name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case Kind::Harmonic: os << "harmonic"; break;
    case Kind::Power: os << "power:" << parameter_; break;
    case Kind::Geometric: os << "geometric:" << parameter_; break;
    case Kind::Explicit: os << "explicit[" << values_.size() << "]"; break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Sampling

std::string to_string(SampleScheme scheme) {
    switch (scheme) {
    case SampleScheme::VertexGrid: return "vertex_grid";
    case SampleScheme::FarthestPoint: return "farthest_point";
    case SampleScheme::RandomHull: return "random_hull";
    }
    return "unknown";
}

SampleScheme parse_scheme(const std::string& text) {
    if (text == "vertex_grid") return SampleScheme::VertexGrid;
    if (text == "farthest_point") return SampleScheme::FarthestPoint;
    if (text == "random_hull") return SampleScheme::RandomHull;
    throw ValidationError("unknown sampling scheme '" + text + "'");
}

Eigen::MatrixXd barycentric_pool(const Polytope& p, Eigen::Index target) {
    const Eigen::MatrixXd& v = p.vertices();
    const Eigen::Index m = v.cols(), dim = v.rows();
    const double extent = dim ? (v.rowwise().maxCoeff() - v.rowwise().minCoeff()).maxCoeff() : 0.0;
    if (m == 1 || extent == 0.0) return v;
    const double quantum = 1e-9 * extent;

    auto build = [&](Eigen::Index resolution) {
        std::map<std::vector<long long>, Eigen::Index> seen;
        std::vector<Eigen::VectorXd> pts;
        // Lattice points are snapped to a grid of spacing `quantum` so that
        // rounding noise cannot produce near-duplicates.
        auto add = [&](Eigen::VectorXd x, bool snap) {
            std::vector<long long> key(static_cast<std::size_t>(dim));
            for (Eigen::Index i = 0; i < dim; ++i) {
                key[static_cast<std::size_t>(i)] = std::llround(x(i) / quantum);
                if (snap) x(i) = static_cast<double>(key[static_cast<std::size_t>(i)]) * quantum;
            }
            if (seen.emplace(std::move(key), static_cast<Eigen::Index>(pts.size())).second) pts.push_back(std::move(x));
        };
        for (Eigen::Index j = 0; j < m; ++j) add(v.col(j), false);
        const double inv = 1.0 / static_cast<double>(resolution);
        for_each_composition(resolution, m, [&](const std::vector<Eigen::Index>& k) {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
            for (Eigen::Index j = 0; j < m; ++j)
                if (k[static_cast<std::size_t>(j)]) x += (static_cast<double>(k[static_cast<std::size_t>(j)]) * inv) * v.col(j);
            add(std::move(x), true);
        });
        Eigen::MatrixXd out(dim, static_cast<Eigen::Index>(pts.size()));
        for (std::size_t i = 0; i < pts.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = pts[i];
        return out;
    };

    Eigen::Index resolution = 1;
    Eigen::MatrixXd pool = build(resolution);
    while (pool.cols() < target && compositions_count(resolution + 1, m) <= kCompositionLimit) {
        ++resolution;
        pool = build(resolution);
    }
    return pool;
}

PointCloud<double> sample_polytope(const Polytope& p, SampleScheme scheme, Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("sample size must be at least 1");
    const Eigen::MatrixXd& v = p.vertices();
    switch (scheme) {
    case SampleScheme::VertexGrid: {
        const Eigen::MatrixXd pool = barycentric_pool(p, n);
        return PointCloud<double>(pool.leftCols(std::min(n, pool.cols())), Metric::L1);
    }
    case SampleScheme::FarthestPoint: {
        const Eigen::MatrixXd pool = barycentric_pool(p, 4 * n);
        const Eigen::Index size = pool.cols();
        Eigen::VectorXd nearest = Eigen::VectorXd::Constant(size, std::numeric_limits<double>::infinity());
        std::vector<Eigen::Index> picked;
        Eigen::Index next = 0;
        while (static_cast<Eigen::Index>(picked.size()) < std::min(n, size)) {
            picked.push_back(next);
            for (Eigen::Index i = 0; i < size; ++i)
                nearest(i) = std::min(nearest(i), (pool.col(i) - pool.col(next)).lpNorm<1>());
            double best = 0.0;
            Eigen::Index arg = -1;
            for (Eigen::Index i = 0; i < size; ++i)
                if (nearest(i) > best) {
                    best = nearest(i);
                    arg = i;
                }
            if (arg < 0) break;
            next = arg;
        }
        Eigen::MatrixXd out(v.rows(), static_cast<Eigen::Index>(picked.size()));
        for (std::size_t i = 0; i < picked.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = pool.col(picked[i]);
        return PointCloud<double>(std::move(out), Metric::L1);
    }
    case SampleScheme::RandomHull: {
        Rng rng(seed);
        Eigen::MatrixXd out(v.rows(), n);
        Eigen::VectorXd w(v.cols());
        for (Eigen::Index s = 0; s < n; ++s) {
            for (Eigen::Index j = 0; j < v.cols(); ++j) w(j) = rng.exponential();
            w /= w.sum();
            out.col(s) = v * w;
        }
        return PointCloud<double>(std::move(out), Metric::L1);
    }
    }
    throw ValidationError("unknown sampling scheme");
}

LowerSequence magnitude_chain(const PointCloud<double>& cloud) {
    LowerSequence out;
    IncrementalMagnitude<double> chain;
    std::vector<Eigen::Index> accepted;
    const auto& pts = cloud.points();
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
        Eigen::VectorXd row(static_cast<Eigen::Index>(accepted.size()));
        for (std::size_t j = 0; j < accepted.size(); ++j)
            row(static_cast<Eigen::Index>(j)) = distance(pts.col(i), pts.col(accepted[j]), cloud.metric());
        if (chain.try_add(row)) {
            accepted.push_back(i);
            out.magnitudes.push_back(chain.magnitude());
        } else {
            out.skipped.push_back(i);
        }
    }
    out.min_pivot = chain.min_pivot();
    out.pivot_ratio = chain.pivot_ratio();
    return out;
}

LowerSequence magnitude_lower_sequence(const Polytope& p, Eigen::Index budget, SampleScheme scheme,
                                       std::uint64_t seed) {
    if (budget < 1) throw ValidationError("sample budget must be at least 1");
    return magnitude_chain(sample_polytope(p, scheme, budget, seed));
}

// ---------------------------------------------------------------------------
// Divergence of |X_N|

double coordinate_simplex_magnitude(std::span<const double> a) {
    Eigen::VectorXd half = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size())) / 2.0;
    const Eigen::VectorXd f = elementary_symmetric_over_factorial(half);
    return pairwise_sum(std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
}

std::optional<long> crossing_index(const SequenceSpec& spec, double threshold, long limit) {
    long double sum = 0.0L;
    const long double target = 2.0L * threshold;
    for (long i = 1; i <= limit; ++i) {
        if (spec.kind() == SequenceSpec::Kind::Explicit && static_cast<std::size_t>(i) > spec.values().size())
            return std::nullopt;
        sum += spec.term(i);
        if (sum >= target) return i;
        // Stop early once the remaining tail cannot close the gap.
        long double tail = -1.0L;
        if (spec.kind() == SequenceSpec::Kind::Geometric) {
            const long double r = spec.parameter();
            tail = std::pow(r, static_cast<long double>(i + 1)) / (1.0L - r);
        } else if (spec.kind() == SequenceSpec::Kind::Power && spec.parameter() > 1.0) {
            const long double p = spec.parameter();
            tail = std::pow(static_cast<long double>(i), 1.0L - p) / (p - 1.0L);
        }
        if (tail >= 0.0L && sum + tail < target) return std::nullopt;
    }
    return std::nullopt;
}

SweepTable divergence_experiment(const SequenceSpec& spec, std::span<const long> n_list, const DivergenceOptions& opts) {
    SweepTable table;
    table.experiment = "diverge:" + spec.name();
    table.rows.resize(n_list.size());
    parallel_for(n_list.size(), opts.threads, [&](std::size_t r) {
        const long n = n_list[r];
        if (n < 1) throw ValidationError("N must be at least 1");
        const std::vector<double> a = spec.terms(n);
        SweepRow row;
        row.param = static_cast<double>(n);
        row.lower_bound = half_sum(a);
        row.formula_value = coordinate_simplex_magnitude(a);
        row.upper_bound = std::exp(*row.lower_bound);

        // Vertex set {0, a_1 e_1, ..., a_N e_N}: d(0, a_i e_i) = a_i and
        // d(a_i e_i, a_j e_j) = a_i + a_j.
        IncrementalMagnitude<double> chain;
        std::vector<Eigen::Index> skipped;
        std::vector<double> accepted;  // a_i of accepted vertices, 0 for the origin
        auto add_vertex = [&](double ai, Eigen::Index label) {
            Eigen::VectorXd d(static_cast<Eigen::Index>(accepted.size()));
            for (std::size_t j = 0; j < accepted.size(); ++j)
                d(static_cast<Eigen::Index>(j)) = ai + accepted[j];
            if (chain.try_add(d))
                accepted.push_back(ai);
            else
                skipped.push_back(label);
        };
        add_vertex(0.0, 0);
        for (long i = 0; i < n; ++i) add_vertex(a[static_cast<std::size_t>(i)], i + 1);

        LowerSequence seq;
        if (opts.interior_samples > 0) {
            // Coordinates are needed once interior points join.
            Eigen::VectorXd av = Eigen::Map<const Eigen::VectorXd>(a.data(), n);
            const Polytope simplex = Polytope::coordinate_simplex(av);
            const PointCloud<double> extra = sample_polytope(simplex, SampleScheme::RandomHull, opts.interior_samples,
                                                             opts.seed + static_cast<std::uint64_t>(n));
            Eigen::MatrixXd all(n, simplex.size() + extra.size());
            all << simplex.vertices(), extra.points();
            seq = magnitude_chain(PointCloud<double>(std::move(all), Metric::L1));
        } else {
            seq.magnitudes = {chain.magnitude()};
            seq.skipped = skipped;
            seq.min_pivot = chain.min_pivot();
            seq.pivot_ratio = chain.pivot_ratio();
        }
        row.sample_magnitude = seq.magnitudes.back();
        row.n_points = static_cast<long>(n + 1 + opts.interior_samples - static_cast<long>(seq.skipped.size()));
        row.flag = flag_for(seq, true);
        table.rows[r] = row;
    });
    for (double threshold : opts.thresholds)
        table.crossings.push_back({threshold, crossing_index(spec, threshold, opts.crossing_search_limit)});
    return table;
}

// ---------------------------------------------------------------------------
// One-point sweep

SweepTable one_point_sweep(const Polytope& p, std::span<const double> t_list, const SweepOptions& opts) {
    for (double t : t_list)
        if (!(t > 0.0)) throw ValidationError("sweep scales must be positive");
    SweepTable table;
    table.experiment = "sweep";
    table.rows.resize(t_list.size());
    const double m = static_cast<double>(p.hull_vertex_count());
    const double diam = p.l1_diameter();
    IvolOptions ivol = opts.ivol;
    ivol.threads = 1;
    parallel_for(t_list.size(), opts.threads, [&](std::size_t r) {
        const double t = t_list[r];
        const Polytope tp = p.scaled(t);
        const LowerSequence seq = magnitude_lower_sequence(tp, opts.budget, opts.scheme, opts.seed);
        const ConvexMagnitudeResult formula = convex_magnitude_l1(tp, ivol);
        SweepRow row;
        row.param = t;
        row.n_points = static_cast<long>(seq.magnitudes.size());
        row.sample_magnitude = seq.magnitudes.back();
        row.formula_value = formula.value;
        row.upper_bound = std::exp((m - 1.0) * t * diam);
        row.flag = flag_for(seq, formula.exact);
        table.rows[r] = row;
    });
    return table;
}

} // namespace maglab
