#pragma once

// File formats:
//   distance matrix   CSV (n rows of n comma-separated floats) or JSON {"n": n, "d": [[...]]}
//   point cloud       JSON {"metric": "l1"|"l2", "points": [[...]]}
//   polytope          JSON {"vertices": [[...]]}
// Results are written as JSON objects; sweep tables also as CSV with the header
//   param,n_points,sample_magnitude,formula_value,upper_bound,flag

#include <maglab/approximation.hpp>
#include <maglab/checks.hpp>
#include <maglab/l1_geometry.hpp>
#include <maglab/metric_core.hpp>

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace maglab::io {

using nlohmann::json;

/// %.17g, enough digits for any double to read back unchanged.
std::string format_double(double x);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

FiniteMetricSpace<double> parse_distance_csv(const std::string& text, MetricValidation validation = {true, 1e-12});
FiniteMetricSpace<double> parse_distance_json(const json& doc, MetricValidation validation = {true, 1e-12});
PointCloud<double> parse_point_cloud(const json& doc, std::optional<Metric> metric_override = std::nullopt);
Polytope parse_polytope(const json& doc);
json parse_json(const std::string& text);

Metric parse_metric(const std::string& text);
std::string to_string(Metric metric);

/// Reads whichever of the two metric-space inputs the file holds.
std::variant<FiniteMetricSpace<double>, PointCloud<double>> read_metric_input(
    const std::filesystem::path& path, std::optional<Metric> metric_override = std::nullopt);
Polytope read_polytope(const std::filesystem::path& path);

json to_json(const Weighting<double>& w);
json to_json(const IntrinsicVolumes& v);
json to_json(const ConvexMagnitudeResult& r);
json to_json(const SweepTable& table);
json to_json(const SuiteReport& report);
json to_json(const WillsResult& w);

std::string to_csv(const SweepTable& table);

/// Everything a CLI invocation needs, so runs can be recorded and replayed.
struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::string output;
    std::string metric;  // empty: as stored in the file
    std::string scheme = "farthest_point";
    long budget = 64;
    int cap = kDefaultEnumerationCap;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::vector<double> t_list{1.0, 0.1, 0.01, 0.001};
    std::vector<long> n_list{10, 100};
    std::string spec = "harmonic";
    double pivot_tolerance = kPivotTolerance;
    double check_tolerance = 1e-8;
    long polytopes = 1000;
    bool monte_carlo = false;

    /// Throws ValidationError when a field is out of range.
    void validate() const;
};

json to_json(const RunConfig& config);
RunConfig run_config_from_json(const json& doc);

} // namespace maglab::io
