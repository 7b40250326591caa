#include <maglab/io.hpp>

#include <maglab/errors.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace maglab::io {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, std::size_t row, std::size_t col) {
    const std::string t = trim(cell);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("bad number '" + t + "' at row " + std::to_string(row + 1) + ", column " +
                         std::to_string(col + 1));
    }
}

Eigen::MatrixXd matrix_from_rows(const json& rows, const char* what) {
    if (!rows.is_array() || rows.empty()) throw ParseError(std::string(what) + " must be a non-empty array of arrays");
    const std::size_t n = rows.size();
    const std::size_t dim = rows[0].is_array() ? rows[0].size() : 0;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        if (!rows[j].is_array() || rows[j].size() != dim)
            throw ParseError(std::string(what) + " rows must all have " + std::to_string(dim) + " entries");
        for (std::size_t i = 0; i < dim; ++i) {
            if (!rows[j][i].is_number()) throw ParseError(std::string(what) + " entries must be numbers");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i].get<double>();
        }
    }
    return m;
}

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

} // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    out << text;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

Metric parse_metric(const std::string& text) {
    if (text == "l1" || text == "L1") return Metric::L1;
    if (text == "l2" || text == "L2") return Metric::L2;
    throw ValidationError("unknown metric '" + text + "' (expected l1 or l2)");
}

std::string to_string(Metric metric) { return metric == Metric::L1 ? "l1" : "l2"; }

FiniteMetricSpace<double> parse_distance_csv(const std::string& text, MetricValidation validation) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(parse_number(cell, rows.size(), row.size()));
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    if (n == 0) throw ParseError("distance CSV is empty");
    Eigen::MatrixXd d(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw ParseError("distance CSV row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                             " entries, expected " + std::to_string(n));
        for (std::size_t j = 0; j < n; ++j) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return FiniteMetricSpace<double>(std::move(d), validation);
}

FiniteMetricSpace<double> parse_distance_json(const json& doc, MetricValidation validation) {
    if (!doc.is_object() || !doc.contains("d")) throw ParseError("distance JSON needs a \"d\" field");
    const Eigen::MatrixXd d = matrix_from_rows(doc.at("d"), "\"d\"");
    if (doc.contains("n")) {
        if (!doc.at("n").is_number_integer() || doc.at("n").get<long>() != d.cols())
            throw ParseError("\"n\" does not match the size of \"d\"");
    }
    if (d.rows() != d.cols()) throw ParseError("\"d\" must be square");
    // Rows were read as columns; d is symmetric by contract and validated as such.
    return FiniteMetricSpace<double>(d.transpose(), validation);
}

PointCloud<double> parse_point_cloud(const json& doc, std::optional<Metric> metric_override) {
    if (!doc.is_object() || !doc.contains("points")) throw ParseError("point cloud JSON needs a \"points\" field");
    Metric metric = Metric::L1;
    if (doc.contains("metric")) {
        if (!doc.at("metric").is_string()) throw ParseError("\"metric\" must be a string");
        metric = parse_metric(doc.at("metric").get<std::string>());
    }
    if (metric_override) metric = *metric_override;
    return PointCloud<double>(matrix_from_rows(doc.at("points"), "\"points\""), metric);
}

Polytope parse_polytope(const json& doc) {
    if (!doc.is_object() || !doc.contains("vertices")) throw ParseError("polytope JSON needs a \"vertices\" field");
    return Polytope(matrix_from_rows(doc.at("vertices"), "\"vertices\""));
}

std::variant<FiniteMetricSpace<double>, PointCloud<double>> read_metric_input(const std::filesystem::path& path,
                                                                             std::optional<Metric> metric_override) {
    const std::string text = read_text(path);
    const std::string head = trim(text);
    if (!head.empty() && head.front() == '{') {
        const json doc = parse_json(text);
        if (doc.contains("points")) return parse_point_cloud(doc, metric_override);
        return parse_distance_json(doc);
    }
    return parse_distance_csv(text);
}

Polytope read_polytope(const std::filesystem::path& path) { return parse_polytope(parse_json(read_text(path))); }

json to_json(const Weighting<double>& w) {
    return json{{"magnitude", w.magnitude},
                {"weighting", vector_json(w.w)},
                {"min_pivot", w.min_pivot},
                {"residual", w.residual},
                {"condition_warning", w.condition_warning}};
}

json to_json(const IntrinsicVolumes& v) {
    json out{{"V", vector_json(v.values)}, {"exact", v.exact()}, {"method", to_string(v.method)}};
    if (v.stderr_values) out["stderr"] = vector_json(*v.stderr_values);
    return out;
}

json to_json(const ConvexMagnitudeResult& r) {
    return json{{"value", r.value}, {"exact", r.exact}, {"terms", vector_json(r.terms)}, {"method", to_string(r.method)}};
}

json to_json(const SweepTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows) {
        json row{{"param", r.param},
                 {"n_points", r.n_points},
                 {"sample_magnitude", r.sample_magnitude},
                 {"formula_value", r.formula_value},
                 {"upper_bound", r.upper_bound},
                 {"flag", r.flag}};
        if (r.lower_bound) row["lower_bound"] = *r.lower_bound;
        rows.push_back(std::move(row));
    }
    json out{{"experiment", table.experiment}, {"rows", std::move(rows)}};
    if (!table.crossings.empty()) {
        json crossings = json::array();
        for (const auto& c : table.crossings)
            crossings.push_back({{"threshold", c.threshold}, {"first_n", c.first_n ? json(*c.first_n) : json(nullptr)}});
        out["crossings"] = std::move(crossings);
    }
    return out;
}

json to_json(const SuiteReport& report) {
    json by = json::object();
    for (const auto& [name, counts] : report.by_check) by[name] = {{"checks", counts.first}, {"violations", counts.second}};
    return json{{"polytopes", report.polytopes},
                {"checks", report.checks},
                {"violations", report.violations},
                {"by_check", std::move(by)},
                {"messages", report.messages}};
}

json to_json(const WillsResult& w) {
    return json{{"dilated_volume", w.dilated_volume},
                {"dilated_stderr", w.dilated_stderr},
                {"intrinsic_sum", w.intrinsic_sum},
                {"method", w.method}};
}

std::string to_csv(const SweepTable& table) {
    std::string out = "param,n_points,sample_magnitude,formula_value,upper_bound,flag\n";
    for (const auto& r : table.rows) {
        out += format_double(r.param) + "," + std::to_string(r.n_points) + "," + format_double(r.sample_magnitude) +
               "," + format_double(r.formula_value) + "," + format_double(r.upper_bound) + "," + r.flag + "\n";
    }
    return out;
}

void RunConfig::validate() const {
    if (!(pivot_tolerance > 0.0) || !(check_tolerance > 0.0)) throw ValidationError("tolerances must be positive");
    if (cap < 1) throw ValidationError("enumeration cap must be at least 1");
    if (budget < 1) throw ValidationError("sample budget must be at least 1");
    if (threads < 1) throw ValidationError("thread count must be at least 1");
    if (polytopes < 0) throw ValidationError("polytope count must be nonnegative");
    for (double t : t_list)
        if (!(t > 0.0)) throw ValidationError("t values must be positive");
    for (long n : n_list)
        if (n < 1) throw ValidationError("N values must be at least 1");
    if (!metric.empty()) parse_metric(metric);
    parse_scheme(scheme);
}

json to_json(const RunConfig& c) {
    return json{{"command", c.command},
                {"inputs", c.inputs},
                {"output", c.output},
                {"metric", c.metric},
                {"scheme", c.scheme},
                {"budget", c.budget},
                {"cap", c.cap},
                {"seed", c.seed},
                {"threads", c.threads},
                {"t_list", c.t_list},
                {"n_list", c.n_list},
                {"spec", c.spec},
                {"pivot_tolerance", c.pivot_tolerance},
                {"check_tolerance", c.check_tolerance},
                {"polytopes", c.polytopes},
                {"monte_carlo", c.monte_carlo}};
}

RunConfig run_config_from_json(const json& doc) {
    RunConfig c;
    try {
        c.command = doc.value("command", c.command);
        c.inputs = doc.value("inputs", c.inputs);
        c.output = doc.value("output", c.output);
        c.metric = doc.value("metric", c.metric);
        c.scheme = doc.value("scheme", c.scheme);
        c.budget = doc.value("budget", c.budget);
        c.cap = doc.value("cap", c.cap);
        c.seed = doc.value("seed", c.seed);
        c.threads = doc.value("threads", c.threads);
        c.t_list = doc.value("t_list", c.t_list);
        c.n_list = doc.value("n_list", c.n_list);
        c.spec = doc.value("spec", c.spec);
        c.pivot_tolerance = doc.value("pivot_tolerance", c.pivot_tolerance);
        c.check_tolerance = doc.value("check_tolerance", c.check_tolerance);
        c.polytopes = doc.value("polytopes", c.polytopes);
        c.monte_carlo = doc.value("monte_carlo", c.monte_carlo);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad run config: ") + e.what());
    }
    c.validate();
    return c;
}

} // namespace maglab::io
