#include "maxlab/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "maxlab/boundary_data.hpp"
#include "maxlab/error.hpp"
#include "maxlab/scenario.hpp"

namespace maxlab {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"scenario", {"name"}},
        {"metric", {"kind", "params"}},
        {"chart", {"x0", "x1", "y0", "y1"}},
        {"domain", {"shape", "center_x", "center_y", "inner_radius", "outer_radius"}},
        {"boundary", {"kind", "params"}},
        {"grid", {"resolution", "study"}},
        {"disc", {"center_x", "center_y", "pairs"}},
        {"solver", {"max_newton_iters", "residual_tol", "spacelike_guard", "max_backtracks"}},
        {"estimate",
         {"ineq_relative", "pointwise_factor", "report_min_depth", "report_margin", "maximal_tol", "rigidity_tol"}},
        {"converge", {"identity_order_min", "distance_order_min", "solution_order_min"}},
        {"output", {"dir"}},
    };
    return keys;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& text) {
    std::istringstream in(text);
    double v = 0.0;
    if (!(in >> v) || !(in >> std::ws).eof()) throw ConfigError("'" + key + "' is not a number: '" + text + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    std::istringstream in(text);
    long v = 0;
    if (!(in >> v) || !(in >> std::ws).eof()) throw ConfigError("'" + key + "' is not an integer: '" + text + "'");
    return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::istringstream in(text);
    std::vector<double> out;
    std::string item;
    while (in >> item) out.push_back(parse_double(key, item));
    return out;
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::pair<double, double>> out;
    std::string item;
    std::vector<std::string> items;
    while (in >> item) items.push_back(item);
    if (items.size() == 1 && items[0] == "auto") return out;
    for (const std::string& entry : items) {
        if (entry == "auto") throw ConfigError("'auto' must be the only disc.pairs entry");
        const auto colon = entry.find(':');
        if (colon == std::string::npos) throw ConfigError("disc pair '" + entry + "' is not of the form r:R");
        out.emplace_back(parse_double("disc.pairs", entry.substr(0, colon)),
                         parse_double("disc.pairs", entry.substr(colon + 1)));
    }
    return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F format) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ' ';
        out += format(v[k]);
    }
    return out;
}

}  // namespace

SolverSettings ExperimentConfig::solver_settings() const {
    SolverSettings s;
    s.max_newton_iters = max_newton_iters;
    s.residual_tol = residual_tol;
    s.spacelike_guard = spacelike_guard;
    s.max_backtracks = max_backtracks;
    return s;
}

ReportRegion ExperimentConfig::report_region() const { return {report_min_depth, report_margin}; }

EstimateTolerances ExperimentConfig::estimate_tolerances() const {
    EstimateTolerances t;
    t.ineq_relative = ineq_relative;
    t.pointwise_factor = pointwise_factor;
    t.region = report_region();
    return t;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.resolution < 9) throw ConfigError("grid.resolution must be at least 9");
    if (cfg.study.empty()) throw ConfigError("grid.study needs at least one resolution");
    for (std::size_t k = 0; k < cfg.study.size(); ++k) {
        if (cfg.study[k] < 9) throw ConfigError("grid.study resolutions must be at least 9");
        if (k && cfg.study[k] <= cfg.study[k - 1]) throw ConfigError("grid.study must be strictly increasing");
    }
    for (const auto& [r, R] : cfg.pairs) {
        if (!(r > 0.0 && r < R)) throw ConfigError("disc pairs need 0 < r < R");
    }
    if (!(cfg.chart.x1 > cfg.chart.x0 && cfg.chart.y1 > cfg.chart.y0)) throw ConfigError("chart is empty");
    if (!cfg.chart.contains(cfg.center_x, cfg.center_y)) throw ConfigError("disc centre lies outside the chart");
    if (cfg.max_newton_iters < 1 || cfg.max_backtracks < 0) throw ConfigError("solver iteration limits must be positive");
    if (!(cfg.residual_tol > 0.0)) throw ConfigError("solver.residual_tol must be positive");
    if (!(cfg.spacelike_guard > 0.0 && cfg.spacelike_guard < 1.0)) {
        throw ConfigError("solver.spacelike_guard must lie in (0, 1)");
    }
    if (!(cfg.ineq_relative >= 0.0) || !(cfg.pointwise_factor >= 0.0)) {
        throw ConfigError("estimate tolerances must be non-negative");
    }
    if (cfg.report_min_depth < 2) throw ConfigError("estimate.report_min_depth must be at least 2");
    if (!(cfg.report_margin >= 0.0)) throw ConfigError("estimate.report_margin must be non-negative");
    if (cfg.out_dir.empty()) throw ConfigError("output.dir is empty");
    // Catalog names and parameter counts.
    MetricSpec::from_catalog(cfg.metric, cfg.metric_params, cfg.chart);
    BoundaryFunction::from_catalog(cfg.boundary, cfg.boundary_params);
}

ExperimentConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end() || body.data().size()) throw ConfigError("unknown config section '" + section + "'");
        for (const auto& [key, value] : body) {
            if (!it->second.count(key)) throw ConfigError("unknown config key '" + section + "." + key + "'");
        }
    }
    const auto name = tree.get_optional<std::string>("scenario.name");
    if (!name) throw ConfigError("config needs [scenario] name");
    ExperimentConfig cfg = scenario_config(*name);

    auto text = [&](const char* path) { return tree.get_optional<std::string>(path); };
    auto set_double = [&](const char* path, double& field) {
        if (auto v = text(path)) field = parse_double(path, *v);
    };
    auto set_int = [&](const char* path, int& field) {
        if (auto v = text(path)) field = parse_int(path, *v);
    };
    auto set_string = [&](const char* path, std::string& field) {
        if (auto v = text(path)) field = *v;
    };

    set_string("metric.kind", cfg.metric);
    if (auto v = text("metric.params")) cfg.metric_params = parse_list("metric.params", *v);
    set_double("chart.x0", cfg.chart.x0);
    set_double("chart.x1", cfg.chart.x1);
    set_double("chart.y0", cfg.chart.y0);
    set_double("chart.y1", cfg.chart.y1);
    if (auto v = text("domain.shape")) {
        if (*v == "rectangle") {
            cfg.domain.kind = DomainShape::Kind::rectangle;
        } else if (*v == "annulus") {
            cfg.domain.kind = DomainShape::Kind::annulus;
        } else {
            throw ConfigError("domain.shape must be rectangle or annulus, got '" + *v + "'");
        }
    }
    set_double("domain.center_x", cfg.domain.center_x);
    set_double("domain.center_y", cfg.domain.center_y);
    set_double("domain.inner_radius", cfg.domain.inner_radius);
    set_double("domain.outer_radius", cfg.domain.outer_radius);
    set_string("boundary.kind", cfg.boundary);
    if (auto v = text("boundary.params")) cfg.boundary_params = parse_list("boundary.params", *v);
    set_int("grid.resolution", cfg.resolution);
    if (auto v = text("grid.study")) {
        cfg.study.clear();
        for (double r : parse_list("grid.study", *v)) {
            if (r != static_cast<int>(r)) throw ConfigError("grid.study entries must be integers");
            cfg.study.push_back(static_cast<int>(r));
        }
    }
    set_double("disc.center_x", cfg.center_x);
    set_double("disc.center_y", cfg.center_y);
    if (auto v = text("disc.pairs")) cfg.pairs = parse_pairs(*v);
    set_int("solver.max_newton_iters", cfg.max_newton_iters);
    set_double("solver.residual_tol", cfg.residual_tol);
    set_double("solver.spacelike_guard", cfg.spacelike_guard);
    set_int("solver.max_backtracks", cfg.max_backtracks);
    set_double("estimate.ineq_relative", cfg.ineq_relative);
    set_double("estimate.pointwise_factor", cfg.pointwise_factor);
    set_int("estimate.report_min_depth", cfg.report_min_depth);
    set_double("estimate.report_margin", cfg.report_margin);
    set_double("estimate.maximal_tol", cfg.maximal_tol);
    set_double("estimate.rigidity_tol", cfg.rigidity_tol);
    set_double("converge.identity_order_min", cfg.identity_order_min);
    set_double("converge.distance_order_min", cfg.distance_order_min);
    set_double("converge.solution_order_min", cfg.solution_order_min);
    set_string("output.dir", cfg.out_dir);

    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::string to_ini(const ExperimentConfig& cfg) {
    auto d = [](double v) { return format_double(v); };
    auto i = [](int v) { return std::to_string(v); };
    std::ostringstream out;
    out << "[scenario]\nname = " << cfg.scenario << "\n\n";
    out << "[metric]\nkind = " << cfg.metric << "\nparams = " << join(cfg.metric_params, d) << "\n\n";
    out << "[chart]\nx0 = " << d(cfg.chart.x0) << "\nx1 = " << d(cfg.chart.x1) << "\ny0 = " << d(cfg.chart.y0)
        << "\ny1 = " << d(cfg.chart.y1) << "\n\n";
    out << "[domain]\nshape = " << (cfg.domain.kind == DomainShape::Kind::annulus ? "annulus" : "rectangle")
        << "\ncenter_x = " << d(cfg.domain.center_x) << "\ncenter_y = " << d(cfg.domain.center_y)
        << "\ninner_radius = " << d(cfg.domain.inner_radius) << "\nouter_radius = " << d(cfg.domain.outer_radius)
        << "\n\n";
    out << "[boundary]\nkind = " << cfg.boundary << "\nparams = " << join(cfg.boundary_params, d) << "\n\n";
    out << "[grid]\nresolution = " << cfg.resolution << "\nstudy = " << join(cfg.study, i) << "\n\n";
    std::string pairs = cfg.pairs.empty() ? "auto" : "";
    for (std::size_t k = 0; k < cfg.pairs.size(); ++k) {
        if (k) pairs += ' ';
        pairs += d(cfg.pairs[k].first) + ":" + d(cfg.pairs[k].second);
    }
    out << "[disc]\ncenter_x = " << d(cfg.center_x) << "\ncenter_y = " << d(cfg.center_y) << "\npairs = " << pairs
        << "\n\n";
    out << "[solver]\nmax_newton_iters = " << cfg.max_newton_iters << "\nresidual_tol = " << d(cfg.residual_tol)
        << "\nspacelike_guard = " << d(cfg.spacelike_guard) << "\nmax_backtracks = " << cfg.max_backtracks << "\n\n";
    out << "[estimate]\nineq_relative = " << d(cfg.ineq_relative) << "\npointwise_factor = " << d(cfg.pointwise_factor)
        << "\nreport_min_depth = " << cfg.report_min_depth << "\nreport_margin = " << d(cfg.report_margin)
        << "\nmaximal_tol = " << d(cfg.maximal_tol) << "\nrigidity_tol = " << d(cfg.rigidity_tol) << "\n\n";
    out << "[converge]\nidentity_order_min = " << d(cfg.identity_order_min)
        << "\ndistance_order_min = " << d(cfg.distance_order_min)
        << "\nsolution_order_min = " << d(cfg.solution_order_min) << "\n\n";
    out << "[output]\ndir = " << cfg.out_dir << "\n";
    return out.str();
}

}  // namespace maxlab
