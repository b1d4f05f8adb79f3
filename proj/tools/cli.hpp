#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infdiff/infdiff.hpp"

namespace infdiff::cli {

enum exit_status : int { exit_pass = 0, exit_failure = 1, exit_usage = 2 };

struct usage_error : error {
    using error::error;
};

struct RunConfig {
    std::string command;
    std::string problem;
    int order = 10;
    int points = 50;
    std::uint64_t seed = 7;
    std::vector<double> t1;
    std::optional<double> tau;
    std::string out = ".";
    std::string format = "csv";
    Params params;
    std::vector<double> explicit_points;
};

inline RunConfig defaults_for(const std::string& command)
{
    RunConfig c;
    c.command = command;
    if (command == "bench") {
        c.order = 10;
        c.points = 50;
        c.t1 = {0.01, 0.05, 0.1};
    } else if (command == "derive") {
        c.order = 7;
        c.points = 100;
    } else if (command == "taylor") {
        c.order = 7;
        c.points = 100;
        c.t1 = {0.01, 0.02, 0.03, 0.04, 0.05};
    } else if (command == "plotdata") {
        c.order = 10;
        c.points = 500;
        c.t1 = {0.1};
    }
    return c;
}

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_real(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw usage_error("bad number for " + key + ": '" + text + "'");
}

inline long long parse_integer(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw usage_error("bad integer for " + key + ": '" + text + "'");
}

inline std::vector<double> parse_real_list(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    for (const auto& field : split_csv_line(text)) {
        out.push_back(parse_real(key, trim(field)));
    }
    return out;
}

inline std::pair<std::string, double> parse_param(const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw usage_error("parameter override must look like key=value, got '" + text + "'");
    }
    const std::string key = trim(text.substr(0, eq));
    return {key, parse_real("param " + key, trim(text.substr(eq + 1)))};
}

} // namespace detail

// Flat key = value file; '#' starts a comment. Keys: problem, order, points,
// seed, t1 (comma separated), tau, out, format, param.<name>.
inline void apply_config_file(RunConfig& c, std::istream& in, const std::string& source)
{
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw usage_error(source + ":" + std::to_string(number) + ": expected key = value");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key == "problem") {
            c.problem = value;
        } else if (key == "order") {
            c.order = static_cast<int>(detail::parse_integer(key, value));
        } else if (key == "points") {
            c.points = static_cast<int>(detail::parse_integer(key, value));
        } else if (key == "seed") {
            c.seed = static_cast<std::uint64_t>(detail::parse_integer(key, value));
        } else if (key == "t1") {
            c.t1 = detail::parse_real_list(key, value);
        } else if (key == "tau") {
            c.tau = detail::parse_real(key, value);
        } else if (key == "out") {
            c.out = value;
        } else if (key == "format") {
            c.format = value;
        } else if (key.starts_with("param.")) {
            c.params[key.substr(6)] = detail::parse_real(key, value);
        } else {
            throw usage_error(source + ":" + std::to_string(number) + ": unknown key '" + key + "'");
        }
    }
}

inline PdeProblem resolve_problem(const RunConfig& c)
{
    if (c.problem.empty()) {
        throw usage_error("--problem is required");
    }
    try {
        return registry_get(c.problem, c.params);
    } catch (const lookup_error& e) {
        throw usage_error(e.what());
    }
}

inline void validate(const RunConfig& c, const PdeProblem& problem)
{
    if (c.order < 1 || c.order > max_supported_order) {
        throw usage_error("--order must lie in [1, " + std::to_string(max_supported_order) + "]");
    }
    if (c.points < 1) {
        throw usage_error("--points must be at least 1");
    }
    for (double t : c.t1) {
        if (!(t >= 0.0 && t <= problem.t_end)) {
            throw usage_error("t1 = " + std::to_string(t) + " outside [0, " + std::to_string(problem.t_end) + "]");
        }
    }
    if (c.format != "csv" && c.format != "json") {
        throw usage_error("--format must be csv or json");
    }
    for (double x : c.explicit_points) {
        if (!problem.domain.contains_strictly(x)) {
            throw usage_error("--x " + std::to_string(x) + " is not strictly inside the domain");
        }
    }
}

inline BatchReal points_for(const RunConfig& c, const PdeProblem& problem)
{
    if (!c.explicit_points.empty()) {
        return BatchReal(c.explicit_points);
    }
    return sample_points(problem, c.points, c.tau, c.seed);
}

inline std::filesystem::path output_path(const RunConfig& c, const std::string& stem, const std::string& ext)
{
    const std::filesystem::path dir(c.out);
    std::filesystem::create_directories(dir);
    return dir / (stem + "_" + c.problem + "." + ext);
}

inline std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw error("cannot write " + path.string());
    }
    return os;
}

inline int cmd_bench(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const PdeProblem problem = resolve_problem(c);
    validate(c, problem);
    if (!problem.has_exact_oracle()) {
        err << problem.name << ": no exact oracle; use derive/taylor\n";
        return exit_usage;
    }
    const BenchReport report = run_benchmark(problem, c.order, c.points, c.t1, c.seed, c.tau);

    const auto path = output_path(c, "bench", "csv");
    auto os = open_output(path);
    write_report_csv(os, report);

    const std::vector<BenchReport> reports{report};
    write_order_table(out, reports);
    out << '\n';
    write_taylor_table(out, reports);
    out << "\nruntime " << infdiff::detail::short_real(report.runtime_seconds) << " s\nwrote " << path.string() << '\n';

    const auto violations = threshold_violations(report);
    for (const auto& v : violations) {
        err << "FAIL " << v.cell << ": " << format_real(v.value) << " not " << v.bound << '\n';
    }
    return violations.empty() ? exit_pass : exit_failure;
}

inline int cmd_derive(const RunConfig& c, std::ostream& out, std::ostream&)
{
    const PdeProblem problem = resolve_problem(c);
    validate(c, problem);
    const BatchReal points = points_for(c, problem);
    const auto d = derivatives(compute_expansion(problem, points, c.order));

    const auto path = output_path(c, "derivatives", "csv");
    auto os = open_output(path);
    os << "component,order,x,value\n";
    for (std::size_t m = 0; m < problem.components; ++m) {
        for (int i = 0; i <= c.order; ++i) {
            for (std::size_t p = 0; p < points.size(); ++p) {
                os << m << ',' << i << ',' << format_real(points[p]) << ',' << format_real(d[m][i][p]) << '\n';
            }
        }
    }
    out << "wrote " << path.string() << '\n';
    return exit_pass;
}

inline int cmd_taylor(const RunConfig& c, std::ostream& out, std::ostream&)
{
    const PdeProblem problem = resolve_problem(c);
    validate(c, problem);
    if (c.t1.empty()) {
        throw usage_error("taylor needs at least one --t1");
    }
    const BatchReal points = points_for(c, problem);
    const TaylorExpansion expansion = compute_expansion(problem, points, c.order);

    struct Record {
        std::size_t component;
        double t, x, value;
    };
    std::vector<Record> records;
    for (double t : c.t1) {
        const auto values = evaluate(expansion, t);
        for (std::size_t m = 0; m < problem.components; ++m) {
            for (std::size_t p = 0; p < points.size(); ++p) {
                records.push_back({m, t, points[p], values[m][p]});
            }
        }
    }

    std::filesystem::path path;
    if (c.format == "json") {
        path = output_path(c, "taylor_points", "json");
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& r : records) {
            doc.push_back({{"component", r.component}, {"t", r.t}, {"x", r.x}, {"value", r.value}});
        }
        auto os = open_output(path);
        os << doc.dump(1) << '\n';
    } else {
        path = output_path(c, "taylor_points", "csv");
        auto os = open_output(path);
        os << "component,t,x,value\n";
        for (const auto& r : records) {
            os << r.component << ',' << format_real(r.t) << ',' << format_real(r.x) << ',' << format_real(r.value)
               << '\n';
        }
    }
    out << "wrote " << records.size() << " rows to " << path.string() << '\n';
    return exit_pass;
}

inline int cmd_plotdata(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const PdeProblem problem = resolve_problem(c);
    validate(c, problem);
    if (!problem.has_exact_oracle()) {
        err << problem.name << ": no exact oracle; use derive/taylor\n";
        return exit_usage;
    }
    const BatchReal points = uniform_points(problem, c.points);
    const TaylorExpansion expansion = compute_expansion(problem, points, c.order);

    const auto path = output_path(c, "plotdata", "csv");
    auto os = open_output(path);
    os << "t,x,exact,taylor\n";
    for (double t : c.t1) {
        const auto values = evaluate(expansion, t);
        for (std::size_t p = 0; p < points.size(); ++p) {
            os << format_real(t) << ',' << format_real(points[p]) << ','
               << format_real(exact_solution(problem, t, points[p])[0]) << ',' << format_real(values[0][p]) << '\n';
        }
    }
    out << "wrote " << path.string() << '\n';
    return exit_pass;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"High-order time derivatives of PDE solutions by truncated series arithmetic", "infdiff"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string problem;
    int order = 0;
    int points = 0;
    std::uint64_t seed = 0;
    std::vector<double> t1;
    double tau = 0.0;
    std::string out_dir;
    std::string format;
    std::vector<std::string> params;
    std::vector<double> xs;
    std::string config;

    auto* o_problem = app.add_option("--problem", problem, "heat, diffusion, wave, burgers, allen_cahn, schrodinger");
    auto* o_order = app.add_option("--order", order, "maximum derivative order K");
    auto* o_points = app.add_option("--points", points, "number of sample points");
    auto* o_seed = app.add_option("--seed", seed, "sampling seed");
    auto* o_t1 = app.add_option("--t1", t1, "evaluation time; repeatable or comma separated")->delimiter(',');
    auto* o_tau = app.add_option("--tau", tau, "exclusion threshold on |g|; 0 disables");
    auto* o_out = app.add_option("--out", out_dir, "output directory");
    auto* o_format = app.add_option("--format", format, "csv or json");
    app.add_option("--param", params, "parameter override key=value; repeatable");
    auto* o_x = app.add_option("--x", xs, "explicit sample point; repeatable, replaces sampling")->delimiter(',');
    app.add_option("--config", config, "flat key = value configuration file");

    auto* bench = app.add_subcommand("bench", "compare against closed-form solutions and check thresholds");
    auto* derive = app.add_subcommand("derive", "write time derivatives at t = 0");
    auto* taylor = app.add_subcommand("taylor", "write Taylor-evaluated data points");
    auto* plotdata = app.add_subcommand("plotdata", "write exact and Taylor curves on a uniform grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_pass : exit_usage;
    }

    std::string command;
    for (auto* sub : {bench, derive, taylor, plotdata}) {
        if (sub->parsed()) {
            command = sub->get_name();
        }
    }

    try {
        RunConfig c = defaults_for(command);
        if (!config.empty()) {
            std::ifstream in(config);
            if (!in) {
                throw usage_error("cannot read config file " + config);
            }
            apply_config_file(c, in, config);
        }
        if (o_problem->count()) c.problem = problem;
        if (o_order->count()) c.order = order;
        if (o_points->count()) c.points = points;
        if (o_seed->count()) c.seed = seed;
        if (o_t1->count()) c.t1 = t1;
        if (o_tau->count()) c.tau = tau;
        if (o_out->count()) c.out = out_dir;
        if (o_format->count()) c.format = format;
        if (o_x->count()) c.explicit_points = xs;
        for (const auto& p : params) {
            const auto [key, value] = detail::parse_param(p);
            c.params[key] = value;
        }

        if (command == "bench") return cmd_bench(c, out, err);
        if (command == "derive") return cmd_derive(c, out, err);
        if (command == "taylor") return cmd_taylor(c, out, err);
        return cmd_plotdata(c, out, err);
    } catch (const usage_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const divergence_error& e) {
        err << "error at order " << e.order() << ": " << e.what() << '\n';
        return exit_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"infdiff"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace infdiff::cli
