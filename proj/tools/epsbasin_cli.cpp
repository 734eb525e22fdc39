// Command-line front end: validate, basins, debut, check, cluster,
// best-track and export-svg. Exit codes: 0 ok, 1 check failed, 2 bad input.

#include <cstdlib>
#include <iostream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "epsbasin/pipeline.hpp"

namespace {

using namespace epsbasin;

constexpr int kOk = 0, kCheckFailed = 1, kInputError = 2;

struct Options {
    std::string input, best_track, mode = "timeext", layout = "full", metric = "euclidean";
    std::string budget = "max", semantics = "deadend", eps_grid, good, bad = "rest";
    std::string out = "out", format = "csv";
    int k = 0;
    std::uint64_t seed = 2020;
    std::size_t grid_cap = 24;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (auto f : csv::split(s))
        if (!f.empty()) out.emplace_back(f);
    return out;
}

RunConfig to_config(const Options& o) {
    RunConfig c;
    c.mode = parse_input_mode(o.mode);
    c.layout = parse_layout(o.layout);
    c.metric = detail::parse_metric(o.metric);
    c.budgets.clear();
    for (const auto& b : split_list(o.budget)) c.budgets.push_back(parse_budget_mode(b));
    if (c.budgets.empty()) throw std::invalid_argument("--budget is empty");
    c.semantics.clear();
    for (const auto& s : split_list(o.semantics)) c.semantics.push_back(parse_semantics(s));
    if (c.semantics.empty()) throw std::invalid_argument("--semantics is empty");
    if (!o.eps_grid.empty()) {
        c.eps_grid.emplace();
        for (const auto& e : split_list(o.eps_grid)) c.eps_grid->push_back(parse_cost(e));
    }
    c.grid_cap = o.grid_cap;
    c.k = o.k;
    c.seed = o.seed;
    if (!o.good.empty()) c.good = parse_target(o.good);
    c.bad = parse_target(o.bad);
    c.csv = c.json = c.svg = false;
    for (const auto& f : split_list(o.format)) {
        if (f == "csv") c.csv = true;
        else if (f == "json") c.json = true;
        else if (f == "svg") c.svg = true;
        else throw std::invalid_argument("unknown format '" + f + "'");
    }
    return c;
}

Prepared load(const Options& o, const RunConfig& cfg) {
    if (o.input.empty()) throw std::invalid_argument("--input is required");
    const std::optional<std::filesystem::path> best =
        o.best_track.empty() ? std::nullopt : std::optional<std::filesystem::path>(o.best_track);
    Prepared p = prepare(load_input(o.input, best), cfg);
    spdlog::info("system: {} states, {} dead ends", p.spec().size(), p.spec().dead_ends().count());
    for (const auto& w : p.warnings) spdlog::warn("{}", w);
    return p;
}

void emit(const Options& o, const Outputs& out) {
    write_outputs(o.out, out);
    for (const auto& [name, text] : out) spdlog::info("wrote {}/{} ({} bytes)", o.out, name, text.size());
    std::cout << "wrote " << out.size() << " file(s) to " << o.out << "\n";
}

int cmd_validate(const Options& o, const RunConfig& cfg) {
    if (o.input.empty()) throw std::invalid_argument("--input is required");
    Input in = load_input(o.input, o.best_track.empty() ? std::nullopt : std::optional<std::filesystem::path>(o.best_track));
    std::optional<TimeExtension> ext;
    std::optional<SystemSpec> flat;
    if (in.system) {
        flat = std::move(in.system);
    } else {
        std::cout << in.dataset->tracks.size() << " tracks, " << in.dataset->point_count() << " points, "
                  << in.dataset->best_track.size() << " best-track points\n";
        if (cfg.mode == InputMode::TimeExtended)
            ext.emplace(build_timeextended_system(*in.dataset, cfg.layout, cfg.metric));
        else
            flat = build_pointcloud_system(*in.dataset, cfg.metric);
    }
    const SystemSpec& spec = ext ? ext->spec() : *flat;
    const auto problems = validate_system(spec);
    std::cout << spec.size() << " states, " << spec.dead_ends().count() << " dead ends, "
              << (spec.separates_points() ? "cost separates points" : "cost has distinct zero-cost pairs") << "\n";
    for (const auto& v : problems) std::cout << "violation " << v.kind << ": " << v.message << "\n";
    return problems.empty() ? kOk : kCheckFailed;
}

int run(const std::string& command, const Options& o) {
    const RunConfig cfg = to_config(o);
    if (command == "validate") return cmd_validate(o, cfg);
    const Prepared p = load(o, cfg);
    if (command == "basins") emit(o, run_basins(p, cfg));
    else if (command == "debut") emit(o, run_debut(p, cfg));
    else if (command == "cluster") emit(o, run_cluster(p, cfg));
    else if (command == "best-track") emit(o, run_best_track(p, cfg));
    else if (command == "export-svg") emit(o, run_export_svg(p, cfg));
    else if (command == "check") {
        const auto rep = run_check(p, cfg);
        std::cout << rep.text();
        return rep.ok() ? kOk : kCheckFailed;
    }
    return kOk;
}

void setup_logging() {
    auto logger = spdlog::stderr_logger_mt("epsbasin");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("BASIN_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to off; only "off" itself should do that
        if (level != spdlog::level::off || std::string_view(env) == "off")
            spdlog::set_level(level);
        else
            spdlog::warn("BASIN_LOG='{}' is not a log level; using warn", env);
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    Options o;
    CLI::App app{"Robust basins of attraction for discrete maps and forecast ensembles"};
    app.set_config("--config", "", "flat key=value file; command-line flags win");
    app.fallthrough();
    app.require_subcommand(1, 1);

    app.add_option("--input", o.input, "track CSV or system .json");
    app.add_option("--best-track", o.best_track, "best-track CSV (timestamp,lon,lat)");
    app.add_option("--mode", o.mode, "pointcloud or timeext")->check(CLI::IsMember({"pointcloud", "timeext"}));
    app.add_option("--layout", o.layout, "time-extension layout: full or sync")->check(CLI::IsMember({"full", "sync"}));
    app.add_option("--metric", o.metric, "euclidean or haversine_km")->check(CLI::IsMember({"euclidean", "haversine_km"}));
    app.add_option("--budget", o.budget, "max, sum or max,sum");
    app.add_option("--semantics", o.semantics, "negative basins: deadend, horizon or both");
    app.add_option("--eps-grid", o.eps_grid, "comma-separated eps values (default: pair costs)");
    app.add_option("--grid-cap", o.grid_cap, "size limit of the default eps grid");
    app.add_option("--k", o.k, "number of clusters")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", o.seed, "clustering seed");
    app.add_option("--good", o.good, "cluster:IDS, member:IDS, state:IDS or rest");
    app.add_option("--bad", o.bad, "cluster:IDS, member:IDS, state:IDS or rest");
    app.add_option("--out", o.out, "output directory");
    app.add_option("--format", o.format, "csv, json, svg (comma-separated)");

    for (const char* name : {"validate", "basins", "debut", "check", "cluster", "best-track", "export-svg"})
        app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, o);
    } catch (const ParseError& e) {
        spdlog::error("parse error: {}", e.what());
    } catch (const IoError& e) {
        spdlog::error("{}", e.what());
    } catch (const std::invalid_argument& e) {
        spdlog::error("{}", e.what());
    }
    return kInputError;
}
