#pragma once

// End-to-end runs behind the command-line tool: load an ensemble or a
// system file, build the system, pick targets and produce named outputs.
// Outputs are kept in a sorted map so a run is byte-for-byte repeatable;
// independent (target, budget) jobs run concurrently.

#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "epsbasin/export.hpp"
#include "epsbasin/io_json.hpp"
#include "epsbasin/svg.hpp"
#include "epsbasin/targets.hpp"

namespace epsbasin {

/// A file that could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

using Outputs = std::map<std::string, std::string>;

inline void write_outputs(const std::filesystem::path& dir, const Outputs& out) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    for (const auto& [name, text] : out) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f || !(f << text)) throw IoError("cannot write '" + (dir / name).string() + "'");
    }
}

enum class InputMode { PointCloud, TimeExtended };

inline std::string_view to_string(InputMode m) { return m == InputMode::PointCloud ? "pointcloud" : "timeext"; }

inline InputMode parse_input_mode(std::string_view s) {
    if (s == "pointcloud") return InputMode::PointCloud;
    if (s == "timeext") return InputMode::TimeExtended;
    throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

struct RunConfig {
    InputMode mode = InputMode::TimeExtended;
    ExtensionLayout layout = ExtensionLayout::Full;
    PlaneMetric metric = PlaneMetric::Euclidean;
    std::vector<BudgetMode> budgets{BudgetMode::MaxPerStep};
    std::vector<NegativeSemantics> semantics{NegativeSemantics::DeadEnd};
    std::optional<std::vector<CostValue>> eps_grid;  // finite, >= 0
    std::size_t grid_cap = 24;                         // default grid size limit
    int k = 0;                                         // 0: no clustering
    std::uint64_t seed = 2020;
    std::optional<TargetSpec> good;
    TargetSpec bad;  // defaults to rest
    bool csv = true, json = false, svg = false;
};

/// What was read: a track ensemble or a system description.
struct Input {
    std::optional<TrackDataset> dataset;
    std::optional<SystemSpec> system;
};

/// ".json" is a system file; anything else is a track CSV.
inline Input load_input(const std::filesystem::path& path, const std::optional<std::filesystem::path>& best_track = {}) {
    Input in;
    const std::string text = read_file(path);
    if (path.extension() == ".json") {
        in.system = read_system_json(text);
        if (best_track) throw std::invalid_argument("a best track needs a track ensemble input");
    } else {
        in.dataset = parse_tracks(text);
        if (best_track) in.dataset->best_track = parse_best_track(read_file(*best_track));
    }
    return in;
}

/// The system under study plus everything derived from the input.
struct Prepared {
    std::optional<TrackDataset> dataset;
    std::optional<TimeExtension> ext;
    std::optional<SystemSpec> flat;
    std::optional<ClusterAssignment> clusters;
    std::optional<TargetPair> targets;
    std::vector<std::string> warnings;

    const SystemSpec& spec() const { return ext ? ext->spec() : *flat; }
};

namespace detail {

/// Targets on a bare system: state lists only. "rest" is the dead ends
/// minus the other side when that side is made of dead ends, and every
/// state minus the other side otherwise.
inline TargetPair system_targets(const SystemSpec& spec, const TargetSpec& good, const TargetSpec& bad) {
    using Kind = TargetSpec::Kind;
    if (good.kind == Kind::Rest && bad.kind == Kind::Rest) throw std::invalid_argument("good and bad cannot both be 'rest'");
    auto resolve = [&](const TargetSpec& t) {
        if (t.kind != Kind::States) throw std::invalid_argument("a system file only supports state: targets and rest");
        StateSet s(spec.size());
        for (long id : t.ids) {
            if (std::size_t(id) >= spec.size()) throw std::invalid_argument("state " + std::to_string(id) + " out of range");
            s.insert(StateId(id));
        }
        return s;
    };
    const StateSet dead = spec.dead_ends();
    auto rest = [&](const StateSet& other) {
        return other.subset_of(dead) ? dead - other : StateSet::full(spec.size()) - other;
    };
    TargetPair r{StateSet(spec.size()), StateSet(spec.size()), false, {}};
    if (good.kind != Kind::Rest) r.good = resolve(good);
    if (bad.kind != Kind::Rest) r.bad = resolve(bad);
    if (good.kind == Kind::Rest) r.good = rest(r.bad);
    if (bad.kind == Kind::Rest) r.bad = rest(r.good);
    if (r.good.intersects(r.bad)) throw std::invalid_argument("good and bad targets overlap");
    r.partitions_dead_ends = (r.good | r.bad) == dead;
    return r;
}

}  // namespace detail

/// Builds the system, clusters when k > 0 and resolves targets when given.
inline Prepared prepare(Input in, const RunConfig& cfg) {
    Prepared p;
    if (in.system) {
        if (cfg.k > 0) throw std::invalid_argument("clustering needs a track ensemble input");
        const auto problems = validate_system(*in.system);
        if (!problems.empty()) throw std::invalid_argument("invalid system: " + problems.front().message);
        p.flat = std::move(in.system);
    } else {
        p.dataset = std::move(in.dataset);
        if (cfg.mode == InputMode::TimeExtended)
            p.ext.emplace(build_timeextended_system(*p.dataset, cfg.layout, cfg.metric));
        else
            p.flat = build_pointcloud_system(*p.dataset, cfg.metric);
        if (cfg.k > 0) p.clusters = kmeans(dataset_points(*p.dataset), cfg.k, cfg.seed);
    }
    if (cfg.good) {
        p.targets = p.dataset ? assign_good_bad(p.spec(), *p.dataset, p.ext ? &*p.ext : nullptr,
                                                p.clusters ? &*p.clusters : nullptr, *cfg.good, cfg.bad)
                              : detail::system_targets(p.spec(), *cfg.good, cfg.bad);
        for (const auto& w : p.targets->warnings) p.warnings.push_back(w);
        if (p.targets->good.empty()) p.warnings.push_back("good target is empty");
        if (p.targets->bad.empty()) p.warnings.push_back("bad target is empty");
    }
    return p;
}

/// Finite eps values to evaluate: the given grid, else the distinct pair
/// costs, thinned to `grid_cap` evenly spaced ranks (0 and the largest kept).
inline std::vector<CostValue> eps_values(const SystemSpec& spec, const RunConfig& cfg) {
    std::vector<CostValue> v;
    if (cfg.eps_grid) {
        v = *cfg.eps_grid;
        for (CostValue e : v)
            if (!std::isfinite(e) || e < 0) throw std::invalid_argument("eps grid values must be finite and >= 0");
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }
    const auto all = auto_grid(spec);
    if (all.size() <= cfg.grid_cap || cfg.grid_cap < 2) return all;
    for (std::size_t i = 0; i < cfg.grid_cap; ++i) v.push_back(all[i * (all.size() - 1) / (cfg.grid_cap - 1)]);
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// The negative values descending, then the positive ones ascending,
/// optionally framed by (neg, inf) and (pos, inf). Exports stay finite:
/// a CSV debut of "inf" cannot say whether a costly path exists.
inline std::vector<EpsIndex> index_grid(const std::vector<CostValue>& eps, bool with_infinity = false) {
    std::vector<EpsIndex> grid;
    if (with_infinity) grid.push_back(EpsIndex::neg(kInf));
    for (auto it = eps.rbegin(); it != eps.rend(); ++it) grid.push_back(EpsIndex::neg(*it));
    for (CostValue e : eps) grid.push_back(EpsIndex::pos(e));
    if (with_infinity) grid.push_back(EpsIndex::pos(kInf));
    return grid;
}

struct Side {
    std::string name;  // "good" or "bad"
    StateSet target;
};

inline std::vector<Side> target_sides(const Prepared& p) {
    if (!p.targets) throw std::invalid_argument("no targets: set --good (and optionally --bad)");
    std::vector<Side> out;
    if (!p.targets->good.empty()) out.push_back({"good", p.targets->good});
    if (!p.targets->bad.empty()) out.push_back({"bad", p.targets->bad});
    return out;
}

namespace detail {

template <class Job>
Outputs run_jobs(std::vector<Job> jobs) {
    std::vector<std::future<Outputs>> futures;
    for (auto& j : jobs) futures.push_back(std::async(std::launch::async, std::move(j)));
    Outputs all;
    for (auto& f : futures) all.merge(f.get());
    return all;
}

inline std::string stem(const std::string& side, BudgetMode mode) { return side + "_" + std::string(to_string(mode)); }

}  // namespace detail

/// debut_<side>_<budget>.{csv,json,svg}, plus best_track_<side>_<budget>.csv
/// when the input has a best track.
inline Outputs run_debut(const Prepared& p, const RunConfig& cfg) {
    const SystemSpec& spec = p.spec();
    std::vector<std::function<Outputs()>> jobs;
    for (const auto& side : target_sides(p))
        for (BudgetMode mode : cfg.budgets)
            jobs.push_back([&, side, mode] {
                Outputs out;
                const auto field = debut_field(spec, side.target, mode);
                const std::string stem = detail::stem(side.name, mode);
                if (cfg.csv) out["debut_" + stem + ".csv"] = debut_csv(spec, field, mode);
                if (cfg.json) out["debut_" + stem + ".json"] = debut_json(spec, field, mode);
                if (cfg.svg) out["debut_" + stem + ".svg"] = debut_svg(spec, field, "debut to " + side.name + ", " + std::string(to_string(mode)));
                if (p.dataset && !p.dataset->best_track.empty())
                    out["best_track_" + stem + ".csv"] = series_csv(best_track_debut(spec, p.dataset->best_track, field, cfg.metric));
                return out;
            });
    return detail::run_jobs(std::move(jobs));
}

/// Best-track series only.
inline Outputs run_best_track(const Prepared& p, const RunConfig& cfg) {
    if (!p.dataset || p.dataset->best_track.empty()) throw std::invalid_argument("no best track given (--best-track)");
    RunConfig only = cfg;
    only.csv = only.json = only.svg = false;
    return run_debut(p, only);
}

inline Outputs run_cluster(const Prepared& p, const RunConfig& cfg) {
    if (!p.clusters) throw std::invalid_argument("clustering needs --k >= 1 and a track ensemble");
    Outputs out;
    const auto& ca = *p.clusters;
    if (cfg.csv) {
        out["clusters.csv"] = cluster_csv(*p.dataset, ca);
        out["centroids.csv"] = centroid_csv(ca);
    }
    if (cfg.json) {
        nlohmann::json j;
        j["k"] = ca.k;
        j["seed"] = ca.seed;
        j["iterations"] = ca.iterations;
        j["objective"] = ca.objective;
        j["labels"] = ca.labels;
        nlohmann::json c = nlohmann::json::array();
        for (const auto& x : ca.centroids) c.push_back({x[0], x[1]});
        j["centroids"] = std::move(c);
        out["clusters.json"] = j.dump(1) + "\n";
    }
    return out;
}

/// Debut fields, basin tables per side, budget and semantics, and the
/// separation table when the targets split the dead ends.
inline Outputs run_basins(const Prepared& p, const RunConfig& cfg) {
    const SystemSpec& spec = p.spec();
    const auto eps = eps_values(spec, cfg);
    const auto grid = index_grid(eps);
    Outputs all = run_debut(p, cfg);

    std::vector<std::function<Outputs()>> jobs;
    for (const auto& side : target_sides(p))
        for (BudgetMode mode : cfg.budgets)
            for (NegativeSemantics sem : cfg.semantics)
                jobs.push_back([&, side, mode, sem] {
                    BasinTable t{side.name, mode, sem, grid, {}};
                    for (const auto& i : grid) t.members.push_back(basin_at(spec, side.target, i, mode, sem).members);
                    Outputs out;
                    const std::string name = "basins_" + detail::stem(side.name, mode) + "_" + std::string(to_string(sem));
                    if (cfg.csv) out[name + ".csv"] = basin_csv(spec, t);
                    if (cfg.json) out[name + ".json"] = basin_json(t);
                    return out;
                });
    if (p.targets->partitions_dead_ends && !p.targets->good.empty() && !p.targets->bad.empty())
        jobs.push_back([&] {
            std::vector<SeparationRow> rows;
            for (BudgetMode mode : cfg.budgets)
                for (CostValue e : eps) rows.push_back({e, mode, check_separation(spec, p.targets->good, p.targets->bad, e, mode)});
            return Outputs{{"separation.csv", separation_csv(rows)}};
        });
    all.merge(detail::run_jobs(std::move(jobs)));

    nlohmann::json s;
    s["states"] = spec.size();
    s["dead_ends"] = spec.dead_ends().count();
    s["system"] = p.ext ? "timeext-" + std::string(to_string(p.ext->layout())) : p.dataset ? "pointcloud" : "file";
    s["good"] = p.targets->good.count();
    s["bad"] = p.targets->bad.count();
    s["partitions_dead_ends"] = p.targets->partitions_dead_ends;
    nlohmann::json idx = nlohmann::json::array();
    for (const auto& i : grid) idx.push_back(to_string(i));
    s["indices"] = std::move(idx);
    s["warnings"] = p.warnings;
    all["summary.json"] = s.dump(1) + "\n";
    return all;
}

/// Debut plots per side and budget, plus basin plots at every grid index
/// when a grid is given (at -0 and +0 otherwise).
inline Outputs run_export_svg(const Prepared& p, const RunConfig& cfg) {
    RunConfig svg_only = cfg;
    svg_only.csv = svg_only.json = false;
    svg_only.svg = true;
    Outputs out = run_debut(p, svg_only);
    for (auto it = out.begin(); it != out.end();) it = it->first.ends_with(".svg") ? std::next(it) : out.erase(it);
    const SystemSpec& spec = p.spec();
    const std::vector<EpsIndex> grid =
        cfg.eps_grid ? index_grid(eps_values(spec, cfg)) : std::vector<EpsIndex>{EpsIndex::neg(0), EpsIndex::pos(0)};
    std::vector<std::function<Outputs()>> jobs;
    for (const auto& side : target_sides(p))
        for (BudgetMode mode : cfg.budgets)
            jobs.push_back([&, side, mode] {
                Outputs o;
                for (const auto& i : grid) {
                    const auto b = basin_at(spec, side.target, i, mode).members;
                    o["basin_" + detail::stem(side.name, mode) + "_" + to_string(i) + ".svg"] =
                        basin_svg(spec, b, side.name + " basin at " + to_string(i) + ", " + std::string(to_string(mode)));
                }
                return o;
            });
    out.merge(detail::run_jobs(std::move(jobs)));
    return out;
}

struct CheckItem {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct CheckReport {
    std::vector<CheckItem> items;
    bool ok() const {
        return std::all_of(items.begin(), items.end(), [](const auto& i) { return i.passed; });
    }
    std::string text() const {
        std::string out;
        for (const auto& i : items)
            out += std::string(i.passed ? "ok   " : "FAIL ") + i.name + (i.detail.empty() ? "" : ": " + i.detail) + "\n";
        return out;
    }
};

namespace detail {

inline std::string set_text(const SystemSpec& spec, const StateSet& s, std::size_t limit = 8) {
    std::string out;
    std::size_t n = 0;
    for (StateId x : s.members()) {
        if (n++ == limit) return out + " ...";
        out += (out.empty() ? "" : " ") + spec.state(x).label;
    }
    return out;
}

inline CheckItem lemma_item(std::string name, const LemmaReport& r) {
    CheckItem item{std::move(name), r.ok(), std::to_string(r.instances) + " instances"};
    if (!r.skipped.empty()) item.detail += ", " + std::to_string(r.skipped.size()) + " skipped";
    if (!r.ok()) item.detail += "; first violation: " + r.violations.front().lemma + " " + r.violations.front().detail;
    return item;
}

}  // namespace detail

/// Verifies the structural results on the prepared system. The filtration
/// must be nested; it must cover every state exactly when the target meets
/// the image of F or is everything.
inline CheckReport run_check(const Prepared& p, const RunConfig& cfg) {
    const SystemSpec& spec = p.spec();
    CheckReport rep;
    const auto problems = validate_system(spec);
    rep.items.push_back({"system is well formed", problems.empty(), problems.empty() ? "" : problems.front().message});
    const auto eps = eps_values(spec, cfg);
    const auto grid = index_grid(eps, true);
    const StateSet all = StateSet::full(spec.size());
    const StateSet image = spec.image_set();

    std::vector<std::future<std::vector<CheckItem>>> jobs;
    for (const auto& side : target_sides(p)) {
        for (BudgetMode mode : cfg.budgets)
            jobs.push_back(std::async(std::launch::async, [&, side, mode] {
                const auto fc = check_filtration(assemble_filtration(spec, side.target, grid, mode), all);
                const bool predicted = side.target.intersects(image) || side.target == all;
                const bool nested = !fc.offending;
                const bool covers = fc.uncovered.empty();
                CheckItem item{"filtration " + detail::stem(side.name, mode), nested && covers == predicted, ""};
                item.detail = std::string(nested ? "nested" : "not nested") + ", " +
                              (covers ? "covers all states" : "uncovered: " + detail::set_text(spec, fc.uncovered)) +
                              (predicted ? " (covering expected)" : " (target misses the image of F: covering not expected)");
                return std::vector<CheckItem>{item};
            }));
        jobs.push_back(std::async(std::launch::async, [&, side] {
            return std::vector<CheckItem>{
                detail::lemma_item("inclusion lemmas " + side.name, check_inclusion_lemmas(spec, side.target, eps)),
                detail::lemma_item("debut inequalities " + side.name, check_debut_lemmas(spec, side.target))};
        }));
        if (p.ext)
            for (BudgetMode mode : cfg.budgets)
                jobs.push_back(std::async(std::launch::async, [&, side, mode] {
                    std::vector<StateId> a2;
                    for (StateId s : side.target.members())
                        if (p.ext->layer_of(s) == p.ext->window().b) a2.push_back(p.ext->base_of(s));
                    CheckItem item{"layer lemma " + detail::stem(side.name, mode), true, ""};
                    std::size_t identities = 0, skipped = 0;
                    for (CostValue e : eps) {
                        const auto r = check_layer_lemma(*p.ext, a2, e, mode);
                        identities += r.identities;
                        skipped += r.skipped.size();
                        if (!r.ok() && item.passed) item.passed = false, item.detail = r.mismatches.front() + "; ";
                    }
                    item.detail += std::to_string(identities) + " identities, " + std::to_string(skipped) + " skipped";
                    return std::vector<CheckItem>{item};
                }));
    }
    const bool split = p.targets->partitions_dead_ends && !p.targets->good.empty() && !p.targets->bad.empty();
    if (split) {
        for (BudgetMode mode : cfg.budgets)
            jobs.push_back(std::async(std::launch::async, [&, mode] {
                std::vector<CheckItem> items;
                CheckItem sep{"separation " + std::string(to_string(mode)), true, ""};
                std::size_t holds = 0, not_met = 0;
                for (CostValue e : eps) {
                    const auto r = check_separation(spec, p.targets->good, p.targets->bad, e, mode);
                    if (r.verdict == Verdict::Holds) ++holds;
                    if (r.verdict == Verdict::HypothesisNotMet) ++not_met;
                    if (r.verdict == Verdict::Fails && sep.passed)
                        sep.passed = false, sep.detail = "fails at eps=" + format_cost(e) + "; ";
                }
                sep.detail += std::to_string(holds) + " holds, " + std::to_string(not_met) + " hypothesis not met";
                items.push_back(sep);
                const auto cov = check_covering(spec, p.targets->good, p.targets->bad, mode);
                for (const auto& [name, s] : {std::pair{"good", cov.good}, std::pair{"bad", cov.bad}})
                    items.push_back({"covering " + std::string(name) + "_" + std::string(to_string(mode)),
                                     s.verdict != Verdict::Fails,
                                     std::string(to_string(s.verdict)) +
                                         (s.missing.empty() ? "" : ", missing: " + detail::set_text(spec, s.missing))});
                return items;
            }));
    }
    for (auto& j : jobs)
        for (auto& item : j.get()) rep.items.push_back(std::move(item));
    if (!split) rep.items.push_back({"separation and covering", true, "skipped: good and bad do not partition the dead ends"});
    return rep;
}

}  // namespace epsbasin
