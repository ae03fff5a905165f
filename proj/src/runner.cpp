#include "hkflow/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "hkflow/entropy.hpp"
#include "hkflow/errors.hpp"
#include "hkflow/flow.hpp"
#include "hkflow/harness.hpp"
#include "hkflow/io.hpp"
#include "hkflow/mesh.hpp"
#include "hkflow/profiles.hpp"

namespace hk::runner {

namespace fs = std::filesystem;

namespace {

struct Context {
    json config;
    std::string command;
    fs::path out_dir;
    std::uint64_t seed = 0;
    int jobs = 1;
    json outputs = json::object();  // file names written by the command
    json reports = json::object();  // command payload for the summary
};

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
    os << content;
}

template <typename Fn>
void write_stream(Context& ctx, const std::string& name, Fn&& fn) {
    std::ostringstream os;
    fn(os);
    write_text(ctx.out_dir / name, os.str());
    ctx.outputs[name] = name;
}

const json& need(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("config is missing \"" + key + "\" in " + where);
    return j.at(key);
}

Grid parse_grid(const Context& ctx) { return grid_from_json(need(ctx.config, "grid", "root")); }

Field parse_steady(const Context& ctx, const Grid& grid) {
    Field steady = build_density(grid, builder_from_json(need(ctx.config, "steady", "root")));
    for (double v : steady.values)
        if (!(v > 0.0)) throw DomainError("steady builder produced a nonpositive cell");
    return steady;
}

Field parse_initial(const Context& ctx, const Grid& grid, const Field& steady) {
    if (!ctx.config.contains("initial")) return steady;
    return build_density(grid, builder_from_json(ctx.config.at("initial")), &steady);
}

std::vector<PsiSpec> parse_monitors(const Context& ctx) {
    const json& j = need(ctx.config, "psi", "root");
    std::vector<PsiSpec> out;
    if (j.is_array()) {
        for (const json& e : j) out.push_back(psi_from_json(e));
    } else {
        out.push_back(psi_from_json(j));
    }
    if (out.empty()) throw ConfigError("\"psi\" must name at least one entropy");
    return out;
}

FlowConfig parse_flow(const Context& ctx, const Grid& grid, const Field& steady,
                      const Field& initial) {
    FlowConfig cfg;
    cfg.g = g_from_json(need(ctx.config, "g", "root"));
    cfg.monitors = parse_monitors(ctx);
    cfg.grid = grid;
    cfg.steady = steady;
    cfg.initial = initial;
    const json flow = ctx.config.value("flow", json::object());
    cfg.mode = flow_mode_from_string(flow.value("mode", std::string("full")));
    cfg.t_end = flow.value("t_end", 1.0);
    cfg.cfl = flow.value("cfl", 0.45);
    cfg.snapshot_every = flow.value("snapshot_every", 1);
    cfg.store_snapshots = flow.value("store_snapshots", true);
    return cfg;
}

json fit_or_note(const std::vector<double>& times, const std::vector<double>& series,
                 double floor, double margin) {
    try {
        return to_json(decay_fit(times, series, floor, margin));
    } catch (const DomainError& e) {
        return json{{"skipped", e.what()}};
    }
}

// --- commands ---------------------------------------------------------------

int cmd_validate(Context& ctx) {
    const GSpec g = g_from_json(need(ctx.config, "g", "root"));
    const std::vector<PsiSpec> psis = parse_monitors(ctx);
    json all = json::array();
    bool pass = true;
    for (const PsiSpec& psi : psis) {
        ValidationReport report = validate_pair(g, psi, default_validation_sample());
        pass = pass && report.all_pass();
        json entry = to_json(report);
        entry["g"] = to_json(g);
        entry["psi"] = to_json(psi);
        all.push_back(entry);
    }
    write_stream(ctx, "validation.json", [&](std::ostream& os) { os << all.dump(2) << '\n'; });
    ctx.reports["validation"] = all;
    return pass ? 0 : 2;
}

int cmd_simulate(Context& ctx, bool store_outputs = true) {
    const Grid grid = parse_grid(ctx);
    const Field steady = parse_steady(ctx, grid);
    const Field initial = parse_initial(ctx, grid, steady);
    FlowConfig cfg = parse_flow(ctx, grid, steady, initial);

    Trajectory traj = simulate(cfg);

    if (store_outputs) {
        write_stream(ctx, "grid.json",
                     [&](std::ostream& os) { os << to_json(grid).dump(2) << '\n'; });
        write_stream(ctx, "steady.csv", [&](std::ostream& os) { write_field_csv(steady, os); });
        write_stream(ctx, "series.csv", [&](std::ostream& os) { write_series_csv(traj, os); });
        for (const auto& [step, field] : traj.snapshots) {
            write_stream(ctx, "snap_" + std::to_string(step) + ".csv",
                         [&](std::ostream& os) { write_field_csv(field, os); });
        }
    }

    const json decay_cfg = ctx.config.value("decay", json::object());
    const double margin = decay_cfg.value("margin", 0.05);
    const double floor_rel = decay_cfg.value("entropy_floor_rel", 1e-12);
    json fits = json::array();
    for (std::size_t m = 0; m < traj.entropy_series.size(); ++m) {
        const double floor = floor_rel * traj.entropy_series[m].front();
        fits.push_back(fit_or_note(traj.times, traj.entropy_series[m], floor, margin));
    }
    ctx.reports["fits"] = fits;
    ctx.reports["steps"] = traj.steps;
    ctx.reports["clamp_events"] = traj.clamp_events;
    ctx.reports["clamped_mass_total"] = traj.clamped_mass_total;
    ctx.reports["final_mass"] = traj.mass_series.back();
    return 0;
}

InequalityCase parse_case(const Context& ctx) {
    const json& jc = need(ctx.config, "case", "root");
    const IneqName name = ineq_name_from_string(need(jc, "name", "case").get<std::string>());
    switch (name) {
        case IneqName::eep:
            return eep_case(g_from_json(need(ctx.config, "g", "root")), parse_monitors(ctx).front());
        case IneqName::eep_band: {
            const json& band = need(jc, "band", "case");
            return eep_band_case(g_from_json(need(ctx.config, "g", "root")),
                                 parse_monitors(ctx).front(), band.at(0).get<double>(),
                                 band.at(1).get<double>());
        }
        case IneqName::beckner_classical:
            return beckner_classical_case(need(jc, "p", "case").get<double>());
        case IneqName::beckner_hellinger:
            return beckner_hellinger_case(need(jc, "p", "case").get<double>());
        case IneqName::porous_variant:
            return porous_variant_case(need(jc, "alpha", "case").get<double>(),
                                       need(jc, "p", "case").get<double>());
        case IneqName::porous_log_variant:
            return porous_log_variant_case(need(jc, "alpha", "case").get<double>());
        case IneqName::arctan_logsob:
            return arctan_logsob_case();
    }
    throw ConfigError("unhandled inequality name");
}

int cmd_inequality(Context& ctx) {
    const Grid grid = parse_grid(ctx);
    const Field steady = parse_steady(ctx, grid);
    const Field rho = parse_initial(ctx, grid, steady);
    const InequalityCase c = parse_case(ctx);

    IneqReport rep = inequality_report(c, rho, steady);
    json params{{"g", to_json(c.g)}, {"psi", to_json(c.psi)}};
    if (c.name == IneqName::eep_band) params["band"] = json::array({c.band_alpha, c.band_beta});
    const json report = to_json(rep, to_string(c.name), params);

    write_stream(ctx, "inequality.json",
                 [&](std::ostream& os) { os << report.dump(2) << '\n'; });
    ctx.reports["inequality"] = report;

    const double cap = ctx.config.value("ratio_cap", std::numeric_limits<double>::infinity());
    if (std::isinf(rep.ratio) || rep.ratio > cap) return 3;
    return 0;
}

int cmd_counterexample(Context& ctx) {
    const json& jc = need(ctx.config, "counterexample", "root");
    const Grid grid = parse_grid(ctx);

    SequenceSpec spec;
    spec.kind = sequence_kind_from_string(need(jc, "kind", "counterexample").get<std::string>());
    for (const json& v : need(jc, "range", "counterexample")) spec.range.push_back(v.get<double>());
    spec.base_resolution = jc.value("base_resolution", grid.n);
    spec.domain = grid.kind;
    spec.g = g_from_json(need(ctx.config, "g", "root"));
    spec.psi = parse_monitors(ctx).front();
    spec.steady_builder = builder_from_json(need(ctx.config, "steady", "root"));
    spec.x0 = jc.value("x0", 0.25);
    spec.x1 = jc.value("x1", 0.75);

    const std::vector<SequenceRow> rows = counterexample_sequence(spec);
    write_stream(ctx, "sequence.csv", [&](std::ostream& os) { write_sequence_csv(rows, os); });

    json summary{{"kind", to_string(spec.kind)}, {"rows", rows.size()}};
    if (spec.kind == SequenceKind::hellinger_gap && rows.size() >= 4) {
        std::vector<double> params, entropies, prods;
        for (const SequenceRow& r : rows) {
            params.push_back(r.param);
            entropies.push_back(r.entropy);
            prods.push_back(r.production_h);
        }
        summary["slope_entropy"] = rate_fit_loglog(params, entropies);
        summary["slope_production_h"] = rate_fit_loglog(params, prods);
    }
    ctx.reports["sequence"] = summary;
    return 0;
}

int cmd_sweep(Context& ctx) {
    const Grid grid = parse_grid(ctx);
    const Field steady = parse_steady(ctx, grid);
    const GSpec g = g_from_json(need(ctx.config, "g", "root"));
    const PsiSpec psi = parse_monitors(ctx).front();

    const json js = ctx.config.value("sweep", json::object());
    const int count = js.value("count", 20);
    if (count < 1) throw ConfigError("sweep count must be >= 1");
    std::vector<DensityBuilder> family;
    family.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        DensityBuilder b;
        b.kind = BuilderKind::trig_random;
        b.normalize = true;
        b.seed = ctx.seed + static_cast<std::uint64_t>(i);
        b.modes = js.value("modes", 3);
        b.amplitude = js.value("amplitude", 0.5);
        family.push_back(b);
    }

    SweepResult res = eep_sweep(family, g, psi, grid, steady, js.value("mass_floor", 0.5),
                                js.value("entropy_cap", 5.0), ctx.jobs);

    json out{{"admitted", res.admitted},
             {"worst_index", res.worst_index},
             {"worst_entropy", res.worst_entropy},
             {"worst_production", res.worst_production},
             {"skipped", res.skipped},
             {"has_infinite", res.has_infinite}};
    if (std::isinf(res.empirical_c))
        out["empirical_C_U"] = "inf";
    else
        out["empirical_C_U"] = res.empirical_c;
    write_stream(ctx, "sweep.json", [&](std::ostream& os) { os << out.dump(2) << '\n'; });
    ctx.reports["sweep"] = out;

    if (res.has_infinite) {
        std::cerr << "sweep found a member with positive entropy and zero production"
                  << " (index " << res.worst_index << ")\n";
        return 3;
    }
    return 0;
}

int cmd_decay(Context& ctx) {
    const json decay_cfg = ctx.config.value("decay", json::object());
    const double margin = decay_cfg.value("margin", 0.05);
    const double floor_rel = decay_cfg.value("entropy_floor_rel", 1e-12);

    json fits = json::array();
    if (decay_cfg.contains("series")) {
        const std::string path = decay_cfg.at("series").get<std::string>();
        std::ifstream is(path, std::ios::binary);
        if (!is) throw ConfigError("cannot open series file: " + path);
        const SeriesTable table = read_series_csv(is);
        for (const auto& column : table.entropy) {
            const double floor = column.empty() ? 0.0 : floor_rel * column.front();
            fits.push_back(fit_or_note(table.times, column, floor, margin));
        }
    } else {
        const int rc = cmd_simulate(ctx, /*store_outputs=*/false);
        if (rc != 0) return rc;
        fits = ctx.reports.at("fits");
    }
    ctx.reports["fits"] = fits;
    write_stream(ctx, "decay.json", [&](std::ostream& os) { os << fits.dump(2) << '\n'; });
    return 0;
}

}  // namespace

json load_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

void apply_override(json& config, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like key.path=value: " + assignment);
    std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    for (char& c : path)
        if (c == '.') c = '/';
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;  // unquoted strings pass through verbatim
    }
    try {
        config[json::json_pointer("/" + path)] = value;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("cannot apply override ") + assignment + ": " + e.what());
    }
}

int execute(json config, int jobs) {
    const auto t_start = std::chrono::steady_clock::now();

    Context ctx;
    ctx.config = config;
    ctx.command = need(config, "command", "root").get<std::string>();
    ctx.seed = config.value("seed", std::uint64_t{0});
    ctx.jobs = std::max(1, jobs);

    std::string out_dir = config.value("output_dir", std::string{});
    if (out_dir.empty()) {
        if (const char* env = std::getenv("HKFLOW_OUTPUT_DIR")) out_dir = env;
    }
    if (out_dir.empty()) out_dir = ".";
    ctx.out_dir = out_dir;
    fs::create_directories(ctx.out_dir);

    int rc;
    try {
        if (ctx.command == "validate")
            rc = cmd_validate(ctx);
        else if (ctx.command == "simulate")
            rc = cmd_simulate(ctx);
        else if (ctx.command == "inequality")
            rc = cmd_inequality(ctx);
        else if (ctx.command == "counterexample")
            rc = cmd_counterexample(ctx);
        else if (ctx.command == "sweep")
            rc = cmd_sweep(ctx);
        else if (ctx.command == "decay")
            rc = cmd_decay(ctx);
        else
            throw ConfigError("unknown command: " + ctx.command);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    json summary{{"command", ctx.command},
                 {"config", ctx.config},
                 {"exit_code", rc},
                 {"outputs", ctx.outputs},
                 {"reports", ctx.reports},
                 {"wall_clock_seconds", wall}};
    if (ctx.config.contains("grid")) {
        try {
            summary["grid"] = to_json(parse_grid(ctx));
        } catch (...) {
        }
    }
    write_text(ctx.out_dir / "summary.json", summary.dump(2) + "\n");
    return rc;
}

int run(const std::string& config_path, const std::string& command,
        const std::vector<std::string>& overrides, int jobs) {
    try {
        json config = load_config(config_path);
        for (const std::string& o : overrides) apply_override(config, o);
        if (!command.empty()) config["command"] = command;
        return execute(std::move(config), jobs);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const FalsifiedInequality& e) {
        std::cerr << "falsified inequality: " << e.what() << '\n';
        return 3;
    } catch (const SolverAbort& e) {
        std::cerr << "solver abort: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace hk::runner
