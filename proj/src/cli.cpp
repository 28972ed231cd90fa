#include "dmxci/cli.hpp"

#include "dmxci/campaign.hpp"
#include "dmxci/config.hpp"
#include "dmxci/csvio.hpp"
#include "dmxci/errors.hpp"
#include "dmxci/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <thread>

namespace dmxci {

namespace {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("DMXCI_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

AppConfig config_for(const CommonOpts& opts, bool allow_default) {
    AppConfig cfg;
    if (opts.config_path.empty()) {
        if (!allow_default) throw ConfigError("a --config file is required");
        cfg = default_config();
    } else {
        cfg = load_config(opts.config_path);
    }
    if (opts.seed_set) cfg.campaign.seed = opts.seed;
    if (!opts.scale.empty()) {
        parse_scale(opts.scale);
        cfg.campaign.scale = opts.scale;
    }
    if (!opts.out_dir.empty()) cfg.output.directory = opts.out_dir;
    return cfg;
}

std::string out_path(const AppConfig& cfg, const std::string& suffix) {
    std::filesystem::create_directories(cfg.output.directory);
    return (std::filesystem::path(cfg.output.directory) / (cfg.output.prefix + suffix))
        .string();
}

Provenance provenance_of(const AppConfig& cfg) {
    return Provenance{config_hash(cfg), cfg.campaign.seed};
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

} // namespace

int cmd_run(const CommonOpts& opts, const std::string& mode, const std::string& snapshot_dir) {
    return guarded([&] {
        const AppConfig cfg = config_for(opts, false);
        std::vector<TraceMode> modes;
        if (mode == "all")
            modes = {TraceMode::cumulative, TraceMode::intrinsic, TraceMode::ign};
        else
            modes = {trace_mode_from_name(mode)};

        std::vector<ScenarioSpec> specs;
        for (TraceMode m : modes) {
            ScenarioSpec spec = scenario_from_config(cfg, m);
            if (!snapshot_dir.empty() && m == TraceMode::cumulative) {
                std::filesystem::create_directories(snapshot_dir);
                spec.snapshot_dir = snapshot_dir;
            }
            specs.push_back(std::move(spec));
        }
        CampaignResult result = run_scenarios(specs, resolve_workers(opts.workers));
        if (!result.errors.empty())
            throw NumericError(result.errors.front().id + ": " +
                               result.errors.front().message);

        const Provenance prov = provenance_of(cfg);
        write_trace_csv(out_path(cfg, "_traces.csv"), result.traces, prov);
        write_summary_json(out_path(cfg, "_summary.json"), result, prov);
        std::cout << "wrote " << out_path(cfg, "_traces.csv") << "\n";
    });
}

int cmd_matrix(const CommonOpts& opts) {
    return guarded([&] {
        const AppConfig cfg = config_for(opts, true);
        const MatrixParams params = matrix_from_config(cfg);
        CampaignResult result = run_paper_matrix(params, resolve_workers(opts.workers));

        const Provenance prov = provenance_of(cfg);
        write_trace_csv(out_path(cfg, "_traces.csv"), result.traces, prov);
        write_scatter_csv(out_path(cfg, "_scatter.csv"), result.correlations, prov);
        write_summary_json(out_path(cfg, "_summary.json"), result, prov);
        for (const auto& e : result.errors)
            std::cerr << "scenario " << e.id << " failed: " << e.message << "\n";
        if (!result.errors.empty())
            throw NumericError(std::to_string(result.errors.size()) +
                               " matrix scenario(s) failed");
        std::cout << "wrote " << out_path(cfg, "_traces.csv") << "\n";
    });
}

int cmd_gn(const CommonOpts& opts) {
    return guarded([&] {
        const AppConfig cfg = config_for(opts, false);
        ScenarioSpec spec = scenario_from_config(cfg, TraceMode::ign);
        XciTrace trace = run_scenario(spec);
        const Provenance prov = provenance_of(cfg);
        write_trace_csv(out_path(cfg, "_ign.csv"), {trace}, prov);
        std::cout << "wrote " << out_path(cfg, "_ign.csv") << "\n";
    });
}

int cmd_dispersion_map(const CommonOpts& opts) {
    return guarded([&] {
        const AppConfig cfg = config_for(opts, false);
        const LinkSegment segment = build_segment(cfg.segment);
        write_dispersion_map_csv(out_path(cfg, "_dispmap.csv"), segment, provenance_of(cfg));
        std::cout << "wrote " << out_path(cfg, "_dispmap.csv") << "\n";
    });
}

int cmd_scatter(const CommonOpts& opts, const std::string& traces_path) {
    return guarded([&] {
        const AppConfig cfg = config_for(opts, false);
        const TraceFile file = read_trace_csv(traces_path);

        const LinkSegment segment = build_segment(cfg.segment);
        const SpanParams& first_span = cfg.segment.ols.front().span;
        const double baud_hz = cfg.channels.baud_rate_gbaud * 1e9;
        const double f_ref = cfg.channels.cut_freq_thz * 1e12;

        std::vector<CorrelationRecord> records;
        for (const auto& t : file.traces) {
            if (t.mode != TraceMode::cumulative) continue;
            const XciTrace* intr = nullptr;
            for (const auto& u : file.traces)
                if (u.scenario_id == t.scenario_id && u.mode == TraceMode::intrinsic)
                    intr = &u;
            if (!intr)
                throw ConfigError("scenario '" + t.scenario_id +
                                  "' has no intrinsic trace; cannot extract correlations");
            if (t.points.size() != segment.span_count() ||
                intr->points.size() != segment.span_count())
                throw ConfigError("scenario '" + t.scenario_id +
                                  "' span count does not match the configured segment");

            CorrelationRecord rec;
            rec.id = t.scenario_id;
            rec.d_fiber_ps_nm_km = first_span.dispersion_ps_nm_km;
            rec.d_res_ps_nm = cfg.segment.d_res_ps_nm;
            rec.pump_multiple = cfg.channels.pump_grid_multiple;
            rec.baud_gbaud = cfg.channels.baud_rate_gbaud;
            std::vector<double> sigma2;
            for (const auto& p : intr->points) sigma2.push_back(p.p_xci_w);
            rec.set.sigma2_w = sigma2;
            rec.set.c_lag = extract_c_lags(t.delta_w(), sigma2);
            rec.theta_eff_value = theta_eff(first_span, baud_hz, f_ref);
            for (std::size_t lag = 1; lag <= rec.set.c_lag.size(); ++lag)
                rec.set.theta_ratio.push_back(
                    theta_span(segment, lag + 1, 1, baud_hz, f_ref) / rec.theta_eff_value);
            records.push_back(std::move(rec));
        }
        if (records.empty())
            throw ConfigError("no cumulative traces found in " + traces_path);
        write_scatter_csv(out_path(cfg, "_scatter.csv"), records,
                          Provenance{config_hash(cfg), file.prov.seed});
        std::cout << "wrote " << out_path(cfg, "_scatter.csv") << "\n";
    });
}

int cmd_analyze(const CommonOpts& opts, const std::string& traces_path) {
    return guarded([&] {
        const AppConfig cfg = config_for(opts, true);
        const TraceFile file = read_trace_csv(traces_path);
        CampaignResult result;
        result.traces = file.traces;
        write_summary_json(out_path(cfg, "_summary.json"), result, file.prov);
        std::cout << "wrote " << out_path(cfg, "_summary.json") << "\n";
    });
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"dispersion-managed XCI accumulation simulator"};
    app.set_version_flag("--version", std::string("dmxci ") + kVersion);
    app.require_subcommand(1);

    CommonOpts opts;
    std::string mode = "all";
    std::string snapshot_dir;
    std::string traces_path;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", opts.config_path, "JSON config file");
        if (config_required) c->required();
        sub->add_option("--out", opts.out_dir, "output directory override");
        sub->add_option("--seed", opts.seed, "master seed override")
            ->each([&](const std::string&) { opts.seed_set = true; });
        sub->add_option("--scale", opts.scale, "desk or full");
        sub->add_option("--workers", opts.workers, "worker thread count");
    };

    CLI::App* run = app.add_subcommand("run", "run the configured scenario");
    add_common(run, true);
    run->add_option("--mode", mode, "all, cumulative, intrinsic or ign");
    run->add_option("--snapshot-dir", snapshot_dir, "dump per-tap field snapshots here");

    CLI::App* matrix = app.add_subcommand("matrix", "run the full experiment matrix");
    add_common(matrix, false);

    CLI::App* gn = app.add_subcommand("gn", "emit the incoherent GN trace only");
    add_common(gn, true);

    CLI::App* dmap = app.add_subcommand("dispersion-map", "emit the accumulated dispersion map");
    add_common(dmap, true);

    CLI::App* scatter = app.add_subcommand("scatter", "correlation scatter from trace CSVs");
    add_common(scatter, true);
    scatter->add_option("--traces", traces_path, "trace CSV with cumulative+intrinsic modes")
        ->required();

    CLI::App* analyze = app.add_subcommand("analyze", "summarize existing trace CSVs");
    add_common(analyze, false);
    analyze->add_option("--traces", traces_path, "trace CSV to analyze")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (run->parsed()) return cmd_run(opts, mode, snapshot_dir);
    if (matrix->parsed()) return cmd_matrix(opts);
    if (gn->parsed()) return cmd_gn(opts);
    if (dmap->parsed()) return cmd_dispersion_map(opts);
    if (scatter->parsed()) return cmd_scatter(opts, traces_path);
    if (analyze->parsed()) return cmd_analyze(opts, traces_path);
    return kExitConfig;
}

} // namespace dmxci
