#include "dmxci/campaign.hpp"

#include "dmxci/errors.hpp"
#include "dmxci/prbs.hpp"
#include "dmxci/units.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace dmxci {

std::size_t symbols_for_scale(Scale scale) {
    return scale == Scale::desk ? (1u << 13) : (1u << 16);
}

PrbsSeeds derive_seeds(std::uint64_t master_seed, int prbs_degree) {
    const std::uint64_t mod = (1ull << prbs_degree) - 1;
    std::uint64_t state = master_seed;
    auto draw = [&]() { return static_cast<std::uint32_t>(splitmix64(state) % mod + 1); };
    PrbsSeeds s;
    s.cut_x = draw();
    s.cut_y = draw();
    s.pump_x = draw();
    s.pump_y = draw();
    return s;
}

namespace {

struct MeasureAllSink : TapSink {
    const ChannelPlan& plan;
    const SymbolReference& ref;
    const RxConfig& rx;
    std::vector<XciMeasurement> taps;

    MeasureAllSink(const ChannelPlan& p, const SymbolReference& r, const RxConfig& c)
        : plan(p), ref(r), rx(c) {}
    void on_tap(std::size_t, const SampledField& field, double acc) override {
        taps.push_back(measure_xci(field, plan, ref, acc, rx));
    }
};

struct MeasureOneSink : TapSink {
    const ChannelPlan& plan;
    const SymbolReference& ref;
    const RxConfig& rx;
    std::size_t wanted;
    XciMeasurement result;

    MeasureOneSink(const ChannelPlan& p, const SymbolReference& r, const RxConfig& c,
                   std::size_t stage)
        : plan(p), ref(r), rx(c), wanted(stage) {}
    void on_tap(std::size_t stage, const SampledField& field, double acc) override {
        if (stage == wanted) result = measure_xci(field, plan, ref, acc, rx);
    }
};

XciTrace run_ssfm_scenario(const ScenarioSpec& spec, const ChannelPlan& plan, double fs) {
    const std::size_t n = spec.segment.span_count();
    const double f_ref = plan.cut_freq_hz();
    const WdmSignal wdm = build_wdm(plan, spec.n_symbols, fs);

    // Kerr-off pass: defines the per-tap measurement floor.
    MeasureAllSink floor_sink(plan, wdm.reference, spec.rx);
    {
        SampledField f = wdm.field;
        run_link(f, spec.segment, mask_all(n, false), spec.policy, f_ref, floor_sink);
    }

    XciTrace trace;
    trace.scenario_id = spec.id;
    trace.mode = spec.mode;
    trace.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        trace.points[i].span_index = i + 1;
        trace.points[i].floor_snr_db = floor_sink.taps[i].snr_xci_db;
    }

    if (spec.mode == TraceMode::cumulative) {
        struct SnapshotSink : TapSink {
            MeasureAllSink& inner;
            const std::string& dir;
            const std::string& id;
            SnapshotSink(MeasureAllSink& s, const std::string& d, const std::string& i)
                : inner(s), dir(d), id(i) {}
            void on_tap(std::size_t stage, const SampledField& field, double acc) override {
                inner.on_tap(stage, field, acc);
                if (!dir.empty()) {
                    char name[32];
                    std::snprintf(name, sizeof(name), "_tap%03zu.dmxf", stage + 1);
                    write_field_snapshot(dir + "/" + id + name, field);
                }
            }
        };
        SampledField f = wdm.field;
        MeasureAllSink sink(plan, wdm.reference, spec.rx);
        SnapshotSink snap(sink, spec.snapshot_dir, spec.id);
        run_link(f, spec.segment, mask_all(n, true), spec.policy, f_ref, snap);
        for (std::size_t i = 0; i < n; ++i) {
            trace.points[i].snr_xci_db = sink.taps[i].snr_xci_db;
            trace.points[i].p_xci_w = sink.taps[i].p_xci_w;
        }
        const GradientResult grad = gradient(trace.cumulative_w());
        for (std::size_t i = 0; i < n; ++i) trace.points[i].delta_p_w = grad.delta_w[i];
    } else {
        // Intrinsic: Kerr on one span at a time; the post-tap line is linear
        // and exactly undone by the later CDC, so each run stops at its tap.
        for (std::size_t i = 0; i < n; ++i) {
            SampledField f = wdm.field;
            MeasureOneSink sink(plan, wdm.reference, spec.rx, i);
            run_link(f, spec.segment, mask_single(n, i), spec.policy, f_ref, sink, i);
            trace.points[i].snr_xci_db = sink.result.snr_xci_db;
            trace.points[i].p_xci_w = sink.result.p_xci_w;
            trace.points[i].delta_p_w = sink.result.p_xci_w;
        }
    }
    return trace;
}

XciTrace run_ign_scenario(const ScenarioSpec& spec, const ChannelPlan& plan) {
    const auto ign = xci_incoherent_trace(spec.segment, plan, spec.gn.base_grid,
                                          spec.gn.max_refinements, spec.gn.tolerance_db);
    XciTrace trace;
    trace.scenario_id = spec.id;
    trace.mode = TraceMode::ign;
    trace.points.resize(ign.size());
    const double p_cut = dbm_to_watt(plan.cut_power_dbm);
    for (std::size_t i = 0; i < ign.size(); ++i) {
        trace.points[i].span_index = ign[i].span_index;
        trace.points[i].p_xci_w = ign[i].p_cum_w;
        trace.points[i].delta_p_w = ign[i].p_span_w;
        trace.points[i].snr_xci_db = linear_to_db(p_cut / ign[i].p_cum_w);
        trace.points[i].floor_snr_db = std::nan("");
    }
    return trace;
}

} // namespace

XciTrace run_scenario(const ScenarioSpec& spec) {
    if (spec.segment.span_count() == 0) throw ConfigError("scenario has an empty segment");
    ChannelPlan plan = spec.plan;
    plan.seeds = derive_seeds(spec.master_seed, plan.prbs_degree);
    plan.validate();
    if (spec.mode == TraceMode::ign) return run_ign_scenario(spec, plan);
    const double fs = spec.sample_rate_hz > 0.0 ? spec.sample_rate_hz
                                                : default_sample_rate_hz(plan);
    return run_ssfm_scenario(spec, plan, fs);
}

CampaignResult run_scenarios(const std::vector<ScenarioSpec>& specs, int workers) {
    CampaignResult result;
    result.traces.resize(specs.size());
    std::vector<std::string> errors(specs.size());

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) return;
            try {
                result.traces[i] = run_scenario(specs[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    const int n_workers = std::max(1, workers);
    if (n_workers == 1 || specs.size() <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < specs.size(); ++i)
        if (!errors[i].empty()) result.errors.push_back({specs[i].id, errors[i]});
    return result;
}

namespace {

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

LinkSegment two_ols_segment(const MatrixParams& p, double d1, double d2, double d_res) {
    SpanParams s1{p.span_length_km, p.loss_db_per_km, d1, p.gamma_per_w_km};
    SpanParams s2{p.span_length_km, p.loss_db_per_km, d2, p.gamma_per_w_km};
    LinkSegment seg;
    append_ols(seg, "OLS1", p.ols1_spans, s1, d_res);
    append_ols(seg, "OLS2", p.ols2_spans, s2, d_res);
    return seg;
}

LinkSegment ols2_only_segment(const MatrixParams& p, double d2, double d_res) {
    SpanParams s2{p.span_length_km, p.loss_db_per_km, d2, p.gamma_per_w_km};
    LinkSegment seg;
    append_ols(seg, "OLS2", p.ols2_spans, s2, d_res);
    return seg;
}

ChannelPlan matrix_plan(const MatrixParams& p, int pump_multiple) {
    ChannelPlan plan;
    plan.cut_freq_thz = p.cut_freq_thz;
    plan.grid_spacing_ghz = p.grid_spacing_ghz;
    plan.pump_offset_ghz = pump_multiple * p.grid_spacing_ghz;
    plan.baud_rate_gbaud = p.baud_rate_gbaud;
    plan.cut_power_dbm = p.cut_power_dbm;
    plan.pump_power_dbm = p.pump_power_dbm;
    plan.predistortion_ps_nm = p.predistortion_ps_nm;
    plan.rolloff = p.rolloff;
    plan.prbs_degree = p.prbs_degree;
    return plan;
}

ScenarioSpec base_spec(const MatrixParams& p) {
    ScenarioSpec spec;
    spec.n_symbols = symbols_for_scale(p.scale);
    spec.policy = p.policy;
    spec.rx = p.rx;
    spec.gn = p.gn;
    spec.master_seed = p.seed;
    return spec;
}

const XciTrace* find_trace(const CampaignResult& result, const std::string& id,
                           TraceMode mode) {
    for (const auto& t : result.traces)
        if (t.scenario_id == id && t.mode == mode && !t.points.empty()) return &t;
    return nullptr;
}

} // namespace

std::vector<ScenarioSpec> paper_matrix_scenarios(const MatrixParams& params) {
    std::vector<ScenarioSpec> specs;
    for (double d1 : params.d_values) {
        const double d2 = (d1 == params.d_values.front() && params.d_values.size() == 2)
                              ? params.d_values.back()
                              : params.d_values.front();
        for (double d_res : params.d_res_values) {
            const std::string base = "d" + fmt_num(d1) + "d" + fmt_num(d2) + "_res" +
                                     fmt_num(d_res) + "_rs" + fmt_num(params.baud_rate_gbaud);

            ScenarioSpec seg = base_spec(params);
            seg.segment = two_ols_segment(params, d1, d2, d_res);
            seg.plan = matrix_plan(params, 2);
            seg.id = base + "_p2_seg";
            seg.mode = TraceMode::cumulative;
            specs.push_back(seg);
            seg.mode = TraceMode::intrinsic;
            specs.push_back(seg);
            seg.mode = TraceMode::ign;
            specs.push_back(seg);

            ScenarioSpec red = base_spec(params);
            red.segment = ols2_only_segment(params, d2, d_res);
            red.plan = matrix_plan(params, 2);
            red.id = base + "_p2_ols2";
            red.mode = TraceMode::cumulative;
            specs.push_back(red);

            ScenarioSpec red4 = base_spec(params);
            red4.segment = ols2_only_segment(params, d2, d_res);
            red4.plan = matrix_plan(params, 4);
            red4.id = base + "_p4_ols2";
            red4.mode = TraceMode::cumulative;
            specs.push_back(red4);
            red4.mode = TraceMode::intrinsic;
            specs.push_back(red4);
        }
    }
    return specs;
}

CampaignResult run_paper_matrix(const MatrixParams& params, int workers) {
    const std::vector<ScenarioSpec> specs = paper_matrix_scenarios(params);
    CampaignResult result = run_scenarios(specs, workers);

    // Coherency extraction on the periodic (OLS2-only) cumulative traces.
    // At pump multiple 2 the intrinsic powers come from the full-segment green
    // line restricted to the OLS2 spans; at multiple 4 from the dedicated run.
    for (double d1 : params.d_values) {
        const double d2 = (d1 == params.d_values.front() && params.d_values.size() == 2)
                              ? params.d_values.back()
                              : params.d_values.front();
        for (double d_res : params.d_res_values) {
            const std::string base = "d" + fmt_num(d1) + "d" + fmt_num(d2) + "_res" +
                                     fmt_num(d_res) + "_rs" + fmt_num(params.baud_rate_gbaud);
            const LinkSegment seg2 = ols2_only_segment(params, d2, d_res);
            const SpanParams span2{params.span_length_km, params.loss_db_per_km, d2,
                                   params.gamma_per_w_km};

            struct Pairing {
                std::string cum_id;
                std::string intr_id;
                std::size_t intr_first; // 0-based offset into the intrinsic trace
                int pump_multiple;
            };
            const Pairing pairings[2] = {
                {base + "_p2_ols2", base + "_p2_seg", params.ols1_spans, 2},
                {base + "_p4_ols2", base + "_p4_ols2", 0, 4},
            };

            for (const auto& pair : pairings) {
                const XciTrace* cum = find_trace(result, pair.cum_id, TraceMode::cumulative);
                const XciTrace* intr = find_trace(result, pair.intr_id, TraceMode::intrinsic);
                if (!cum || !intr) continue;
                if (intr->points.size() < pair.intr_first + cum->points.size()) continue;
                std::vector<double> sigma2;
                sigma2.reserve(cum->points.size());
                for (std::size_t i = 0; i < cum->points.size(); ++i)
                    sigma2.push_back(intr->points[pair.intr_first + i].p_xci_w);
                try {
                    CorrelationRecord rec;
                    rec.id = pair.cum_id;
                    rec.d_fiber_ps_nm_km = d2;
                    rec.d_res_ps_nm = d_res;
                    rec.pump_multiple = pair.pump_multiple;
                    rec.baud_gbaud = params.baud_rate_gbaud;
                    rec.set.sigma2_w = sigma2;
                    rec.set.c_lag = extract_c_lags(cum->delta_w(), sigma2);
                    const double baud_hz = params.baud_rate_gbaud * 1e9;
                    const double f_ref = params.cut_freq_thz * 1e12;
                    rec.theta_eff_value = theta_eff(span2, baud_hz, f_ref);
                    rec.set.theta_ratio.reserve(rec.set.c_lag.size());
                    for (std::size_t lag = 1; lag <= rec.set.c_lag.size(); ++lag)
                        rec.set.theta_ratio.push_back(
                            theta_span(seg2, lag + 1, 1, baud_hz, f_ref) /
                            rec.theta_eff_value);
                    result.correlations.push_back(std::move(rec));
                } catch (const std::exception& e) {
                    result.errors.push_back({pair.cum_id + ":extract", e.what()});
                }
            }
        }
    }
    return result;
}

} // namespace dmxci
