#include "dmxci/cli.hpp"
#include "dmxci/config.hpp"
#include "dmxci/csvio.hpp"
#include "dmxci/errors.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace dmxci;

TEST_CASE("empty config parses to the documented defaults") {
    const AppConfig cfg = parse_config("{}");
    CHECK(cfg.segment.ols.size() == 2);
    CHECK(cfg.segment.ols[0].spans == 10);
    CHECK(cfg.segment.ols[1].spans == 20);
    CHECK(cfg.segment.d_res_ps_nm == doctest::Approx(40.0));
    CHECK(cfg.channels.baud_rate_gbaud == doctest::Approx(32.0));
    CHECK(cfg.channels.pump_grid_multiple == 2);
    CHECK(cfg.rx.lms_taps == 42);
    CHECK(cfg.rx.lms_mu == doctest::Approx(1e-4));
    CHECK(cfg.ssfm.step_km == doctest::Approx(0.1));
    CHECK(cfg.campaign.scale == "desk");
}

TEST_CASE("unknown keys are rejected everywhere") {
    CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"channels": {"baud": 32}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"segment": {"ols": [{"name":"A","spanz":3}]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"rx": {"mu": 1e-4}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
}

TEST_CASE("invalid physical values are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"channels": {"baud_rate_gbaud": 40}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"ssfm": {"scheme": "rk4"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"campaign": {"scale": "huge"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"segment": {"ols": []}})"), ConfigError);
}

TEST_CASE("config round trip and hash stability") {
    const AppConfig a = parse_config("{}");
    const AppConfig b = parse_config(dump_config(a));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);

    AppConfig c = a;
    c.segment.d_res_ps_nm = 80.0;
    CHECK(config_hash(c) != config_hash(a));

    // seed and output location do not change the science hash
    AppConfig d = a;
    d.campaign.seed = 999;
    d.output.directory = "elsewhere";
    CHECK(config_hash(d) == config_hash(a));
}

TEST_CASE("scenario and matrix builders pick up the config") {
    const AppConfig cfg = parse_config("{}");
    const ScenarioSpec spec = scenario_from_config(cfg, TraceMode::cumulative);
    CHECK(spec.id == "d4d16_res40_rs32_p2_cfg");
    CHECK(spec.segment.span_count() == 30);
    CHECK(spec.n_symbols == 8192);
    CHECK(spec.plan.pump_offset_ghz == doctest::Approx(75.0));

    const MatrixParams mp = matrix_from_config(cfg);
    CHECK(mp.ols1_spans == 10);
    CHECK(mp.ols2_spans == 20);
    CHECK(mp.span_length_km == doctest::Approx(80.0));
}

TEST_CASE("trace CSV golden bytes") {
    XciTrace t;
    t.scenario_id = "t1";
    t.mode = TraceMode::cumulative;
    t.points.push_back(TracePoint{1, 30.0, 1e-8, 1e-8, 60.0});
    t.points.push_back(TracePoint{2, 26.9897, 2e-8, 1e-8, 60.0});
    const Provenance prov{"deadbeef00000000", 7};

    const std::string expected =
        "# schema=xci-trace/1 code=dmxci-0.1.0\n"
        "# config_hash=deadbeef00000000 seed=7\n"
        "scenario_id,mode,span_index,snr_xci_db,p_xci_dbm,delta_p_xci_db,floor_snr_db\n"
        "t1,cumulative,1,30.0000,-50.0000,-50.0000,60.0000\n"
        "t1,cumulative,2,26.9897,-46.9897,-50.0000,60.0000\n";
    CHECK(trace_csv({t}, prov) == expected);
}

TEST_CASE("trace CSV read-back round trip") {
    XciTrace t;
    t.scenario_id = "roundtrip";
    t.mode = TraceMode::intrinsic;
    t.points.push_back(TracePoint{1, 33.5, 4.5e-9, 4.5e-9, 58.2});
    t.points.push_back(TracePoint{2, 33.1, 4.9e-9, 4.9e-9, 58.0});

    const std::string path = "/tmp/dmxci_test_trace.csv";
    write_trace_csv(path, {t}, Provenance{"0123456789abcdef", 42});
    const TraceFile file = read_trace_csv(path);
    REQUIRE(file.traces.size() == 1);
    CHECK(file.prov.config_hash == "0123456789abcdef");
    CHECK(file.prov.seed == 42);
    CHECK(file.traces[0].scenario_id == "roundtrip");
    CHECK(file.traces[0].mode == TraceMode::intrinsic);
    REQUIRE(file.traces[0].points.size() == 2);
    CHECK(file.traces[0].points[0].p_xci_w == doctest::Approx(4.5e-9).epsilon(1e-4));
    CHECK(file.traces[0].points[1].floor_snr_db == doctest::Approx(58.0));
    std::remove(path.c_str());
}

TEST_CASE("dispersion map CSV reproduces the sawtooth") {
    LinkSegment seg;
    append_ols(seg, "OLS1", 3, SpanParams{80.0, 0.2, 16.0, 1.27}, 40.0);
    const std::string csv = dispersion_map_csv(seg, Provenance{"0", 1});
    CHECK(csv.find("stage_index,ols,pre_dcu_ps_nm,post_dcu_ps_nm\n") != std::string::npos);
    CHECK(csv.find("1,OLS1,1280.0000,40.0000\n") != std::string::npos);
    CHECK(csv.find("2,OLS1,1320.0000,80.0000\n") != std::string::npos);
    CHECK(csv.find("3,OLS1,1360.0000,120.0000\n") != std::string::npos);

    // header-only for an empty segment
    const std::string empty_csv = dispersion_map_csv(LinkSegment{}, Provenance{"0", 1});
    CHECK(empty_csv ==
          "# schema=xci-dispmap/1 code=dmxci-0.1.0\n# config_hash=0 seed=1\n"
          "stage_index,ols,pre_dcu_ps_nm,post_dcu_ps_nm\n");
}

TEST_CASE("cli exit codes for validation failures") {
    CommonOpts opts;
    opts.config_path = "/nonexistent/dmxci.json";
    CHECK(cmd_run(opts, "all", "") == kExitConfig);
    CHECK(cmd_gn(opts) == kExitConfig);
    CHECK(cmd_dispersion_map(opts) == kExitConfig);

    // run requires a config
    CommonOpts none;
    CHECK(cmd_run(none, "all", "") == kExitConfig);

    // scatter on a missing traces file
    const std::string cfg_path = "/tmp/dmxci_test_cfg.json";
    std::ofstream(cfg_path) << "{}";
    CommonOpts with_cfg;
    with_cfg.config_path = cfg_path;
    with_cfg.out_dir = "/tmp/dmxci_test_out";
    CHECK(cmd_scatter(with_cfg, "/nonexistent/traces.csv") == kExitConfig);
    std::remove(cfg_path.c_str());
    std::filesystem::remove_all("/tmp/dmxci_test_out");
}

TEST_CASE("cli end-to-end: ign run and dispersion map on a tiny config") {
    const std::string cfg_path = "/tmp/dmxci_test_small.json";
    std::ofstream(cfg_path) << R"({
      "segment": {"ols": [{"name": "OLS1", "spans": 3, "length_km": 80.0,
                           "loss_db_per_km": 0.2, "dispersion_ps_nm_km": 4.0,
                           "gamma_per_w_km": 1.27}],
                  "d_res_ps_nm": 40.0},
      "output": {"directory": "/tmp/dmxci_test_out2", "prefix": "t"}
    })";
    CommonOpts opts;
    opts.config_path = cfg_path;
    CHECK(cmd_gn(opts) == kExitOk);
    CHECK(cmd_dispersion_map(opts) == kExitOk);
    const TraceFile f = read_trace_csv("/tmp/dmxci_test_out2/t_ign.csv");
    REQUIRE(f.traces.size() == 1);
    CHECK(f.traces[0].points.size() == 3);
    std::remove(cfg_path.c_str());
    std::filesystem::remove_all("/tmp/dmxci_test_out2");
}
