// Copyright 2026 The wirecut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "wirecut/experiment.hpp"

using namespace wirecut;

namespace {

class TempDir : public ::testing::Test {
   protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("wirecut_test_" + std::string(info->test_suite_name()) + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }
    fs::path dir_;
};

json default_calibration() {
    return json::parse(R"({"T1_us": 65, "T2_us": 70, "t_meas_us": 2.75,
                           "eps_avg_1q": 0.00041, "eps_avg_2q": 0.00202,
                           "tau_1q_ns": 20, "tau_2q_ns": 200})");
}

ErrorCode code_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::Invariant;
}

TEST(Calibration, DefaultDevice) {
    auto p = calibration_from_json(default_calibration());
    EXPECT_EQ(p, NoiseParameters::defaults());
    auto d = derive_noise(p);
    EXPECT_EQ(d.params.t1_us, 65);
    EXPECT_EQ(d.params.t2_us, 70);
    EXPECT_EQ(d.params.t_meas_us, 2.75);
    EXPECT_NEAR(d.p1, 6.15e-4, 1e-15);
    EXPECT_NEAR(d.p2, 1 - std::sqrt(1 - 1.25 * 0.00202), 1e-15);
    EXPECT_NEAR(d.gamma_readout, 0.0414, 1e-4);
}

TEST(Calibration, GammaInsteadOfTime) {
    auto j = default_calibration();
    j.erase("t_meas_us");
    j["gamma_readout"] = 0.041;
    auto p = calibration_from_json(j);
    EXPECT_NEAR(p.t_meas_us, -65 * std::log1p(-0.041), 1e-12);
}

TEST(Calibration, ExactlyOneReadoutField) {
    auto both = default_calibration();
    both["gamma_readout"] = 0.041;
    EXPECT_EQ(code_of([&] { calibration_from_json(both); }), ErrorCode::Schema);
    auto neither = default_calibration();
    neither.erase("t_meas_us");
    EXPECT_EQ(code_of([&] { calibration_from_json(neither); }), ErrorCode::Schema);
}

TEST(Calibration, AllZeroErrorsGiveIdentityNoise) {
    auto j = json::parse(R"({"T1_us": null, "T2_us": null, "gamma_readout": 0,
                             "eps_avg_1q": 0, "eps_avg_2q": 0})");
    auto p = calibration_from_json(j);
    EXPECT_TRUE(to_json(derive_noise(p))["identity_noise"].get<bool>());
    auto prog = noisy_program(build_ghz_chain(4), p);
    EXPECT_EQ(prog.count_channels(), 0u);
}

TEST(Calibration, T2AboveTwiceT1Rejected) {
    auto j = default_calibration();
    j["T2_us"] = 150;
    EXPECT_EQ(code_of([&] { calibration_from_json(j); }), ErrorCode::InvalidArgument);
}

TEST(Calibration, RoundTripAndHash) {
    auto p = NoiseParameters::defaults();
    EXPECT_EQ(calibration_from_json(calibration_to_json(p)), p);
    EXPECT_EQ(calibration_hash(p), calibration_hash(NoiseParameters::defaults()));
    auto q = p;
    q.eps_avg_2q = 0.003;
    EXPECT_NE(calibration_hash(p), calibration_hash(q));
    auto inf = NoiseParameters::noiseless();
    EXPECT_EQ(calibration_from_json(calibration_to_json(inf)), inf);
}

TEST(CouplingFile, RoundTrip) {
    auto g = grid_coupling(4, 5);
    auto back = coupling_from_json(coupling_to_json(g));
    EXPECT_EQ(back.edges(), g.edges());
    EXPECT_EQ(coupling_hash(back), coupling_hash(g));
    EXPECT_NE(coupling_hash(g), coupling_hash(grid_coupling(5, 4)));
    EXPECT_EQ(code_of([] { coupling_from_json(json::parse(R"({"n_physical": 2, "edges": [[0]]})")); }),
              ErrorCode::Schema);
}

TEST(CountFile, WireZeroLeftmost) {
    CountTable c;
    c.n_bits = 3;
    c.add(string_to_bits("100"), 5);
    c.add(string_to_bits("011"), 7);
    auto j = counts_to_json(c);
    EXPECT_EQ(j["counts"]["100"], 5);
    EXPECT_EQ(j["shots"], 12);
    auto back = counts_from_json(j);
    EXPECT_EQ(back.counts, c.counts);
    EXPECT_EQ(back.n_bits, 3u);
}

TEST(CountFile, Validation) {
    EXPECT_EQ(code_of([] { counts_from_json(json::parse(R"({"shots": 3, "counts": {"01": 2}})")); }),
              ErrorCode::Schema);
    EXPECT_EQ(code_of([] { counts_from_json(json::parse(R"({"shots": 2, "counts": {"01": 1, "1": 1}})")); }),
              ErrorCode::Schema);
    EXPECT_EQ(code_of([] { counts_from_json(json::parse(R"({"shots": 1, "counts": {"0x": 1}})")); }),
              ErrorCode::Schema);
}

TEST(CircuitFile, RoundTrip) {
    auto c = build_split_ghz(5);
    EXPECT_EQ(circuit_from_json(circuit_to_json(c)), c);
    EXPECT_EQ(code_of([] { circuit_from_json(json::parse(R"({"width": 2, "gates": [{"gate": "rx", "qubits": [0]}]})")); }),
              ErrorCode::Schema);
    EXPECT_THROW(circuit_from_json(json::parse(R"({"width": 2, "gates": [{"gate": "cx", "qubits": [0, 0]}]})")),
                 Error);
}

TEST(Cuts, Parse) {
    auto cuts = parse_cuts("2:2,4:4");
    ASSERT_EQ(cuts.size(), 2u);
    EXPECT_EQ(cuts.cuts[1].wire, 4u);
    EXPECT_TRUE(parse_cuts("").empty());
    EXPECT_THROW(parse_cuts("3"), Error);
}

TEST(Manifest, RoundTrip) {
    auto m = make_manifest(build_ghz_chain(8), cut_plan_equal(8, 3).cuts, 8);
    auto back = manifest_from_json(manifest_to_json(m));
    EXPECT_EQ(back.plan.variant_keys(), m.plan.variant_keys());
    EXPECT_EQ(back.max_fragment_size, m.max_fragment_size);
    EXPECT_EQ(back.ghz_m, 8u);
    ASSERT_EQ(back.variants.size(), m.variants.size());
    for (std::size_t i = 0; i < m.variants.size(); ++i) {
        EXPECT_EQ(back.variants[i].circuit, m.variants[i].circuit);
    }
}

TEST(Manifest, TwentyFourQubitsSixFragments) {
    auto m = make_manifest(build_ghz_chain(24), cut_plan_equal(24, 6).cuts, 24);
    auto j = manifest_to_json(m);
    EXPECT_EQ(j["max_fragment_size"], 5);
    EXPECT_EQ(j["variant_count"], 42);
    EXPECT_EQ(j["variants"].size(), 42u);
}

TEST_F(TempDir, CutWritesFiles) {
    auto m = cmd_cut(build_ghz_chain(6), cut_plan_equal(6, 2).cuts, dir_, 6);
    std::size_t qasm = 0;
    for (const auto &e : fs::directory_iterator(dir_)) {
        qasm += e.path().extension() == ".qasm";
    }
    EXPECT_EQ(qasm, 6u);
    EXPECT_TRUE(fs::exists(dir_ / "manifest.json"));
    auto text = read_text(dir_ / "f1_Y.qasm");
    EXPECT_NE(text.find("// readout order:"), std::string::npos);
}

TEST_F(TempDir, CutWithoutCutsWritesOneFile) {
    auto m = cmd_cut(build_ghz_chain(4), CutSet{}, dir_);
    EXPECT_EQ(m.variants.size(), 1u);
    EXPECT_TRUE(fs::exists(dir_ / "f0_.qasm"));
}

TEST_F(TempDir, CutTwentyFourQubitsWrites42Files) {
    auto m = cmd_cut(build_ghz_chain(24), cut_plan_equal(24, 6).cuts, dir_, 24);
    std::size_t qasm = 0;
    for (const auto &e : fs::directory_iterator(dir_)) {
        qasm += e.path().extension() == ".qasm";
    }
    EXPECT_EQ(qasm, 42u);
}

TEST_F(TempDir, ClosedPipelineNoiseless) {
    auto m = cmd_cut(build_ghz_chain(6), cut_plan_equal(6, 2).cuts, dir_, 6);
    // counts drawn from exact noiseless tables, 8192 shots each
    for (const auto &v : m.variants) {
        auto table = run_exact(ideal_program(v.circuit));
        write_json(dir_ / fs::path(v.file).replace_extension(".json"), counts_to_json(sample_counts(table, 8192, 17)));
    }
    auto out = cmd_recombine(manifest_from_json(read_json(dir_ / "manifest.json")), dir_, 100, 3);
    EXPECT_GT(out.record.sem, 0);
    EXPECT_LE(std::abs(out.record.p_success - 1), 3 * out.record.sem);
    EXPECT_EQ(out.record.variant_count, 6u);
    EXPECT_EQ(out.record.m, 6u);
}

TEST_F(TempDir, RecombineNamesMissingFile) {
    auto m = cmd_cut(build_ghz_chain(6), cut_plan_equal(6, 2).cuts, dir_, 6);
    cmd_simulate(m, ExecutionOptions{}, 1, dir_);
    fs::remove(dir_ / "f0_Z.json");
    try {
        cmd_recombine(m, dir_, 10, 0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::IncompleteInput);
        EXPECT_NE(std::string(e.what()).find("f0_Z"), std::string::npos);
    }
}

TEST_F(TempDir, RecombineSingleFragmentIsPlugIn) {
    auto m = cmd_cut(build_ghz_chain(4), CutSet{}, dir_, 4);
    CountTable c;
    c.n_bits = 4;
    c.add(string_to_bits("0011"), 400);
    c.add(string_to_bits("1100"), 350);
    c.add(string_to_bits("0111"), 250);
    write_json(dir_ / "f0_.json", counts_to_json(c));
    auto out = cmd_recombine(m, dir_, 10, 0);
    EXPECT_DOUBLE_EQ(out.record.p_success, 0.75);
}

TEST_F(TempDir, RecombineRejectsUnequalShots) {
    auto m = cmd_cut(build_ghz_chain(6), cut_plan_equal(6, 2).cuts, dir_, 6);
    cmd_simulate(m, ExecutionOptions{}, 1, dir_);
    auto c = load_counts(dir_ / "f1_X.json");
    c.add(0, 1);
    write_json(dir_ / "f1_X.json", counts_to_json(c));
    EXPECT_THROW(cmd_recombine(m, dir_, 10, 0), Error);
}

TEST(Config, ParsesAndValidates) {
    auto j = json::parse(R"({"m": [4, 6], "n_fragments": [1, 2], "shots": 1024, "mode": "sampled",
                             "backend": "density", "seed": 9, "calibration": "noiseless",
                             "grid": [2, 5], "placement": "identity", "resamples": 20,
                             "output_dir": "x"})");
    auto cfg = config_from_json(j);
    EXPECT_EQ(cfg.cells.size(), 4u);
    EXPECT_EQ(cfg.options.shots, 1024u);
    EXPECT_EQ(cfg.options.mode, Mode::Sampled);
    EXPECT_EQ(cfg.options.coupling.n_physical(), 10u);
    EXPECT_EQ(cfg.options.noise, NoiseParameters::noiseless());
    EXPECT_EQ(cfg.seed, 9u);

    j["shots"] = 0;
    EXPECT_THROW(config_from_json(j), Error);
    j["shots"] = 10;
    j["n_fragments"] = {3};  // only m=6 has a 3-fragment plan
    EXPECT_EQ(config_from_json(j).cells, (std::vector<std::pair<std::size_t, std::size_t>>{{6, 3}}));
    j["pairs"] = {{4, 3}};
    EXPECT_THROW(config_from_json(j), Error);
    j.erase("pairs");
    j["mode"] = "fast";
    EXPECT_THROW(config_from_json(j), Error);
}

TEST(Sweep, NoiselessSingleRow) {
    ExperimentConfig cfg;
    cfg.cells = {{4, 1}};
    cfg.options.noise = NoiseParameters::noiseless();
    auto r = run_sweep(cfg);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].cell.status, "ok");
    EXPECT_NEAR(r.rows[0].cell.p_success, 1.0, 1e-12);
}

TEST(Sweep, FragmentingHelpsAtEight) {
    ExperimentConfig cfg;
    cfg.cells = {{8, 1}, {8, 2}};
    auto r = run_sweep(cfg);
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_GT(r.rows[1].cell.p_success, r.rows[0].cell.p_success);
}

TEST(Sweep, SixQubitFragmentPaysForSwaps) {
    ExperimentConfig cfg;
    cfg.cells = {{5, 1}, {6, 1}};
    auto r = run_sweep(cfg);
    EXPECT_EQ(r.rows[0].cell.swap_count, 0u);
    EXPECT_GE(r.rows[1].cell.swap_count, 1u);
    EXPECT_LT(r.rows[1].cell.p_success, r.rows[0].cell.p_success);
}

TEST(Sweep, InfeasibleCellIsAnnotated) {
    ExperimentConfig cfg;
    cfg.cells = {{4, 1}, {24, 1}, {13, 1}};
    auto r = run_sweep(cfg);
    ASSERT_EQ(r.rows.size(), 3u);
    EXPECT_EQ(r.rows[0].cell.status, "ok");
    EXPECT_NE(r.rows[1].cell.status.find("capacity"), std::string::npos);
    EXPECT_NE(r.rows[2].cell.status.find("capacity"), std::string::npos);
    EXPECT_TRUE(std::isnan(r.rows[1].cell.p_success));
    auto csv = sweep_csv(r);
    EXPECT_NE(csv.find("24,1,24,,,"), std::string::npos);
}

TEST(Sweep, DeterministicCsvAndProvenance) {
    ExperimentConfig cfg;
    cfg.cells = {{4, 2}, {6, 2}, {5, 1}};
    cfg.options.mode = Mode::Sampled;
    cfg.options.shots = 2048;
    cfg.options.resamples = 20;
    cfg.seed = 77;
    cfg.threads = 1;
    auto a = sweep_csv(run_sweep(cfg));
    cfg.threads = 3;
    auto b = sweep_csv(run_sweep(cfg));
    EXPECT_EQ(a, b);
    cfg.seed = 78;
    EXPECT_NE(a, sweep_csv(run_sweep(cfg)));
    EXPECT_EQ(a.substr(0, a.find('\n')),
              "m,n_fragments,max_fragment_size,P_success,SEM,negative_mass,variant_count,swap_count,"
              "max_physical_width,mode,backend,shots,seed,calibration_hash,coupling_hash,status");

    // a row re-run alone reproduces itself
    ExperimentConfig one = cfg;
    one.cells = {{6, 2}};
    auto full = run_sweep(cfg), alone = run_sweep(one);
    EXPECT_EQ(full.rows[1].cell.p_success, alone.rows[0].cell.p_success);
    EXPECT_EQ(full.rows[1].cell.sem, alone.rows[0].cell.sem);
}

TEST(Sweep, TrajectoryBackend) {
    ExperimentConfig cfg;
    cfg.cells = {{4, 2}};
    cfg.options.backend = Backend::Trajectory;
    cfg.options.shots = 4000;
    cfg.options.resamples = 10;
    auto r = run_sweep(cfg);
    EXPECT_EQ(r.rows[0].cell.mode, "sampled");
    EXPECT_EQ(r.rows[0].cell.backend, "trajectory");
    ExperimentConfig exact = cfg;
    exact.options.backend = Backend::Density;
    double e = run_sweep(exact).rows[0].cell.p_success;
    EXPECT_LE(std::abs(r.rows[0].cell.p_success - e), 5 * r.rows[0].cell.sem);
}

TEST_F(TempDir, SweepWritesFiles) {
    ExperimentConfig cfg;
    cfg.cells = {{4, 2}};
    cfg.options.resamples = 5;
    write_sweep(run_sweep(cfg), dir_);
    EXPECT_TRUE(fs::exists(dir_ / "sweep.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "sweep.json"));
    auto result = read_json(dir_ / "m4_n2" / "result.json");
    for (const char *key : {"m", "n_fragments", "max_fragment_size", "mode", "P_success", "SEM", "negative_mass",
                            "variant_count", "seed"}) {
        EXPECT_TRUE(result.contains(key)) << key;
    }
    EXPECT_EQ(read_json(dir_ / "m4_n2" / "manifest.json")["variant_count"], 6);
}

TEST_F(TempDir, ConfigFileResolvesRelativePaths) {
    write_json(dir_ / "cal.json", default_calibration());
    write_json(dir_ / "map.json", coupling_to_json(grid_coupling(1, 6)));
    write_json(dir_ / "cfg.json", json::parse(R"({"m": [6], "n_fragments": [1], "calibration": "cal.json",
                                                  "coupling_map": "map.json"})"));
    auto cfg = load_config(dir_ / "cfg.json");
    EXPECT_EQ(cfg.options.coupling.n_physical(), 6u);
    EXPECT_EQ(run_sweep(cfg).rows[0].cell.swap_count, 0u);
    EXPECT_EQ(code_of([&] { load_config(dir_ / "nope.json"); }), ErrorCode::Io);
}

}  // namespace
