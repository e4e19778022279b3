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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wirecut/experiment.hpp"

using namespace wirecut;

namespace {

struct CircuitSource {
    std::string circuit_path;
    std::size_t ghz = 0;
    std::size_t fragments = 0;
    std::string cuts;

    void attach(CLI::App *cmd, bool with_cuts) {
        cmd->add_option("--circuit", circuit_path, "circuit JSON file");
        cmd->add_option("--ghz", ghz, "use the m-qubit GHZ benchmark circuit");
        if (with_cuts) {
            cmd->add_option("--fragments", fragments, "equal cut plan with this many fragments (with --ghz)");
            cmd->add_option("--cuts", cuts, "explicit cuts as wire:position,...");
        }
    }

    Circuit circuit() const {
        require(circuit_path.empty() != (ghz == 0), ErrorCode::InvalidArgument, "give exactly one of --circuit and --ghz");
        return circuit_path.empty() ? build_split_ghz(ghz) : load_circuit(circuit_path);
    }

    CutSet cut_set() const {
        require(fragments == 0 || cuts.empty(), ErrorCode::InvalidArgument, "give at most one of --fragments and --cuts");
        if (fragments > 0) {
            require(ghz > 0, ErrorCode::InvalidArgument, "--fragments needs --ghz");
            return cut_plan_equal(ghz, fragments).cuts;
        }
        return parse_cuts(cuts);
    }
};

void print_json(const json &j) {
    std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"wirecut: wire cutting of noisy GHZ circuits"};
    app.require_subcommand(1);

    std::string config_path, out_dir, mode, backend, calibration_path, coupling_path, manifest_path, counts_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::size_t resamples = 100;

    auto *sweep = app.add_subcommand("sweep", "run an (m, n_fragments) sweep from a config file");
    sweep->add_option("--config", config_path, "experiment config (JSON)")->required();
    sweep->add_option("--seed", seed, "root seed (overrides config)");
    sweep->add_option("--out", out_dir, "output directory (overrides config)");
    sweep->add_option("--mode", mode, "exact|sampled")->check(CLI::IsMember({"exact", "sampled"}));
    sweep->add_option("--backend", backend, "density|trajectory")->check(CLI::IsMember({"density", "trajectory"}));

    CircuitSource cut_src;
    auto *cut = app.add_subcommand("cut", "write fragment variant QASM files and a manifest");
    cut_src.attach(cut, true);
    cut->add_option("--out", out_dir, "output directory")->required();

    auto *simulate = app.add_subcommand("simulate", "produce count files for every variant of a manifest");
    simulate->add_option("--manifest", manifest_path, "manifest.json written by cut")->required();
    simulate->add_option("--out", out_dir, "directory for count files")->required();
    simulate->add_option("--calibration", calibration_path, "calibration JSON (default calibration if omitted)");
    simulate->add_option("--coupling-map", coupling_path, "coupling map JSON (4x5 grid if omitted)");
    simulate->add_option("--shots", shots, "shots per variant (default 8192)");
    simulate->add_option("--seed", seed, "root seed");
    simulate->add_option("--backend", backend, "density|trajectory")->check(CLI::IsMember({"density", "trajectory"}));

    auto *recomb = app.add_subcommand("recombine", "recombine per-variant counts into a result record");
    recomb->add_option("--manifest", manifest_path, "manifest.json written by cut")->required();
    recomb->add_option("--counts", counts_dir, "directory holding {fragment}_{basis}.json (default: manifest dir)");
    recomb->add_option("--resamples", resamples, "bootstrap resamples");
    recomb->add_option("--seed", seed, "bootstrap seed");
    recomb->add_option("--out", out_dir, "write result.json here instead of stdout");

    auto *calibrate = app.add_subcommand("calibrate", "resolve a calibration file and print derived parameters");
    calibrate->add_option("--config", calibration_path, "calibration JSON")->required();
    calibrate->add_option("--out", out_dir, "also write derived.json here");

    CircuitSource qasm_src;
    std::string qasm_file;
    auto *qasm = app.add_subcommand("export-qasm", "print a circuit as OpenQASM 2.0");
    qasm_src.attach(qasm, false);
    qasm->add_option("--out", qasm_file, "write to this file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            auto cfg = load_config(config_path);
            if (seed) {
                cfg.seed = *seed;
            }
            if (!out_dir.empty()) {
                cfg.output_dir = out_dir;
            }
            if (!mode.empty()) {
                cfg.options.mode = mode_from_string(mode);
            }
            if (!backend.empty()) {
                cfg.options.backend = backend_from_string(backend);
            }
            auto result = run_sweep(cfg);
            write_sweep(result, cfg.output_dir);
            std::cout << sweep_csv(result);
        } else if (*cut) {
            auto c = cut_src.circuit();
            std::optional<std::size_t> ghz;
            if (cut_src.ghz > 0) {
                ghz = cut_src.ghz;
            }
            auto manifest = cmd_cut(c, cut_src.cut_set(), out_dir, ghz);
            std::cerr << "wrote " << manifest.variants.size() << " variant files and manifest.json to " << out_dir
                      << "\n";
        } else if (*simulate) {
            auto manifest = manifest_from_json(read_json(manifest_path));
            ExecutionOptions opt;
            if (!calibration_path.empty()) {
                opt.noise = load_calibration(calibration_path);
            }
            if (!coupling_path.empty()) {
                opt.coupling = load_coupling(coupling_path);
            }
            if (shots) {
                opt.shots = *shots;
            }
            if (!backend.empty()) {
                opt.backend = backend_from_string(backend);
            }
            cmd_simulate(manifest, opt, seed.value_or(0), out_dir);
            std::cerr << "wrote " << manifest.variants.size() << " count files to " << out_dir << "\n";
        } else if (*recomb) {
            auto manifest = manifest_from_json(read_json(manifest_path));
            fs::path dir = counts_dir.empty() ? fs::path(manifest_path).parent_path() : fs::path(counts_dir);
            auto out = cmd_recombine(manifest, dir, resamples, seed.value_or(0));
            if (out_dir.empty()) {
                print_json(to_json(out));
            } else {
                write_json(fs::path(out_dir) / "result.json", to_json(out));
            }
        } else if (*calibrate) {
            auto derived = to_json(derive_noise(load_calibration(calibration_path)));
            print_json(derived);
            if (!out_dir.empty()) {
                write_json(fs::path(out_dir) / "derived.json", derived);
            }
        } else if (*qasm) {
            auto text = export_qasm(qasm_src.circuit());
            if (qasm_file.empty()) {
                std::cout << text;
            } else {
                write_text(qasm_file, text);
            }
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
