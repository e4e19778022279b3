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

#pragma once

#include <algorithm>
#include <atomic>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wirecut/io.hpp"
#include "wirecut/pipeline.hpp"

namespace wirecut {

inline Mode mode_from_string(const std::string &s) {
    if (s == "exact") {
        return Mode::Exact;
    }
    require(s == "sampled", ErrorCode::InvalidArgument, "mode must be exact or sampled, got \"" + s + "\"");
    return Mode::Sampled;
}

inline Backend backend_from_string(const std::string &s) {
    if (s == "density") {
        return Backend::Density;
    }
    require(s == "trajectory", ErrorCode::InvalidArgument,
            "backend must be density or trajectory, got \"" + s + "\"");
    return Backend::Trajectory;
}

struct ExperimentConfig {
    std::vector<std::pair<std::size_t, std::size_t>> cells;  // (m, n_fragments) in row order
    ExecutionOptions options;
    std::uint64_t seed = 0;
    fs::path output_dir = "out";
    std::size_t threads = 0;  // 0: one per hardware thread

    void validate() const {
        require(!cells.empty(), ErrorCode::InvalidArgument, "config selects no (m, n_fragments) cells");
        require(options.shots >= 1, ErrorCode::InvalidArgument, "shots must be at least 1");
        require(options.resamples >= 2, ErrorCode::InvalidArgument, "resamples must be at least 2");
        require_valid(options.noise);
        for (auto [m, n] : cells) {
            require(m >= 2 && n >= 1 && n <= m / 2, ErrorCode::InvalidArgument,
                    "cell m=" + std::to_string(m) + " n_fragments=" + std::to_string(n) +
                        " has no equal cut plan (need m >= 2 and 1 <= n_fragments <= m/2)");
        }
    }
};

/// Relative paths inside the config resolve against `base_dir`.
inline ExperimentConfig config_from_json(const json &j, const fs::path &base_dir = {}) {
    const std::string what = "config";
    ExperimentConfig cfg;
    try {
        if (j.contains("pairs")) {
            for (const auto &p : j.at("pairs")) {
                cfg.cells.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
            }
        } else {
            auto ms = detail::field(j, "m", what).get<std::vector<std::size_t>>();
            auto ns = detail::field(j, "n_fragments", what).get<std::vector<std::size_t>>();
            // The product keeps only combinations that have an equal cut plan.
            for (auto m : ms) {
                for (auto n : ns) {
                    if (m >= 2 && n >= 1 && n <= m / 2) {
                        cfg.cells.emplace_back(m, n);
                    }
                }
            }
        }
        if (j.contains("shots")) {
            cfg.options.shots = detail::unsigned_number(j, "shots", what);
        }
        if (j.contains("resamples")) {
            cfg.options.resamples = detail::unsigned_number(j, "resamples", what);
        }
        if (j.contains("mode")) {
            cfg.options.mode = mode_from_string(j.at("mode").get<std::string>());
        }
        if (j.contains("backend")) {
            cfg.options.backend = backend_from_string(j.at("backend").get<std::string>());
        }
        if (j.contains("seed")) {
            cfg.seed = detail::unsigned_number(j, "seed", what);
        }
        if (j.contains("threads")) {
            cfg.threads = detail::unsigned_number(j, "threads", what);
        }
        if (j.contains("output_dir")) {
            cfg.output_dir = j.at("output_dir").get<std::string>();
        }

        if (j.contains("calibration")) {
            const auto &c = j.at("calibration");
            if (c.is_object()) {
                cfg.options.noise = calibration_from_json(c);
            } else if (c.get<std::string>() == "noiseless") {
                cfg.options.noise = NoiseParameters::noiseless();
            } else if (c.get<std::string>() == "defaults") {
                cfg.options.noise = NoiseParameters::defaults();
            } else {
                cfg.options.noise = load_calibration(base_dir / c.get<std::string>());
            }
        }

        require(!(j.contains("coupling_map") && j.contains("grid")), ErrorCode::Schema,
                "config gives both coupling_map and grid");
        if (j.contains("coupling_map")) {
            const auto &c = j.at("coupling_map");
            cfg.options.coupling =
                c.is_object() ? coupling_from_json(c) : load_coupling(base_dir / c.get<std::string>());
        } else if (j.contains("grid")) {
            auto g = j.at("grid").get<std::vector<std::size_t>>();
            require(g.size() == 2, ErrorCode::Schema, "grid must be [rows, cols]");
            cfg.options.coupling = grid_coupling(g[0], g[1]);
        }

        if (j.contains("placement")) {
            const auto &p = j.at("placement");
            if (p.is_string()) {
                require(p.get<std::string>() == "identity", ErrorCode::Schema,
                        "placement must be \"identity\" or an array of physical qubits");
            } else {
                cfg.options.placement = p.get<std::vector<Wire>>();
            }
        }
    } catch (const json::exception &e) {
        fail(ErrorCode::Schema, std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const fs::path &path) {
    return config_from_json(read_json(path), path.parent_path());
}

struct SweepRow {
    CellResult cell;
    std::string calibration_hash;
    std::string coupling_hash;
    std::uint64_t shots = 0;
    std::optional<Manifest> manifest;  // absent when the cut plan itself failed
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

inline ResultRecord result_record(const CellResult &c) {
    ResultRecord r;
    r.m = c.m;
    r.n_fragments = c.n_fragments;
    r.max_fragment_size = c.max_fragment_size;
    r.mode = c.mode;
    r.p_success = c.p_success;
    r.sem = c.sem;
    r.negative_mass = c.negative_mass;
    r.variant_count = c.variant_count;
    r.seed = c.seed;
    return r;
}

inline json to_json(const SweepRow &row) {
    json j = to_json(result_record(row.cell));
    j["backend"] = row.cell.backend;
    j["shots"] = row.shots;
    j["max_physical_width"] = row.cell.max_physical_width;
    j["swap_count"] = row.cell.swap_count;
    j["bootstrap_mean"] = detail::finite_or_null(row.cell.bootstrap_mean);
    j["status"] = row.cell.status;
    j["calibration_hash"] = row.calibration_hash;
    j["coupling_hash"] = row.coupling_hash;
    return j;
}

/// Runs every cell; a failing cell becomes a row whose status carries the error.
/// Cells run on worker threads, and rows come back in config order.
inline SweepResult run_sweep(const ExperimentConfig &cfg) {
    cfg.validate();
    const std::string cal_hash = calibration_hash(cfg.options.noise);
    const std::string map_hash = coupling_hash(cfg.options.coupling);

    SweepResult result;
    result.rows.resize(cfg.cells.size());
    auto run_one = [&](std::size_t i) {
        auto [m, n] = cfg.cells[i];
        SweepRow &row = result.rows[i];
        row.calibration_hash = cal_hash;
        row.coupling_hash = map_hash;
        row.shots = cfg.options.shots;
        try {
            auto plan = cut_plan_equal(m, n);
            row.manifest = make_manifest(build_split_ghz(m), plan.cuts, m);
            row.cell = run_cell(m, n, cfg.options, cfg.seed);
        } catch (const Error &e) {
            CellResult &c = row.cell;
            c.m = m;
            c.n_fragments = n;
            c.mode = to_string(cfg.options.backend == Backend::Trajectory ? Mode::Sampled : cfg.options.mode);
            c.backend = to_string(cfg.options.backend);
            c.seed = cfg.seed;
            if (row.manifest) {
                c.max_fragment_size = row.manifest->max_fragment_size;
                c.max_physical_width = row.manifest->max_physical_width;
                c.variant_count = variant_cost(row.manifest->plan);
            }
            c.status = std::string("infeasible: ") + e.what();
        }
    };

    std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, cfg.cells.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < cfg.cells.size(); ++i) {
            run_one(i);
        }
        return result;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < cfg.cells.size(); i = next++) {
                run_one(i);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    return result;
}

inline const std::vector<std::string> &csv_columns() {
    static const std::vector<std::string> cols = {
        "m",           "n_fragments", "max_fragment_size", "P_success", "SEM",   "negative_mass",
        "variant_count", "swap_count", "max_physical_width", "mode",     "backend", "shots",
        "seed",        "calibration_hash", "coupling_hash",   "status"};
    return cols;
}

inline std::string sweep_csv(const SweepResult &r) {
    std::string out;
    const auto &cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += (i ? "," : "") + cols[i];
    }
    out += "\n";
    for (const auto &row : r.rows) {
        const auto &c = row.cell;
        std::vector<std::string> f = {std::to_string(c.m),
                                      std::to_string(c.n_fragments),
                                      std::to_string(c.max_fragment_size),
                                      format_double(c.p_success),
                                      format_double(c.sem),
                                      c.negative_mass ? format_double(*c.negative_mass) : "",
                                      std::to_string(c.variant_count),
                                      std::to_string(c.swap_count),
                                      std::to_string(c.max_physical_width),
                                      c.mode,
                                      c.backend,
                                      std::to_string(row.shots),
                                      std::to_string(c.seed),
                                      row.calibration_hash,
                                      row.coupling_hash,
                                      csv_field(c.status)};
        for (std::size_t i = 0; i < f.size(); ++i) {
            out += (i ? "," : "") + f[i];
        }
        out += "\n";
    }
    return out;
}

inline std::string cell_dir_name(std::size_t m, std::size_t n) {
    return "m" + std::to_string(m) + "_n" + std::to_string(n);
}

/// Writes sweep.csv, sweep.json and, per cell, result.json and manifest.json.
inline void write_sweep(const SweepResult &r, const fs::path &dir) {
    json rows = json::array();
    for (const auto &row : r.rows) {
        auto cell = dir / cell_dir_name(row.cell.m, row.cell.n_fragments);
        write_json(cell / "result.json", to_json(row));
        if (row.manifest) {
            write_json(cell / "manifest.json", manifest_to_json(*row.manifest));
        }
        rows.push_back(to_json(row));
    }
    write_json(dir / "sweep.json", json{{"rows", rows}});
    write_text(dir / "sweep.csv", sweep_csv(r));
}

// ---------------------------------------------------------------------------
// Hardware path: cut -> (external execution) -> recombine

/// Writes one QASM file per variant plus manifest.json; returns the manifest.
inline Manifest cmd_cut(const Circuit &c, const CutSet &cuts, const fs::path &dir,
                        std::optional<std::size_t> ghz_m = std::nullopt) {
    auto manifest = make_manifest(c, cuts, ghz_m);
    for (const auto &v : manifest.variants) {
        const auto &part = *std::find_if(manifest.plan.parts.begin(), manifest.plan.parts.end(),
                                         [&](const auto &p) { return p.id == v.fragment; });
        std::vector<std::string> header = {
            "fragment f" + std::to_string(v.fragment) + ", basis \"" + v.basis + "\"",
            "readout order: " + std::to_string(part.in_cuts.size()) + " ancilla bit(s), " +
                std::to_string(part.output_bits.size()) + " output bit(s), " + std::to_string(part.out_cuts.size()) +
                " out-cut bit(s)",
        };
        std::string outputs = "output bits map to global bits:";
        for (auto b : part.output_bits) {
            outputs += " " + std::to_string(b);
        }
        header.push_back(outputs);
        write_text(dir / v.file, export_qasm(v.circuit, header));
    }
    write_json(dir / "manifest.json", manifest_to_json(manifest));
    return manifest;
}

/// Executes every variant of a manifest and writes `{stem}.json` count files.
inline void cmd_simulate(const Manifest &manifest, const ExecutionOptions &opt, std::uint64_t seed,
                         const fs::path &dir) {
    ExecutionOptions sampled = opt;
    sampled.mode = Mode::Sampled;
    for (const auto &v : manifest.variants) {
        require(v.circuit.width > 0, ErrorCode::Schema, "manifest variant " + v.file + " carries no circuit");
        VariantKey key{v.fragment, v.basis};
        auto run = execute(v.circuit, sampled, derive_seed(seed, "f" + std::to_string(v.fragment), v.basis));
        write_json(dir / (variant_stem(key) + ".json"), counts_to_json(*run.counts));
    }
}

struct RecombineOutput {
    ResultRecord record;
    std::optional<ProbTable> distribution;  // full recombined table for narrow circuits
};

/// Reads `{stem}.json` for every manifest variant from `counts_dir` and recombines.
inline RecombineOutput cmd_recombine(const Manifest &manifest, const fs::path &counts_dir, std::size_t resamples,
                                     std::uint64_t seed) {
    VariantMap<CountTable> counts;
    std::vector<std::string> missing;
    for (const auto &key : manifest.plan.variant_keys()) {
        auto path = counts_dir / (variant_stem(key) + ".json");
        if (!fs::exists(path)) {
            missing.push_back(variant_stem(key));
            continue;
        }
        counts.emplace(key, load_counts(path));
    }
    if (!missing.empty()) {
        std::string msg = "missing count files in " + counts_dir.string() + ":";
        for (const auto &m : missing) {
            msg += " " + m;
        }
        fail(ErrorCode::IncompleteInput, msg);
    }
    auto freq = frequencies(counts);

    RecombineOutput out;
    auto &r = out.record;
    r.m = manifest.ghz_m.value_or(manifest.plan.n_bits);
    r.n_fragments = manifest.plan.parts.size();
    r.max_fragment_size = manifest.max_fragment_size;
    r.mode = "sampled";
    r.variant_count = variant_cost(manifest.plan);
    r.seed = seed;
    if (manifest.ghz_m) {
        r.p_success = ghz_success_probability(manifest.plan, freq);
        r.sem = bootstrap_errors(counts, manifest.plan, resamples, derive_seed(seed, "bootstrap")).sem;
    }
    if (manifest.plan.n_bits <= 20) {
        out.distribution = recombine(manifest.plan, freq);
        r.negative_mass = out.distribution->negative_mass();
    }
    return out;
}

inline json to_json(const RecombineOutput &o) {
    json j = to_json(o.record);
    if (o.distribution) {
        json d = json::object();
        for (std::uint64_t i = 0; i < o.distribution->p.size(); ++i) {
            d[bits_to_string(i, o.distribution->n_bits)] = o.distribution->p[i];
        }
        j["distribution"] = d;
    }
    return j;
}

}  // namespace wirecut
