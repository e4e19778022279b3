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

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wirecut/circuit.hpp"
#include "wirecut/cutter.hpp"
#include "wirecut/noise.hpp"
#include "wirecut/recombiner.hpp"
#include "wirecut/rng.hpp"
#include "wirecut/router.hpp"
#include "wirecut/simulator.hpp"

namespace wirecut {

enum class Mode { Exact, Sampled };
enum class Backend { Density, Trajectory };

inline std::string to_string(Mode m) {
    return m == Mode::Exact ? "exact" : "sampled";
}
inline std::string to_string(Backend b) {
    return b == Backend::Density ? "density" : "trajectory";
}

/// Everything needed to turn a logical circuit into an outcome distribution.
struct ExecutionOptions {
    NoiseParameters noise = NoiseParameters::defaults();
    CouplingMap coupling = grid_coupling(4, 5);
    /// Logical -> physical prefix used for every executed circuit; identity when empty.
    std::vector<Wire> placement;
    Mode mode = Mode::Exact;
    Backend backend = Backend::Density;
    std::uint64_t shots = 8192;
    std::size_t resamples = 100;
};

struct ExecutedCircuit {
    std::size_t swap_count = 0;
    std::size_t width = 0;  // qubits simulated after routing and compaction
    std::optional<ProbTable> exact;
    std::optional<CountTable> counts;
};

/// Routes, schedules, decorates with noise and simulates one circuit.
/// Density backend: exact table, plus `shots` samples in sampled mode.
/// Trajectory backend: `shots` trajectories (always a sampled result).
inline ExecutedCircuit execute(const Circuit &c, const ExecutionOptions &opt, std::uint64_t seed) {
    std::optional<std::vector<Wire>> placement;
    if (!opt.placement.empty()) {
        require(opt.placement.size() >= c.width, ErrorCode::InvalidArgument,
                "placement covers " + std::to_string(opt.placement.size()) + " qubits, circuit needs " +
                    std::to_string(c.width));
        placement = std::vector<Wire>(opt.placement.begin(), opt.placement.begin() + c.width);
    }
    auto routed = route(c, opt.coupling, placement);
    auto compact = compact_wires(routed.circuit).first;
    auto prog = noisy_program(compact, opt.noise);

    ExecutedCircuit out;
    out.swap_count = routed.swap_count;
    out.width = compact.width;
    if (opt.backend == Backend::Density) {
        out.exact = run_exact(prog);
        if (opt.mode == Mode::Sampled) {
            out.counts = sample_counts(*out.exact, opt.shots, seed);
        }
    } else {
        out.counts = run_trajectories(prog, opt.shots, seed);
    }
    return out;
}

/// One (m, n_fragments) point of the GHZ benchmark.
struct CellResult {
    std::size_t m = 0;
    std::size_t n_fragments = 0;
    std::size_t max_fragment_size = 0;
    std::size_t max_physical_width = 0;
    std::string mode;
    std::string backend;
    double p_success = std::numeric_limits<double>::quiet_NaN();
    double sem = std::numeric_limits<double>::quiet_NaN();
    double bootstrap_mean = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> negative_mass;
    std::size_t variant_count = 0;
    std::size_t swap_count = 0;  // most SWAPs inserted into any executed circuit
    std::uint64_t seed = 0;
    std::string status = "ok";
};

/// Seed of a sweep cell, independent of the other cells in the sweep.
inline std::uint64_t cell_seed(std::uint64_t root, std::size_t m, std::size_t n_fragments) {
    return derive_seed(root, "cell", "m" + std::to_string(m) + "_n" + std::to_string(n_fragments));
}

/// Builds the GHZ chain, cuts it into equal blocks, executes every fragment
/// variant and recombines. Throws on infeasible cells; run_sweep turns that
/// into an annotated row.
inline CellResult run_cell(std::size_t m, std::size_t n_fragments, const ExecutionOptions &opt, std::uint64_t root_seed) {
    CellResult r;
    r.m = m;
    r.n_fragments = n_fragments;
    r.mode = to_string(opt.backend == Backend::Trajectory ? Mode::Sampled : opt.mode);
    r.backend = to_string(opt.backend);
    r.seed = root_seed;
    const std::uint64_t seed = cell_seed(root_seed, m, n_fragments);

    auto circuit = build_split_ghz(m);
    auto plan_cuts = cut_plan_equal(m, n_fragments);
    r.max_fragment_size = plan_cuts.max_fragment_size;
    r.max_physical_width = plan_cuts.max_physical_width;
    auto frags = fragment(circuit, plan_cuts.cuts);
    auto plan = make_plan(circuit, plan_cuts.cuts, frags);
    r.variant_count = variant_cost(plan);

    VariantMap<ProbTable> exact;
    VariantMap<CountTable> counts;
    for (const auto &f : frags) {
        for (const auto &v : variants(f)) {
            VariantKey key{v.fragment_id, v.basis_string()};
            std::uint64_t vseed = derive_seed(seed, "f" + std::to_string(key.first), key.second);
            auto run = execute(v.circuit, opt, vseed);
            r.swap_count = std::max(r.swap_count, run.swap_count);
            if (run.exact) {
                exact.emplace(key, std::move(*run.exact));
            }
            if (run.counts) {
                counts.emplace(key, std::move(*run.counts));
            }
        }
    }

    const bool sampled = !counts.empty();
    const auto &tables = sampled ? frequencies(counts) : exact;
    r.p_success = ghz_success_probability(plan, tables);
    if (m <= 14) {
        r.negative_mass = recombine(plan, tables).negative_mass();
    }

    if (!sampled) {
        // Error bars for `shots` shots per variant, drawn from the exact tables.
        for (const auto &[key, table] : exact) {
            counts.emplace(key, sample_counts(table, opt.shots, derive_seed(seed, variant_stem(key), "shots")));
        }
    }
    auto boot = bootstrap_errors(counts, plan, opt.resamples, derive_seed(seed, "bootstrap"));
    r.sem = boot.sem;
    r.bootstrap_mean = boot.mean;
    return r;
}

/// Uncut execution of a whole circuit, for reference curves.
inline ProbTable execute_reference(const Circuit &c, const ExecutionOptions &opt, std::uint64_t seed) {
    auto run = execute(c, opt, seed);
    return run.counts ? run.counts->frequencies() : *run.exact;
}

}  // namespace wirecut
