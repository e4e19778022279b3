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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>

#include "oracles.hpp"
#include "wirecut/experiment.hpp"

using namespace wirecut;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<std::size_t> fragment_counts(std::size_t m, std::size_t max_n) {
    std::vector<std::size_t> out;
    for (std::size_t n = 1; n <= max_n && n <= m / 2; ++n) {
        out.push_back(n);
    }
    return out;
}

struct CutCircuit {
    RecombinationPlan plan;
    std::vector<FragmentVariant> variants;
};

CutCircuit cut_ghz(std::size_t m, std::size_t n) {
    auto c = build_split_ghz(m);
    auto cuts = cut_plan_equal(m, n).cuts;
    auto frags = fragment(c, cuts);
    CutCircuit out{make_plan(c, cuts, frags), {}};
    for (const auto &f : frags) {
        for (auto &v : variants(f)) {
            out.variants.push_back(std::move(v));
        }
    }
    return out;
}

Outcome oracle_equivalence() {
    auto t0 = Clock::now();
    double worst_linf = 0, worst_p = 0;
    std::size_t cells = 0;
    for (std::size_t m : {2, 4, 6, 8}) {
        auto reference = ideal_distribution(build_split_ghz(m));
        for (std::size_t n : fragment_counts(m, 4)) {
            auto cc = cut_ghz(m, n);
            VariantMap<ProbTable> tables;
            for (const auto &v : cc.variants) {
                tables.emplace(VariantKey{v.fragment_id, v.basis_string()}, run_exact(ideal_program(v.circuit)));
            }
            auto p = recombine(cc.plan, tables);
            worst_linf = std::max(worst_linf, p.max_abs_diff(reference));
            worst_p = std::max(worst_p, std::abs(ghz_success_probability(p, m) - 1));
            ++cells;
        }
    }
    double t = seconds_since(t0);
    return {cells == 10 && worst_linf <= 1e-10 && worst_p <= 1e-10 && t < 60,
            std::to_string(cells) + " cells, max Linf " + fmt("%.2e", worst_linf) + ", max |P-1| " +
                fmt("%.2e", worst_p) + ", " + fmt("%.2f", t) + " s"};
}

Outcome readout_calibration() {
    double gamma = readout_povm(2.75, 65).gamma();
    double t = t_meas_from_gamma(0.041, 65);
    return {std::abs(gamma - 0.041) <= 0.001 && t >= 2.70 && t <= 2.75,
            "gamma " + fmt("%.4f", 100 * gamma) + "%, t_meas(0.041) " + fmt("%.4f", t) + " us"};
}

Outcome channel_suite() {
    auto d = NoiseParameters::defaults();
    std::vector<KrausChannel> all;
    for (double tau : {d.tau_1q_ns / 1000, d.tau_2q_ns / 1000, 1.0, d.t_meas_us}) {
        all.push_back(amplitude_damping(tau, d.t1_us));
        all.push_back(pure_dephasing(tau, d.t1_us, d.t2_us));
    }
    double p1 = p_from_avg_error(d.eps_avg_1q, 1), p2 = p_from_avg_error(d.eps_avg_2q, 2);
    all.push_back(depolarizing_1q(p1));
    all.push_back(depolarizing_2q(p2));
    double worst_cptp = 0;
    for (const auto &ch : all) {
        worst_cptp = std::max(worst_cptp, ch.completeness_error());
    }

    auto compose = [](const KrausChannel &a, const KrausChannel &b) -> oracle::Mat {
        auto sa = a.superoperator(), sb = b.superoperator();
        return oracle::from_library(sb) * oracle::from_library(sa);
    };
    double worst_semigroup = 0;
    for (auto [t1, t2] : {std::pair{0.02, 0.2}, {0.2, 0.2}, {1.5, 3.25}, {10.0, 40.0}}) {
        oracle::Mat ad = compose(amplitude_damping(t1, d.t1_us), amplitude_damping(t2, d.t1_us)) -
                  oracle::from_library(amplitude_damping(t1 + t2, d.t1_us).superoperator());
        oracle::Mat pd = compose(pure_dephasing(t1, d.t1_us, d.t2_us), pure_dephasing(t2, d.t1_us, d.t2_us)) -
                  oracle::from_library(pure_dephasing(t1 + t2, d.t1_us, d.t2_us).superoperator());
        worst_semigroup = std::max({worst_semigroup, ad.cwiseAbs().maxCoeff(), pd.cwiseAbs().maxCoeff()});
    }

    double f1 = oracle::haar_average_fidelity(depolarizing_1q(p1), 100000, 101);
    double f2 = oracle::haar_average_fidelity(depolarizing_2q(p2), 100000, 102);
    double worst_f = std::max(std::abs(f1 - (1 - d.eps_avg_1q)), std::abs(f2 - (1 - d.eps_avg_2q)));
    return {worst_cptp <= 1e-12 && worst_semigroup <= 1e-12 && worst_f <= 1e-5,
            "completeness " + fmt("%.1e", worst_cptp) + ", semigroup " + fmt("%.1e", worst_semigroup) +
                ", Haar |F-(1-eps)| " + fmt("%.1e", worst_f)};
}

Outcome noisy_normalization() {
    ExecutionOptions opt;
    double worst = 0;
    std::string worst_cell;
    for (std::size_t m = 2; m <= 8; ++m) {
        for (std::size_t n : fragment_counts(m, 4)) {
            auto cc = cut_ghz(m, n);
            VariantMap<ProbTable> tables;
            for (const auto &v : cc.variants) {
                tables.emplace(VariantKey{v.fragment_id, v.basis_string()}, *execute(v.circuit, opt, 0).exact);
            }
            double dev = std::abs(recombine(cc.plan, tables).sum() - 1);
            if (dev > worst) {
                worst = dev;
                worst_cell = "m=" + std::to_string(m) + " n=" + std::to_string(n);
            }
        }
    }
    return {worst <= 1e-9, "max |sum-1| " + fmt("%.3e", worst) + (worst_cell.empty() ? "" : " at " + worst_cell)};
}

Outcome fragmentation_advantage() {
    auto t0 = Clock::now();
    ExecutionOptions opt;
    auto p81 = run_cell(8, 1, opt, 1), p82 = run_cell(8, 2, opt, 1);
    auto p51 = run_cell(5, 1, opt, 1), p61 = run_cell(6, 1, opt, 1);
    double t = seconds_since(t0);
    return {p82.p_success > p81.p_success && p61.p_success < p51.p_success && p61.swap_count >= 1 && t < 300,
            "P(8,2) " + fmt("%.4f", p82.p_success) + " > P(8,1) " + fmt("%.4f", p81.p_success) + "; P(6,1) " +
                fmt("%.4f", p61.p_success) + " < P(5,1) " + fmt("%.4f", p51.p_success) + " with " +
                std::to_string(p61.swap_count) + " swaps; " + fmt("%.2f", t) + " s"};
}

Outcome backend_agreement() {
    auto prog = noisy_program(build_ghz_chain(4), NoiseParameters::defaults());
    auto exact = run_exact(prog);
    auto traj = run_trajectories(prog, 200000, 2026).frequencies();
    double tv = total_variation(exact, traj);
    return {tv <= 0.01, "TV " + fmt("%.5f", tv)};
}

Outcome shot_statistics() {
    ExecutionOptions opt;
    opt.mode = Mode::Sampled;
    opt.resamples = 100;
    opt.shots = 8192;
    auto big = run_cell(6, 2, opt, 7);
    opt.shots = 2048;
    auto small = run_cell(6, 2, opt, 7);
    opt.mode = Mode::Exact;
    auto exact = run_cell(6, 2, opt, 7);
    double ratio = big.sem / small.sem;
    double diff = std::abs(big.p_success - exact.p_success);
    return {ratio >= 0.5 / 1.5 && ratio <= 0.5 * 1.5 && diff <= 4 * big.sem,
            "SEM ratio " + fmt("%.3f", ratio) + "; |sampled-exact| " + fmt("%.2e", diff) + " vs 4 SEM " +
                fmt("%.2e", 4 * big.sem)};
}

Outcome cost_accounting() {
    std::vector<std::size_t> costs;
    for (std::size_t n : {1, 2, 6}) {
        auto c = build_split_ghz(24);
        auto cuts = cut_plan_equal(24, n).cuts;
        costs.push_back(variant_cost(make_plan(c, cuts, fragment(c, cuts))));
    }
    ExperimentConfig cfg;
    cfg.cells = {{24, 6}};
    cfg.options.resamples = 2;
    auto sweep = run_sweep(cfg);
    const auto &row = sweep.rows.at(0);
    std::size_t size = row.manifest ? manifest_to_json(*row.manifest)["max_fragment_size"].get<std::size_t>() : 0;
    return {costs == std::vector<std::size_t>{1, 6, 42} && size == 5 && row.cell.max_fragment_size == 5,
            "costs " + std::to_string(costs[0]) + "/" + std::to_string(costs[1]) + "/" + std::to_string(costs[2]) +
                ", m=24 n=6 max fragment size " + std::to_string(size) + " (" + row.cell.status + ")"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"oracle equivalence", oracle_equivalence},
        {"readout calibration", readout_calibration},
        {"channel suite", channel_suite},
        {"noisy normalization", noisy_normalization},
        {"fragmentation advantage", fragmentation_advantage},
        {"backend agreement", backend_agreement},
        {"shot statistics", shot_statistics},
        {"cost accounting", cost_accounting},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
