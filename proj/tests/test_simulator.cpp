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

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "wirecut/noise.hpp"
#include "wirecut/simulator.hpp"

using namespace wirecut;

namespace {

NoiseParameters with_gamma(double gamma) {
    auto p = NoiseParameters::noiseless();
    p.t1_us = 65;
    p.t2_us = 130;
    p.t_meas_us = t_meas_from_gamma(gamma, 65);
    p.tau_1q_ns = 1e-9;  // keep idle damping negligible
    p.tau_2q_ns = 1e-9;
    return p;
}

Circuit random_circuit(std::size_t n, std::size_t depth, std::uint64_t seed) {
    Rng rng(seed);
    const GateKind one[] = {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::SDG};
    Circuit c(n);
    for (std::size_t i = 0; i < depth; ++i) {
        if (n >= 2 && rng.next() % 3 == 0) {
            Wire a = rng.next() % n, b = rng.next() % (n - 1);
            if (b >= a) {
                ++b;
            }
            c.add(rng.next() % 4 ? GateKind::CNOT : GateKind::SWAP, a, b);
        } else {
            c.add(one[rng.next() % 6], static_cast<Wire>(rng.next() % n));
        }
    }
    return c.measure_all();
}

TEST(RunExact, NoiselessGhz) {
    auto t = run_exact(ideal_program(build_ghz_chain(4)));
    EXPECT_NEAR(t.at("0011"), 0.5, 1e-12);
    EXPECT_NEAR(t.at("1100"), 0.5, 1e-12);
    EXPECT_NEAR(t.sum(), 1, 1e-12);
}

TEST(RunExact, ReadoutOnGroundState) {
    Circuit c(1);
    c.measure_all();
    auto t = run_exact(noisy_program(c, with_gamma(0.041)));
    EXPECT_NEAR(t.at("0"), 1.0, 1e-15);
    EXPECT_NEAR(t.at("1"), 0.0, 1e-15);
}

TEST(RunExact, ReadoutOnExcitedState) {
    Circuit c(1);
    c.add(GateKind::X, 0).measure_all();
    auto t = run_exact(noisy_program(c, with_gamma(0.041)));
    EXPECT_NEAR(t.at("1"), 0.959, 1e-9);
    EXPECT_NEAR(t.at("0"), 0.041, 1e-9);
}

TEST(RunExact, MatchesDensityOracle) {
    auto params = NoiseParameters::defaults();
    params.t1_us = 5;  // exaggerate so differences would show
    params.t2_us = 7;
    params.eps_avg_1q = 0.01;
    params.eps_avg_2q = 0.05;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto c = random_circuit(1 + seed % 4, 12, seed);
        c.measured = {};
        for (Wire w = c.width; w-- > 0;) {
            c.measured.push_back(w);  // reversed order exercises the bit map
        }
        auto prog = noisy_program(c, params);
        auto ours = run_exact(prog);
        auto ref = oracle::run_noisy(prog);
        for (std::size_t i = 0; i < ref.table.size(); ++i) {
            EXPECT_NEAR(ours[i], ref.table[i], 1e-12) << "seed " << seed << " outcome " << i;
        }
    }
}

TEST(RunExact, NoiselessMatchesStatevector) {
    for (std::uint64_t seed = 10; seed < 16; ++seed) {
        auto c = random_circuit(5, 30, seed);
        auto a = run_exact(noisy_program(c, NoiseParameters::noiseless()));
        auto psi = statevector_oracle(c);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            EXPECT_NEAR(a[i], std::norm(psi[i]), 1e-12);
        }
    }
}

TEST(RunExact, CapacityBound) {
    Circuit c(kMaxDensityQubits + 1);
    c.measure_all();
    try {
        run_exact(ideal_program(c));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::Capacity);
    }
}

TEST(RunExact, RejectsNonCptpChannel) {
    NoisyProgram prog{1, {}};
    KrausChannel bad{{Matrix::identity(2) * 1.1}};
    prog.ops.emplace_back(AppliedChannel{"bad", bad, {0}});
    prog.ops.emplace_back(Readout{0, ReadoutPOVM{}});
    try {
        run_exact(prog);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::Invariant);
    }
}

TEST(DensityMatrix, InvariantsAlongNoisyProgram) {
    auto params = NoiseParameters::defaults();
    params.eps_avg_1q = 0.02;
    auto c = random_circuit(4, 25, 99);
    auto prog = noisy_program(c, params);
    DensityMatrix rho(4);
    for (const auto &op : prog.ops) {
        if (auto *g = std::get_if<Gate>(&op)) {
            rho.apply_gate(*g);
        } else if (auto *ch = std::get_if<AppliedChannel>(&op)) {
            rho.apply_channel(ch->channel, ch->qubits);
            EXPECT_NEAR(rho.trace(), 1, 1e-10);
        }
        EXPECT_LE(rho.purity(), 1 + 1e-10);
        EXPECT_LT(rho.hermiticity_error(), 1e-10);
    }
    Eigen::MatrixXcd m(16, 16);
    for (std::size_t r = 0; r < 16; ++r) {
        for (std::size_t col = 0; col < 16; ++col) {
            m(r, col) = rho(r, col);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
}

TEST(DensityMatrix, DepolarizingLowersPurity) {
    DensityMatrix rho(1);
    rho.apply_gate(make_gate(GateKind::H, 0));
    EXPECT_NEAR(rho.purity(), 1, 1e-12);
    rho.apply_channel(depolarizing_1q(0.01), {0});
    EXPECT_LT(rho.purity(), 1 - 1e-4);
}

TEST(Statevector, Examples) {
    Circuit h(1);
    h.add(GateKind::H, 0);
    auto a = statevector_oracle(h);
    EXPECT_NEAR(a[0].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(a[1].real(), 1 / std::sqrt(2.0), 1e-15);

    auto g = statevector_oracle(build_ghz_chain(6));
    EXPECT_NEAR(std::abs(g[string_to_bits("000111")]), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(g[string_to_bits("111000")]), 1 / std::sqrt(2.0), 1e-15);

    auto e = statevector_oracle(Circuit(3));
    EXPECT_EQ(e[0], cplx(1, 0));
    for (std::size_t i = 1; i < e.size(); ++i) {
        EXPECT_EQ(e[i], cplx{});
    }
}

TEST(Statevector, MatchesFullUnitaryOracle) {
    for (std::uint64_t seed = 20; seed < 26; ++seed) {
        auto c = random_circuit(5, 40, seed);
        auto ours = statevector_oracle(c);
        auto ref = oracle::state(c);
        for (std::size_t i = 0; i < ours.size(); ++i) {
            EXPECT_LT(std::abs(ours[i] - ref(i)), 1e-12);
        }
    }
}

TEST(Statevector, Capacity) {
    EXPECT_THROW(statevector_oracle(Circuit(kMaxStatevectorQubits + 1)), Error);
}

TEST(SampleCounts, Degenerate) {
    ProbTable t(2);
    t.p[0] = 1;
    auto c = sample_counts(t, 100, 1);
    EXPECT_EQ(c.shots, 100u);
    EXPECT_EQ(c.at("00"), 100u);
    EXPECT_EQ(c.counts.size(), 1u);
}

TEST(SampleCounts, FairCoinWithinFiveSigma) {
    ProbTable t(1);
    t.p = {0.5, 0.5};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto c = sample_counts(t, 8192, seed);
        EXPECT_EQ(c.at("0") + c.at("1"), 8192u);
        EXPECT_LE(std::abs(static_cast<double>(c.at("0")) - 4096), 5 * std::sqrt(8192 * 0.25));
    }
}

TEST(SampleCounts, Deterministic) {
    auto t = run_exact(noisy_program(build_ghz_chain(4), NoiseParameters::defaults()));
    auto a = sample_counts(t, 5000, 42), b = sample_counts(t, 5000, 42), c = sample_counts(t, 5000, 43);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_NE(a.counts, c.counts);
}

TEST(Trajectories, NoiselessGhzOnlyTargets) {
    auto counts = run_trajectories(ideal_program(build_ghz_chain(4)), 10000, 3);
    EXPECT_EQ(counts.shots, 10000u);
    for (auto [k, v] : counts.counts) {
        auto s = bits_to_string(k, 4);
        EXPECT_TRUE(s == "0011" || s == "1100") << s;
    }
    EXPECT_EQ(counts.counts.size(), 2u);
}

TEST(Trajectories, FullyDepolarizedIsUniform) {
    NoisyProgram prog{1, {}};
    prog.ops.emplace_back(AppliedChannel{"depol1", depolarizing_1q(0.75), {0}});
    prog.ops.emplace_back(Readout{0, ReadoutPOVM{}});
    const std::uint64_t n = 20000;
    auto counts = run_trajectories(prog, n, 8);
    EXPECT_LE(std::abs(static_cast<double>(counts.at("0")) - n / 2.0), 5 * std::sqrt(n * 0.25));
}

TEST(Trajectories, ConvergeToExact) {
    auto params = NoiseParameters::defaults();
    params.eps_avg_1q = 0.02;
    params.eps_avg_2q = 0.05;
    params.t_meas_us = 10;
    for (std::uint64_t seed = 30; seed < 34; ++seed) {
        const std::size_t n = 2 + seed % 4;
        auto prog = noisy_program(random_circuit(n, 15, seed), params);
        const std::uint64_t traj = 20000;
        auto exact = run_exact(prog);
        auto sampled = run_trajectories(prog, traj, seed).frequencies();
        EXPECT_LE(total_variation(exact, sampled), 3 * std::sqrt(std::pow(2.0, n) / traj)) << "n=" << n;
    }
}

TEST(Trajectories, DeterministicAndCapacity) {
    auto prog = noisy_program(build_ghz_chain(4), NoiseParameters::defaults());
    EXPECT_EQ(run_trajectories(prog, 500, 9).counts, run_trajectories(prog, 500, 9).counts);
    NoisyProgram wide{kMaxStatevectorQubits + 1, {}};
    EXPECT_THROW(run_trajectories(wide, 1, 0), Error);
}

TEST(Tables, TotalVariationAndNegativeMass) {
    ProbTable a(1), b(1);
    a.p = {1, 0};
    b.p = {0.25, 0.75};
    EXPECT_DOUBLE_EQ(total_variation(a, b), 0.75);
    ProbTable q(1);
    q.p = {1.2, -0.2};
    EXPECT_DOUBLE_EQ(q.negative_mass(), -0.2);
    EXPECT_DOUBLE_EQ(q.sum(), 1.0);
}

TEST(Tables, ReadoutClipsTinyNegatives) {
    std::vector<double> pop = {1 + 1e-13, -1e-13};
    auto t = readout_distribution(pop, {Readout{0, ReadoutPOVM{}}});
    EXPECT_EQ(t[1], 0.0);
}

}  // namespace
