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

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "wirecut/circuit.hpp"
#include "wirecut/error.hpp"
#include "wirecut/linalg.hpp"
#include "wirecut/noise.hpp"
#include "wirecut/rng.hpp"

namespace wirecut {

inline constexpr std::size_t kMaxDensityQubits = 12;
inline constexpr std::size_t kMaxStatevectorQubits = 26;

/// Dense distribution over n_bits outcome bits; index bit i is outcome position i.
/// Also used for quasi-probabilities, which may be negative.
struct ProbTable {
    std::size_t n_bits = 0;
    std::vector<double> p;

    ProbTable() = default;
    explicit ProbTable(std::size_t n) : n_bits(n), p(std::size_t{1} << n, 0.0) {
    }

    double operator[](std::uint64_t index) const {
        return p[index];
    }
    double at(std::string_view bits) const {
        require(bits.size() == n_bits, ErrorCode::Schema, "bitstring width mismatch");
        return p[string_to_bits(bits)];
    }
    double sum() const {
        // Kahan keeps the 1e-9 normalization checks honest on wide tables.
        double s = 0, c = 0;
        for (double v : p) {
            double y = v - c;
            double t = s + y;
            c = (t - s) - y;
            s = t;
        }
        return s;
    }
    double negative_mass() const {
        double s = 0;
        for (double v : p) {
            if (v < 0) {
                s += v;
            }
        }
        return s;
    }
    double max_abs_diff(const ProbTable &other) const {
        require(other.n_bits == n_bits, ErrorCode::Schema, "table width mismatch");
        double m = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            m = std::max(m, std::abs(p[i] - other.p[i]));
        }
        return m;
    }
};

/// Shot histogram. Sparse so that wide registers stay cheap.
struct CountTable {
    std::size_t n_bits = 0;
    std::uint64_t shots = 0;
    std::map<std::uint64_t, std::uint64_t> counts;

    void add(std::uint64_t outcome, std::uint64_t n = 1) {
        counts[outcome] += n;
        shots += n;
    }
    std::uint64_t at(std::string_view bits) const {
        auto it = counts.find(string_to_bits(bits));
        return it == counts.end() ? 0 : it->second;
    }
    /// Empirical frequencies as a dense table (n_bits must be small).
    ProbTable frequencies() const {
        require(shots > 0, ErrorCode::InvalidArgument, "count table has zero shots");
        ProbTable t(n_bits);
        for (auto [k, v] : counts) {
            t.p[k] = static_cast<double>(v) / static_cast<double>(shots);
        }
        return t;
    }
    bool operator==(const CountTable &other) const = default;
};

inline double total_variation(const ProbTable &a, const ProbTable &b) {
    require(a.n_bits == b.n_bits, ErrorCode::Schema, "table width mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.p.size(); ++i) {
        s += std::abs(a.p[i] - b.p[i]);
    }
    return s / 2;
}

// ---------------------------------------------------------------------------

/// rho stored as vec(rho): entry (r, c) lives at index r | (c << n).
class DensityMatrix {
   public:
    explicit DensityMatrix(std::size_t n) : n_(n), data_(std::size_t{1} << (2 * n), cplx{}) {
        require(n <= kMaxDensityQubits, ErrorCode::Capacity,
                "density matrix limited to " + std::to_string(kMaxDensityQubits) + " qubits, got " +
                    std::to_string(n));
        data_[0] = 1.0;
    }

    std::size_t n_qubits() const {
        return n_;
    }
    std::size_t dim() const {
        return std::size_t{1} << n_;
    }
    cplx operator()(std::size_t r, std::size_t c) const {
        return data_[r | (c << n_)];
    }

    void apply_gate(const Gate &g) {
        apply_unitary(gate_matrix(g.kind), g.qubits);
    }

    void apply_unitary(const Matrix &u, const std::vector<Wire> &qubits) {
        std::vector<std::size_t> rows(qubits.begin(), qubits.end());
        std::vector<std::size_t> cols;
        for (auto q : qubits) {
            cols.push_back(q + n_);
        }
        apply_matrix(data_, rows, u);
        apply_matrix(data_, cols, u.conj());
    }

    void apply_channel(const KrausChannel &ch, const std::vector<Wire> &qubits) {
        require(ch.n_qubits() == qubits.size(), ErrorCode::Invariant, "channel arity mismatch");
        require(ch.is_cptp(1e-10), ErrorCode::Invariant, "channel is not trace preserving");
        std::vector<std::size_t> targets(qubits.begin(), qubits.end());
        for (auto q : qubits) {
            targets.push_back(q + n_);
        }
        apply_matrix(data_, targets, ch.superoperator());
    }

    double trace() const {
        double t = 0;
        for (std::size_t i = 0; i < dim(); ++i) {
            t += (*this)(i, i).real();
        }
        return t;
    }

    double purity() const {
        double s = 0;
        for (auto v : data_) {
            s += std::norm(v);
        }
        return s;
    }

    double hermiticity_error() const {
        double m = 0;
        for (std::size_t r = 0; r < dim(); ++r) {
            for (std::size_t c = r; c < dim(); ++c) {
                m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
            }
        }
        return m;
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            d[i] = (*this)(i, i).real();
        }
        return d;
    }

   private:
    std::size_t n_;
    std::vector<cplx> data_;
};

/// Outcome distribution over `readouts` (in order) given computational basis
/// populations. Effects must be diagonal.
inline ProbTable readout_distribution(const std::vector<double> &populations, const std::vector<Readout> &readouts) {
    const std::size_t k = readouts.size();
    ProbTable t(k);
    for (std::size_t x = 0; x < populations.size(); ++x) {
        std::uint64_t local = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if ((x >> readouts[i].wire) & 1) {
                local |= std::uint64_t{1} << i;
            }
        }
        t.p[local] += populations[x];
    }
    // Each readout acts as a 2x2 column-stochastic map on its bit.
    for (std::size_t i = 0; i < k; ++i) {
        const auto &e = readouts[i].povm.effect;
        require(e.is_diagonal(1e-15), ErrorCode::Invariant, "readout effect must be diagonal");
        double one_given0 = e(0, 0).real();
        double one_given1 = e(1, 1).real();
        std::uint64_t bit = std::uint64_t{1} << i;
        for (std::uint64_t idx = 0; idx < t.p.size(); ++idx) {
            if (idx & bit) {
                continue;
            }
            double p0 = t.p[idx];
            double p1 = t.p[idx | bit];
            t.p[idx] = (1 - one_given0) * p0 + (1 - one_given1) * p1;
            t.p[idx | bit] = one_given0 * p0 + one_given1 * p1;
        }
    }
    for (auto &v : t.p) {
        if (v < 0 && v >= -1e-12) {
            v = 0;
        }
    }
    return t;
}

namespace detail {
inline std::vector<Readout> collect_readouts(const NoisyProgram &prog) {
    std::vector<Readout> out;
    for (const auto &op : prog.ops) {
        if (auto *r = std::get_if<Readout>(&op)) {
            out.push_back(*r);
        }
    }
    return out;
}
}  // namespace detail

/// Exact density-matrix evolution of a noisy program from |0..0><0..0|.
inline ProbTable run_exact(const NoisyProgram &prog) {
    DensityMatrix rho(prog.n_qubits);
    for (const auto &op : prog.ops) {
        if (auto *g = std::get_if<Gate>(&op)) {
            rho.apply_gate(*g);
        } else if (auto *ch = std::get_if<AppliedChannel>(&op)) {
            rho.apply_channel(ch->channel, ch->qubits);
        }
    }
    auto table = readout_distribution(rho.diagonal(), detail::collect_readouts(prog));
    require(std::abs(table.sum() - 1) <= 1e-9, ErrorCode::Invariant, "exact distribution is not normalized");
    return table;
}

/// Amplitudes of U|0..0>, index bit w <-> wire w.
inline std::vector<cplx> statevector_oracle(const Circuit &c) {
    require_valid(c);
    require(c.width <= kMaxStatevectorQubits, ErrorCode::Capacity,
            "statevector limited to " + std::to_string(kMaxStatevectorQubits) + " qubits");
    std::vector<cplx> psi(std::size_t{1} << c.width, cplx{});
    psi[0] = 1;
    for (const auto &g : c.gates) {
        std::vector<std::size_t> t(g.qubits.begin(), g.qubits.end());
        apply_matrix(psi, t, gate_matrix(g.kind));
    }
    return psi;
}

/// Ideal measurement distribution of c over its measured wires.
inline ProbTable ideal_distribution(const Circuit &c) {
    auto psi = statevector_oracle(c);
    std::vector<double> pop(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        pop[i] = std::norm(psi[i]);
    }
    std::vector<Readout> r;
    for (auto w : c.measured) {
        r.push_back({w, ReadoutPOVM{}});
    }
    return readout_distribution(pop, r);
}

/// Multinomial draw of `shots` outcomes from p.
inline CountTable sample_counts(const ProbTable &p, std::uint64_t shots, std::uint64_t seed) {
    require(shots >= 1, ErrorCode::InvalidArgument, "shots must be at least 1");
    std::vector<double> cdf(p.p.size());
    double acc = 0;
    for (std::size_t i = 0; i < p.p.size(); ++i) {
        acc += std::max(0.0, p.p[i]);
        cdf[i] = acc;
    }
    require(acc > 0, ErrorCode::InvalidArgument, "cannot sample from an all-zero table");
    Rng rng(seed);
    CountTable out;
    out.n_bits = p.n_bits;
    std::vector<std::uint64_t> dense(p.p.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++dense[sample_cdf(cdf, rng)];
    }
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] > 0) {
            out.add(i, dense[i]);
        }
    }
    return out;
}

/// Kraus-unraveled statevector sampling: one recorded outcome per trajectory.
inline CountTable run_trajectories(const NoisyProgram &prog, std::uint64_t n_traj, std::uint64_t seed) {
    const std::size_t n = prog.n_qubits;
    require(n <= kMaxStatevectorQubits, ErrorCode::Capacity,
            "trajectory backend limited to " + std::to_string(kMaxStatevectorQubits) + " qubits");
    for (const auto &op : prog.ops) {
        if (auto *ch = std::get_if<AppliedChannel>(&op)) {
            require(ch->channel.is_cptp(1e-10), ErrorCode::Invariant, "channel is not trace preserving");
        }
    }
    const auto readouts = detail::collect_readouts(prog);

    // Per-channel constant: K^dag K for probability evaluation.
    std::vector<std::vector<Matrix>> kdk;
    for (const auto &op : prog.ops) {
        if (auto *ch = std::get_if<AppliedChannel>(&op)) {
            std::vector<Matrix> v;
            for (const auto &k : ch->channel.operators) {
                v.push_back(k.dagger() * k);
            }
            kdk.push_back(std::move(v));
        }
    }

    Rng rng(seed);
    CountTable out;
    out.n_bits = readouts.size();
    std::vector<cplx> psi(std::size_t{1} << n);
    for (std::uint64_t t = 0; t < n_traj; ++t) {
        std::fill(psi.begin(), psi.end(), cplx{});
        psi[0] = 1;
        std::size_t channel_index = 0;
        for (const auto &op : prog.ops) {
            if (auto *g = std::get_if<Gate>(&op)) {
                std::vector<std::size_t> tg(g->qubits.begin(), g->qubits.end());
                apply_matrix(psi, tg, gate_matrix(g->kind));
            } else if (auto *ch = std::get_if<AppliedChannel>(&op)) {
                const auto &ops = ch->channel.operators;
                const auto &kk = kdk[channel_index++];
                std::vector<std::size_t> tg(ch->qubits.begin(), ch->qubits.end());
                const std::size_t d = ops.front().dim();
                // Reduced density matrix on the channel's qubits.
                Matrix red(d);
                std::vector<std::size_t> offsets(d, 0);
                for (std::size_t a = 0; a < d; ++a) {
                    for (std::size_t j = 0; j < tg.size(); ++j) {
                        if ((a >> j) & 1) {
                            offsets[a] |= std::size_t{1} << tg[j];
                        }
                    }
                }
                std::size_t mask = 0;
                for (auto q : tg) {
                    mask |= std::size_t{1} << q;
                }
                for (std::size_t base = 0; base < psi.size(); ++base) {
                    if (base & mask) {
                        continue;
                    }
                    for (std::size_t r = 0; r < d; ++r) {
                        cplx ar = psi[base | offsets[r]];
                        if (ar == cplx{}) {
                            continue;
                        }
                        for (std::size_t c = 0; c < d; ++c) {
                            red(r, c) += ar * std::conj(psi[base | offsets[c]]);
                        }
                    }
                }
                std::vector<double> cdf(ops.size());
                double acc = 0;
                for (std::size_t i = 0; i < ops.size(); ++i) {
                    // Tr(K^dag K rho) = sum_ab (K^dag K)_{ab} rho_{ba}
                    cplx v = 0;
                    for (std::size_t a = 0; a < d; ++a) {
                        for (std::size_t b = 0; b < d; ++b) {
                            v += kk[i](a, b) * red(b, a);
                        }
                    }
                    acc += std::max(0.0, v.real());
                    cdf[i] = acc;
                }
                std::size_t pick = sample_cdf(cdf, rng);
                double prob = cdf[pick] - (pick > 0 ? cdf[pick - 1] : 0.0);
                apply_matrix(psi, tg, ops[pick] * (1.0 / std::sqrt(prob)));
            }
        }
        std::uint64_t outcome = 0;
        for (std::size_t i = 0; i < readouts.size(); ++i) {
            const auto &r = readouts[i];
            std::size_t bit = std::size_t{1} << r.wire;
            double e0 = r.povm.prob_one(0), e1 = r.povm.prob_one(1);
            double p1 = 0;
            for (std::size_t x = 0; x < psi.size(); ++x) {
                p1 += std::norm(psi[x]) * ((x & bit) ? e1 : e0);
            }
            bool one = rng.uniform() < p1;
            // Luders update with sqrt(E) or sqrt(I - E); both diagonal.
            double f0 = one ? std::sqrt(e0) : std::sqrt(1 - e0);
            double f1 = one ? std::sqrt(e1) : std::sqrt(1 - e1);
            double norm = std::sqrt(one ? p1 : 1 - p1);
            for (std::size_t x = 0; x < psi.size(); ++x) {
                psi[x] *= ((x & bit) ? f1 : f0) / norm;
            }
            if (one) {
                outcome |= std::uint64_t{1} << i;
            }
        }
        out.add(outcome);
    }
    return out;
}

}  // namespace wirecut
