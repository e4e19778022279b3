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
#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "wirecut/circuit.hpp"
#include "wirecut/error.hpp"
#include "wirecut/linalg.hpp"

namespace wirecut {

/// Qubit-averaged calibration record. Coherence times and t_meas are in
/// microseconds, gate durations in nanoseconds. An infinite T1/T2 disables
/// the corresponding decoherence.
struct NoiseParameters {
    double t1_us = 65.0;
    double t2_us = 70.0;
    double t_meas_us = 2.75;
    double tau_1q_ns = 20.0;
    double tau_2q_ns = 200.0;
    double eps_avg_1q = 0.00041;
    double eps_avg_2q = 0.00202;

    static NoiseParameters defaults() {
        return {};
    }

    static NoiseParameters noiseless() {
        NoiseParameters p;
        p.t1_us = std::numeric_limits<double>::infinity();
        p.t2_us = std::numeric_limits<double>::infinity();
        p.t_meas_us = 0;
        p.eps_avg_1q = 0;
        p.eps_avg_2q = 0;
        return p;
    }

    bool operator==(const NoiseParameters &other) const = default;
};

inline std::vector<std::string> validate(const NoiseParameters &p) {
    std::vector<std::string> out;
    if (!(p.t1_us > 0)) {
        out.push_back("T1 must be positive");
    }
    if (!(p.t2_us > 0)) {
        out.push_back("T2 must be positive");
    }
    if (p.t2_us > 2 * p.t1_us) {
        out.push_back("T2 must not exceed 2*T1 (got T2=" + std::to_string(p.t2_us) +
                      ", 2*T1=" + std::to_string(2 * p.t1_us) + ")");
    }
    if (!(p.t_meas_us >= 0)) {
        out.push_back("t_meas must be non-negative");
    }
    if (!(p.tau_1q_ns > 0) || !(p.tau_2q_ns > 0)) {
        out.push_back("gate durations must be positive");
    }
    for (double e : {p.eps_avg_1q, p.eps_avg_2q}) {
        if (!(e >= 0 && e < 1)) {
            out.push_back("average gate errors must lie in [0, 1)");
            break;
        }
    }
    return out;
}

inline void require_valid(const NoiseParameters &p) {
    auto v = validate(p);
    if (!v.empty()) {
        std::string msg = "invalid noise parameters:";
        for (const auto &s : v) {
            msg += " [" + s + "]";
        }
        fail(ErrorCode::InvalidArgument, msg);
    }
}

/// A CPTP map given by its Kraus operators (2x2 or 4x4).
struct KrausChannel {
    std::vector<Matrix> operators;

    std::size_t n_qubits() const {
        return operators.empty() ? 0 : (operators.front().dim() == 2 ? 1 : 2);
    }

    /// max |sum K^dag K - I|.
    double completeness_error() const {
        if (operators.empty()) {
            return std::numeric_limits<double>::infinity();
        }
        std::size_t d = operators.front().dim();
        Matrix acc(d);
        for (const auto &k : operators) {
            acc += k.dagger() * k;
        }
        return (acc - Matrix::identity(d)).max_abs();
    }

    bool is_cptp(double tol = 1e-12) const {
        return completeness_error() <= tol;
    }

    /// Superoperator acting on vec(rho) with row bits low and column bits high.
    Matrix superoperator() const {
        std::size_t d = operators.front().dim();
        Matrix s(d * d);
        for (const auto &k : operators) {
            s += kron(k.conj(), k);
        }
        return s;
    }
};

/// Two-outcome readout {I - E, E}; E is the effect for outcome "1".
struct ReadoutPOVM {
    Matrix effect = Matrix::diagonal({0, 1});

    /// Probability of reading "1" given computational basis value `bit`.
    double prob_one(int bit) const {
        return effect(bit, bit).real();
    }

    /// Relaxation probability during readout.
    double gamma() const {
        return 1.0 - effect(1, 1).real();
    }
};

/// T_phi from 1/T_phi = 1/T2 - 1/(2 T1). Infinite when T2 = 2 T1.
inline double dephasing_time(double t1_us, double t2_us) {
    double rate = 1.0 / t2_us - 1.0 / (2.0 * t1_us);
    require(rate >= -1e-15, ErrorCode::InvalidArgument, "T2 > 2*T1 gives a negative dephasing rate");
    if (rate <= 0) {
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / rate;
}

inline double amplitude_damping_probability(double tau_us, double t1_us) {
    return -std::expm1(-tau_us / t1_us);
}

inline double dephasing_probability(double tau_us, double t1_us, double t2_us) {
    return -std::expm1(-2.0 * tau_us / dephasing_time(t1_us, t2_us));
}

inline KrausChannel amplitude_damping(double tau_us, double t1_us) {
    require(t1_us > 0, ErrorCode::InvalidArgument, "T1 must be positive");
    require(tau_us >= 0, ErrorCode::InvalidArgument, "idle duration must be non-negative");
    double p = amplitude_damping_probability(tau_us, t1_us);
    return {{Matrix(2, {1, 0, 0, std::sqrt(1 - p)}), Matrix(2, {0, std::sqrt(p), 0, 0})}};
}

inline KrausChannel pure_dephasing(double tau_us, double t1_us, double t2_us) {
    require(t1_us > 0 && t2_us > 0, ErrorCode::InvalidArgument, "T1 and T2 must be positive");
    require(t2_us <= 2 * t1_us, ErrorCode::InvalidArgument, "T2 > 2*T1 gives a negative dephasing rate");
    require(tau_us >= 0, ErrorCode::InvalidArgument, "idle duration must be non-negative");
    double p = dephasing_probability(tau_us, t1_us, t2_us);
    return {{Matrix::diagonal({1, std::sqrt(1 - p)}), Matrix::diagonal({0, std::sqrt(p)})}};
}

/// rho -> (1-p) rho + (p/3) sum_i sigma_i rho sigma_i.
inline KrausChannel depolarizing_1q(double p) {
    require(p >= 0 && p <= 1, ErrorCode::InvalidArgument, "depolarizing probability out of [0,1]");
    double a = std::sqrt(1 - p);
    double b = std::sqrt(p / 3);
    return {{pauli::I() * a, pauli::X() * b, pauli::Y() * b, pauli::Z() * b}};
}

/// Tensor product of two single-qubit depolarizing channels with the same p.
inline KrausChannel depolarizing_2q(double p) {
    auto one = depolarizing_1q(p);
    KrausChannel out;
    for (const auto &hi : one.operators) {
        for (const auto &lo : one.operators) {
            out.operators.push_back(kron(hi, lo));
        }
    }
    return out;
}

/// Entanglement (process) fidelity sum |Tr K|^2 / d^2 mapped to the average
/// gate fidelity (d F_pro + 1) / (d + 1).
inline double average_gate_fidelity(const KrausChannel &ch) {
    double d = static_cast<double>(ch.operators.front().dim());
    double f_pro = 0;
    for (const auto &k : ch.operators) {
        f_pro += std::norm(k.trace());
    }
    f_pro /= d * d;
    return (d * f_pro + 1) / (d + 1);
}

/// Depolarizing strength whose average gate error equals eps_avg.
/// 1 qubit: F = 1 - 2p/3. 2 qubits (tensor product): F = (4 (1-p)^2 + 1) / 5.
inline double p_from_avg_error(double eps_avg, int n_qubits) {
    require(eps_avg >= 0 && eps_avg < 1, ErrorCode::InvalidArgument, "average error must lie in [0, 1)");
    double p = 0;
    if (n_qubits == 1) {
        p = 1.5 * eps_avg;
    } else if (n_qubits == 2) {
        double f_pro = 1 - 1.25 * eps_avg;
        require(f_pro >= 0, ErrorCode::InvalidArgument, "average error too large for a 2-qubit depolarizing model");
        p = 1 - std::sqrt(f_pro);
    } else {
        fail(ErrorCode::InvalidArgument, "n_qubits must be 1 or 2");
    }
    require(p <= 1, ErrorCode::InvalidArgument, "average error implies depolarizing probability above 1");
    return p;
}

inline ReadoutPOVM readout_povm(double t_meas_us, double t1_us) {
    require(t_meas_us >= 0, ErrorCode::InvalidArgument, "t_meas must be non-negative");
    require(t1_us > 0, ErrorCode::InvalidArgument, "T1 must be positive");
    double gamma = amplitude_damping_probability(t_meas_us, t1_us);
    return ReadoutPOVM{Matrix::diagonal({0, 1 - gamma})};
}

inline double t_meas_from_gamma(double gamma, double t1_us) {
    require(gamma >= 0 && gamma < 1, ErrorCode::InvalidArgument, "readout error must lie in [0, 1)");
    return -t1_us * std::log1p(-gamma);
}

// ---------------------------------------------------------------------------
// Scheduling

inline double gate_duration_ns(GateKind kind, const NoiseParameters &p) {
    switch (kind) {
        case GateKind::CNOT:
            return p.tau_2q_ns;
        case GateKind::SWAP:
            return 3 * p.tau_2q_ns;  // three CNOTs
        default:
            return p.tau_1q_ns;
    }
}

struct TimedGate {
    std::size_t gate_index;
    double start_ns;
    double duration_ns;
};

struct IdleInterval {
    Wire wire;
    double start_ns;
    double length_ns;
};

struct ScheduledCircuit {
    Circuit circuit;
    std::vector<TimedGate> ops;
    std::vector<IdleInterval> idles;
    double makespan_ns = 0;

    double idle_total(Wire w) const {
        double t = 0;
        for (const auto &i : idles) {
            if (i.wire == w) {
                t += i.length_ns;
            }
        }
        return t;
    }
};

/// ASAP: each gate starts once all its wires are free; all measurements start
/// at the makespan, so every wire idles from its last gate until then.
/// Zero-length gaps are not recorded.
inline ScheduledCircuit schedule_asap(const Circuit &c, const NoiseParameters &params) {
    require_valid(c);
    ScheduledCircuit s;
    s.circuit = c;
    std::vector<double> free_at(c.width, 0.0);
    std::vector<std::vector<std::pair<double, double>>> busy(c.width);
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const auto &g = c.gates[i];
        double start = 0;
        for (auto q : g.qubits) {
            start = std::max(start, free_at[q]);
        }
        double dur = gate_duration_ns(g.kind, params);
        s.ops.push_back({i, start, dur});
        for (auto q : g.qubits) {
            free_at[q] = start + dur;
            busy[q].emplace_back(start, start + dur);
        }
        s.makespan_ns = std::max(s.makespan_ns, start + dur);
    }
    for (Wire w = 0; w < c.width; ++w) {
        double cursor = 0;
        for (auto [a, b] : busy[w]) {
            if (a > cursor) {
                s.idles.push_back({w, cursor, a - cursor});
            }
            cursor = b;
        }
        if (s.makespan_ns > cursor) {
            s.idles.push_back({w, cursor, s.makespan_ns - cursor});
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Noise decoration

struct AppliedChannel {
    std::string label;  // "depol1", "depol2", "ad", "pd"
    KrausChannel channel;
    std::vector<Wire> qubits;
};

struct Readout {
    Wire wire;
    ReadoutPOVM povm;
};

using NoisyOp = std::variant<Gate, AppliedChannel, Readout>;

/// Gates, channels and terminal readouts in execution order. Readouts come
/// last, one per measured wire in measurement order.
struct NoisyProgram {
    std::size_t n_qubits = 0;
    std::vector<NoisyOp> ops;

    std::size_t count_gates() const {
        return std::count_if(ops.begin(), ops.end(), [](const NoisyOp &op) { return std::holds_alternative<Gate>(op); });
    }
    std::size_t count_channels(const std::string &label = {}) const {
        return std::count_if(ops.begin(), ops.end(), [&](const NoisyOp &op) {
            auto *ch = std::get_if<AppliedChannel>(&op);
            return ch != nullptr && (label.empty() || ch->label == label);
        });
    }
};

/// Noiseless program: the bare gates followed by ideal readout.
inline NoisyProgram ideal_program(const Circuit &c) {
    require_valid(c);
    NoisyProgram prog{c.width, {}};
    for (const auto &g : c.gates) {
        prog.ops.emplace_back(g);
    }
    for (auto w : c.measured) {
        prog.ops.emplace_back(Readout{w, ReadoutPOVM{}});
    }
    return prog;
}

/// Interleaves each gate with its depolarizing channel, inserts AD then PD
/// for every idle interval, and ends with the readout POVM on measured wires.
/// Channels that are exactly the identity are omitted.
inline NoisyProgram noise_pass(const ScheduledCircuit &s, const NoiseParameters &params) {
    require_valid(params);
    const double p1 = p_from_avg_error(params.eps_avg_1q, 1);
    const double p2 = p_from_avg_error(params.eps_avg_2q, 2);

    struct Event {
        double time;
        int order;  // tie-break only: a gate and an idle never start together on one wire
        std::size_t index;
        bool is_gate;
    };
    std::vector<Event> events;
    for (std::size_t i = 0; i < s.ops.size(); ++i) {
        events.push_back({s.ops[i].start_ns, 0, i, true});
    }
    for (std::size_t i = 0; i < s.idles.size(); ++i) {
        events.push_back({s.idles[i].start_ns, 1, i, false});
    }
    std::stable_sort(events.begin(), events.end(), [](const Event &a, const Event &b) {
        if (a.time != b.time) {
            return a.time < b.time;
        }
        return a.order < b.order;
    });

    NoisyProgram prog{s.circuit.width, {}};
    for (const auto &e : events) {
        if (e.is_gate) {
            const auto &g = s.circuit.gates[s.ops[e.index].gate_index];
            prog.ops.emplace_back(g);
            if (gate_arity(g.kind) == 1) {
                if (p1 > 0) {
                    prog.ops.emplace_back(AppliedChannel{"depol1", depolarizing_1q(p1), g.qubits});
                }
            } else if (p2 > 0) {
                int repeats = g.kind == GateKind::SWAP ? 3 : 1;
                for (int r = 0; r < repeats; ++r) {
                    prog.ops.emplace_back(AppliedChannel{"depol2", depolarizing_2q(p2), g.qubits});
                }
            }
        } else {
            const auto &idle = s.idles[e.index];
            double tau_us = idle.length_ns * 1e-3;
            if (amplitude_damping_probability(tau_us, params.t1_us) > 0) {
                prog.ops.emplace_back(AppliedChannel{"ad", amplitude_damping(tau_us, params.t1_us), {idle.wire}});
            }
            if (dephasing_probability(tau_us, params.t1_us, params.t2_us) > 0) {
                prog.ops.emplace_back(
                    AppliedChannel{"pd", pure_dephasing(tau_us, params.t1_us, params.t2_us), {idle.wire}});
            }
        }
    }
    ReadoutPOVM povm = readout_povm(params.t_meas_us, params.t1_us);
    for (auto w : s.circuit.measured) {
        prog.ops.emplace_back(Readout{w, povm});
    }
    return prog;
}

inline NoisyProgram noisy_program(const Circuit &c, const NoiseParameters &params) {
    return noise_pass(schedule_asap(c, params), params);
}

}  // namespace wirecut
