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
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wirecut/error.hpp"

namespace wirecut {

using Wire = std::uint32_t;

enum class GateKind : std::uint8_t { H, X, Y, Z, S, SDG, CNOT, SWAP };

inline constexpr std::size_t gate_arity(GateKind kind) {
    return (kind == GateKind::CNOT || kind == GateKind::SWAP) ? 2 : 1;
}

inline constexpr std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H:
            return "h";
        case GateKind::X:
            return "x";
        case GateKind::Y:
            return "y";
        case GateKind::Z:
            return "z";
        case GateKind::S:
            return "s";
        case GateKind::SDG:
            return "sdg";
        case GateKind::CNOT:
            return "cx";
        case GateKind::SWAP:
            return "swap";
    }
    return "?";
}

inline std::optional<GateKind> gate_from_name(std::string_view name) {
    for (auto kind : {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::SDG,
                      GateKind::CNOT, GateKind::SWAP}) {
        if (gate_name(kind) == name) {
            return kind;
        }
    }
    if (name == "cnot" || name == "CNOT") {
        return GateKind::CNOT;
    }
    return std::nullopt;
}

/// A gate and the wires it acts on. For CNOT, qubits[0] is the control.
/// Arity is not enforced here so that malformed circuits can be represented
/// and reported by validate().
struct Gate {
    GateKind kind;
    std::vector<Wire> qubits;

    bool acts_on(Wire w) const {
        for (auto q : qubits) {
            if (q == w) {
                return true;
            }
        }
        return false;
    }

    bool operator==(const Gate &other) const = default;
    auto operator<=>(const Gate &other) const = default;
};

inline Gate make_gate(GateKind kind, Wire a) {
    return Gate{kind, {a}};
}

inline Gate make_gate(GateKind kind, Wire a, Wire b) {
    return Gate{kind, {a, b}};
}

/// Gate list applied to |0...0> followed by terminal measurement of `measured`
/// (in that order; bit i of an outcome is measured[i]).
struct Circuit {
    std::size_t width = 0;
    std::vector<Gate> gates;
    std::vector<Wire> measured;

    Circuit() = default;
    explicit Circuit(std::size_t w) : width(w) {
    }

    Circuit &add(GateKind kind, Wire a) {
        gates.push_back(make_gate(kind, a));
        return *this;
    }
    Circuit &add(GateKind kind, Wire a, Wire b) {
        gates.push_back(make_gate(kind, a, b));
        return *this;
    }
    Circuit &measure_all() {
        measured.clear();
        for (Wire w = 0; w < width; ++w) {
            measured.push_back(w);
        }
        return *this;
    }

    bool operator==(const Circuit &other) const = default;
};

/// Severs `wire` between the gate at index `position` and the next gate on that wire.
struct WireCut {
    Wire wire = 0;
    std::size_t position = 0;

    bool operator==(const WireCut &other) const = default;
    auto operator<=>(const WireCut &other) const = default;
};

/// Returns every invariant violation as a human-readable line; empty means valid.
inline std::vector<std::string> validate(const Circuit &c) {
    std::vector<std::string> out;
    if (c.width == 0) {
        out.push_back("width must be at least 1");
    }
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const auto &g = c.gates[i];
        std::string name(gate_name(g.kind));
        if (g.qubits.size() != gate_arity(g.kind)) {
            out.push_back("arity: gate " + std::to_string(i) + " (" + name + ") expects " +
                          std::to_string(gate_arity(g.kind)) + " qubits, got " + std::to_string(g.qubits.size()));
        } else if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1]) {
            out.push_back("arity: gate " + std::to_string(i) + " (" + name + ") acts twice on wire " +
                          std::to_string(g.qubits[0]));
        }
        for (auto q : g.qubits) {
            if (q >= c.width) {
                out.push_back("range: gate " + std::to_string(i) + " (" + name + ") uses wire " + std::to_string(q) +
                              " but width is " + std::to_string(c.width));
            }
        }
    }
    std::set<Wire> seen;
    for (auto w : c.measured) {
        if (w >= c.width) {
            out.push_back("range: measured wire " + std::to_string(w) + " but width is " + std::to_string(c.width));
        }
        if (!seen.insert(w).second) {
            out.push_back("duplicate measurement of wire " + std::to_string(w));
        }
    }
    return out;
}

inline void require_valid(const Circuit &c) {
    auto violations = validate(c);
    if (!violations.empty()) {
        std::string msg = "invalid circuit:";
        for (const auto &v : violations) {
            msg += " [" + v + "]";
        }
        fail(ErrorCode::InvalidArgument, msg);
    }
}

/// GHZ chain with the X layer starting at wire floor(m/2). Accepts odd m so that
/// odd-width sweep points can be run; the ideal state is
/// (|0^{h}1^{m-h}> + |1^{h}0^{m-h}>)/sqrt(2) with h = floor(m/2).
inline Circuit build_split_ghz(std::size_t m) {
    require(m >= 2, ErrorCode::InvalidArgument, "GHZ chain needs at least 2 qubits, got " + std::to_string(m));
    Circuit c(m);
    c.add(GateKind::H, 0);
    for (Wire i = 0; i + 1 < m; ++i) {
        c.add(GateKind::CNOT, i, i + 1);
    }
    for (Wire j = static_cast<Wire>(m / 2); j < m; ++j) {
        c.add(GateKind::X, j);
    }
    c.measure_all();
    return c;
}

/// H(0); CNOT(i, i+1) for i < m-1; X on the upper half; measure all.
inline Circuit build_ghz_chain(std::size_t m) {
    require(m >= 2 && m % 2 == 0, ErrorCode::InvalidArgument,
            "GHZ chain needs an even qubit count >= 2, got " + std::to_string(m));
    return build_split_ghz(m);
}

/// The two ideal outcomes of build_split_ghz(m), as indices with bit i = wire i.
inline std::array<std::uint64_t, 2> ghz_target_outcomes(std::size_t m) {
    std::uint64_t upper = 0;
    for (std::size_t j = m / 2; j < m; ++j) {
        upper |= std::uint64_t{1} << j;
    }
    std::uint64_t all = (m >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1);
    return {upper, all & ~upper};
}

/// Bit i of `index` rendered at string position i.
inline std::string bits_to_string(std::uint64_t index, std::size_t n_bits) {
    std::string s(n_bits, '0');
    for (std::size_t i = 0; i < n_bits; ++i) {
        if ((index >> i) & 1) {
            s[i] = '1';
        }
    }
    return s;
}

inline std::uint64_t string_to_bits(std::string_view s) {
    require(s.size() <= 64, ErrorCode::Schema, "bitstring longer than 64 bits");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1') {
            v |= std::uint64_t{1} << i;
        } else {
            require(s[i] == '0', ErrorCode::Schema, "bitstring contains '" + std::string(1, s[i]) + "'");
        }
    }
    return v;
}

/// OpenQASM 2.0 text. `comment` lines (if any) are emitted after the header.
inline std::string export_qasm(const Circuit &c, const std::vector<std::string> &comment = {}) {
    require_valid(c);
    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "include \"qelib1.inc\";\n";
    for (const auto &line : comment) {
        out << "// " << line << "\n";
    }
    out << "qreg q[" << c.width << "];\n";
    if (!c.measured.empty()) {
        out << "creg c[" << c.measured.size() << "];\n";
    }
    for (const auto &g : c.gates) {
        out << gate_name(g.kind) << " q[" << g.qubits[0] << "]";
        if (g.qubits.size() == 2) {
            out << ",q[" << g.qubits[1] << "]";
        }
        out << ";\n";
    }
    for (std::size_t i = 0; i < c.measured.size(); ++i) {
        out << "measure q[" << c.measured[i] << "] -> c[" << i << "];\n";
    }
    return out.str();
}

}  // namespace wirecut
