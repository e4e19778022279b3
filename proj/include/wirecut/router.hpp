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
#include <deque>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wirecut/circuit.hpp"
#include "wirecut/error.hpp"
#include "wirecut/simulator.hpp"

namespace wirecut {

class CouplingMap {
   public:
    CouplingMap() = default;

    /// Throws invalid-argument on self-loops, out-of-range indices, or a disconnected graph.
    CouplingMap(std::size_t n_physical, const std::vector<std::pair<Wire, Wire>> &edges)
        : n_(n_physical), adj_(n_physical) {
        require(n_physical >= 1, ErrorCode::InvalidArgument, "coupling map needs at least one qubit");
        for (auto [a, b] : edges) {
            require(a != b, ErrorCode::InvalidArgument, "self-loop on qubit " + std::to_string(a));
            require(a < n_ && b < n_, ErrorCode::InvalidArgument,
                    "edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
            if (edges_.insert({std::min(a, b), std::max(a, b)}).second) {
                adj_[a].push_back(b);
                adj_[b].push_back(a);
            }
        }
        for (auto &v : adj_) {
            std::sort(v.begin(), v.end());
        }
        auto d = distances_from(0);
        for (auto x : d) {
            require(x != kUnreachable, ErrorCode::InvalidArgument, "coupling map is not connected");
        }
    }

    std::size_t n_physical() const {
        return n_;
    }
    const std::set<std::pair<Wire, Wire>> &edges() const {
        return edges_;
    }
    const std::vector<Wire> &neighbors(Wire q) const {
        return adj_[q];
    }
    bool adjacent(Wire a, Wire b) const {
        return edges_.count({std::min(a, b), std::max(a, b)}) > 0;
    }

    static constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

    /// BFS hop counts from `source`.
    std::vector<std::size_t> distances_from(Wire source) const {
        std::vector<std::size_t> d(n_, kUnreachable);
        std::deque<Wire> queue{source};
        d[source] = 0;
        while (!queue.empty()) {
            Wire q = queue.front();
            queue.pop_front();
            for (auto nb : adj_[q]) {
                if (d[nb] == kUnreachable) {
                    d[nb] = d[q] + 1;
                    queue.push_back(nb);
                }
            }
        }
        return d;
    }

   private:
    std::size_t n_ = 0;
    std::set<std::pair<Wire, Wire>> edges_;
    std::vector<std::vector<Wire>> adj_;
};

/// Row-major rows x cols grid with nearest-neighbour edges.
inline CouplingMap grid_coupling(std::size_t rows, std::size_t cols) {
    require(rows >= 1 && cols >= 1, ErrorCode::InvalidArgument, "grid dimensions must be positive");
    std::vector<std::pair<Wire, Wire>> edges;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            Wire q = static_cast<Wire>(r * cols + c);
            if (c + 1 < cols) {
                edges.emplace_back(q, q + 1);
            }
            if (r + 1 < rows) {
                edges.emplace_back(q, static_cast<Wire>(q + cols));
            }
        }
    }
    return CouplingMap(rows * cols, edges);
}

inline CouplingMap complete_coupling(std::size_t n) {
    std::vector<std::pair<Wire, Wire>> edges;
    for (Wire a = 0; a < n; ++a) {
        for (Wire b = a + 1; b < n; ++b) {
            edges.emplace_back(a, b);
        }
    }
    return CouplingMap(n, edges);
}

struct RoutedCircuit {
    /// Over physical qubits; measured[i] is the physical home of the original measured[i].
    Circuit circuit;
    std::vector<Wire> initial_placement;  // logical -> physical
    std::vector<Wire> final_permutation;  // logical -> physical at measurement time
    std::size_t swap_count = 0;
};

/// Greedy SWAP insertion: gates are taken in order; for a two-qubit gate on
/// non-adjacent qubits the first operand walks a shortest path toward the
/// second (ties to the smallest next index) until they are neighbours.
inline RoutedCircuit route(const Circuit &c, const CouplingMap &map,
                           std::optional<std::vector<Wire>> placement = std::nullopt) {
    require_valid(c);
    require(c.width <= map.n_physical(), ErrorCode::Capacity,
            "circuit needs " + std::to_string(c.width) + " qubits but the coupling map has " +
                std::to_string(map.n_physical()));
    std::vector<Wire> phys(c.width);
    if (placement) {
        require(placement->size() == c.width, ErrorCode::InvalidArgument, "placement size does not match width");
        phys = *placement;
    } else {
        for (Wire w = 0; w < c.width; ++w) {
            phys[w] = w;
        }
    }
    constexpr Wire kFree = std::numeric_limits<Wire>::max();
    std::vector<Wire> logical_at(map.n_physical(), kFree);
    for (Wire w = 0; w < c.width; ++w) {
        require(phys[w] < map.n_physical(), ErrorCode::InvalidArgument, "placement target out of range");
        require(logical_at[phys[w]] == kFree, ErrorCode::InvalidArgument, "placement is not injective");
        logical_at[phys[w]] = w;
    }

    RoutedCircuit out;
    out.initial_placement = phys;
    out.circuit = Circuit(map.n_physical());
    auto do_swap = [&](Wire a, Wire b) {
        out.circuit.add(GateKind::SWAP, a, b);
        ++out.swap_count;
        std::swap(logical_at[a], logical_at[b]);
        if (logical_at[a] != kFree) {
            phys[logical_at[a]] = a;
        }
        if (logical_at[b] != kFree) {
            phys[logical_at[b]] = b;
        }
    };

    for (const auto &g : c.gates) {
        if (g.qubits.size() == 2) {
            Wire mover = g.qubits[0], anchor = g.qubits[1];
            while (!map.adjacent(phys[mover], phys[anchor])) {
                auto dist = map.distances_from(phys[anchor]);
                Wire here = phys[mover];
                Wire step = kFree;
                for (auto nb : map.neighbors(here)) {
                    if (dist[nb] + 1 == dist[here]) {
                        step = nb;  // neighbours are sorted, first hit is the smallest
                        break;
                    }
                }
                do_swap(here, step);
            }
        }
        Gate mapped{g.kind, {}};
        for (auto q : g.qubits) {
            mapped.qubits.push_back(phys[q]);
        }
        out.circuit.gates.push_back(mapped);
    }
    for (auto w : c.measured) {
        out.circuit.measured.push_back(phys[w]);
    }
    out.final_permutation = phys;
    return out;
}

/// Restricts a circuit to the wires it actually uses (gates or measurement),
/// preserving their relative order. Returns the compacted circuit and the
/// original index of each kept wire.
inline std::pair<Circuit, std::vector<Wire>> compact_wires(const Circuit &c) {
    std::vector<bool> used(c.width, false);
    for (const auto &g : c.gates) {
        for (auto q : g.qubits) {
            used[q] = true;
        }
    }
    for (auto w : c.measured) {
        used[w] = true;
    }
    std::vector<Wire> kept;
    std::vector<Wire> index(c.width, 0);
    for (Wire w = 0; w < c.width; ++w) {
        if (used[w]) {
            index[w] = static_cast<Wire>(kept.size());
            kept.push_back(w);
        }
    }
    Circuit out(std::max<std::size_t>(kept.size(), 1));
    for (const auto &g : c.gates) {
        Gate m{g.kind, {}};
        for (auto q : g.qubits) {
            m.qubits.push_back(index[q]);
        }
        out.gates.push_back(m);
    }
    for (auto w : c.measured) {
        out.measured.push_back(index[w]);
    }
    return {out, kept};
}

struct RouteCheck {
    bool ok = true;
    std::vector<std::string> problems;
};

/// Adjacency of every two-qubit gate, consistency of the measurement map with
/// final_permutation, and equality of the ideal output distributions.
inline RouteCheck verify_routed(const Circuit &original, const RoutedCircuit &routed, const CouplingMap &map,
                                double tol = 1e-12) {
    RouteCheck r;
    auto problem = [&](std::string s) {
        r.ok = false;
        r.problems.push_back(std::move(s));
    };
    for (std::size_t i = 0; i < routed.circuit.gates.size(); ++i) {
        const auto &g = routed.circuit.gates[i];
        if (g.qubits.size() == 2 && !map.adjacent(g.qubits[0], g.qubits[1])) {
            problem("gate " + std::to_string(i) + " acts on non-adjacent qubits " + std::to_string(g.qubits[0]) +
                    "," + std::to_string(g.qubits[1]));
        }
    }
    if (routed.final_permutation.size() != original.width) {
        problem("final permutation has the wrong size");
        return r;
    }
    Circuit relabeled = routed.circuit;
    relabeled.measured.clear();
    for (auto w : original.measured) {
        relabeled.measured.push_back(routed.final_permutation[w]);
    }
    if (!validate(relabeled).empty()) {
        problem("final permutation does not yield a valid measurement map");
        return r;
    }
    if (relabeled.measured != routed.circuit.measured) {
        problem("circuit measurement map disagrees with final_permutation");
    }
    auto expected = ideal_distribution(original);
    auto actual = ideal_distribution(compact_wires(relabeled).first);
    double diff = expected.max_abs_diff(actual);
    if (diff > tol) {
        problem("output distribution differs by " + std::to_string(diff));
    }
    return r;
}

}  // namespace wirecut
