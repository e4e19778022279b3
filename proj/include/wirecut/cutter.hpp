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
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wirecut/circuit.hpp"
#include "wirecut/error.hpp"

namespace wirecut {

enum class Axis : std::uint8_t { X, Y, Z };

inline constexpr char axis_char(Axis a) {
    return a == Axis::X ? 'X' : (a == Axis::Y ? 'Y' : 'Z');
}

inline Axis axis_from_char(char c) {
    switch (c) {
        case 'X':
            return Axis::X;
        case 'Y':
            return Axis::Y;
        case 'Z':
            return Axis::Z;
        default:
            fail(ErrorCode::Schema, std::string("unknown measurement axis '") + c + "'");
    }
}

/// Cut k is cuts[k].
struct CutSet {
    std::vector<WireCut> cuts;

    std::size_t size() const {
        return cuts.size();
    }
    bool empty() const {
        return cuts.empty();
    }
};

/// Downstream side of cut k: `steered` receives the Bell-steered state,
/// `ancilla` is its Bell partner, measured in the cut basis.
struct InCut {
    std::size_t cut;
    Wire steered;
    Wire ancilla;
};

/// Upstream side of cut k: `wire` is measured in the cut basis.
struct OutCut {
    std::size_t cut;
    Wire wire;
};

/// A logical output of the original circuit produced by this fragment.
struct OutputBit {
    Wire local;
    std::size_t global_bit;  // position in the original circuit's measured list
};

struct Fragment {
    std::size_t id = 0;
    /// Gates over local wires (Bell preparation and basis changes excluded).
    /// `measured` lists the logical output wires in global bit order.
    Circuit subcircuit;
    /// Global wire of every local wire; an ancilla maps to its cut's wire.
    std::vector<Wire> local_to_global;
    std::vector<InCut> in_cuts;    // sorted by cut index
    std::vector<OutCut> out_cuts;  // sorted by cut index
    std::vector<OutputBit> outputs;
    std::vector<std::size_t> gate_indices;  // indices into the original gate list

    std::string name() const {
        return "f" + std::to_string(id);
    }

    /// Cuts touching this fragment, ascending.
    std::vector<std::size_t> touching_cuts() const {
        std::vector<std::size_t> out;
        for (const auto &c : in_cuts) {
            out.push_back(c.cut);
        }
        for (const auto &c : out_cuts) {
            out.push_back(c.cut);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Logical wire segments: the block's own wires plus one Bell-fed wire per in-cut.
    std::size_t fragment_size() const {
        return subcircuit.width - in_cuts.size();
    }

    /// Qubits needed to execute a variant (fragment_size plus one ancilla per in-cut).
    std::size_t physical_width() const {
        return subcircuit.width;
    }

    std::size_t variant_count() const {
        std::size_t n = 1;
        for (std::size_t i = 0; i < in_cuts.size() + out_cuts.size(); ++i) {
            n *= 3;
        }
        return n;
    }
};

namespace detail {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
};

}  // namespace detail

/// Checks every cut against the circuit; throws invalid-cut on the first problem.
inline void validate_cuts(const Circuit &c, const CutSet &cuts) {
    std::set<WireCut> seen;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        const auto &cut = cuts.cuts[k];
        std::string where = "cut " + std::to_string(k) + " (wire " + std::to_string(cut.wire) + ", position " +
                            std::to_string(cut.position) + ")";
        require(seen.insert(cut).second, ErrorCode::InvalidCut, where + " is duplicated");
        require(cut.wire < c.width, ErrorCode::InvalidCut, where + " names a wire outside the circuit");
        require(cut.position < c.gates.size(), ErrorCode::InvalidCut, where + " is past the last gate");
        require(c.gates[cut.position].acts_on(cut.wire), ErrorCode::InvalidCut,
                where + " does not follow a gate on that wire");
        bool later = false;
        for (std::size_t i = cut.position + 1; i < c.gates.size() && !later; ++i) {
            later = c.gates[i].acts_on(cut.wire);
        }
        require(later, ErrorCode::InvalidCut, where + " has no later gate on that wire (measurement-only position)");
    }
}

/// Severs the cut wires and returns the connected components of the gate
/// graph as fragments, ordered by their smallest global wire.
///
/// Local wire layout: segments in (global wire, segment) order, followed by
/// one ancilla per in-cut (ascending cut index).
inline std::vector<Fragment> fragment(const Circuit &c, const CutSet &cuts) {
    require_valid(c);
    validate_cuts(c, cuts);

    // Sorted cut positions per wire define the segments of that wire.
    std::vector<std::vector<std::size_t>> cut_positions(c.width);
    for (const auto &cut : cuts.cuts) {
        cut_positions[cut.wire].push_back(cut.position);
    }
    std::vector<std::size_t> seg_base(c.width + 1, 0);
    for (std::size_t w = 0; w < c.width; ++w) {
        std::sort(cut_positions[w].begin(), cut_positions[w].end());
        seg_base[w + 1] = seg_base[w] + cut_positions[w].size() + 1;
    }
    auto segment_of = [&](Wire w, std::size_t gate_index) {
        const auto &pos = cut_positions[w];
        std::size_t s = static_cast<std::size_t>(std::lower_bound(pos.begin(), pos.end(), gate_index) - pos.begin());
        return seg_base[w] + s;
    };
    const std::size_t n_segments = seg_base[c.width];
    std::vector<Wire> seg_wire(n_segments);
    for (Wire w = 0; w < c.width; ++w) {
        for (std::size_t s = seg_base[w]; s < seg_base[w + 1]; ++s) {
            seg_wire[s] = w;
        }
    }

    detail::UnionFind uf(n_segments);
    std::vector<bool> seg_has_gate(n_segments, false);
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const auto &g = c.gates[i];
        std::size_t first = segment_of(g.qubits[0], i);
        seg_has_gate[first] = true;
        for (std::size_t j = 1; j < g.qubits.size(); ++j) {
            std::size_t other = segment_of(g.qubits[j], i);
            seg_has_gate[other] = true;
            uf.unite(first, other);
        }
    }

    // Upstream/downstream segments of each cut.
    std::vector<std::size_t> cut_up(cuts.size()), cut_down(cuts.size());
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        const auto &cut = cuts.cuts[k];
        cut_up[k] = segment_of(cut.wire, cut.position);
        cut_down[k] = cut_up[k] + 1;
        require(uf.find(cut_up[k]) != uf.find(cut_down[k]), ErrorCode::CutDoesNotSeparate,
                "cut " + std::to_string(k) + " on wire " + std::to_string(cut.wire) +
                    " leaves the circuit graph connected");
    }

    std::vector<std::optional<std::size_t>> measured_bit(c.width);
    for (std::size_t b = 0; b < c.measured.size(); ++b) {
        measured_bit[c.measured[b]] = b;
    }
    auto is_last_segment = [&](std::size_t s) { return s + 1 == seg_base[seg_wire[s] + 1]; };

    // Components keyed by root; segment order is already (wire, segment).
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t s = 0; s < n_segments; ++s) {
        bool output = is_last_segment(s) && measured_bit[seg_wire[s]].has_value();
        if (!seg_has_gate[s] && !output) {
            continue;
        }
        members[uf.find(s)].push_back(s);
    }
    std::vector<std::vector<std::size_t>> components;
    for (auto &[root, segs] : members) {
        components.push_back(segs);
    }
    std::sort(components.begin(), components.end(),
              [](const auto &a, const auto &b) { return a.front() < b.front(); });

    std::vector<std::optional<std::size_t>> in_cut_of(n_segments), out_cut_of(n_segments);
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        out_cut_of[cut_up[k]] = k;
        in_cut_of[cut_down[k]] = k;
    }

    std::vector<std::size_t> seg_fragment(n_segments, SIZE_MAX);
    std::vector<Wire> seg_local(n_segments, 0);
    std::vector<Fragment> fragments;
    for (std::size_t f = 0; f < components.size(); ++f) {
        Fragment frag;
        frag.id = f;
        Wire next = 0;
        for (auto s : components[f]) {
            seg_fragment[s] = f;
            seg_local[s] = next++;
            frag.local_to_global.push_back(seg_wire[s]);
            if (out_cut_of[s]) {
                frag.out_cuts.push_back({*out_cut_of[s], seg_local[s]});
            }
            if (is_last_segment(s) && measured_bit[seg_wire[s]]) {
                frag.outputs.push_back({seg_local[s], *measured_bit[seg_wire[s]]});
            }
        }
        // Ancillas take the highest local indices, in cut order.
        std::vector<std::pair<std::size_t, std::size_t>> fed;  // (cut, segment)
        for (auto s : components[f]) {
            if (in_cut_of[s]) {
                fed.emplace_back(*in_cut_of[s], s);
            }
        }
        std::sort(fed.begin(), fed.end());
        for (auto [k, s] : fed) {
            frag.in_cuts.push_back({k, seg_local[s], next++});
            frag.local_to_global.push_back(seg_wire[s]);
        }
        std::sort(frag.in_cuts.begin(), frag.in_cuts.end(), [](auto &a, auto &b) { return a.cut < b.cut; });
        std::sort(frag.out_cuts.begin(), frag.out_cuts.end(), [](auto &a, auto &b) { return a.cut < b.cut; });
        std::sort(frag.outputs.begin(), frag.outputs.end(),
                  [](auto &a, auto &b) { return a.global_bit < b.global_bit; });
        frag.subcircuit = Circuit(next);
        for (const auto &o : frag.outputs) {
            frag.subcircuit.measured.push_back(o.local);
        }
        fragments.push_back(std::move(frag));
    }

    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const auto &g = c.gates[i];
        std::size_t f = seg_fragment[segment_of(g.qubits[0], i)];
        Gate local{g.kind, {}};
        for (auto q : g.qubits) {
            local.qubits.push_back(seg_local[segment_of(q, i)]);
        }
        fragments[f].subcircuit.gates.push_back(local);
        fragments[f].gate_indices.push_back(i);
    }
    return fragments;
}

/// Cuts for splitting a GHZ chain of m wires into n contiguous blocks (larger
/// blocks first). Each cut sits on the last wire of a block, between its two CNOTs.
struct EqualCutPlan {
    CutSet cuts;
    std::vector<std::size_t> fragment_sizes;
    std::size_t max_fragment_size = 0;
    std::size_t max_physical_width = 0;
};

inline EqualCutPlan cut_plan_equal(std::size_t m, std::size_t n_fragments) {
    require(m >= 2, ErrorCode::InvalidArgument, "chain needs at least 2 qubits");
    require(n_fragments >= 1, ErrorCode::InvalidArgument, "need at least one fragment");
    require(n_fragments <= m / 2, ErrorCode::InvalidArgument,
            std::to_string(n_fragments) + " fragments of a " + std::to_string(m) +
                "-qubit chain would leave a fragment without a CNOT");
    EqualCutPlan plan;
    std::size_t base = m / n_fragments, rem = m % n_fragments;
    std::size_t start = 0;
    for (std::size_t j = 0; j + 1 < n_fragments; ++j) {
        std::size_t size = base + (j < rem ? 1 : 0);
        Wire last = static_cast<Wire>(start + size - 1);
        // In build_split_ghz, CNOT(w-1, w) is gate index w.
        plan.cuts.cuts.push_back({last, last});
        start += size;
    }
    for (const auto &f : fragment(build_split_ghz(m), plan.cuts)) {
        plan.fragment_sizes.push_back(f.fragment_size());
        plan.max_fragment_size = std::max(plan.max_fragment_size, f.fragment_size());
        plan.max_physical_width = std::max(plan.max_physical_width, f.physical_width());
    }
    return plan;
}

// ---------------------------------------------------------------------------

struct FragmentVariant {
    std::size_t fragment_id = 0;
    /// Axis per touching cut, ascending by cut index.
    std::vector<std::pair<std::size_t, Axis>> basis;
    /// Readout order: in-cut ancillas, logical outputs, out-cut wires.
    Circuit circuit;
    std::size_t n_ancilla_bits = 0;
    std::size_t n_output_bits = 0;
    std::size_t n_out_cut_bits = 0;

    std::string basis_string() const {
        std::string s;
        for (auto [k, a] : basis) {
            s += axis_char(a);
        }
        return s;
    }
    std::string file_stem() const {
        return "f" + std::to_string(fragment_id) + "_" + basis_string();
    }
    Axis axis_for(std::size_t cut) const {
        for (auto [k, a] : basis) {
            if (k == cut) {
                return a;
            }
        }
        fail(ErrorCode::InvalidArgument, "variant does not touch cut " + std::to_string(cut));
    }
};

/// Gates rotating the `a` eigenbasis onto Z (outcome 0 <-> eigenvalue +1).
inline void append_basis_change(Circuit &c, Wire w, Axis a) {
    if (a == Axis::X) {
        c.add(GateKind::H, w);
    } else if (a == Axis::Y) {
        c.add(GateKind::SDG, w);
        c.add(GateKind::H, w);
    }
}

inline FragmentVariant make_variant(const Fragment &f, const std::vector<std::pair<std::size_t, Axis>> &basis) {
    FragmentVariant v;
    v.fragment_id = f.id;
    v.basis = basis;
    auto axis = [&](std::size_t cut) { return v.axis_for(cut); };

    Circuit c(f.subcircuit.width);
    for (const auto &in : f.in_cuts) {
        c.add(GateKind::H, in.ancilla);
        c.add(GateKind::CNOT, in.ancilla, in.steered);
    }
    for (const auto &g : f.subcircuit.gates) {
        c.gates.push_back(g);
    }
    for (const auto &in : f.in_cuts) {
        append_basis_change(c, in.ancilla, axis(in.cut));
    }
    for (const auto &out : f.out_cuts) {
        append_basis_change(c, out.wire, axis(out.cut));
    }
    for (const auto &in : f.in_cuts) {
        c.measured.push_back(in.ancilla);
    }
    for (const auto &o : f.outputs) {
        c.measured.push_back(o.local);
    }
    for (const auto &out : f.out_cuts) {
        c.measured.push_back(out.wire);
    }
    v.circuit = std::move(c);
    v.n_ancilla_bits = f.in_cuts.size();
    v.n_output_bits = f.outputs.size();
    v.n_out_cut_bits = f.out_cuts.size();
    return v;
}

/// All 3^(touching cuts) variants, basis strings in lexicographic X < Y < Z order.
inline std::vector<FragmentVariant> variants(const Fragment &f) {
    auto touching = f.touching_cuts();
    std::vector<FragmentVariant> out;
    std::size_t total = f.variant_count();
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::pair<std::size_t, Axis>> basis(touching.size());
        std::size_t rest = code;
        for (std::size_t j = touching.size(); j-- > 0;) {
            basis[j] = {touching[j], static_cast<Axis>(rest % 3)};
            rest /= 3;
        }
        out.push_back(make_variant(f, basis));
    }
    return out;
}

}  // namespace wirecut
