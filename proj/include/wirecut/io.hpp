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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wirecut/circuit.hpp"
#include "wirecut/cutter.hpp"
#include "wirecut/error.hpp"
#include "wirecut/noise.hpp"
#include "wirecut/recombiner.hpp"
#include "wirecut/rng.hpp"
#include "wirecut/router.hpp"
#include "wirecut/simulator.hpp"

namespace wirecut {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline std::string read_text(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_text(const fs::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        require(!ec, ErrorCode::Io, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorCode::Io, "cannot write " + path.string());
    out << text;
    require(out.good(), ErrorCode::Io, "write failed for " + path.string());
}

inline json parse_json(const std::string &text, const std::string &what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        fail(ErrorCode::Schema, what + ": " + e.what());
    }
}

inline json read_json(const fs::path &path) {
    return parse_json(read_text(path), path.string());
}

inline void write_json(const fs::path &path, const json &j) {
    write_text(path, j.dump(2) + "\n");
}

namespace detail {

inline const json &field(const json &j, const char *key, const std::string &what) {
    require(j.is_object(), ErrorCode::Schema, what + " must be an object");
    auto it = j.find(key);
    require(it != j.end(), ErrorCode::Schema, what + " lacks \"" + key + "\"");
    return *it;
}

inline double number(const json &j, const char *key, const std::string &what) {
    const auto &v = field(j, key, what);
    require(v.is_number(), ErrorCode::Schema, what + ": \"" + std::string(key) + "\" must be a number");
    return v.get<double>();
}

inline std::uint64_t unsigned_number(const json &j, const char *key, const std::string &what) {
    const auto &v = field(j, key, what);
    require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0), ErrorCode::Schema,
            what + ": \"" + std::string(key) + "\" must be a non-negative integer");
    return v.get<std::uint64_t>();
}

// null stands for an infinite time constant.
inline double time_constant(const json &j, const char *key, const std::string &what) {
    const auto &v = field(j, key, what);
    if (v.is_null()) {
        return std::numeric_limits<double>::infinity();
    }
    require(v.is_number(), ErrorCode::Schema, what + ": \"" + std::string(key) + "\" must be a number or null");
    return v.get<double>();
}

inline json finite_or_null(double x) {
    return std::isfinite(x) ? json(x) : json(nullptr);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Calibration

/// {T1_us, T2_us, gamma_readout | t_meas_us, eps_avg_1q, eps_avg_2q, tau_1q_ns, tau_2q_ns}
inline NoiseParameters calibration_from_json(const json &j) {
    const std::string what = "calibration";
    NoiseParameters p;
    p.t1_us = detail::time_constant(j, "T1_us", what);
    p.t2_us = detail::time_constant(j, "T2_us", what);
    const bool has_gamma = j.contains("gamma_readout");
    const bool has_tmeas = j.contains("t_meas_us");
    require(has_gamma != has_tmeas, ErrorCode::Schema,
            "calibration must give exactly one of gamma_readout and t_meas_us");
    if (has_tmeas) {
        p.t_meas_us = detail::number(j, "t_meas_us", what);
    } else {
        double g = detail::number(j, "gamma_readout", what);
        require(g >= 0 && g < 1, ErrorCode::Schema, "gamma_readout must lie in [0, 1)");
        p.t_meas_us = g == 0 ? 0.0 : t_meas_from_gamma(g, p.t1_us);
    }
    p.eps_avg_1q = detail::number(j, "eps_avg_1q", what);
    p.eps_avg_2q = detail::number(j, "eps_avg_2q", what);
    if (j.contains("tau_1q_ns")) {
        p.tau_1q_ns = detail::number(j, "tau_1q_ns", what);
    }
    if (j.contains("tau_2q_ns")) {
        p.tau_2q_ns = detail::number(j, "tau_2q_ns", what);
    }
    require_valid(p);
    return p;
}

inline json calibration_to_json(const NoiseParameters &p) {
    return json{{"T1_us", detail::finite_or_null(p.t1_us)},
                {"T2_us", detail::finite_or_null(p.t2_us)},
                {"t_meas_us", p.t_meas_us},
                {"eps_avg_1q", p.eps_avg_1q},
                {"eps_avg_2q", p.eps_avg_2q},
                {"tau_1q_ns", p.tau_1q_ns},
                {"tau_2q_ns", p.tau_2q_ns}};
}

inline NoiseParameters load_calibration(const fs::path &path) {
    return calibration_from_json(read_json(path));
}

/// Resolved parameters plus every quantity the noise pass derives from them.
struct DerivedNoise {
    NoiseParameters params;
    double p1 = 0;
    double p2 = 0;
    double gamma_readout = 0;
    double t_phi_us = 0;
    double p_ad_1q = 0, p_pd_1q = 0;
    double p_ad_2q = 0, p_pd_2q = 0;
};

inline DerivedNoise derive_noise(const NoiseParameters &p) {
    require_valid(p);
    DerivedNoise d;
    d.params = p;
    d.p1 = p_from_avg_error(p.eps_avg_1q, 1);
    d.p2 = p_from_avg_error(p.eps_avg_2q, 2);
    d.gamma_readout = readout_povm(p.t_meas_us, p.t1_us).gamma();
    d.t_phi_us = dephasing_time(p.t1_us, p.t2_us);
    d.p_ad_1q = amplitude_damping_probability(p.tau_1q_ns * 1e-3, p.t1_us);
    d.p_pd_1q = dephasing_probability(p.tau_1q_ns * 1e-3, p.t1_us, p.t2_us);
    d.p_ad_2q = amplitude_damping_probability(p.tau_2q_ns * 1e-3, p.t1_us);
    d.p_pd_2q = dephasing_probability(p.tau_2q_ns * 1e-3, p.t1_us, p.t2_us);
    return d;
}

inline json to_json(const DerivedNoise &d) {
    json j = calibration_to_json(d.params);
    j["T_phi_us"] = detail::finite_or_null(d.t_phi_us);
    j["p1"] = d.p1;
    j["p2"] = d.p2;
    j["gamma_readout"] = d.gamma_readout;
    j["idle_1q"] = {{"p_amplitude_damping", d.p_ad_1q}, {"p_dephasing", d.p_pd_1q}};
    j["idle_2q"] = {{"p_amplitude_damping", d.p_ad_2q}, {"p_dephasing", d.p_pd_2q}};
    j["identity_noise"] = d.p1 == 0 && d.p2 == 0 && d.gamma_readout == 0 && d.p_ad_2q == 0 && d.p_pd_2q == 0;
    return j;
}

// ---------------------------------------------------------------------------
// Coupling map

inline CouplingMap coupling_from_json(const json &j) {
    const std::string what = "coupling map";
    auto n = detail::unsigned_number(j, "n_physical", what);
    const auto &e = detail::field(j, "edges", what);
    require(e.is_array(), ErrorCode::Schema, "coupling map edges must be an array");
    std::vector<std::pair<Wire, Wire>> edges;
    for (const auto &pair : e) {
        require(pair.is_array() && pair.size() == 2 && pair[0].is_number_integer() && pair[1].is_number_integer(),
                ErrorCode::Schema, "coupling map edge must be a pair of indices");
        auto a = pair[0].get<std::int64_t>(), b = pair[1].get<std::int64_t>();
        require(a >= 0 && b >= 0, ErrorCode::InvalidArgument, "negative qubit index in coupling map");
        edges.emplace_back(static_cast<Wire>(a), static_cast<Wire>(b));
    }
    return CouplingMap(n, edges);
}

inline json coupling_to_json(const CouplingMap &map) {
    json edges = json::array();
    for (auto [a, b] : map.edges()) {
        edges.push_back({a, b});
    }
    return json{{"n_physical", map.n_physical()}, {"edges", edges}};
}

inline CouplingMap load_coupling(const fs::path &path) {
    return coupling_from_json(read_json(path));
}

/// Stable content hashes used as row provenance.
inline std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string calibration_hash(const NoiseParameters &p) {
    return hash_hex(fnv1a(calibration_to_json(p).dump()));
}

inline std::string coupling_hash(const CouplingMap &map) {
    return hash_hex(fnv1a(coupling_to_json(map).dump()));
}

// ---------------------------------------------------------------------------
// Count tables: bitstring character i is readout bit i (wire 0 leftmost).

inline json counts_to_json(const CountTable &c) {
    json counts = json::object();
    for (auto [k, v] : c.counts) {
        counts[bits_to_string(k, c.n_bits)] = v;
    }
    return json{{"n_bits", c.n_bits}, {"shots", c.shots}, {"counts", counts}};
}

inline CountTable counts_from_json(const json &j) {
    const std::string what = "count table";
    CountTable c;
    const auto shots = detail::unsigned_number(j, "shots", what);
    const auto &counts = detail::field(j, "counts", what);
    require(counts.is_object(), ErrorCode::Schema, "counts must map bitstrings to integers");
    bool width_known = j.contains("n_bits");
    if (width_known) {
        c.n_bits = detail::unsigned_number(j, "n_bits", what);
    }
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        const std::string &bits = it.key();
        require(bits.find_first_not_of("01") == std::string::npos, ErrorCode::Schema,
                "bad bitstring \"" + bits + "\"");
        if (!width_known) {
            c.n_bits = bits.size();
            width_known = true;
        }
        require(bits.size() == c.n_bits, ErrorCode::Schema,
                "bitstring \"" + bits + "\" does not have " + std::to_string(c.n_bits) + " bits");
        require(it.value().is_number_unsigned() || (it.value().is_number_integer() && it.value().get<std::int64_t>() >= 0),
                ErrorCode::Schema, "count for \"" + bits + "\" must be a non-negative integer");
        auto n = it.value().get<std::uint64_t>();
        if (n > 0) {
            c.add(string_to_bits(bits), n);
        }
    }
    require(c.shots == shots, ErrorCode::Schema,
            "counts sum to " + std::to_string(c.shots) + " but shots is " + std::to_string(shots));
    return c;
}

inline CountTable load_counts(const fs::path &path) {
    try {
        return counts_from_json(read_json(path));
    } catch (const Error &e) {
        if (e.code() == ErrorCode::Schema) {
            fail(ErrorCode::Schema, path.string() + ": " + e.what());
        }
        throw;
    }
}

// ---------------------------------------------------------------------------
// Circuits

/// {width, gates: [{gate, qubits}], measured}
inline json circuit_to_json(const Circuit &c) {
    json gates = json::array();
    for (const auto &g : c.gates) {
        gates.push_back({{"gate", std::string(gate_name(g.kind))}, {"qubits", g.qubits}});
    }
    return json{{"width", c.width}, {"gates", gates}, {"measured", c.measured}};
}

inline Circuit circuit_from_json(const json &j) {
    const std::string what = "circuit";
    Circuit c(detail::unsigned_number(j, "width", what));
    const auto &gates = detail::field(j, "gates", what);
    require(gates.is_array(), ErrorCode::Schema, "circuit gates must be an array");
    for (const auto &g : gates) {
        const auto &name = detail::field(g, "gate", "gate");
        require(name.is_string(), ErrorCode::Schema, "gate name must be a string");
        auto kind = gate_from_name(name.get<std::string>());
        require(kind.has_value(), ErrorCode::Schema, "unknown gate \"" + name.get<std::string>() + "\"");
        Gate gate{*kind, detail::field(g, "qubits", "gate").get<std::vector<Wire>>()};
        c.gates.push_back(gate);
    }
    if (j.contains("measured")) {
        c.measured = j.at("measured").get<std::vector<Wire>>();
    } else {
        c.measure_all();
    }
    require_valid(c);
    return c;
}

inline Circuit load_circuit(const fs::path &path) {
    return circuit_from_json(read_json(path));
}

/// "w:p,w:p" -> cut list.
inline CutSet parse_cuts(const std::string &text) {
    CutSet cuts;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        if (item.empty()) {
            continue;
        }
        auto colon = item.find(':');
        require(colon != std::string::npos, ErrorCode::InvalidArgument, "cut \"" + item + "\" is not wire:position");
        try {
            cuts.cuts.push_back({static_cast<Wire>(std::stoul(item.substr(0, colon))),
                                 static_cast<std::size_t>(std::stoul(item.substr(colon + 1)))});
        } catch (const std::logic_error &) {
            fail(ErrorCode::InvalidArgument, "cut \"" + item + "\" is not wire:position");
        }
    }
    return cuts;
}

// ---------------------------------------------------------------------------
// Manifest of a cut: recombination plan, variant files and bit conventions.

struct Manifest {
    RecombinationPlan plan;
    std::vector<WireCut> cuts;
    std::size_t max_fragment_size = 0;
    std::size_t max_physical_width = 0;
    std::optional<std::size_t> ghz_m;  // set when the cut circuit is the GHZ benchmark
    struct Variant {
        std::size_t fragment = 0;
        std::string basis;
        std::string file;
        Circuit circuit;
    };
    std::vector<Variant> variants;
};

inline const char *kBitOrderNote =
    "variant readout bits: in-cut ancillas, then logical outputs in global order, then out-cut wires; "
    "bitstring character i is readout bit i; basis string lists touching cuts in ascending cut order";

inline Manifest make_manifest(const Circuit &c, const CutSet &cuts, std::optional<std::size_t> ghz_m = std::nullopt) {
    auto frags = fragment(c, cuts);
    Manifest m;
    m.plan = make_plan(c, cuts, frags);
    m.cuts = cuts.cuts;
    m.ghz_m = ghz_m;
    for (const auto &f : frags) {
        m.max_fragment_size = std::max(m.max_fragment_size, f.fragment_size());
        m.max_physical_width = std::max(m.max_physical_width, f.physical_width());
        for (auto &v : variants(f)) {
            m.variants.push_back({v.fragment_id, v.basis_string(), v.file_stem() + ".qasm", std::move(v.circuit)});
        }
    }
    return m;
}

inline json manifest_to_json(const Manifest &m) {
    json parts = json::array();
    for (const auto &p : m.plan.parts) {
        parts.push_back({{"id", p.id},
                         {"in_cuts", p.in_cuts},
                         {"out_cuts", p.out_cuts},
                         {"touching", p.touching},
                         {"output_bits", p.output_bits}});
    }
    json cuts = json::array();
    for (const auto &c : m.cuts) {
        cuts.push_back({{"wire", c.wire}, {"position", c.position}});
    }
    json vars = json::array();
    for (const auto &v : m.variants) {
        vars.push_back({{"fragment", v.fragment},
                        {"basis", v.basis},
                        {"file", v.file},
                        {"counts_file", fs::path(v.file).replace_extension(".json").string()},
                        {"circuit", circuit_to_json(v.circuit)}});
    }
    json j{{"n_bits", m.plan.n_bits},
           {"n_cuts", m.plan.n_cuts},
           {"n_fragments", m.plan.parts.size()},
           {"max_fragment_size", m.max_fragment_size},
           {"max_physical_width", m.max_physical_width},
           {"variant_count", variant_cost(m.plan)},
           {"bit_order", kBitOrderNote},
           {"cuts", cuts},
           {"fragments", parts},
           {"variants", vars}};
    j["ghz_m"] = m.ghz_m ? json(*m.ghz_m) : json(nullptr);
    return j;
}

inline Manifest manifest_from_json(const json &j) {
    const std::string what = "manifest";
    Manifest m;
    m.plan.n_bits = detail::unsigned_number(j, "n_bits", what);
    m.plan.n_cuts = detail::unsigned_number(j, "n_cuts", what);
    m.max_fragment_size = detail::unsigned_number(j, "max_fragment_size", what);
    if (j.contains("max_physical_width")) {
        m.max_physical_width = detail::unsigned_number(j, "max_physical_width", what);
    }
    if (j.contains("ghz_m") && !j.at("ghz_m").is_null()) {
        m.ghz_m = detail::unsigned_number(j, "ghz_m", what);
    }
    try {
        for (const auto &c : detail::field(j, "cuts", what)) {
            m.cuts.push_back({c.at("wire").get<Wire>(), c.at("position").get<std::size_t>()});
        }
        for (const auto &p : detail::field(j, "fragments", what)) {
            RecombinationPlan::Part part;
            part.id = p.at("id").get<std::size_t>();
            part.in_cuts = p.at("in_cuts").get<std::vector<std::size_t>>();
            part.out_cuts = p.at("out_cuts").get<std::vector<std::size_t>>();
            part.touching = p.at("touching").get<std::vector<std::size_t>>();
            part.output_bits = p.at("output_bits").get<std::vector<std::size_t>>();
            m.plan.parts.push_back(std::move(part));
        }
        for (const auto &v : detail::field(j, "variants", what)) {
            Manifest::Variant var;
            var.fragment = v.at("fragment").get<std::size_t>();
            var.basis = v.at("basis").get<std::string>();
            var.file = v.at("file").get<std::string>();
            if (v.contains("circuit")) {
                var.circuit = circuit_from_json(v.at("circuit"));
            }
            m.variants.push_back(std::move(var));
        }
    } catch (const json::exception &e) {
        fail(ErrorCode::Schema, std::string("manifest: ") + e.what());
    }
    m.plan.validate();
    return m;
}

// ---------------------------------------------------------------------------
// Result records and CSV

struct ResultRecord {
    std::size_t m = 0;
    std::size_t n_fragments = 0;
    std::size_t max_fragment_size = 0;
    std::string mode;
    double p_success = std::numeric_limits<double>::quiet_NaN();
    double sem = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> negative_mass;
    std::size_t variant_count = 0;
    std::uint64_t seed = 0;
};

inline json to_json(const ResultRecord &r) {
    return json{{"m", r.m},
                {"n_fragments", r.n_fragments},
                {"max_fragment_size", r.max_fragment_size},
                {"mode", r.mode},
                {"P_success", detail::finite_or_null(r.p_success)},
                {"SEM", detail::finite_or_null(r.sem)},
                {"negative_mass", r.negative_mass ? json(*r.negative_mass) : json(nullptr)},
                {"variant_count", r.variant_count},
                {"seed", r.seed}};
}

/// printf-style formatting with a fixed format, so output is byte-stable.
inline std::string format_double(double x) {
    if (!std::isfinite(x)) {
        return "";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// Quotes a CSV field when it contains a separator, quote or newline.
inline std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        out += ch;
        if (ch == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

}  // namespace wirecut
