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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wirecut/circuit.hpp"
#include "wirecut/cutter.hpp"
#include "wirecut/error.hpp"
#include "wirecut/rng.hpp"
#include "wirecut/simulator.hpp"

namespace wirecut {

/// Weight of the (upstream bit b', ancilla bit b) pair measured along `axis`:
/// X: 2 delta - 1, Y: -(2 delta - 1), Z: 2 delta.
inline constexpr double gamma(Axis axis, int b, int b_prime) {
    const double delta = (b == b_prime) ? 1.0 : 0.0;
    switch (axis) {
        case Axis::X:
            return 2 * delta - 1;
        case Axis::Y:
            return -(2 * delta - 1);
        case Axis::Z:
            return 2 * delta;
    }
    return 0;
}

/// (fragment id, basis string) -> table. The basis string lists the axis of
/// every touching cut in ascending cut order.
using VariantKey = std::pair<std::size_t, std::string>;
template <typename T>
using VariantMap = std::map<VariantKey, T>;

inline std::string variant_stem(const VariantKey &key) {
    return "f" + std::to_string(key.first) + "_" + key.second;
}

/// Per-fragment readout layout and the chain structure linking fragments.
struct RecombinationPlan {
    struct Part {
        std::size_t id = 0;
        std::vector<std::size_t> in_cuts;   // ancilla bits, in readout order
        std::vector<std::size_t> out_cuts;  // out-cut bits, in readout order
        std::vector<std::size_t> touching;  // ascending; order of the basis string
        std::vector<std::size_t> output_bits;  // global bit of each logical output

        std::size_t readout_bits() const {
            return in_cuts.size() + output_bits.size() + out_cuts.size();
        }
        std::size_t variant_count() const {
            std::size_t n = 1;
            for (std::size_t i = 0; i < touching.size(); ++i) {
                n *= 3;
            }
            return n;
        }
    };

    std::size_t n_bits = 0;
    std::size_t n_cuts = 0;
    std::vector<Part> parts;

    /// All variant keys the plan needs, in deterministic order.
    std::vector<VariantKey> variant_keys() const {
        std::vector<VariantKey> keys;
        for (const auto &p : parts) {
            for (std::size_t code = 0; code < p.variant_count(); ++code) {
                keys.emplace_back(p.id, basis_string(p, code));
            }
        }
        return keys;
    }

    static std::string basis_string(const Part &p, std::size_t code) {
        std::string s(p.touching.size(), 'X');
        for (std::size_t j = p.touching.size(); j-- > 0;) {
            s[j] = "XYZ"[code % 3];
            code /= 3;
        }
        return s;
    }

    /// Checks chain topology, cut pairing and output coverage.
    void validate() const {
        std::vector<int> out_count(n_cuts, 0), in_count(n_cuts, 0);
        std::vector<int> covered(n_bits, 0);
        for (const auto &p : parts) {
            require(p.in_cuts.size() <= 1 && p.out_cuts.size() <= 1, ErrorCode::Schema,
                    "fragment f" + std::to_string(p.id) + " breaks the chain topology");
            for (auto k : p.in_cuts) {
                require(k < n_cuts, ErrorCode::Schema, "cut index out of range");
                ++in_count[k];
            }
            for (auto k : p.out_cuts) {
                require(k < n_cuts, ErrorCode::Schema, "cut index out of range");
                ++out_count[k];
            }
            for (auto b : p.output_bits) {
                require(b < n_bits, ErrorCode::Schema, "output bit out of range");
                ++covered[b];
            }
        }
        for (std::size_t k = 0; k < n_cuts; ++k) {
            require(in_count[k] == 1 && out_count[k] == 1, ErrorCode::Schema,
                    "cut " + std::to_string(k) + " must join exactly one upstream and one downstream fragment");
        }
        for (std::size_t b = 0; b < n_bits; ++b) {
            require(covered[b] == 1, ErrorCode::Schema, "global bit " + std::to_string(b) + " is not covered exactly once");
        }
    }
};

inline RecombinationPlan make_plan(const std::vector<Fragment> &fragments, std::size_t n_cuts, std::size_t n_bits) {
    RecombinationPlan plan;
    plan.n_bits = n_bits;
    plan.n_cuts = n_cuts;
    for (const auto &f : fragments) {
        RecombinationPlan::Part p;
        p.id = f.id;
        for (const auto &c : f.in_cuts) {
            p.in_cuts.push_back(c.cut);
        }
        for (const auto &c : f.out_cuts) {
            p.out_cuts.push_back(c.cut);
        }
        p.touching = f.touching_cuts();
        for (const auto &o : f.outputs) {
            p.output_bits.push_back(o.global_bit);
        }
        plan.parts.push_back(std::move(p));
    }
    plan.validate();
    return plan;
}

inline RecombinationPlan make_plan(const Circuit &c, const CutSet &cuts, const std::vector<Fragment> &fragments) {
    return make_plan(fragments, cuts.size(), c.measured.size());
}

/// Number of circuits to execute: sum over fragments of 3^(touching cuts).
inline std::size_t variant_cost(const RecombinationPlan &plan) {
    std::size_t n = 0;
    for (const auto &p : plan.parts) {
        n += p.variant_count();
    }
    return n;
}

namespace detail {

/// The 10 non-zero (axis, b, b', gamma) combinations of a single cut.
struct CutTerm {
    int axis;
    int b;        // ancilla bit (downstream)
    int b_prime;  // measured bit (upstream)
    double weight;
};

inline const std::vector<CutTerm> &cut_terms() {
    static const std::vector<CutTerm> terms = [] {
        std::vector<CutTerm> t;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 2; ++b) {
                for (int bp = 0; bp < 2; ++bp) {
                    double g = gamma(static_cast<Axis>(a), b, bp);
                    if (g != 0) {
                        t.push_back({a, b, bp, g});
                    }
                }
            }
        }
        return t;
    }();
    return terms;
}

/// Resolves the tables of a plan into per-part arrays indexed by basis code.
inline std::vector<std::vector<const ProbTable *>> resolve_tables(const RecombinationPlan &plan,
                                                                 const VariantMap<ProbTable> &tables) {
    plan.validate();
    std::vector<std::vector<const ProbTable *>> out;
    std::vector<std::string> missing;
    for (const auto &p : plan.parts) {
        std::vector<const ProbTable *> row;
        for (std::size_t code = 0; code < p.variant_count(); ++code) {
            VariantKey key{p.id, RecombinationPlan::basis_string(p, code)};
            auto it = tables.find(key);
            if (it == tables.end()) {
                missing.push_back(variant_stem(key));
                row.push_back(nullptr);
                continue;
            }
            require(it->second.n_bits == p.readout_bits(), ErrorCode::Schema,
                    "table " + variant_stem(key) + " has " + std::to_string(it->second.n_bits) + " bits, expected " +
                        std::to_string(p.readout_bits()));
            require(std::abs(it->second.sum() - 1) <= 1e-6, ErrorCode::Schema,
                    "table " + variant_stem(key) + " is not normalized");
            row.push_back(&it->second);
        }
        out.push_back(std::move(row));
    }
    if (!missing.empty()) {
        std::string msg = "missing variant tables:";
        for (const auto &m : missing) {
            msg += " " + m;
        }
        fail(ErrorCode::IncompleteInput, msg);
    }
    return out;
}

/// Direct nested sum over every cut's (axis, b, b') choice. `visit(weight,
/// tables, bases)` is called once per non-zero term with, for each part, the
/// selected table and the readout index contributed by its cut bits.
template <typename Visit>
void for_each_term(const RecombinationPlan &plan, const std::vector<std::vector<const ProbTable *>> &tables,
                   Visit &&visit) {
    const auto &terms = cut_terms();
    const std::size_t K = plan.n_cuts;
    std::vector<std::size_t> digit(K, 0);
    std::vector<const ProbTable *> chosen(plan.parts.size());
    std::vector<std::uint64_t> base(plan.parts.size());
    while (true) {
        double w = 1;
        for (std::size_t k = 0; k < K; ++k) {
            w *= terms[digit[k]].weight;
        }
        for (std::size_t j = 0; j < plan.parts.size(); ++j) {
            const auto &p = plan.parts[j];
            std::size_t code = 0;
            for (auto k : p.touching) {
                code = code * 3 + static_cast<std::size_t>(terms[digit[k]].axis);
            }
            chosen[j] = tables[j][code];
            std::uint64_t b = 0;
            for (std::size_t i = 0; i < p.in_cuts.size(); ++i) {
                b |= static_cast<std::uint64_t>(terms[digit[p.in_cuts[i]]].b) << i;
            }
            std::size_t shift = p.in_cuts.size() + p.output_bits.size();
            for (std::size_t i = 0; i < p.out_cuts.size(); ++i) {
                b |= static_cast<std::uint64_t>(terms[digit[p.out_cuts[i]]].b_prime) << (shift + i);
            }
            base[j] = b;
        }
        visit(w, chosen, base);

        std::size_t k = 0;
        while (k < K && ++digit[k] == terms.size()) {
            digit[k] = 0;
            ++k;
        }
        if (k == K) {
            break;
        }
    }
}

/// Readout index of part p holding the logical output bits of `global`.
inline std::uint64_t local_output_index(const RecombinationPlan::Part &p, std::uint64_t global) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < p.output_bits.size(); ++i) {
        x |= ((global >> p.output_bits[i]) & 1) << (p.in_cuts.size() + i);
    }
    return x;
}

}  // namespace detail

/// Full recombined quasi-probability table over the plan's global bits.
inline ProbTable recombine(const RecombinationPlan &plan, const VariantMap<ProbTable> &tables) {
    auto resolved = detail::resolve_tables(plan, tables);
    require(plan.n_bits <= 24, ErrorCode::Capacity, "full recombination limited to 24 output bits");
    const std::size_t n_out = std::size_t{1} << plan.n_bits;
    std::vector<std::vector<std::uint64_t>> local(plan.parts.size(), std::vector<std::uint64_t>(n_out));
    for (std::size_t j = 0; j < plan.parts.size(); ++j) {
        for (std::uint64_t g = 0; g < n_out; ++g) {
            local[j][g] = detail::local_output_index(plan.parts[j], g);
        }
    }
    ProbTable out(plan.n_bits);
    detail::for_each_term(plan, resolved, [&](double w, const auto &chosen, const auto &base) {
        for (std::uint64_t g = 0; g < n_out; ++g) {
            double v = w;
            for (std::size_t j = 0; j < chosen.size() && v != 0; ++j) {
                v *= chosen[j]->p[base[j] | local[j][g]];
            }
            out.p[g] += v;
        }
    });
    return out;
}

/// Recombined values at selected global outcomes only.
inline std::vector<double> recombine_at(const RecombinationPlan &plan, const VariantMap<ProbTable> &tables,
                                        const std::vector<std::uint64_t> &outcomes) {
    auto resolved = detail::resolve_tables(plan, tables);
    std::vector<std::vector<std::uint64_t>> local(plan.parts.size());
    for (std::size_t j = 0; j < plan.parts.size(); ++j) {
        for (auto g : outcomes) {
            local[j].push_back(detail::local_output_index(plan.parts[j], g));
        }
    }
    std::vector<double> out(outcomes.size(), 0.0);
    detail::for_each_term(plan, resolved, [&](double w, const auto &chosen, const auto &base) {
        for (std::size_t o = 0; o < outcomes.size(); ++o) {
            double v = w;
            for (std::size_t j = 0; j < chosen.size() && v != 0; ++j) {
                v *= chosen[j]->p[base[j] | local[j][o]];
            }
            out[o] += v;
        }
    });
    return out;
}

/// p(0^h 1^(m-h)) + p(1^h 0^(m-h)) with h = floor(m/2), from raw values.
inline double ghz_success_probability(const ProbTable &p, std::size_t m) {
    require(p.n_bits == m, ErrorCode::Schema, "table width does not match m");
    auto t = ghz_target_outcomes(m);
    return p[t[0]] + p[t[1]];
}

/// Success probability of the even-width GHZ benchmark; 1 without noise.
inline double success_probability(const ProbTable &p, std::size_t m) {
    require(m >= 2 && m % 2 == 0, ErrorCode::InvalidArgument, "success probability needs an even m");
    return ghz_success_probability(p, m);
}

/// Success probability straight from the variant tables, without building the full table.
inline double ghz_success_probability(const RecombinationPlan &plan, const VariantMap<ProbTable> &tables) {
    auto t = ghz_target_outcomes(plan.n_bits);
    auto v = recombine_at(plan, tables, {t[0], t[1]});
    return v[0] + v[1];
}

/// Empirical frequencies of every variant; rejects empty or unequal shot counts.
inline VariantMap<ProbTable> frequencies(const VariantMap<CountTable> &counts) {
    VariantMap<ProbTable> out;
    std::uint64_t shots = 0;
    for (const auto &[key, c] : counts) {
        require(c.shots > 0, ErrorCode::InvalidArgument, "variant " + variant_stem(key) + " has zero shots");
        if (shots == 0) {
            shots = c.shots;
        }
        require(c.shots == shots, ErrorCode::InvalidArgument,
                "variant " + variant_stem(key) + " has " + std::to_string(c.shots) + " shots, expected " +
                    std::to_string(shots) + " (equal shots per variant required)");
        out.emplace(key, c.frequencies());
    }
    return out;
}

struct BootstrapResult {
    double mean = 0;
    double sem = 0;
    std::vector<double> replicates;
};

/// Resamples every variant's counts from its empirical frequencies R times,
/// recombines, and evaluates the GHZ success probability. `sem` is the
/// standard deviation of the replicates, i.e. the bootstrap standard error of
/// the recombined estimate.
inline BootstrapResult bootstrap_errors(const VariantMap<CountTable> &counts, const RecombinationPlan &plan,
                                        std::size_t R, std::uint64_t seed) {
    require(R >= 2, ErrorCode::InvalidArgument, "bootstrap needs at least 2 resamples");
    auto freq = frequencies(counts);
    const std::uint64_t shots = counts.begin()->second.shots;
    auto targets = ghz_target_outcomes(plan.n_bits);

    BootstrapResult res;
    for (std::size_t r = 0; r < R; ++r) {
        VariantMap<ProbTable> resampled;
        for (const auto &[key, f] : freq) {
            auto s = sample_counts(f, shots, derive_seed(seed, variant_stem(key), "resample" + std::to_string(r)));
            resampled.emplace(key, s.frequencies());
        }
        auto v = recombine_at(plan, resampled, {targets[0], targets[1]});
        res.replicates.push_back(v[0] + v[1]);
    }
    double sum = 0;
    for (double v : res.replicates) {
        sum += v;
    }
    res.mean = sum / static_cast<double>(R);
    double ss = 0;
    for (double v : res.replicates) {
        ss += (v - res.mean) * (v - res.mean);
    }
    res.sem = std::sqrt(ss / static_cast<double>(R - 1));
    return res;
}

}  // namespace wirecut
