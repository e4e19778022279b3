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
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace wirecut {

/// 64-bit FNV-1a. Stable across platforms; used for seed derivation and provenance hashes.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 14695981039346656037ull) {
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Child seed for a named stream, e.g. derive_seed(root, "f1", "XZ").
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view a, std::string_view b = {}) {
    std::uint64_t h = fnv1a(a);
    h = fnv1a("/", h);
    h = fnv1a(b, h);
    return splitmix64(root ^ splitmix64(h));
}

/// mt19937_64 plus bit-exact uniform doubles. std:: distributions are avoided
/// because their output is implementation-defined.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t next() {
        return engine_();
    }

   private:
    std::mt19937_64 engine_;
};

/// Draws from a discrete distribution given its cumulative weights
/// (last entry is the total; weights need not be normalized).
inline std::size_t sample_cdf(std::span<const double> cdf, Rng &rng) {
    double u = rng.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cdf.begin());
    if (k >= cdf.size()) {
        // u rounded up to the total: take the last entry with positive weight.
        k = cdf.size() - 1;
        while (k > 0 && cdf[k] == cdf[k - 1]) {
            --k;
        }
    }
    return k;
}

}  // namespace wirecut
