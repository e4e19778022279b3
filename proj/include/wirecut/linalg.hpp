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
#include <cassert>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "wirecut/circuit.hpp"

namespace wirecut {

using cplx = std::complex<double>;

/// Small dense square matrix, row-major. Used for gates, Kraus operators and superoperators.
class Matrix {
   public:
    Matrix() = default;
    explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    }
    Matrix(std::size_t dim, std::initializer_list<cplx> values) : dim_(dim), data_(values) {
        assert(data_.size() == dim * dim);
    }

    static Matrix identity(std::size_t dim) {
        Matrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static Matrix diagonal(std::initializer_list<cplx> values) {
        Matrix m(values.size());
        std::size_t i = 0;
        for (auto v : values) {
            m(i, i) = v;
            ++i;
        }
        return m;
    }

    std::size_t dim() const {
        return dim_;
    }
    cplx &operator()(std::size_t r, std::size_t c) {
        return data_[r * dim_ + c];
    }
    const cplx &operator()(std::size_t r, std::size_t c) const {
        return data_[r * dim_ + c];
    }
    std::span<const cplx> data() const {
        return data_;
    }

    Matrix dagger() const {
        Matrix out(dim_);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    Matrix conj() const {
        Matrix out(dim_);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            out.data_[k] = std::conj(data_[k]);
        }
        return out;
    }

    Matrix operator*(const Matrix &rhs) const {
        assert(dim_ == rhs.dim_);
        Matrix out(dim_);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t k = 0; k < dim_; ++k) {
                cplx a = (*this)(r, k);
                if (a == cplx{}) {
                    continue;
                }
                for (std::size_t c = 0; c < dim_; ++c) {
                    out(r, c) += a * rhs(k, c);
                }
            }
        }
        return out;
    }

    Matrix operator*(cplx s) const {
        Matrix out = *this;
        for (auto &v : out.data_) {
            v *= s;
        }
        return out;
    }

    Matrix &operator+=(const Matrix &rhs) {
        assert(dim_ == rhs.dim_);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] += rhs.data_[k];
        }
        return *this;
    }

    Matrix operator-(const Matrix &rhs) const {
        Matrix out = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) {
            out.data_[k] -= rhs.data_[k];
        }
        return out;
    }

    double max_abs() const {
        double m = 0;
        for (auto v : data_) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }

    cplx trace() const {
        cplx t = 0;
        for (std::size_t i = 0; i < dim_; ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    bool is_diagonal(double tol = 0) const {
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                if (r != c && std::abs((*this)(r, c)) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

   private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

/// Kronecker product with `lo` acting on the low index bit(s): (hi ⊗ lo).
/// Combined with the kernel below, kron(B, A) applied to targets {t0, t1}
/// acts as A on t0 and B on t1.
inline Matrix kron(const Matrix &hi, const Matrix &lo) {
    std::size_t d = hi.dim() * lo.dim();
    Matrix out(d);
    for (std::size_t r1 = 0; r1 < hi.dim(); ++r1) {
        for (std::size_t c1 = 0; c1 < hi.dim(); ++c1) {
            for (std::size_t r0 = 0; r0 < lo.dim(); ++r0) {
                for (std::size_t c0 = 0; c0 < lo.dim(); ++c0) {
                    out(r1 * lo.dim() + r0, c1 * lo.dim() + c0) = hi(r1, c1) * lo(r0, c0);
                }
            }
        }
    }
    return out;
}

namespace pauli {
inline Matrix I() {
    return Matrix::identity(2);
}
inline Matrix X() {
    return Matrix(2, {0, 1, 1, 0});
}
inline Matrix Y() {
    return Matrix(2, {0, cplx(0, -1), cplx(0, 1), 0});
}
inline Matrix Z() {
    return Matrix(2, {1, 0, 0, -1});
}
}  // namespace pauli

/// Unitary of a gate with local index bit j <-> gate.qubits[j].
inline Matrix gate_matrix(GateKind kind) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case GateKind::H:
            return Matrix(2, {r, r, r, -r});
        case GateKind::X:
            return pauli::X();
        case GateKind::Y:
            return pauli::Y();
        case GateKind::Z:
            return pauli::Z();
        case GateKind::S:
            return Matrix(2, {1, 0, 0, cplx(0, 1)});
        case GateKind::SDG:
            return Matrix(2, {1, 0, 0, cplx(0, -1)});
        case GateKind::CNOT: {
            // control = bit 0, target = bit 1
            Matrix m(4);
            m(0, 0) = 1;
            m(2, 2) = 1;
            m(1, 3) = 1;
            m(3, 1) = 1;
            return m;
        }
        case GateKind::SWAP: {
            Matrix m(4);
            m(0, 0) = 1;
            m(1, 2) = 1;
            m(2, 1) = 1;
            m(3, 3) = 1;
            return m;
        }
    }
    return Matrix::identity(2);
}

/// Applies a 2^k x 2^k matrix to the amplitudes of `state` on the given target
/// bits (local bit j <-> targets[j]).
inline void apply_matrix(std::span<cplx> state, std::span<const std::size_t> targets, const Matrix &m) {
    const std::size_t k = targets.size();
    const std::size_t d = std::size_t{1} << k;
    assert(m.dim() == d);

    std::vector<std::size_t> sorted(targets.begin(), targets.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<std::size_t> offsets(d, 0);
    for (std::size_t local = 0; local < d; ++local) {
        for (std::size_t j = 0; j < k; ++j) {
            if ((local >> j) & 1) {
                offsets[local] |= std::size_t{1} << targets[j];
            }
        }
    }

    std::vector<cplx> in(d), out(d);
    const std::size_t groups = state.size() >> k;
    for (std::size_t g = 0; g < groups; ++g) {
        std::size_t base = g;
        for (auto t : sorted) {
            std::size_t low = base & ((std::size_t{1} << t) - 1);
            base = ((base >> t) << (t + 1)) | low;
        }
        for (std::size_t a = 0; a < d; ++a) {
            in[a] = state[base | offsets[a]];
        }
        for (std::size_t r = 0; r < d; ++r) {
            cplx acc = 0;
            for (std::size_t c = 0; c < d; ++c) {
                acc += m(r, c) * in[c];
            }
            out[r] = acc;
        }
        for (std::size_t a = 0; a < d; ++a) {
            state[base | offsets[a]] = out[a];
        }
    }
}

}  // namespace wirecut
