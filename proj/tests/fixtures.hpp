#pragma once

// Shared constructions for unit and acceptance tests.

#include <vector>

#include "diophex/exactlin.hpp"
#include "diophex/pencil.hpp"
#include "diophex/random.hpp"

namespace diophex::fixtures {

using exactlin::Rational;
using exactlin::RationalMatrix;

inline Rational small_rational(Rng& rng, long num = 9, long den = 5) {
    return exactlin::ratio(rng.uniform_int(-num, num), rng.uniform_int(1, den));
}

inline RationalMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    RationalMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = small_rational(rng);
    return m;
}

inline pencil::MatrixFamily random_family(Rng& rng, std::size_t m, std::size_t n, std::size_t count) {
    std::vector<RationalMatrix> s;
    for (std::size_t i = 0; i < count; ++i) s.push_back(random_matrix(rng, m, m + n));
    return pencil::MatrixFamily(m, n, std::move(s), "random");
}

/// 2×4 samples whose first three columns are multiples of u = (1, 2): the
/// family sits in P_{W,1} with W = span{e1, e2, e3}, pencil exponent 2.
inline pencil::MatrixFamily line_pencil_family(Rng& rng, std::size_t count) {
    std::vector<RationalMatrix> s;
    for (std::size_t k = 0; k < count; ++k) {
        RationalMatrix m(2, 4);
        for (std::size_t j = 0; j < 3; ++j) {
            const Rational l = small_rational(rng);
            m(0, j) = l;
            m(1, j) = 2 * l;
        }
        m(0, 3) = small_rational(rng);
        m(1, 3) = small_rational(rng);
        s.push_back(m);
    }
    return pencil::MatrixFamily(2, 2, std::move(s), "line-pencil");
}

/// Samples M = A·P where P projects onto a fixed complement: every sample
/// maps W (dim `w_dim`, spanned by random height-1 vectors) into the image of
/// a fixed r-dimensional subspace.
inline pencil::MatrixFamily planted_family(Rng& rng, std::size_t m, std::size_t n, std::size_t w_dim,
                                           std::size_t r, std::size_t count) {
    const std::size_t N = m + n;
    std::vector<exactlin::RationalVector> wv;
    while (true) {
        wv.clear();
        for (std::size_t i = 0; i < w_dim; ++i) {
            exactlin::RationalVector v(N);
            for (auto& x : v) x = rng.uniform_int(-1, 1);
            wv.push_back(v);
        }
        if (exactlin::RationalSubspace::span(N, wv).dim() == w_dim) break;
    }
    // Complete W's spanning set to a basis B of Q^N, then M = C · B^{-1}
    // where the first w_dim columns of C lie in a fixed r-dim subspace U.
    std::vector<exactlin::RationalVector> basis = wv;
    for (std::size_t i = 0; i < N && basis.size() < N; ++i) {
        exactlin::RationalVector e(N);
        e[i] = 1;
        auto trial = basis;
        trial.push_back(e);
        if (exactlin::RationalSubspace::span(N, trial).dim() == trial.size()) basis = trial;
    }
    RationalMatrix B(N, N);  // columns are the basis vectors
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t i = 0; i < N; ++i) B(i, j) = basis[j][i];
    // Inverse of B by solving with the echelon form of (B | I).
    RationalMatrix aug(N, 2 * N);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) aug(i, j) = B(i, j);
        aug(i, N + i) = 1;
    }
    const RationalMatrix red = exactlin::rref(aug);
    RationalMatrix Binv(N, N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) Binv(i, j) = red(i, N + j);

    const RationalMatrix U = random_matrix(rng, m, r);
    std::vector<RationalMatrix> s;
    for (std::size_t k = 0; k < count; ++k) {
        RationalMatrix C(m, N);
        for (std::size_t j = 0; j < N; ++j) {
            if (j < w_dim) {
                const RationalMatrix coeff = random_matrix(rng, r, 1);
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t l = 0; l < r; ++l) C(i, j) += U(i, l) * coeff(l, 0);
            } else {
                for (std::size_t i = 0; i < m; ++i) C(i, j) = small_rational(rng);
            }
        }
        s.push_back(C * Binv);
    }
    return pencil::MatrixFamily(m, n, std::move(s), "planted");
}

}  // namespace diophex::fixtures
