#pragma once

// Arithmetic modulo the Mersenne prime 2^61 - 1, used to screen rank
// conditions before exact evaluation. Ranks can only drop under reduction,
// so "rank_p >= k" certifies "rank_Q >= k".

#include <cstdint>
#include <optional>
#include <vector>

#include "diophex/exactlin.hpp"

namespace diophex::pencil::modp {

inline constexpr std::uint64_t kP = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t reduce128(unsigned __int128 x) {
    std::uint64_t r = static_cast<std::uint64_t>(x & kP) + static_cast<std::uint64_t>(x >> 61);
    r = (r & kP) + (r >> 61);
    return r >= kP ? r - kP : r;
}
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    return reduce128(static_cast<unsigned __int128>(a) * b);
}
inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t s = a + b;
    return s >= kP ? s - kP : s;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kP - b; }

inline std::uint64_t pow(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}
inline std::uint64_t inv(std::uint64_t a) { return pow(a, kP - 2); }

inline std::uint64_t from_long(long x) {
    return x >= 0 ? static_cast<std::uint64_t>(x) % kP : kP - static_cast<std::uint64_t>(-x) % kP;
}

inline std::uint64_t from_integer(const exactlin::Integer& z) {
    const std::uint64_t r = mpz_fdiv_ui(z.get_mpz_t(), kP);
    return r;
}

/// nullopt when p divides the denominator.
inline std::optional<std::uint64_t> from_rational(const exactlin::Rational& q) {
    const std::uint64_t d = from_integer(q.get_den());
    if (d == 0) return std::nullopt;
    return mul(from_integer(q.get_num()), inv(d));
}

/// Fully reduced echelon rows over F_p (pivot entries 1).
struct Echelon {
    std::vector<std::vector<std::uint64_t>> rows;
    std::vector<std::size_t> pivots;

    /// Residue of v after elimination.
    std::vector<std::uint64_t> residue(std::vector<std::uint64_t> v) const {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::uint64_t c = v[pivots[i]];
            if (c == 0) continue;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (rows[i][j]) v[j] = sub(v[j], mul(c, rows[i][j]));
        }
        return v;
    }

    /// Appends v if it is independent of the rows; returns whether it was.
    bool insert(std::vector<std::uint64_t> v) {
        v = residue(std::move(v));
        std::size_t p = 0;
        while (p < v.size() && v[p] == 0) ++p;
        if (p == v.size()) return false;
        const std::uint64_t s = inv(v[p]);
        for (auto& x : v) x = mul(x, s);
        // Keep rows fully reduced so residues only need one pass.
        for (auto& row : rows) {
            const std::uint64_t c = row[p];
            if (c == 0) continue;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (v[j]) row[j] = sub(row[j], mul(c, v[j]));
        }
        rows.push_back(std::move(v));
        pivots.push_back(p);
        return true;
    }

    std::size_t rank() const { return rows.size(); }
};

inline bool is_zero(const std::vector<std::uint64_t>& v) {
    for (auto x : v)
        if (x) return false;
    return true;
}

}  // namespace diophex::pencil::modp
