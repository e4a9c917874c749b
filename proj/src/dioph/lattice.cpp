#include "diophex/lattice.hpp"

#include <cmath>

#include "diophex/errors.hpp"

namespace diophex::lattice {

namespace {

constexpr unsigned kMaxPrecision = 4096;

Real dot(const std::vector<Real>& a, const std::vector<Real>& b, unsigned prec) {
    Real s(prec);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct GsState {
    std::vector<std::vector<Real>> mu;
    std::vector<Real> B;
};

GsState full_gram_schmidt(const Basis& b, unsigned prec) {
    const std::size_t d = b.size();
    GsState g;
    g.mu.assign(d, std::vector<Real>(d, Real(prec)));
    g.B.assign(d, Real(prec));
    std::vector<std::vector<Real>> star = b;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (g.B[j].is_zero()) continue;
            g.mu[i][j] = dot(b[i], star[j], prec) / g.B[j];
            for (std::size_t c = 0; c < star[i].size(); ++c) star[i][c] -= g.mu[i][j] * star[j][c];
        }
        g.B[i] = dot(star[i], star[i], prec);
    }
    return g;
}

void check_independent(const Basis& b, const GsState& g, unsigned prec) {
    Real scale(prec);
    for (const auto& v : b) {
        const Real n = dot(v, v, prec);
        if (n > scale) scale = n;
    }
    const Real tiny = ldexp(scale, -static_cast<long>(prec) + 8);
    for (const auto& Bi : g.B)
        if (!(Bi > tiny)) throw DomainError("lattice basis is singular (dependent vectors)");
}

LllResult lll_once(const Basis& input, double delta, unsigned prec, bool& uncertain) {
    const std::size_t d = input.size();
    Basis b;
    for (const auto& v : input) {
        std::vector<Real> w;
        for (const auto& x : v) w.push_back(x.with_precision(prec));
        b.push_back(std::move(w));
    }
    IntMatrix U(d, std::vector<Integer>(d, 0));
    for (std::size_t i = 0; i < d; ++i) U[i][i] = 1;

    GsState g = full_gram_schmidt(b, prec);
    check_independent(b, g, prec);
    const Real half = Real::from_double(0.5, prec);
    const Real rdelta = Real::from_double(delta, prec);
    const Real close = ldexp(Real::from_double(1.0, prec), -static_cast<long>(prec) / 2);

    LllResult res;
    std::size_t k = 1;
    while (k < d) {
        for (std::size_t j = k; j-- > 0;) {
            if (!(abs(g.mu[k][j]) > half)) continue;
            const Integer r = g.mu[k][j].round();
            const Real rr = Real::from_integer(r, prec);
            for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= mul_integer(b[j][c], r);
            for (std::size_t c = 0; c < d; ++c) U[k][c] -= r * U[j][c];
            for (std::size_t l = 0; l < j; ++l) g.mu[k][l] -= rr * g.mu[j][l];
            g.mu[k][j] -= rr;
        }
        const Real lhs = g.B[k];
        const Real rhs = (rdelta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.B[k - 1];
        const Real diff = abs(lhs - rhs);
        if (!diff.is_zero() && diff <= close * (abs(lhs) > abs(rhs) ? abs(lhs) : abs(rhs))) uncertain = true;
        if (lhs >= rhs) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            std::swap(U[k], U[k - 1]);
            g = full_gram_schmidt(b, prec);
            ++res.swaps;
            k = k > 1 ? k - 1 : 1;
        }
    }
    res.transform = std::move(U);
    res.delta = delta;
    res.precision = prec;
    for (const auto& row : res.transform) res.basis.push_back(combine(input, row, prec));
    return res;
}

}  // namespace

Real norm2(const std::vector<Real>& v) {
    unsigned prec = kDefaultPrecision;
    if (!v.empty()) prec = v.front().precision();
    return dot(v, v, prec);
}

std::vector<Real> combine(const Basis& basis, const std::vector<Integer>& coeffs, unsigned precision) {
    const std::size_t D = basis.empty() ? 0 : basis.front().size();
    std::vector<Real> out(D, Real(precision));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (sgn(coeffs[k]) == 0) continue;
        for (std::size_t c = 0; c < D; ++c) out[c] += mul_integer(basis[k][c].with_precision(precision), coeffs[k]);
    }
    return out;
}

LllResult lll_reduce(const Basis& basis, double delta, unsigned precision) {
    if (!(delta > 0.25 && delta < 1.0)) throw DomainError("LLL delta must lie in (1/4, 1)");
    if (basis.empty()) throw DomainError("LLL needs at least one vector");
    const std::size_t D = basis.front().size();
    for (const auto& v : basis)
        if (v.size() != D) throw DimensionError("LLL basis vectors differ in length");
    if (basis.size() > D) throw DomainError("lattice basis is singular (more vectors than dimensions)");
    unsigned prec = std::max(precision, 64U);
    while (true) {
        bool uncertain = false;
        LllResult r = lll_once(basis, delta, prec, uncertain);
        if (!uncertain || prec >= kMaxPrecision) return r;
        prec *= 2;
    }
}

bool is_lll_reduced(const Basis& basis, double delta, double eps) {
    const unsigned prec = basis.front().front().precision();
    const GsState g = full_gram_schmidt(basis, prec);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (std::fabs(g.mu[i][j].to_double()) > 0.5 + eps) return false;
        if (i > 0) {
            const double mu = g.mu[i][i - 1].to_double();
            if (g.B[i].to_double() < (delta - mu * mu) * g.B[i - 1].to_double() * (1 - eps)) return false;
        }
    }
    return true;
}

Integer int_determinant(const IntMatrix& m) {
    exactlin::RationalMatrix r(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) r(i, j) = m[i][j];
    const exactlin::Rational det = exactlin::determinant(r);
    return det.get_num();
}

GramSchmidt gram_schmidt(const Basis& basis) {
    const unsigned prec = basis.front().front().precision();
    const GsState g = full_gram_schmidt(basis, prec);
    GramSchmidt out;
    out.mu.assign(basis.size(), std::vector<long double>(basis.size(), 0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) out.mu[i][j] = std::stold(g.mu[i][j].to_string(24));
        out.norms2.push_back(std::stold(g.B[i].to_string(24)));
    }
    return out;
}

std::vector<std::vector<long long>> enumerate_ball(const Basis& basis, long double radius2, std::uint64_t budget) {
    const GramSchmidt gs = gram_schmidt(basis);
    const std::size_t d = basis.size();
    std::vector<std::vector<long long>> out;
    std::vector<long long> z(d, 0);
    std::uint64_t work = 0;

    // Level i fixes z_i given z_{i+1..d-1}; `top_zero` means all higher
    // coefficients are zero, in which case only z_i >= 0 is explored so that
    // one of ±z is reported.
    auto rec = [&](auto&& self, std::size_t i, long double r2, bool top_zero) -> void {
        long double c = 0;
        for (std::size_t j = i + 1; j < d; ++j) c -= static_cast<long double>(z[j]) * gs.mu[j][i];
        const long double B = gs.norms2[i];
        const long double bound = std::sqrt(std::max<long double>(r2, 0) / B);
        long long lo = static_cast<long long>(std::ceil(c - bound));
        const long long hi = static_cast<long long>(std::floor(c + bound));
        if (top_zero) lo = std::max<long long>(lo, 0);
        for (long long v = lo; v <= hi; ++v) {
            if (++work > budget) throw BudgetError("lattice enumeration exceeded " + std::to_string(budget) + " steps");
            const long double t = (static_cast<long double>(v) - c) * (static_cast<long double>(v) - c) * B;
            if (t > r2) continue;
            z[i] = v;
            if (i == 0) {
                if (!(top_zero && v == 0)) out.push_back(z);
            } else {
                self(self, i - 1, r2 - t, top_zero && v == 0);
            }
        }
        z[i] = 0;
    };
    rec(rec, d - 1, radius2, true);
    return out;
}

ShortestVector shortest_vector(const Basis& basis, unsigned precision) {
    const LllResult red = lll_reduce(basis, 0.99, precision);
    const unsigned prec = red.precision;
    const long double r2 = std::stold(norm2(red.basis.front()).to_string(24)) * (1 + 1e-9L);
    const auto cands = enumerate_ball(red.basis, r2);
    const std::size_t d = basis.size();
    ShortestVector best{Real(prec), {}, prec};
    bool have = false;
    for (const auto& z : cands) {
        std::vector<Integer> coeff(d, 0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k) coeff[k] += Integer(static_cast<long>(z[i])) * red.transform[i][k];
        const Real len2 = norm2(combine(basis, coeff, prec));
        if (!have || len2 < best.length) {
            best.length = len2;
            best.coefficients = coeff;
            have = true;
        }
    }
    if (!have) {
        best.coefficients = red.transform.front();
        best.length = norm2(red.basis.front());
    }
    best.length = sqrt(best.length);
    return best;
}

}  // namespace diophex::lattice
