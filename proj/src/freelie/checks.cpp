#include "diophex/errors.hpp"
#include "diophex/freelie.hpp"
#include "diophex/random.hpp"

namespace diophex::freelie {

namespace {

bool is_zero(const RationalVector& v) {
    for (const auto& x : v)
        if (sgn(x) != 0) return false;
    return true;
}

RationalVector jacobiator(const GradedLieAlgebra& a, const RationalVector& x, const RationalVector& y,
                          const RationalVector& z) {
    RationalVector s = a.bracket(x, a.bracket(y, z));
    const RationalVector t = a.bracket(y, a.bracket(z, x));
    const RationalVector u = a.bracket(z, a.bracket(x, y));
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += t[i] + u[i];
    return s;
}

}  // namespace

IdentityCheck check_antisymmetry(const GradedLieAlgebra& a) {
    IdentityCheck r;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            ++r.checked;
            RationalVector ij(a.dim()), ji(a.dim());
            for (const auto& t : a.bracket_of(i, j)) ij[t.index] += t.coeff;
            for (const auto& t : a.bracket_of(j, i)) ji[t.index] += t.coeff;
            for (std::size_t l = 0; l < a.dim(); ++l)
                if (ij[l] != -ji[l]) {
                    r.ok = false;
                    r.counterexample = "[" + a.label(i) + "," + a.label(j) + "]";
                    return r;
                }
        }
    return r;
}

IdentityCheck check_grading(const GradedLieAlgebra& a) {
    IdentityCheck r;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            ++r.checked;
            for (const auto& t : a.bracket_of(i, j))
                if (sgn(t.coeff) != 0 && a.degree(t.index) != a.degree(i) + a.degree(j)) {
                    r.ok = false;
                    r.counterexample = "[" + a.label(i) + "," + a.label(j) + "] leaves the grading";
                    return r;
                }
        }
    return r;
}

IdentityCheck check_jacobi_exhaustive(const GradedLieAlgebra& a) {
    IdentityCheck r;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i + 1; j < a.dim(); ++j)
            for (std::size_t l = j + 1; l < a.dim(); ++l) {
                if (a.degree(i) + a.degree(j) + a.degree(l) > a.nilpotency_class()) continue;
                ++r.checked;
                if (!is_zero(jacobiator(a, a.basis_vector(i), a.basis_vector(j), a.basis_vector(l)))) {
                    r.ok = false;
                    r.counterexample = a.label(i) + ", " + a.label(j) + ", " + a.label(l);
                    return r;
                }
            }
    return r;
}

IdentityCheck check_jacobi_random(const GradedLieAlgebra& a, std::size_t triples, std::uint64_t seed) {
    IdentityCheck r;
    Rng rng(seed);
    auto draw = [&] {
        RationalVector v(a.dim());
        for (auto& x : v) x = rng.uniform_int(-3, 3);
        return v;
    };
    for (std::size_t t = 0; t < triples; ++t) {
        const RationalVector x = draw(), y = draw(), z = draw();
        ++r.checked;
        if (!is_zero(jacobiator(a, x, y, z))) {
            r.ok = false;
            r.counterexample = "random triple #" + std::to_string(t);
            return r;
        }
    }
    return r;
}

bool has_integer_structure_constants(const GradedLieAlgebra& a) {
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            for (const auto& t : a.bracket_of(i, j))
                if (t.coeff.get_den() != 1) return false;
    return true;
}

}  // namespace diophex::freelie
