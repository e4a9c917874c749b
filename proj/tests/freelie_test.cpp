#include "diophex/freelie.hpp"

#include <gtest/gtest.h>

#include "diophex/errors.hpp"

namespace diophex::freelie {
namespace {

std::vector<std::string> labels_of_degree(const LyndonBasis& b, unsigned d) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < b.degree_count(d); ++i) out.push_back(b.bracketing(b.degree_offset(d) + i));
    return out;
}

TEST(Witt, Examples) {
    EXPECT_EQ(witt_dimension(4, 1), 4u);
    EXPECT_EQ(witt_dimension(2, 3), 2u);
    EXPECT_EQ(witt_dimension(3, 2), 3u);
    EXPECT_EQ(witt_dimension(3, 3), 8u);
    EXPECT_EQ(witt_dimension(2, 6), 9u);
    EXPECT_THROW(witt_dimension(0, 1), DomainError);
}

TEST(Witt, MatchesLyndonCount) {
    for (unsigned k = 1; k <= 5; ++k) {
        const auto words = lyndon_words(k, 8);
        for (unsigned d = 1; d <= 8; ++d) {
            const auto count = std::count_if(words.begin(), words.end(), [d](const Word& w) { return w.size() == d; });
            EXPECT_EQ(static_cast<std::uint64_t>(count), witt_dimension(k, d)) << "k=" << k << " d=" << d;
        }
    }
}

TEST(Lyndon, SmallBases) {
    const LyndonBasis b22(2, 2);
    EXPECT_EQ(labels_of_degree(b22, 1), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(labels_of_degree(b22, 2), (std::vector<std::string>{"[a,b]"}));

    const LyndonBasis b23(2, 3);
    EXPECT_EQ(labels_of_degree(b23, 3), (std::vector<std::string>{"[a,[a,b]]", "[[a,b],b]"}));

    const LyndonBasis b13(1, 3);
    EXPECT_EQ(b13.size(), 1u);
    EXPECT_EQ(b13.degree_count(2), 0u);
    EXPECT_EQ(b13.degree_count(3), 0u);
}

TEST(Lyndon, Factorization) {
    EXPECT_EQ(standard_factorization({0, 0, 1}), (std::pair<Word, Word>{{0}, {0, 1}}));
    EXPECT_EQ(standard_factorization({0, 1, 1}), (std::pair<Word, Word>{{0, 1}, {1}}));
    EXPECT_TRUE(is_lyndon({0, 0, 1, 0, 1}));
    EXPECT_FALSE(is_lyndon({0, 1, 0, 1}));
}

TEST(Algebra, GradedDims) {
    EXPECT_EQ(build_algebra({FamilyKind::FreeNilpotent, 2, 2}, 2).graded_dims(), (std::vector<std::size_t>{2, 1}));
    for (unsigned k = 2; k <= 5; ++k)
        EXPECT_EQ(free_nilpotent(k, 3).graded_dims(),
                  (std::vector<std::size_t>{k, (k * k - k) / 2, (k * k * k - k) / 3}));
    EXPECT_EQ(build_algebra({FamilyKind::Unitriangular, 4, 0}, 3).graded_dims(), (std::vector<std::size_t>{3, 3, 8}));
    EXPECT_EQ(heisenberg(5).graded_dims(), (std::vector<std::size_t>{4, 1}));
    EXPECT_EQ(two_step(3, 2).graded_dims(), (std::vector<std::size_t>{3, 2}));
    EXPECT_EQ(unitriangular(4).graded_dims(), (std::vector<std::size_t>{3, 2, 1}));
}

TEST(Algebra, FreeBracketsOnLyndonBasis) {
    const GradedLieAlgebra f = free_nilpotent(2, 3);
    // basis: a b [a,b] [a,[a,b]] [[a,b],b]
    ASSERT_EQ(f.dim(), 5u);
    const auto ab = f.bracket(f.basis_vector(0), f.basis_vector(1));
    EXPECT_EQ(ab[2], 1);
    const auto a_ab = f.bracket(f.basis_vector(0), f.basis_vector(2));
    EXPECT_EQ(a_ab[3], 1);
    const auto ab_b = f.bracket(f.basis_vector(2), f.basis_vector(1));
    EXPECT_EQ(ab_b[4], 1);
    const auto b_ab = f.bracket(f.basis_vector(1), f.basis_vector(2));
    EXPECT_EQ(b_ab[4], -1);
}

TEST(Algebra, IdentitiesExhaustiveSmall) {
    for (unsigned k = 1; k <= 3; ++k)
        for (unsigned s = 1; s <= 3; ++s) {
            const GradedLieAlgebra f = free_nilpotent(k, s);
            EXPECT_TRUE(check_antisymmetry(f).ok);
            EXPECT_TRUE(check_grading(f).ok);
            EXPECT_TRUE(check_jacobi_exhaustive(f).ok) << f.name();
            EXPECT_TRUE(has_integer_structure_constants(f));
        }
    for (const auto& a : {heisenberg(3), heisenberg(7), two_step(4, 3), unitriangular(4), unitriangular(5)}) {
        EXPECT_TRUE(check_antisymmetry(a).ok);
        EXPECT_TRUE(check_grading(a).ok);
        EXPECT_TRUE(check_jacobi_exhaustive(a).ok) << a.name();
    }
}

TEST(Algebra, JacobiRandomLarger) {
    const GradedLieAlgebra f = free_nilpotent(3, 5);
    EXPECT_TRUE(check_jacobi_random(f, 50, 1).ok);
    EXPECT_TRUE(has_integer_structure_constants(f));
}

TEST(Evaluate, HeisenbergDefiningRelation) {
    const GradedLieAlgebra h = heisenberg(3);
    const LyndonBasis words(2, 2);
    const std::vector<RationalVector> x{h.basis_vector(0), h.basis_vector(1)};
    const auto e = evaluate_basis(words, h, x, 2);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0][2], 1);
}

TEST(Evaluate, EqualArgumentsVanish) {
    const GradedLieAlgebra u = unitriangular(4);
    const LyndonBasis words(2, 3);
    RationalVector x(u.dim());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<long>(i) + 1;
    const std::vector<RationalVector> args{x, x};
    for (const auto& v : evaluate_basis(words, u, args, 2))
        for (const auto& c : v) EXPECT_EQ(sgn(c), 0);
}

// 4×4 strictly upper triangular matrices as plain integer arrays.
using Mat4 = std::array<std::array<long, 4>, 4>;

Mat4 commutator(const Mat4& a, const Mat4& b) {
    Mat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int l = 0; l < 4; ++l) c[i][j] += a[i][l] * b[l][j] - b[i][l] * a[l][j];
    return c;
}

TEST(Evaluate, UnitriangularMatchesMatrixCommutators) {
    const GradedLieAlgebra u = unitriangular(4);
    const LyndonBasis words(2, 3);
    // Generic strictly upper triangular arguments.
    const std::array<long, 6> xa{2, -1, 3, 1, 4, -2}, xb{-1, 5, 2, -3, 1, 7};
    auto to_matrix = [&](const std::array<long, 6>& c) {
        Mat4 m{};
        for (std::size_t e = 0; e < 6; ++e) {
            const std::string& lab = u.label(e);  // "Eij"
            m[lab[1] - '1'][lab[2] - '1'] = c[e];
        }
        return m;
    };
    auto to_vector = [&](const std::array<long, 6>& c) {
        RationalVector v(6);
        for (std::size_t e = 0; e < 6; ++e) v[e] = c[e];
        return v;
    };
    const Mat4 A = to_matrix(xa), B = to_matrix(xb);
    const std::vector<RationalVector> args{to_vector(xa), to_vector(xb)};
    const auto e = evaluate_all(words, u, args);
    const Mat4 a_ab = commutator(A, commutator(A, B));
    const Mat4 ab_b = commutator(commutator(A, B), B);
    ASSERT_EQ(words.bracketing(3), "[a,[a,b]]");
    ASSERT_EQ(words.bracketing(4), "[[a,b],b]");
    for (std::size_t idx = 0; idx < 6; ++idx) {
        const std::string& lab = u.label(idx);
        const int i = lab[1] - '1', j = lab[2] - '1';
        EXPECT_EQ(e[3][idx], a_ab[i][j]);
        EXPECT_EQ(e[4][idx], ab_b[i][j]);
    }
}

TEST(Evaluate, MultilinearScaling) {
    // Scaling argument j by c scales e_i by c^(occurrences of letter j).
    const GradedLieAlgebra f = free_nilpotent(2, 3);
    const LyndonBasis words(2, 3);
    const std::vector<RationalVector> x{RationalVector{1, 2, 3, -1, 2}, RationalVector{-2, 1, 1, 0, 5}};
    std::vector<RationalVector> y = x;
    for (auto& c : y[0]) c *= 3;
    const auto ex = evaluate_all(words, f, x), ey = evaluate_all(words, f, y);
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto count_a = std::count(words[i].word.begin(), words[i].word.end(), 0);
        Rational factor = 1;
        for (int t = 0; t < count_a; ++t) factor *= 3;
        // Only the top-degree part is homogeneous in the letter counts.
        const unsigned top = words[i].degree;
        for (std::size_t l = 0; l < f.dim(); ++l) {
            if (f.degree(l) != top) continue;
            EXPECT_EQ(ey[i][l], factor * ex[i][l]);
        }
    }
}

TEST(BassGuivarch, WittSums) {
    for (unsigned k = 2; k <= 10; ++k) {
        EXPECT_EQ(bass_guivarch(free_nilpotent(k, 2)), std::uint64_t{k} * k);
        EXPECT_EQ(bass_guivarch(free_nilpotent(k, 3)), std::uint64_t{k} * k * k + k * k - k);
    }
    EXPECT_EQ(bass_guivarch(free_nilpotent(4, 1)), 4u);
}

TEST(Algebra, RelativelyFreeSupport) {
    EXPECT_EQ(relatively_free_class({FamilyKind::Unitriangular, 4, 0}), 3u);
    EXPECT_EQ(relatively_free_class({FamilyKind::Heisenberg, 5, 0}), 2u);
    EXPECT_THROW(relatively_free_class({FamilyKind::FreeNilpotent, 2, 4}), UnsupportedError);
    EXPECT_THROW(two_step(3, 4), DomainError);
    EXPECT_THROW(heisenberg(4), DomainError);
}

TEST(Dump, ContainsConstants) {
    const std::string d = dump_algebra(heisenberg(3));
    EXPECT_NE(d.find("degrees: 2 1"), std::string::npos);
    EXPECT_NE(d.find("basis: X1 Y1 Z"), std::string::npos);
    EXPECT_NE(d.find("0 1 2 1"), std::string::npos);
}

}  // namespace
}  // namespace diophex::freelie
