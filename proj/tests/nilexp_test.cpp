#include <gtest/gtest.h>

#include <cmath>

#include "diophex/errors.hpp"
#include "diophex/nilexp.hpp"
#include "diophex/random.hpp"

using namespace diophex;
using namespace diophex::nilexp;
using exactlin::ratio;

namespace {

Rational heis_formula(unsigned k) {
    const Rational K(k);
    return Rational(1 - 1 / K - 2 / (K * K));
}

bool invariant_under(const std::vector<RationalMatrix>& maps, const RationalSubspace& w) {
    for (const auto& T : maps)
        for (const auto& v : w.basis())
            if (!w.contains(T.apply(v))) return false;
    return true;
}

}  // namespace

TEST(GroupSpec, ParsesDescriptors) {
    const auto h = GroupSpec::parse("heisenberg:5");
    EXPECT_EQ(h.s(), 2u);
    EXPECT_EQ(h.m(), 1u);
    EXPECT_EQ(h.abelianization_dim(), 4u);
    EXPECT_EQ(h.k_threshold(), 4u);
    EXPECT_EQ(h.descriptor(), "heisenberg:5");

    const auto u = GroupSpec::parse("ut:4");
    EXPECT_EQ(u.s(), 3u);
    EXPECT_EQ(u.m(), 1u);
    EXPECT_EQ(u.k_threshold(), 3u);

    const auto f = GroupSpec::parse("free:2:3");
    EXPECT_EQ(f.s(), 3u);
    EXPECT_EQ(f.m(), 2u);
    EXPECT_EQ(f.k_threshold(), 2u);

    const auto t = GroupSpec::parse("two_step:3:2");
    EXPECT_EQ(t.m(), 2u);
    EXPECT_EQ(t.abelianization_dim(), 3u);
}

TEST(GroupSpec, RejectsBadDescriptors) {
    EXPECT_THROW(GroupSpec::parse("heisenberg"), ParseError);
    EXPECT_THROW(GroupSpec::parse("heisenberg:x"), ParseError);
    EXPECT_THROW(GroupSpec::parse("lie:3"), ParseError);
    EXPECT_THROW(GroupSpec::parse("two_step:3"), ParseError);
    EXPECT_THROW(GroupSpec::parse("heisenberg:4"), DomainError);
    EXPECT_THROW(GroupSpec::parse("two_step:3:4"), DomainError);
}

TEST(ClosedFormula, SpotValues) {
    EXPECT_EQ(beta_closed(GroupSpec::parse("heisenberg:3"), 2), 0);
    EXPECT_EQ(beta_closed(GroupSpec::parse("heisenberg:3"), 3), ratio(4, 9));
    EXPECT_EQ(beta_closed(GroupSpec::parse("ut:4"), 3), ratio(7, 11));
    EXPECT_EQ(beta_closed(GroupSpec::parse("free:2:3"), 3), ratio(3, 11));
    EXPECT_EQ(beta_closed(GroupSpec::parse("ut:3"), 5), heis_formula(5));
}

TEST(ClosedFormula, TwoStepWithOneDimensionalCenterIsHeisenberg) {
    for (unsigned k = 2; k <= 30; ++k) {
        EXPECT_EQ(beta_closed(GroupSpec::parse("two_step:2:1"), k), heis_formula(k)) << k;
        EXPECT_EQ(beta_closed(GroupSpec::parse("heisenberg:3"), k), heis_formula(k)) << k;
    }
}

TEST(ClosedFormula, MatchesFullSpaceConversion) {
    // s·(N - m)/(m·α) with N, α from the Witt counts.
    const std::vector<std::string> groups{"heisenberg:3", "two_step:3:2", "two_step:4:5", "ut:4", "free:2:3",
                                          "free:3:2"};
    for (const auto& d : groups) {
        const auto g = GroupSpec::parse(d);
        for (unsigned k = g.k_threshold(); k <= 9; ++k) {
            std::uint64_t alpha = 0;
            for (unsigned e = 1; e <= g.s(); ++e) alpha += e * freelie::witt_dimension(k, e);
            const std::uint64_t N = freelie::witt_dimension(k, g.s());
            const Rational expect = ratio(g.s() * (N - g.m()), g.m() * alpha);
            EXPECT_EQ(beta_closed(g, k), expect) << d << " k=" << k;
        }
    }
}

TEST(ClosedFormula, ThresholdErrorNamesCondition) {
    try {
        beta_closed(GroupSpec::parse("heisenberg:3"), 1);
        FAIL() << "expected ThresholdError";
    } catch (const ThresholdError& e) {
        EXPECT_NE(std::string(e.what()).find("k >= 2m"), std::string::npos) << e.what();
    }
    EXPECT_THROW(beta_closed(GroupSpec::parse("heisenberg:5"), 3), ThresholdError);
    EXPECT_THROW(beta_closed(GroupSpec::parse("ut:4"), 2), ThresholdError);
    EXPECT_THROW(beta_closed(GroupSpec::parse("ut:5"), 5), UnsupportedError);
}

TEST(ClosedFormula, LimitsInUnitIntervalAndCauchy) {
    for (const auto* d : {"heisenberg:3", "two_step:3:2", "two_step:4:6", "ut:4", "free:2:3", "free:4:2"}) {
        const auto g = GroupSpec::parse(d);
        const Rational lim = beta_limit(g);
        EXPECT_GT(lim, 0) << d;
        EXPECT_LE(lim, 1) << d;
        const Rational a = beta_closed(g, 10000), b = beta_closed(g, 10001);
        EXPECT_LT(std::abs(Rational(a - b).get_d()), 1e-6) << d;
        EXPECT_LT(std::abs(Rational(a - lim).get_d()), 1e-3) << d;
        for (unsigned k = 50; k <= 200; k += 50) {
            EXPECT_GT(beta_closed(g, k), 0) << d;
            EXPECT_LE(beta_closed(g, k), 1) << d;
        }
    }
}

TEST(WordMap, ShapesFromWittCounts) {
    const auto h = word_map_family(GroupSpec::parse("heisenberg:3"), 2, 4, 1);
    EXPECT_EQ(h.N, 1u);
    EXPECT_EQ(h.m, 1u);
    for (const auto& s : h.family.samples()) {
        EXPECT_EQ(s.rows(), 1u);
        EXPECT_EQ(s.cols(), 1u);
    }
    const auto f = word_map_family(GroupSpec::parse("free:2:3"), 2, 3, 1);
    EXPECT_EQ(f.N, 2u);
    EXPECT_EQ(f.m, 2u);
    EXPECT_EQ(f.alpha, 10u);
    const auto u = word_map_family(GroupSpec::parse("ut:4"), 3, 9, 1);
    EXPECT_EQ(u.N, 8u);
    EXPECT_EQ(u.alpha, 33u);
    EXPECT_EQ(u.column_labels.size(), 8u);
}

TEST(WordMap, HeisenbergColumnsAreSymplecticPairings) {
    const auto g = GroupSpec::parse("heisenberg:5");
    Rng rng(3);
    std::vector<exactlin::RationalVector> x(4, exactlin::RationalVector(5));
    for (auto& v : x)
        for (auto& c : v) c = rng.uniform_int(-4, 4);
    const auto M = evaluate_word_map(g, 4, x);
    // Lyndon order of degree-2 words on 4 letters: ab ac ad bc bd cd.
    const std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    ASSERT_EQ(M.cols(), pairs.size());
    for (std::size_t c = 0; c < pairs.size(); ++c) {
        const auto& a = x[pairs[c].first];
        const auto& b = x[pairs[c].second];
        const Rational omega = a[0] * b[2] - a[2] * b[0] + a[1] * b[3] - a[3] * b[1];
        EXPECT_EQ(M(0, c), omega) << c;
    }
}

TEST(WordMap, EqualSlotsGiveDegenerateSample) {
    const auto g = GroupSpec::parse("heisenberg:3");
    const exactlin::RationalVector v{1, 2, 3};
    const std::vector<exactlin::RationalVector> x{v, v, v};
    EXPECT_TRUE(evaluate_word_map(g, 3, x).is_zero());
}

TEST(WordMap, SeededAndChecked) {
    const auto g = GroupSpec::parse("two_step:3:2");
    const auto a = word_map_family(g, 3, 5, 42), b = word_map_family(g, 3, 5, 42);
    EXPECT_EQ(a.family.samples(), b.family.samples());
    for (const auto& s : a.family.samples()) EXPECT_EQ(exactlin::rank(s), 2u);
    EXPECT_THROW(word_map_family(g, 3, 3, 1), DomainError);
    EXPECT_THROW(word_map_family(g, 2, 5, 1), ThresholdError);
}

TEST(InvariantSubspaces, HeisenbergDegreeTwoIsIrreducible) {
    const auto g = GroupSpec::parse("heisenberg:3");
    const auto inv = invariant_subspaces(g, 3);
    ASSERT_EQ(inv.size(), 2u);
    EXPECT_TRUE(inv[0].is_zero());
    EXPECT_EQ(inv[1].dim(), 3u);

    // Brute force: no line or plane spanned by height-1 vectors is invariant.
    const auto maps = substitution_action(g, 3);
    const auto hv = pencil::height_vectors(3, 1);
    for (const auto& v : hv) {
        exactlin::RationalVector rv(v.begin(), v.end());
        EXPECT_FALSE(invariant_under(maps, RationalSubspace::span(3, {rv})));
        const auto plane = exactlin::kernel(RationalMatrix::from_rows({rv}));
        EXPECT_FALSE(invariant_under(maps, plane));
    }
}

TEST(InvariantSubspaces, LatticeOfInvariants) {
    for (const auto& [d, k] : std::vector<std::pair<std::string, unsigned>>{{"free:2:3", 2}, {"ut:4", 3}, {"two_step:3:2", 4}}) {
        const auto g = GroupSpec::parse(d);
        const auto inv = invariant_subspaces(g, k);
        const auto maps = substitution_action(g, k);
        ASSERT_GE(inv.size(), 2u);
        EXPECT_TRUE(inv.front().is_zero());
        EXPECT_EQ(inv.back().dim(), inv.back().ambient_dim());
        for (const auto& w : inv) EXPECT_TRUE(invariant_under(maps, w)) << d;
        for (const auto& a : inv)
            for (const auto& b : inv) {
                EXPECT_NE(std::find(inv.begin(), inv.end(), exactlin::subspace_sum(a, b)), inv.end());
                EXPECT_NE(std::find(inv.begin(), inv.end(), exactlin::subspace_intersect(a, b)), inv.end());
            }
    }
}

TEST(InvariantSubspaces, SubstitutionsActOnBrackets) {
    // Swapping the generators negates [a,b].
    const auto maps = substitution_action(GroupSpec::parse("heisenberg:3"), 2);
    ASSERT_FALSE(maps.empty());
    EXPECT_EQ(maps[0](0, 0), -1);
}

TEST(PencilRoute, CalibratesAgainstClosedFormulas) {
    const std::vector<std::pair<std::string, unsigned>> cases{
        {"heisenberg:3", 2}, {"heisenberg:3", 3}, {"heisenberg:3", 4}, {"ut:4", 3},
        {"free:2:3", 2},     {"free:2:3", 3},     {"two_step:3:2", 4}, {"two_step:3:3", 3}};
    for (const auto& [d, k] : cases) {
        const auto g = GroupSpec::parse(d);
        const auto p = beta_via_pencils(g, k, 1);
        ASSERT_TRUE(p.closed.has_value());
        EXPECT_TRUE(p.calibrated) << d << " k=" << k << ": pencil " << p.beta_k.to_string() << " vs closed "
                                  << p.closed->get_str();
    }
}

TEST(PencilRoute, DocumentedExamples) {
    const auto h = beta_via_pencils(GroupSpec::parse("heisenberg:3"), 3, 1);
    EXPECT_EQ(h.beta_matrix, ExtRational(2));
    EXPECT_EQ(h.alpha, 9u);
    EXPECT_EQ(h.beta_k, ExtRational(ratio(4, 9)));
    EXPECT_EQ(h.witness.W.dim(), 3u);
    EXPECT_EQ(h.witness.r, 1u);

    const auto u = beta_via_pencils(GroupSpec::parse("ut:4"), 3, 1);
    EXPECT_EQ(u.beta_matrix, ExtRational(7));
    EXPECT_EQ(u.beta_k, ExtRational(ratio(7, 11)));

    const auto f = beta_via_pencils(GroupSpec::parse("free:2:3"), 3, 1);
    EXPECT_EQ(f.N, 8u);
    EXPECT_EQ(f.beta_matrix, ExtRational(3));
    EXPECT_EQ(f.witness.r, 2u);
    EXPECT_EQ(f.beta_k, ExtRational(ratio(3, 11)));
}

TEST(PencilRoute, ReportFields) {
    const auto g = GroupSpec::parse("ut:4");
    const auto rep = pencil_exponent_report(g, 3, beta_via_pencils(g, 3, 1));
    EXPECT_EQ(rep.get("beta_closed"), "7/11");
    EXPECT_EQ(rep.get("beta_pencil"), "7/11");
    EXPECT_EQ(rep.get("calibration"), "OK");
    EXPECT_EQ(rep.get("witness_W_dim"), "8");
    EXPECT_EQ(rep.get("alpha"), "33");
}

TEST(PencilRoute, ScaleGuard) {
    EXPECT_THROW(beta_via_pencils(GroupSpec::parse("heisenberg:3"), 6, 1), ScaleError);
    EXPECT_THROW(beta_via_pencils(GroupSpec::parse("ut:4"), 4, 1), ScaleError);
    EXPECT_THROW(invariant_subspaces(GroupSpec::parse("ut:4"), 4), ScaleError);
}

TEST(Submodular, SubspaceCounts) {
    EXPECT_EQ(all_subspaces(2, 4).size(), 67u);
    EXPECT_EQ(all_subspaces(3, 2).size(), 6u);
    EXPECT_EQ(all_subspaces(2, 3).size(), 16u);
    EXPECT_EQ(all_subspaces(5, 1).size(), 2u);
}

TEST(Submodular, CyclicInstanceHasInvariantMinimizer) {
    const auto inst = cyclic_f2_instance();
    const auto r = submodular_min_check(inst);
    EXPECT_EQ(r.subspaces, 67u);
    EXPECT_TRUE(r.invariant_minimizer_found);
    // ker(I + P) = span(1,1,1,1) gives ratio 0.
    EXPECT_EQ(r.min_ratio, 0);
    ASSERT_FALSE(r.invariant_minimizers.empty());
    EXPECT_EQ(r.invariant_minimizers.front().to_string(), "[(1,1,1,1)]");
    EXPECT_EQ(submodular_report(inst, r).get("verdict"), "invariant minimizer found");
}

TEST(Submodular, PlantedNonSubmodularRejected) {
    EXPECT_THROW(submodular_min_check(planted_nonsubmodular_instance()), HypothesisError);
}

TEST(Submodular, OtherHypothesisFailures) {
    auto inst = identity_phi_instance();
    inst.phi = [](const FpSubspace& w) { return static_cast<unsigned>(3 - w.dim()); };
    EXPECT_THROW(submodular_min_check(inst), HypothesisError);

    // Depends on the first coordinate only: submodular, not shift-invariant.
    inst = identity_phi_instance();
    inst.phi = [](const FpSubspace& w) {
        for (const auto& v : w.basis)
            if (v[0] != 0) return 1U;
        return 0U;
    };
    EXPECT_THROW(submodular_min_check(inst), HypothesisError);

    inst = identity_phi_instance();
    inst.p = 4;
    EXPECT_THROW(submodular_min_check(inst), DomainError);
}

TEST(Submodular, TrivialGroupAndIdentityPhi) {
    const auto t = submodular_min_check(trivial_group_instance());
    EXPECT_TRUE(t.invariant_minimizer_found);
    EXPECT_EQ(t.minimizers, t.invariant_minimizers);
    EXPECT_EQ(t.min_ratio, 0);

    const auto id = submodular_min_check(identity_phi_instance());
    EXPECT_EQ(id.min_ratio, 1);
    EXPECT_EQ(id.minimizers.size(), 15u);
    EXPECT_TRUE(id.invariant_minimizer_found);
}

TEST(Submodular, FuzzedImageDimInstances) {
    // φ = dim A·W with A commuting with the shift is always admissible, and
    // the conclusion must hold.
    Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        auto inst = cyclic_f2_instance();
        const FpMatrix P = inst.group[0];
        FpMatrix A(4, std::vector<unsigned>(4, 0));
        // Polynomials in P commute with P.
        FpMatrix power = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
        for (int e = 0; e < 4; ++e) {
            if (rng.uniform_int(0, 1))
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) A[i][j] ^= power[i][j];
            FpMatrix next(4, std::vector<unsigned>(4, 0));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    for (int l = 0; l < 4; ++l) next[i][j] ^= P[i][l] & power[l][j];
            power = next;
        }
        inst.phi = [A](const FpSubspace& w) { return fp_image_dim(2, A, w); };
        EXPECT_TRUE(submodular_min_check(inst).invariant_minimizer_found);
    }
}

TEST(Ball, IntegralHeisenbergIsOneDiophantine) {
    const auto g = GroupSpec::parse("heisenberg:3");
    const auto r = group_ball_check(g, integral_heisenberg_generators(), 12, 1.0);
    ASSERT_EQ(r.levels.size(), 13u);
    EXPECT_EQ(r.levels[1].size, 5u);
    EXPECT_EQ(r.levels[2].size, 17u);
    for (std::size_t n = 1; n <= 12; ++n) {
        ASSERT_TRUE(r.levels[n].min_distance.has_value());
        EXPECT_GE(*r.levels[n].min_distance, 1);
        EXPECT_TRUE(r.levels[n].diophantine);
    }
    EXPECT_TRUE(r.all_diophantine);
    EXPECT_EQ(r.bass_guivarch, 4u);
    EXPECT_LT(std::abs(r.growth_exponent - 4.0) / 4.0, 0.15);
}

TEST(Ball, RationalGeneratorsGrowLikeFreeTwoStep) {
    RationalMatrix a = RationalMatrix::identity(3), b = RationalMatrix::identity(3);
    a(0, 1) = ratio(1, 2);
    a(0, 2) = ratio(-2, 3);
    a(1, 2) = ratio(1, 3);
    b(0, 1) = ratio(3, 5);
    b(1, 2) = ratio(-1, 7);
    const auto r = group_ball_check(GroupSpec::parse("heisenberg:3"), {a, b}, 12, 1.0);
    EXPECT_LT(std::abs(r.growth_exponent - 4.0) / 4.0, 0.15) << r.growth_exponent;
    for (std::size_t n = 1; n <= 12; ++n) EXPECT_GT(*r.levels[n].min_distance, 0);
}

TEST(Ball, RelationsDeduplicated) {
    // S = {1, a, a^-1, a^2, a^-2}: S^n = {a^j : |j| <= 2n}, identity never counted twice.
    RationalMatrix a = RationalMatrix::identity(3);
    a(0, 1) = 1;
    const RationalMatrix a2 = a * a;
    const auto r = group_ball_check(GroupSpec::parse("heisenberg:3"), {a, a2}, 5, 1.0);
    for (std::size_t n = 0; n <= 5; ++n) EXPECT_EQ(r.levels[n].size, 4 * n + 1);
    EXPECT_EQ(*r.levels[5].min_distance, 1);
}

TEST(Ball, GuardsAndParsing) {
    const auto g = GroupSpec::parse("heisenberg:3");
    EXPECT_THROW(group_ball_check(g, integral_heisenberg_generators(), 12, 1.0, 100), BudgetError);
    RationalMatrix bad = RationalMatrix::identity(3);
    bad(1, 0) = 1;
    EXPECT_THROW(group_ball_check(g, {bad}, 3, 1.0), DomainError);

    const auto gens = parse_generators("# a\n1 1 0\n0 1 0\n0 0 1\n\n1 0 0\n0 1 1\n0 0 1\n");
    ASSERT_EQ(gens.size(), 2u);
    EXPECT_EQ(gens, integral_heisenberg_generators());
    EXPECT_THROW(parse_generators("\n# nothing\n"), ParseError);

    const auto rep = ball_report(group_ball_check(g, gens, 3, 1.0));
    EXPECT_EQ(rep.get("beta_diophantine"), "true");
    EXPECT_EQ(rep.get("level_1"), "size=5 inf_dist=1 diophantine=true");
}
