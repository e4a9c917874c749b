#include <gtest/gtest.h>

#include <cmath>

#include "diophex/dioph.hpp"
#include "diophex/errors.hpp"
#include "diophex/random.hpp"

using namespace diophex;
using namespace diophex::dioph;

namespace {

RealMatrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed, double lo = 0, double hi = 1) {
    Rng rng(seed);
    std::vector<double> v(m * (m + n));
    for (auto& x : v) x = lo + (hi - lo) * rng.uniform01();
    return RealMatrix::from_doubles(m, m + n, v);
}

// Convergent denominators of φ are Fibonacci numbers.
std::vector<long long> fibonacci(long long upto) {
    std::vector<long long> f{1, 1};
    while (f.back() <= upto) f.push_back(f[f.size() - 1] + f[f.size() - 2]);
    return f;
}

BestApproxRecord synthetic(long long norm, double quality) {
    BestApproxRecord r;
    r.q = {norm, 1};
    r.norm_q = norm;
    r.quality = Real::from_double(quality);
    return r;
}

}  // namespace

TEST(RealMatrixParse, ExpressionsAndExactness) {
    const auto g = RealMatrix::parse("# golden\n1 (1+sqrt(5))/2\n");
    EXPECT_FALSE(g.is_exact());
    EXPECT_NEAR(g.to_double(0, 1), 1.6180339887498949, 1e-15);
    const auto phi = RealMatrix::parse("1 phi");
    EXPECT_TRUE(phi(0, 1) == g(0, 1));

    const auto r = RealMatrix::parse("1 0.5 -3/4\n2 1.5e2 -7");
    ASSERT_TRUE(r.is_exact());
    EXPECT_EQ((*r.exact())(0, 1), exactlin::ratio(1, 2));
    EXPECT_EQ((*r.exact())(0, 2), exactlin::ratio(-3, 4));
    EXPECT_EQ((*r.exact())(1, 1), 150);
    EXPECT_EQ(r.m(), 2U);
    EXPECT_EQ(r.n(), 1U);

    EXPECT_NEAR(RealMatrix::parse("1 pi*e-log(2)").to_double(0, 1), M_PI * M_E - std::log(2.0), 1e-14);
    EXPECT_NEAR(RealMatrix::parse("1 cbrt(2)+exp(0)").to_double(0, 1), std::cbrt(2.0) + 1, 1e-14);
}

TEST(RealMatrixParse, Rejects) {
    EXPECT_THROW(RealMatrix::parse(""), ParseError);
    EXPECT_THROW(RealMatrix::parse("1 2\n3"), ParseError);
    EXPECT_THROW(RealMatrix::parse("1 2\n3 4"), ParseError);  // n = 0
    EXPECT_THROW(RealMatrix::parse("1 foo"), ParseError);
    EXPECT_THROW(RealMatrix::parse("1 (2"), ParseError);
    EXPECT_THROW(RealMatrix::parse("1 1/0"), ParseError);
    EXPECT_THROW(RealMatrix::parse("1 sqrt(-1)"), ParseError);
    EXPECT_THROW(RealMatrix::parse("1 log(0)"), ParseError);
    EXPECT_THROW(RealMatrix::parse("1 2", 32), DomainError);
}

TEST(RealMatrixParse, HashIsStableAndSensitive) {
    const auto a = RealMatrix::parse("1 phi");
    EXPECT_EQ(a.hash(), RealMatrix::parse("1   phi # comment").hash());
    EXPECT_NE(a.hash(), RealMatrix::parse("1 pi").hash());
    EXPECT_EQ(a.hash().size(), 16U);
}

TEST(Shells, CoverOneToT) {
    const auto s = shells(1'000'000);
    ASSERT_EQ(s.size(), 21U);
    EXPECT_EQ(s.front().lo, 0);
    EXPECT_EQ(s.front().hi, 1);
    EXPECT_EQ(s.back().lo, 524288);
    EXPECT_EQ(s.back().hi, 1'000'000);
    EXPECT_EQ(shells(1).size(), 1U);
    EXPECT_EQ(shells(8).size(), 4U);
}

TEST(Exhaustive, GoldenRatioShellMinimaAreFibonacciPairs) {
    const auto M = RealMatrix::parse("1 phi");
    const auto recs = best_approx_exhaustive(M, 100'000);
    const auto fib = fibonacci(200'000);
    for (const auto& r : recs) {
        // Largest Fibonacci number in the shell, paired with its predecessor.
        long long lo = r.shell == 0 ? 0 : (1LL << (r.shell - 1)), hi = std::min<long long>(1LL << r.shell, 100'000);
        long long a = 0, b = 0;
        for (std::size_t i = 1; i < fib.size(); ++i)
            if (fib[i] > lo && fib[i] <= hi) {
                a = fib[i];
                b = fib[i - 1];
            }
        ASSERT_GT(a, 0);
        EXPECT_EQ(r.q, (std::vector<long long>{a, -b})) << "shell " << r.shell;
    }
    const auto est = fit_exponent(improving(recs), {1, 1e5});
    EXPECT_GE(est.beta_hat, 0.9);
    EXPECT_LE(est.beta_hat, 1.1);
}

TEST(Exhaustive, RationalKernelIsExactZero) {
    const auto M = RealMatrix::parse("1 1/2");
    const auto recs = best_approx_exhaustive(M, 64);
    ASSERT_GE(recs.size(), 2U);
    EXPECT_EQ(recs[1].q, (std::vector<long long>{1, -2}));
    EXPECT_TRUE(recs[1].exact_zero);
    EXPECT_TRUE(std::isinf(fit_exponent(recs, {1, 64}).beta_hat));
}

TEST(Exhaustive, DesignedRelationAtTOne) {
    const auto M = RealMatrix::parse("1 0.5 0.5");
    const auto recs = best_approx_exhaustive(M, 1);
    ASSERT_EQ(recs.size(), 1U);
    EXPECT_TRUE(recs[0].exact_zero);
    EXPECT_TRUE(make_record(M, {1, -1, -1}, Method::exhaustive, 0).exact_zero);
    // Ties go to the lexicographically smaller vector.
    EXPECT_EQ(recs[0].q, (std::vector<long long>{0, 1, -1}));
}

TEST(Exhaustive, FloatingInputNeverGivesExactZero) {
    const std::vector<double> v{1, 0.5};
    const auto M = RealMatrix::from_doubles(1, 2, v);
    const auto recs = best_approx_exhaustive(M, 16);
    EXPECT_FALSE(recs[1].exact_zero);
    EXPECT_TRUE(recs[1].floored);
    EXPECT_GT(recs[1].quality.sign(), 0);
    EXPECT_FALSE(fit_exponent(recs, {1, 16}).infinite);
}

TEST(Exhaustive, MatchesBruteForceOnSmallBoxes) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const std::size_t m = seed % 2 ? 1 : 2, n = 3 - m;
        const auto M = random_matrix(m, n, seed, -1, 1);
        const auto recs = best_approx_exhaustive(M, 16);
        for (const auto& r : recs) {
            const long long lo = r.shell == 0 ? 0 : (1LL << (r.shell - 1)), hi = 1LL << r.shell;
            double best = 1e300;
            for (long long a = -hi; a <= hi; ++a)
                for (long long b = -hi; b <= hi; ++b)
                    for (long long c = -hi; c <= hi; ++c) {
                        const long long nq = std::max({std::llabs(a), std::llabs(b), std::llabs(c)});
                        if (nq <= lo || nq > hi) continue;
                        double qual = 0;
                        for (std::size_t i = 0; i < m; ++i)
                            qual = std::max(qual, std::fabs(M.to_double(i, 0) * a + M.to_double(i, 1) * b +
                                                            M.to_double(i, 2) * c));
                        best = std::min(best, qual);
                    }
            EXPECT_NEAR(r.quality.to_double(), best, 1e-12 * (1 + best)) << "seed " << seed << " shell " << r.shell;
        }
    }
}

TEST(Exhaustive, BudgetError) {
    const auto M = random_matrix(1, 3, 5);
    EXPECT_THROW(best_approx_exhaustive(M, 100'000, 1'000'000), BudgetError);
}

TEST(Lll, AgreesWithExhaustivePerShell) {
    for (std::uint64_t seed = 11; seed <= 18; ++seed) {
        const std::size_t m = seed % 2 ? 1 : 2, n = 3 - m;
        const auto M = random_matrix(m, n, seed, -1, 1);
        const auto a = best_approx_exhaustive(M, 1000);
        const auto b = best_approx_lll(M, 1000);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double qa = a[i].quality.to_double(), qb = b[i].quality.to_double();
            EXPECT_LE(std::fabs(qa - qb), 1e-9 * qa) << "seed " << seed << " shell " << i;
        }
    }
}

TEST(Lll, GoldenRatioLargeT) {
    const auto M = RealMatrix::parse("1 phi");
    const auto recs = best_approx_lll(M, 1'000'000);
    const auto ex = best_approx_exhaustive(M, 1'000'000);
    ASSERT_EQ(recs.size(), ex.size());
    for (std::size_t i = 0; i < recs.size(); ++i) EXPECT_EQ(recs[i].q, ex[i].q);
}

TEST(Records, ImprovingIsStrictlyDecreasing) {
    const auto recs = improving(best_approx_exhaustive(random_matrix(2, 1, 3), 4096));
    for (std::size_t i = 1; i < recs.size(); ++i) {
        EXPECT_LT(recs[i].quality, recs[i - 1].quality);
        EXPECT_GT(recs[i].norm_q, recs[i - 1].norm_q);
    }
}

TEST(Fit, PlantedSlopeTwo) {
    std::vector<BestApproxRecord> recs;
    for (long long q = 2; q <= 4096; q *= 2) recs.push_back(synthetic(q, std::pow(static_cast<double>(q), -2.0)));
    const auto e = fit_exponent(recs, {1, 1e4});
    EXPECT_NEAR(e.beta_hat, 2.0, 1e-9);
    EXPECT_LT(e.residual, 1e-9);
    EXPECT_EQ(e.records_used, recs.size());
}

TEST(Fit, InvariantUnderQualityScaling) {
    const auto recs = improving(best_approx_exhaustive(random_matrix(1, 1, 9), 100'000));
    const auto base = fit_exponent(recs, {1, 1e5});
    for (double c : {0.25, 8.0, 3.0, 1e-7}) {
        auto scaled = recs;
        for (auto& r : scaled) r.quality = r.quality * Real::from_double(c);
        const auto e = fit_exponent(scaled, {1, 1e5});
        if (c == 0.25 || c == 8.0) {
            EXPECT_EQ(e.beta_hat, base.beta_hat);
        } else {
            EXPECT_NEAR(e.beta_hat, base.beta_hat, 1e-12);
        }
    }
}

TEST(Fit, ZeroQualityAndTooFewRecords) {
    std::vector<BestApproxRecord> recs;
    for (long long q = 1; q <= 16; q *= 2) recs.push_back(synthetic(q, 1.0 / static_cast<double>(q)));
    recs[3].exact_zero = true;
    recs[3].quality = Real();
    EXPECT_TRUE(fit_exponent(recs, {1, 16}).infinite);
    EXPECT_TRUE(fit_exponent(recs, {2, 16}).infinite);
    EXPECT_THROW(fit_exponent(recs, {1, 4}), DomainError);
}

TEST(Fit, EnvelopeTracksSpikes) {
    // Mostly Dirichlet-like records with one record far above the trend at the end.
    std::vector<BestApproxRecord> recs;
    for (long long q = 2; q <= 1024; q *= 2) recs.push_back(synthetic(q, 1.0 / static_cast<double>(q)));
    recs.push_back(synthetic(2048, std::pow(2048.0, -3.0)));
    EXPECT_GT(fit_exponent(recs, {1, 1e4}).beta_hat, 1.3);
}

TEST(Dirichlet, GoldenAndRandom) {
    const auto g = dirichlet_check(RealMatrix::parse("1 phi"), 10'000);
    EXPECT_GE(g.envelope_exponent, 0.9);
    EXPECT_LE(g.envelope_exponent, 1.1);
    EXPECT_TRUE(g.pigeonhole_ok);
    for (std::uint64_t seed = 1; seed <= 9; ++seed) {
        const std::size_t m = seed % 3 == 2 ? 2 : 1, n = seed % 3 == 1 ? 2 : 1;
        const auto d = dirichlet_check(random_matrix(m, n, seed), 10'000);
        EXPECT_TRUE(d.pigeonhole_ok) << seed;
        EXPECT_TRUE(d.floor_ok) << seed;
    }
}

TEST(Dirichlet, RationalKernelFlagsInfinity) {
    const auto d = dirichlet_check(RealMatrix::parse("1 1/2"), 1000);
    EXPECT_TRUE(d.infinite);
    EXPECT_NE(dirichlet_text(d).get("envelope_exponent").find("inf"), std::string::npos);
}

TEST(Flow, StandardLatticeAtTimeZero) {
    const auto p = flow_shortest(RealMatrix::parse("1 0 0\n0 1 0"), 0.0);
    EXPECT_EQ(p.systole.to_double(), 1.0);
    EXPECT_EQ(flow_shortest(RealMatrix::parse("1 0"), 0.0).systole.to_double(), 1.0);
}

TEST(Flow, RationalKernelDecays) {
    const auto trace = flow_trace(RealMatrix::parse("1 1/2"), 16);
    // From t = 1 on, (1,-2) is the systole, of length 2e^{-t}.
    for (const auto& p : trace) {
        if (p.t < 1) continue;
        EXPECT_EQ(p.q, (std::vector<Integer>{1, -2}));
        EXPECT_NEAR(log(p.systole).to_double(), std::log(2.0) - p.t, 1e-12);
    }
    const auto csv = flow_csv(trace);
    EXPECT_EQ(csv.rfind("t,log_systole,witness_vector\n", 0), 0U);
}

TEST(Flow, GoldenStaysBounded) {
    for (const auto& p : flow_trace(RealMatrix::parse("1 phi"), 24)) EXPECT_GT(log(p.systole).to_double(), -0.5);
}

TEST(Flow, AgreesWithDirectLattice) {
    // At t, the systole is min over q of sqrt(e^{2t}(Mq)^2 + e^{-2t} q_2^2).
    const auto M = RealMatrix::parse("1 sqrt(2)");
    const double t = 3.0, s2 = std::sqrt(2.0);
    double brute = 1e300;
    for (long long b = -200; b <= 200; ++b)
        for (long long a = -300; a <= 300; ++a) {
            if (!a && !b) continue;
            const double x = std::exp(t) * (a + s2 * b), y = std::exp(-t) * b;
            brute = std::min(brute, std::sqrt(x * x + y * y));
        }
    EXPECT_NEAR(flow_shortest(M, t).systole.to_double(), brute, 1e-12);
}
