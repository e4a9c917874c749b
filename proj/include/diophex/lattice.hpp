#pragma once

// LLL reduction of real lattice bases with exact integer change of basis,
// and Fincke–Pohst enumeration of lattice points in a ball.

#include <cstdint>
#include <vector>

#include "diophex/exactlin.hpp"
#include "diophex/real.hpp"

namespace diophex::lattice {

using exactlin::Integer;

/// Basis vectors b_0..b_{d-1} of R^D (D ≥ d), one std::vector per vector.
using Basis = std::vector<std::vector<Real>>;
using IntMatrix = std::vector<std::vector<Integer>>;

struct LllResult {
    /// Reduced vectors, recomputed from `transform` and the input basis.
    Basis basis;
    /// reduced_i = Σ_k transform[i][k] · input_k; unimodular.
    IntMatrix transform;
    double delta = 0.99;
    /// Precision the reduction finally ran at (doubled while Lovász
    /// comparisons were too close to call).
    unsigned precision = 0;
    std::size_t swaps = 0;
};

/// Throws DomainError for dependent input or delta outside (1/4, 1).
LllResult lll_reduce(const Basis& basis, double delta = 0.99, unsigned precision = kDefaultPrecision);

/// Size reduction |μ_ij| <= 1/2 + eps and the Lovász condition with `delta`.
bool is_lll_reduced(const Basis& basis, double delta, double eps = 1e-9);

/// Determinant of an integer matrix (exact).
Integer int_determinant(const IntMatrix& m);

/// Gram–Schmidt data in long double for enumeration.
struct GramSchmidt {
    std::vector<std::vector<long double>> mu;
    std::vector<long double> norms2;  // ‖b*_i‖²
};
GramSchmidt gram_schmidt(const Basis& basis);

/// All coefficient vectors z ≠ 0 (one of ±z) with ‖Σ z_i b_i‖² <= radius2.
/// `basis` should be reduced. Throws BudgetError past `budget` points.
std::vector<std::vector<long long>> enumerate_ball(const Basis& basis, long double radius2,
                                                   std::uint64_t budget = 1'000'000);

struct ShortestVector {
    Real length;
    /// Coefficients with respect to the input basis.
    std::vector<Integer> coefficients;
    unsigned precision = 0;
};

/// Euclidean shortest nonzero vector: LLL, then enumeration below ‖b_1‖.
ShortestVector shortest_vector(const Basis& basis, unsigned precision = kDefaultPrecision);

/// Σ_k coeffs[k] · basis_k at the given precision.
std::vector<Real> combine(const Basis& basis, const std::vector<Integer>& coeffs, unsigned precision);
Real norm2(const std::vector<Real>& v);

}  // namespace diophex::lattice
