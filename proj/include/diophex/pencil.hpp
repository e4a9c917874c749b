#pragma once

// Pencils of endomorphisms P_{W,r} = {M : dim MW <= r}, the obstruction
// inequality and exponent bounds for sampled matrix families.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diophex/exactlin.hpp"
#include "diophex/report.hpp"

namespace diophex::pencil {

using exactlin::ExtRational;
using exactlin::Rational;
using exactlin::RationalMatrix;
using exactlin::RationalSubspace;
using exactlin::RationalVector;

struct Pencil {
    RationalSubspace W;
    std::size_t r = 0;

    std::string to_string() const;
    friend bool operator==(const Pencil&, const Pencil&) = default;
};

/// Report order: decreasing exponent, then ascending dim W, then the
/// canonical basis lexicographically.
bool pencil_before(const Pencil& a, const Pencil& b);

/// r = 0, or dim_w / r - 1 > n / m.
bool obstruction_holds(std::size_t dim_w, std::size_t r, std::size_t m, std::size_t n);

/// dim W / r - 1, or +inf when r = 0.
ExtRational pencil_exponent(const Pencil& p);

/// Finite exact sample of a family of m × (m+n) matrices. n = 0 is allowed
/// (square samples, e.g. word-map families whose top layer is a single
/// degree of freedom per row).
class MatrixFamily {
public:
    MatrixFamily(std::size_t m, std::size_t n, std::vector<RationalMatrix> samples, std::string label = {});

    /// Header `m n`, then the samples in matrix text format separated by
    /// blank lines. A block of k·m rows is read as k consecutive samples.
    static MatrixFamily parse(std::string_view text, std::string label = {});
    std::string format() const;

    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }
    std::size_t ambient() const { return m_ + n_; }
    const std::vector<RationalMatrix>& samples() const { return samples_; }
    const std::string& label() const { return label_; }

    /// n/m, the exponent forced by the pigeonhole principle.
    Rational dirichlet_exponent() const { return exactlin::ratio(n_, m_); }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<RationalMatrix> samples_;
    std::string label_;
};

/// φ_F(W): the largest dim M·W over the samples.
std::size_t family_rank(const MatrixFamily& f, const RationalSubspace& w);

/// Every sample satisfies dim M·W <= r.
bool pencil_contains(const MatrixFamily& f, const Pencil& p);

/// Primitive integer vectors with sup-norm <= height, first nonzero entry
/// positive, in lexicographic order of their coordinates.
std::vector<std::vector<long>> height_vectors(std::size_t dim, std::size_t height);

/// Number of vectors height_vectors(dim, height) would return, or nullopt
/// when it exceeds 2^62.
std::optional<std::uint64_t> height_vector_count(std::size_t dim, std::size_t height);

/// Every (W, r) with W spanned by height-bounded integer vectors, r = φ_F(W),
/// satisfying the obstruction inequality. Literal breadth-first enumeration
/// of the spanned subspaces; `budget` caps the number of subspaces visited.
std::vector<Pencil> enumerate_rational_pencils(const MatrixFamily& f, std::size_t height_bound,
                                               std::uint64_t budget = 200000);

struct SearchOptions {
    std::size_t height = 1;
    /// Cap on subspace evaluations (exact or screened).
    std::uint64_t budget = 20'000'000;
    /// Extra subspaces to evaluate, e.g. invariant subspaces of a symmetry group.
    std::vector<RationalSubspace> extra_candidates;
};

struct SearchResult {
    /// Largest dim W / φ(W) - 1 seen, over flats, extras and the full space.
    ExtRational best;
    Pencil best_pencil;
    /// Height-closed flats (and extras) satisfying the obstruction inequality.
    std::vector<Pencil> obstructions;
    std::uint64_t flats_visited = 0;
    std::uint64_t evaluations = 0;
};

/// Maximum of the pencil exponent over subspaces spanned by height-bounded
/// integer vectors. Searches the height-closed flats hcl(W) = span of the
/// height vectors in {v : M_j v ∈ M_j W for all samples}; every spanned W
/// sits in a flat with the same φ, so the maximum is attained there.
SearchResult max_pencil_search(const MatrixFamily& f, const SearchOptions& opt);

struct ExponentBounds {
    ExtRational lower;
    ExtRational upper;
    /// Set when lower exceeds n/m.
    std::optional<Pencil> witness;
    std::size_t height = 0;
    std::uint64_t flats_visited = 0;
    std::uint64_t evaluations = 0;
};

ExponentBounds bounds(const MatrixFamily& f, const SearchOptions& opt);
inline ExponentBounds bounds(const MatrixFamily& f, std::size_t height_bound) {
    SearchOptions o;
    o.height = height_bound;
    return bounds(f, o);
}

struct HullSpan {
    /// Common kernel dimension of the samples.
    std::size_t kernel_dim = 0;
    std::size_t span_dim = 0;
    /// Echelon basis of the span of the kernels' Plücker vectors.
    std::vector<RationalVector> basis;
};

/// Linear span of the Plücker coordinates of the sample kernels.
HullSpan hull_span(const MatrixFamily& f);

/// ker M has the hull's kernel dimension and its Plücker vector lies in the span.
bool hull_contains(const HullSpan& h, const RationalMatrix& m);

struct ExtremalityReport {
    bool obstruction_found = false;
    std::size_t height = 0;
    std::vector<Pencil> violating;
};

/// Lists the maximal height-closed obstructions, if any.
ExtremalityReport extremality_report(const MatrixFamily& f, std::size_t height_bound,
                                     std::uint64_t budget = 20'000'000);

/// Key/value report: lower, upper, witness_W_basis, witness_r, height,
/// certified and search statistics.
Report bounds_report(const MatrixFamily& f, const ExponentBounds& b);
Report extremality_text(const MatrixFamily& f, const ExtremalityReport& e);

}  // namespace diophex::pencil
