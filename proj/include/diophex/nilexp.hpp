#pragma once

// Diophantine exponents of rational nilpotent Lie groups: closed formulas,
// word-map matrix families, the pencil recomputation over fully invariant
// candidates, the submodular-minimum checker and ball growth in UT(d).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diophex/exactlin.hpp"
#include "diophex/freelie.hpp"
#include "diophex/pencil.hpp"
#include "diophex/report.hpp"

namespace diophex::nilexp {

using exactlin::ExtRational;
using exactlin::Rational;
using exactlin::RationalMatrix;
using exactlin::RationalSubspace;
using freelie::FamilyKind;
using freelie::FamilyTag;

/// Largest N (dimension of the top layer of F_{k,G}) the pencil route accepts.
inline constexpr std::size_t kMaxWordMapDim = 12;

class GroupSpec {
public:
    explicit GroupSpec(FamilyTag tag);

    /// `heisenberg:<dim>`, `two_step:<d>:<p>`, `ut:<n>`, `free:<g>:<s>`.
    static GroupSpec parse(std::string_view descriptor);

    const FamilyTag& tag() const { return tag_; }
    std::string descriptor() const;

    /// Nilpotency class s of G.
    unsigned s() const { return s_; }
    /// dim of the top layer G^{(s)}.
    std::size_t m() const { return m_; }
    /// dim G/[G,G].
    unsigned abelianization_dim() const { return ab_; }
    /// Smallest admissible k.
    unsigned k_threshold() const;
    /// e.g. "k >= 2m (m = 1)".
    std::string threshold_text() const;
    /// Throws ThresholdError when k is below the threshold.
    void require_k(unsigned k) const;

private:
    FamilyTag tag_;
    unsigned s_ = 0;
    std::size_t m_ = 0;
    unsigned ab_ = 0;
};

/// Closed formula for β_k where one is known (Heisenberg, 2-step, UT(3),
/// UT(4), free class 3 on 2 generators, free class 2).
Rational beta_closed(const GroupSpec& g, unsigned k);
bool has_closed_formula(const GroupSpec& g);
/// lim β_k as k → ∞ for the families with a closed formula.
Rational beta_limit(const GroupSpec& g);

/// m × N matrix whose column i holds the G^{(s)}-coordinates of e_i(x), the
/// i-th degree-s Lyndon element of F_{k,G} evaluated at x ∈ Lie(G)^k.
RationalMatrix evaluate_word_map(const GroupSpec& g, unsigned k, std::span<const exactlin::RationalVector> x);

struct WordMapFamily {
    unsigned k = 0;
    std::size_t N = 0;
    std::size_t m = 0;
    std::uint64_t alpha = 0;
    std::vector<std::string> column_labels;
    /// Samples stored as m × N (n = N - m) for the pencil module.
    pencil::MatrixFamily family;
    /// Draws rejected because the sample had rank < m.
    std::size_t degenerate_resampled = 0;
};

/// Samples at seeded tuples with coordinates in [-5, 5]; rank-deficient
/// draws are redrawn and counted.
WordMapFamily word_map_family(const GroupSpec& g, unsigned k, std::size_t sample_count, std::uint64_t seed);

/// Subspaces of the degree-s part of F_{k,G} invariant under the generator
/// transposition, the cyclic shift, x1 -> x1 + x2 and x1 -> 2·x1: the lattice
/// generated by the cyclic subspaces of the basis vectors and e_i ± e_j.
std::vector<RationalSubspace> invariant_subspaces(const GroupSpec& g, unsigned k);

/// Matrices of the substitution endomorphisms above on the degree-s part.
std::vector<RationalMatrix> substitution_action(const GroupSpec& g, unsigned k);

struct PencilExponent {
    ExtRational beta_matrix;
    ExtRational beta_k;
    pencil::Pencil witness;
    std::optional<Rational> closed;
    /// closed formula present and equal to beta_k.
    bool calibrated = false;
    std::size_t N = 0;
    std::size_t m = 0;
    std::uint64_t alpha = 0;
    std::size_t samples = 0;
    std::size_t degenerate_resampled = 0;
    std::size_t invariant_candidates = 0;
    std::uint64_t flats_visited = 0;
    std::size_t height = 0;
};

/// β_matrix = max (dim W - r_W) / r_W over height-bounded rational W and the
/// invariant candidates; β_k = (s/α)·β_matrix with α the Bass–Guivarc'h
/// exponent of F_{k,G}.
PencilExponent beta_via_pencils(const GroupSpec& g, unsigned k, std::size_t height_bound,
                                std::uint64_t seed = 1, std::uint64_t budget = 20'000'000);

Report pencil_exponent_report(const GroupSpec& g, unsigned k, const PencilExponent& p);

// Finite-field side: the submodular minimum lemma.

/// Subspace of F_p^dim in reduced echelon form.
struct FpSubspace {
    std::size_t dim_ambient = 0;
    std::vector<std::vector<unsigned>> basis;

    std::size_t dim() const { return basis.size(); }
    std::string to_string() const;
    friend bool operator==(const FpSubspace&, const FpSubspace&) = default;
    friend auto operator<=>(const FpSubspace&, const FpSubspace&) = default;
};

using FpMatrix = std::vector<std::vector<unsigned>>;

struct FiniteActionInstance {
    unsigned p = 2;
    std::size_t dim = 0;
    std::vector<FpMatrix> group;
    std::function<unsigned(const FpSubspace&)> phi;
    std::string description;
};

/// All subspaces of F_p^dim (including {0} and the whole space).
std::vector<FpSubspace> all_subspaces(unsigned p, std::size_t dim);

/// dim A·W over F_p.
unsigned fp_image_dim(unsigned p, const FpMatrix& a, const FpSubspace& w);

/// F_2^4 with the 4-cycle permutation and φ(W) = dim (I + P)·W.
FiniteActionInstance cyclic_f2_instance();
/// φ(W) = 2·[dim W >= 2] on F_2^3: monotone but not submodular.
FiniteActionInstance planted_nonsubmodular_instance();
/// F_3^3, no group elements, φ(W) = dim A·W for a fixed rank-2 A.
FiniteActionInstance trivial_group_instance();
/// F_2^3 with the 3-cycle and φ(W) = dim W.
FiniteActionInstance identity_phi_instance();
/// Built-in instances by name: f2-cyclic4, planted-nonsubmodular,
/// trivial-group, identity-phi.
FiniteActionInstance builtin_instance(std::string_view name);

struct SubmodularReport {
    std::size_t subspaces = 0;
    Rational min_ratio;
    std::vector<FpSubspace> minimizers;
    std::vector<FpSubspace> invariant_minimizers;
    bool invariant_minimizer_found = false;
};

/// Verifies φ is non-decreasing, submodular and G-invariant (HypothesisError
/// otherwise), then minimizes φ(W)/dim W over nonzero W.
SubmodularReport submodular_min_check(const FiniteActionInstance& inst);
Report submodular_report(const FiniteActionInstance& inst, const SubmodularReport& r);

// Balls S^n in a finitely generated subgroup of UT(d).

struct BallLevel {
    std::size_t n = 0;
    std::uint64_t size = 0;
    /// inf ‖γ - I‖_∞ over S^n \ {1}; empty when S^n = {1}.
    std::optional<Rational> min_distance;
    bool diophantine = false;
};

struct BallReport {
    std::vector<BallLevel> levels;
    double beta = 0;
    double growth_exponent = 0;
    std::uint64_t bass_guivarch = 0;
    bool all_diophantine = false;
};

/// The two elementary generators I + E12, I + E23 of the integral Heisenberg group.
std::vector<RationalMatrix> integral_heisenberg_generators();

/// Square unitriangular matrices in matrix text format, separated by blank lines.
std::vector<RationalMatrix> parse_generators(std::string_view text);

/// Enumerates S^n for S = {1, s_i^{±1}}, n ≤ n_max, with exact dedup; the
/// growth exponent is the least-squares slope of log|S^n| against log n over
/// the upper half of the range, compared with the Bass–Guivarc'h exponent of
/// the relatively free algebra of `g` on |generators| letters.
BallReport group_ball_check(const GroupSpec& g, const std::vector<RationalMatrix>& generators, std::size_t n_max,
                            double beta, std::uint64_t budget = 10'000'000);
Report ball_report(const BallReport& r);

}  // namespace diophex::nilexp
