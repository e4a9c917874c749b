#pragma once

// Free and relatively free nilpotent Lie algebras over Q on Lyndon bases.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diophex/exactlin.hpp"

namespace diophex::freelie {

using exactlin::Rational;
using exactlin::RationalVector;

/// Word over the alphabet {0, ..., k-1}; printed as a, b, c, ...
using Word = std::vector<std::uint8_t>;

/// Witt number: dimension of the degree-d part of the free Lie algebra on
/// k generators, (1/d) Σ_{e|d} μ(d/e) k^e.
std::uint64_t witt_dimension(unsigned k, unsigned d);

bool is_lyndon(const Word& w);

/// All Lyndon words of length ≤ max_len on k letters, ordered by length and
/// then lexicographically.
std::vector<Word> lyndon_words(unsigned k, unsigned max_len);

/// Split w = u·v with v the longest proper Lyndon suffix. Requires |w| ≥ 2.
std::pair<Word, Word> standard_factorization(const Word& w);

std::string word_string(const Word& w);

struct LyndonElement {
    Word word;
    unsigned degree = 0;
    /// Indices of the standard-factorization factors; -1 for letters.
    int left = -1;
    int right = -1;
};

/// Lyndon words of length ≤ s on k letters with their standard bracketings.
class LyndonBasis {
public:
    LyndonBasis(unsigned k, unsigned s);

    unsigned generators() const { return k_; }
    unsigned max_degree() const { return s_; }
    std::size_t size() const { return elements_.size(); }
    const std::vector<LyndonElement>& elements() const { return elements_; }
    const LyndonElement& operator[](std::size_t i) const { return elements_[i]; }

    /// First index and count of the degree-d block (1 ≤ d ≤ s).
    std::size_t degree_offset(unsigned d) const { return offsets_[d - 1]; }
    std::size_t degree_count(unsigned d) const { return offsets_[d] - offsets_[d - 1]; }

    std::optional<std::size_t> index_of(const Word& w) const;

    /// e.g. "[a,[a,b]]"
    std::string bracketing(std::size_t i) const;

private:
    unsigned k_;
    unsigned s_;
    std::vector<LyndonElement> elements_;
    std::vector<std::size_t> offsets_;
};

enum class FamilyKind { FreeNilpotent, Heisenberg, TwoStep, Unitriangular };

/// Which built-in group family an algebra belongs to.
///   FreeNilpotent: a = generators, b = class
///   Heisenberg:    a = dimension 2m+1
///   TwoStep:       a = generators d = dim G/[G,G], b = p = dim [G,G]
///   Unitriangular: a = n
struct FamilyTag {
    FamilyKind kind = FamilyKind::FreeNilpotent;
    unsigned a = 0;
    unsigned b = 0;

    std::string to_string() const;
    friend bool operator==(const FamilyTag&, const FamilyTag&) = default;
};

/// Graded nilpotent Lie algebra with exact structure constants on a basis
/// ordered by degree.
class GradedLieAlgebra {
public:
    struct Term {
        std::uint32_t index;
        Rational coeff;
    };

    GradedLieAlgebra(std::string name, std::vector<unsigned> degrees, std::vector<std::string> labels);

    const std::string& name() const { return name_; }
    std::size_t dim() const { return degrees_.size(); }
    unsigned nilpotency_class() const { return static_cast<unsigned>(graded_dims_.size()); }
    /// graded_dims()[d-1] = dimension of the degree-d layer.
    const std::vector<std::size_t>& graded_dims() const { return graded_dims_; }
    std::size_t degree_offset(unsigned d) const;
    unsigned degree(std::size_t i) const { return degrees_[i]; }
    const std::string& label(std::size_t i) const { return labels_[i]; }

    /// Sets [e_i, e_j] (and [e_j, e_i] = -[e_i, e_j]).
    void set_bracket(std::size_t i, std::size_t j, std::vector<Term> value);
    const std::vector<Term>& bracket_of(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }

    RationalVector bracket(std::span<const Rational> x, std::span<const Rational> y) const;
    RationalVector basis_vector(std::size_t i) const;

    std::optional<FamilyTag> tag;

private:
    std::string name_;
    std::vector<unsigned> degrees_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> graded_dims_;
    std::vector<std::vector<Term>> table_;
};

/// Free nilpotent Lie algebra of class s on k generators, Lyndon basis.
GradedLieAlgebra free_nilpotent(unsigned k, unsigned s);
/// Heisenberg algebra of dimension 2m+1: X_1..X_m, Y_1..Y_m, Z, [X_i,Y_i] = Z.
GradedLieAlgebra heisenberg(unsigned dimension);
/// Free 2-step algebra on d generators with its degree-2 layer projected
/// onto the first p Lyndon coordinates.
GradedLieAlgebra two_step(unsigned d, unsigned p);
/// Strictly upper triangular n×n matrices, graded by superdiagonal.
GradedLieAlgebra unitriangular(unsigned n);

/// Lie(G) for the family.
GradedLieAlgebra target_algebra(const FamilyTag& tag);
/// Nilpotency class of the relatively free algebra F_{k,G}.
unsigned relatively_free_class(const FamilyTag& tag);
/// F_{k,G}: the relatively free algebra of the family on k generators.
GradedLieAlgebra build_algebra(const FamilyTag& tag, unsigned k);

/// Values of every Lyndon element of length ≤ words.max_degree() at the
/// tuple x (x.size() == words.generators()), computed with the brackets of
/// `target`.
std::vector<RationalVector> evaluate_all(const LyndonBasis& words, const GradedLieAlgebra& target,
                                         std::span<const RationalVector> x);

/// Values e_i(x) of the degree-`degree` Lyndon elements, in basis order.
std::vector<RationalVector> evaluate_basis(const LyndonBasis& words, const GradedLieAlgebra& target,
                                           std::span<const RationalVector> x, unsigned degree);

/// α = Σ_d d · dim(layer d).
std::uint64_t bass_guivarch(const GradedLieAlgebra& a);

struct IdentityCheck {
    bool ok = true;
    std::size_t checked = 0;
    std::string counterexample;
};

IdentityCheck check_antisymmetry(const GradedLieAlgebra& a);
IdentityCheck check_grading(const GradedLieAlgebra& a);
IdentityCheck check_jacobi_exhaustive(const GradedLieAlgebra& a);
/// Jacobi on random integer combinations of basis elements.
IdentityCheck check_jacobi_random(const GradedLieAlgebra& a, std::size_t triples, std::uint64_t seed);
bool has_integer_structure_constants(const GradedLieAlgebra& a);

/// Degree table, basis labels and nonzero (i, j, l, value) constants, i < j.
std::string dump_algebra(const GradedLieAlgebra& a);

}  // namespace diophex::freelie
